#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "extractbench/field_value.hpp"

namespace extractbench {

struct DocumentChunk {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;
  /// Character (Unicode scalar) offsets, half-open.
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;

  Json to_json() const;
  static DocumentChunk from_json(const Json& j);

  friend bool operator==(const DocumentChunk&, const DocumentChunk&) = default;
};

inline constexpr std::size_t kDefaultChunkSize = 2000;
inline constexpr std::size_t kDefaultChunkOverlap = 200;

/// Chunk k covers [k*(size-overlap), min(k*(size-overlap)+size, length)),
/// stopping at the first chunk that reaches the end of the text.
std::vector<DocumentChunk> chunk_document(std::string_view doc_id, std::string_view text,
                                          std::size_t size = kDefaultChunkSize,
                                          std::size_t overlap = kDefaultChunkOverlap);

}  // namespace extractbench

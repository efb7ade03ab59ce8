#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "extractbench/chat_client.hpp"
#include "extractbench/chunking.hpp"
#include "extractbench/field_value.hpp"

namespace extractbench {

struct MemoryRecord {
  std::string field_name;
  FieldValue value;
  std::size_t source_chunk = 0;
  std::string instruction;

  friend bool operator==(const MemoryRecord&, const MemoryRecord&) = default;
};

/// Accumulated extractions for one document. Records are unique by
/// (field name, whitespace-normalized canonical value text) and kept in
/// insertion order.
class ExtractionMemory {
 public:
  const std::vector<MemoryRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  bool contains(const std::string& field_name, const FieldValue& value) const;

  /// Appends unless an equal record exists. Returns whether it was added.
  bool insert(MemoryRecord record);

  /// JSON list of {field, value, chunk}; this is what extractors receive.
  Json to_json() const;
  std::string serialize() const;

  friend bool operator==(const ExtractionMemory& a, const ExtractionMemory& b) {
    return a.records_ == b.records_;
  }

 private:
  static std::string key(const std::string& field_name, const FieldValue& value);

  std::vector<MemoryRecord> records_;
  std::unordered_set<std::string> keys_;
};

ExtractionMemory merge_memory(ExtractionMemory memory, std::span<const MemoryRecord> new_records);

/// One field/value pair returned by an extractor for a chunk.
struct ExtractedField {
  std::string field;
  FieldValue value;
  std::string instruction;
};

/// Parses an extractor reply: a JSON object (optionally fenced or wrapped
/// in prose) of the form {"extractions": [{"field", "value",
/// "instruction"?}, ...]}. Throws MalformedInput otherwise.
std::vector<ExtractedField> parse_extractor_response(std::string_view text);

class ChunkExtractor {
 public:
  virtual ~ChunkExtractor() = default;

  /// Called with the chunk and the serialized memory of all earlier
  /// chunks of the same document. Implementations must tolerate calls for
  /// different documents from different threads.
  virtual std::vector<ExtractedField> extract(const DocumentChunk& chunk, const std::string& memory_json) = 0;
};

/// Replays canned replies from `<dir>/<doc_id>/<chunk index>.json`. A
/// missing file means "nothing extracted"; an unparseable one fails the
/// chunk.
class MockExtractor final : public ChunkExtractor {
 public:
  explicit MockExtractor(std::filesystem::path fixture_dir);

  std::vector<ExtractedField> extract(const DocumentChunk& chunk, const std::string& memory_json) override;

 private:
  std::filesystem::path dir_;
};

class HttpChatExtractor final : public ChunkExtractor {
 public:
  explicit HttpChatExtractor(ChatClientOptions options, std::string field_guidance = {});

  std::vector<ExtractedField> extract(const DocumentChunk& chunk, const std::string& memory_json) override;

  /// Chat messages sent for one chunk.
  std::vector<ChatMessage> build_messages(const DocumentChunk& chunk, const std::string& memory_json) const;

 private:
  ChatClient client_;
  std::string guidance_;
};

/// Processes chunks of one document strictly in order, feeding each call
/// the memory so far and merging its results. Throws ExtractorFailure
/// carrying the failing chunk index.
ExtractionMemory sequential_extract(std::span<const DocumentChunk> chunks, ChunkExtractor& extractor);

struct Document {
  std::string doc_id;
  std::string text;
};

/// A directory of *.txt files (doc_id = file stem, sorted by name) or a
/// JSONL file of {doc_id, text}.
std::vector<Document> load_corpus(const std::filesystem::path& path);

struct DocumentExtraction {
  std::string doc_id;
  std::vector<DocumentChunk> chunks;
  std::optional<ExtractionMemory> memory;  // empty when extraction failed
  std::string error;

  Json to_json() const;
};

/// Documents run concurrently on up to `workers` threads; chunks within a
/// document never do. Output order follows the input.
std::vector<DocumentExtraction> extract_corpus(std::span<const Document> documents, ChunkExtractor& extractor,
                                               std::size_t workers, std::size_t chunk_size = kDefaultChunkSize,
                                               std::size_t chunk_overlap = kDefaultChunkOverlap);

}  // namespace extractbench

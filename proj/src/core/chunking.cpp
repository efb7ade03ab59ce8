#include "extractbench/chunking.hpp"

#include <algorithm>

#include "extractbench/errors.hpp"
#include "extractbench/text.hpp"

namespace extractbench {

Json DocumentChunk::to_json() const {
  Json j = Json::object();
  j["doc_id"] = doc_id;
  j["index"] = index;
  j["start"] = start_offset;
  j["end"] = end_offset;
  j["text"] = text;
  return j;
}

DocumentChunk DocumentChunk::from_json(const Json& j) {
  DocumentChunk c;
  c.doc_id = j.at("doc_id").get<std::string>();
  c.index = j.at("index").get<std::size_t>();
  c.start_offset = j.at("start").get<std::size_t>();
  c.end_offset = j.at("end").get<std::size_t>();
  c.text = j.at("text").get<std::string>();
  return c;
}

std::vector<DocumentChunk> chunk_document(std::string_view doc_id, std::string_view text,
                                          std::size_t size, std::size_t overlap) {
  if (!(overlap > 0 && overlap < size)) {
    throw Error(ErrorCode::InvalidArgument, "chunk overlap must satisfy 0 < overlap < size");
  }
  const auto bounds = utf8_boundaries(text);
  const std::size_t length = bounds.size() - 1;
  if (length == 0) throw Error(ErrorCode::EmptyDocument, "document '" + std::string(doc_id) + "' is empty");

  const std::size_t stride = size - overlap;
  std::vector<DocumentChunk> chunks;
  for (std::size_t k = 0;; ++k) {
    const std::size_t start = k * stride;
    const std::size_t end = std::min(start + size, length);
    DocumentChunk c;
    c.doc_id = std::string(doc_id);
    c.index = k;
    c.start_offset = start;
    c.end_offset = end;
    c.text = std::string(text.substr(bounds[start], bounds[end] - bounds[start]));
    chunks.push_back(std::move(c));
    if (end == length) break;
  }
  return chunks;
}

}  // namespace extractbench

#include "extractbench/memory.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "extractbench/errors.hpp"
#include "extractbench/parallel.hpp"
#include "extractbench/schema.hpp"

namespace extractbench {

std::string ExtractionMemory::key(const std::string& field_name, const FieldValue& value) {
  std::string k = field_name;
  k.push_back('\x1f');
  k += normalized_text(value);
  return k;
}

bool ExtractionMemory::contains(const std::string& field_name, const FieldValue& value) const {
  return keys_.count(key(field_name, value)) != 0;
}

bool ExtractionMemory::insert(MemoryRecord record) {
  if (!keys_.insert(key(record.field_name, record.value)).second) return false;
  records_.push_back(std::move(record));
  return true;
}

Json ExtractionMemory::to_json() const {
  Json arr = Json::array();
  for (const auto& r : records_) {
    Json j = Json::object();
    j["field"] = r.field_name;
    j["value"] = r.value.to_json();
    j["chunk"] = r.source_chunk;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string ExtractionMemory::serialize() const { return to_json().dump(); }

ExtractionMemory merge_memory(ExtractionMemory memory, std::span<const MemoryRecord> new_records) {
  for (const auto& r : new_records) memory.insert(r);
  return memory;
}

std::vector<ExtractedField> parse_extractor_response(std::string_view text) {
  auto parsed = parse_model_output(text, ParseMode::Lenient);
  if (std::holds_alternative<GateFailure>(parsed)) {
    throw Error(ErrorCode::MalformedInput, "extractor reply is not a JSON object");
  }
  const Json j = std::get<ExtractionOutput>(parsed).to_json();
  if (!j.contains("extractions") || !j["extractions"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "extractor reply has no \"extractions\" array");
  }
  std::vector<ExtractedField> out;
  for (const auto& item : j["extractions"]) {
    if (!item.is_object() || !item.contains("field") || !item["field"].is_string() || !item.contains("value")) {
      throw Error(ErrorCode::MalformedInput, "extraction entries need \"field\" and \"value\"");
    }
    ExtractedField f;
    f.field = item["field"].get<std::string>();
    if (f.field.empty()) throw Error(ErrorCode::MalformedInput, "extraction entry with empty field name");
    f.value = FieldValue::from_json(item["value"]);
    if (item.contains("instruction") && item["instruction"].is_string()) {
      f.instruction = item["instruction"].get<std::string>();
    }
    out.push_back(std::move(f));
  }
  return out;
}

MockExtractor::MockExtractor(std::filesystem::path fixture_dir) : dir_(std::move(fixture_dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::Io, "mock extractor fixture directory not found: " + dir_.string());
  }
}

std::vector<ExtractedField> MockExtractor::extract(const DocumentChunk& chunk, const std::string&) {
  const auto file = dir_ / chunk.doc_id / (std::to_string(chunk.index) + ".json");
  std::ifstream in(file);
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_extractor_response(ss.str());
}

HttpChatExtractor::HttpChatExtractor(ChatClientOptions options, std::string field_guidance)
    : client_(std::move(options)), guidance_(std::move(field_guidance)) {}

std::vector<ChatMessage> HttpChatExtractor::build_messages(const DocumentChunk& chunk,
                                                           const std::string& memory_json) const {
  std::string system =
      "You extract structured facts from document chunks. Reply with one JSON object "
      "{\"extractions\": [{\"field\": <snake_case name>, \"value\": <JSON value>, "
      "\"instruction\": <how to find this field in a document>}]}. Do not repeat facts "
      "already present in the memory, and keep field names consistent with it.";
  if (!guidance_.empty()) system += "\nField guidance: " + guidance_;
  std::string user = "Memory of earlier chunks:\n" + memory_json + "\n\nChunk " +
                     std::to_string(chunk.index) + " of document " + chunk.doc_id + ":\n" + chunk.text;
  return {{"system", std::move(system)}, {"user", std::move(user)}};
}

std::vector<ExtractedField> HttpChatExtractor::extract(const DocumentChunk& chunk, const std::string& memory_json) {
  return parse_extractor_response(client_.complete(build_messages(chunk, memory_json)));
}

ExtractionMemory sequential_extract(std::span<const DocumentChunk> chunks, ChunkExtractor& extractor) {
  ExtractionMemory memory;
  for (const auto& chunk : chunks) {
    std::vector<ExtractedField> found;
    try {
      found = extractor.extract(chunk, memory.serialize());
    } catch (const std::exception& e) {
      throw ExtractorFailure(chunk.index, e.what());
    }
    std::vector<MemoryRecord> records;
    records.reserve(found.size());
    for (auto& f : found) {
      records.push_back({std::move(f.field), std::move(f.value), chunk.index, std::move(f.instruction)});
    }
    memory = merge_memory(std::move(memory), records);
  }
  return memory;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<Document> docs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      docs.push_back({f.stem().string(), ss.str()});
    }
    return docs;
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      docs.push_back({j.at("doc_id").get<std::string>(), j.at("text").get<std::string>()});
    } catch (const Json::exception& e) {
      throw RecordError(ErrorCode::MalformedInput, line_no, e.what());
    }
  }
  return docs;
}

Json DocumentExtraction::to_json() const {
  Json j = Json::object();
  j["doc_id"] = doc_id;
  j["chunks"] = Json::array();
  for (const auto& c : chunks) j["chunks"].push_back(c.to_json());
  if (memory) {
    Json records = Json::array();
    for (const auto& r : memory->records()) {
      Json rec = Json::object();
      rec["field"] = r.field_name;
      rec["value"] = r.value.to_json();
      rec["chunk"] = r.source_chunk;
      rec["instruction"] = r.instruction;
      records.push_back(std::move(rec));
    }
    j["memory"] = std::move(records);
  } else {
    j["memory"] = nullptr;
    j["error"] = error;
  }
  return j;
}

std::vector<DocumentExtraction> extract_corpus(std::span<const Document> documents, ChunkExtractor& extractor,
                                               std::size_t workers, std::size_t chunk_size,
                                               std::size_t chunk_overlap) {
  std::vector<DocumentExtraction> out(documents.size());
  parallel_for(documents.size(), workers, [&](std::size_t i) {
    auto& result = out[i];
    result.doc_id = documents[i].doc_id;
    try {
      result.chunks = chunk_document(documents[i].doc_id, documents[i].text, chunk_size, chunk_overlap);
      result.memory = sequential_extract(result.chunks, extractor);
    } catch (const Error& e) {
      result.memory.reset();
      result.error = e.what();
    }
  });
  return out;
}

}  // namespace extractbench

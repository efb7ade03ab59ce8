#include "extractbench/augment.hpp"

#include <fstream>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "extractbench/errors.hpp"
#include "extractbench/parallel.hpp"
#include "extractbench/text.hpp"

namespace extractbench {

std::size_t ApproxTokenCounter::count(std::string_view text) const {
  const std::size_t chars = utf8_length(text);
  return (chars + 3) / 4;
}

namespace {

constexpr std::string_view kSchemaSlot = "{{schema}}";
constexpr std::string_view kDocumentSlot = "{{document}}";

constexpr std::string_view kBuiltinTemplate =
    "You are an information extraction system. Read the document and return a single JSON "
    "object that conforms to the schema below. Follow each property's extraction_instruction. "
    "Every schema property must be present in your answer. Return only the JSON object.\n"
    "\n"
    "Schema:\n"
    "{{schema}}\n"
    "\n"
    "Document:\n"
    "{{document}}\n";

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

PromptTemplate PromptTemplate::builtin() { return {"extract-prompt-v1", std::string(kBuiltinTemplate)}; }

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open prompt template " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text == kBuiltinTemplate) return builtin();
  return {"custom-" + to_hex64(fnv1a64(text)), std::move(text)};
}

std::string PromptTemplate::render(std::string_view schema_json, std::string_view document) const {
  // Substitute the document last so placeholder-like text inside it stays verbatim.
  const auto doc_pos = text.find(kDocumentSlot);
  if (doc_pos == std::string::npos) return replace_all(text, kSchemaSlot, schema_json);
  std::string head = replace_all(text.substr(0, doc_pos), kSchemaSlot, schema_json);
  std::string tail = replace_all(text.substr(doc_pos + kDocumentSlot.size()), kSchemaSlot, schema_json);
  return head + std::string(document) + tail;
}

std::string PromptTemplate::static_text() const {
  return replace_all(replace_all(text, kSchemaSlot, ""), kDocumentSlot, "");
}

std::size_t count_tokens(const ExtractionSchema& schema, std::span<const DocumentChunk> chunks,
                         const ExtractionOutput& gold, const PromptTemplate& prompt,
                         const TokenCounter& tokenizer) {
  std::string all = prompt.static_text();
  all += schema.serialize();
  for (const auto& c : chunks) all += c.text;
  all += gold.serialize();
  return tokenizer.count(all);
}

void AugmentationConfig::validate() const {
  if (!(cross_chunk_probability >= 0.0 && cross_chunk_probability <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "cross_chunk_probability must lie in [0, 1]");
  }
  double sum = 0.0;
  for (double w : chunk_count_weights) {
    if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "chunk count weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "chunk count weights must sum to 1");
  if (min_fields_per_chunk < 1 || min_fields_per_chunk > max_fields_per_chunk) {
    throw Error(ErrorCode::InvalidArgument, "fields per chunk range is invalid");
  }
  if (!(token_min < token_max)) throw Error(ErrorCode::InvalidArgument, "token_min must be below token_max");
  if (max_retries < 0) throw Error(ErrorCode::InvalidArgument, "max_retries must be non-negative");
}

FieldSpec infer_field_spec(const std::string& name, const FieldValue& value, const std::string& instruction) {
  FieldSpec spec;
  spec.name = name;
  spec.extraction_instruction = instruction.empty() ? "Extract the " + name : instruction;
  switch (value.kind()) {
    case ValueKind::Number: spec.kind = FieldKind::Number; break;
    case ValueKind::Boolean: spec.kind = FieldKind::Boolean; break;
    case ValueKind::List: {
      spec.kind = FieldKind::List;
      const auto& items = value.as_list();
      FieldSpec item = items.empty() ? FieldSpec{} : infer_field_spec("items", items.front(), "");
      item.name = "items";
      item.extraction_instruction = "Extract each " + name + " item";
      spec.item_spec = std::make_shared<const FieldSpec>(std::move(item));
      break;
    }
    case ValueKind::Object: {
      if (value.as_object().empty()) break;
      spec.kind = FieldKind::Object;
      for (const auto& m : value.as_object()) spec.children.push_back(infer_field_spec(m.name, m.value, ""));
      break;
    }
    default: spec.kind = FieldKind::Text;
  }
  return spec;
}

std::vector<ChunkFields> fields_by_chunk(std::span<const DocumentChunk> chunks, const ExtractionMemory& memory) {
  std::vector<ChunkFields> out;
  out.reserve(chunks.size());
  for (const auto& c : chunks) out.push_back({c, {}});
  for (const auto& r : memory.records()) {
    if (r.source_chunk >= out.size()) continue;
    out[r.source_chunk].fields.push_back({infer_field_spec(r.field_name, r.value, r.instruction), r.value});
  }
  return out;
}

Json AugmentedExample::to_json() const {
  Json j = Json::object();
  j["example_id"] = example_id;
  j["schema"] = schema.to_json();
  j["chunks"] = Json::array();
  for (const auto& c : chunks) j["chunks"].push_back(c.to_json());
  j["gold"] = gold.to_json();
  j["token_count"] = token_count;
  return j;
}

AugmentedExample AugmentedExample::from_json(const Json& j) {
  AugmentedExample e;
  e.example_id = j.at("example_id").get<std::string>();
  e.schema = schema_from_json(j.at("schema"));
  for (const auto& c : j.at("chunks")) e.chunks.push_back(DocumentChunk::from_json(c));
  e.gold = ExtractionOutput::from_json(j.at("gold"));
  e.token_count = j.at("token_count").get<std::size_t>();
  return e;
}

Json AugmentedExample::to_task_json() const {
  std::string document;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i) document += "\n\n";
    document += chunks[i].text;
  }
  Json j = Json::object();
  j["task_id"] = example_id;
  j["schema"] = schema.to_json();
  j["document"] = std::move(document);
  j["gold"] = gold.to_json();
  return j;
}

namespace {

// First k entries of a partial Fisher-Yates shuffle of `items`.
template <class T>
std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t k, Rng& rng) {
  k = std::min(k, items.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

struct Selection {
  ExtractionSchema schema;
  ExtractionOutput gold;
  std::vector<DocumentChunk> chunks;
};

Selection draw_selection(std::span<const ChunkFields> pool, const std::vector<std::size_t>& available,
                         std::size_t n, const AugmentationConfig& cfg, Rng& rng) {
  auto chosen = sample_without_replacement(available, n, rng);
  std::sort(chosen.begin(), chosen.end());

  Selection sel;
  std::vector<ExtractionSchema> parts;
  FieldValue::Object gold;
  std::vector<bool> merged;
  for (std::size_t c : chosen) {
    const auto& entry = pool[c];
    sel.chunks.push_back(entry.chunk);
    const std::size_t span = cfg.max_fields_per_chunk - cfg.min_fields_per_chunk + 1;
    const std::size_t k = cfg.min_fields_per_chunk + rng.uniform_index(span);
    std::vector<std::size_t> field_ids(entry.fields.size());
    std::iota(field_ids.begin(), field_ids.end(), 0);
    for (std::size_t f : sample_without_replacement(std::move(field_ids), k, rng)) {
      const auto& sample = entry.fields[f];
      parts.emplace_back(std::vector<FieldSpec>{sample.spec});
      auto it = std::find_if(gold.begin(), gold.end(),
                             [&](const ObjectMember& m) { return m.name == sample.spec.name; });
      if (it == gold.end()) {
        gold.push_back({sample.spec.name, sample.value});
        merged.push_back(false);
        continue;
      }
      // Same field seen in another chunk: the gold holds every value.
      const std::size_t pos = static_cast<std::size_t>(it - gold.begin());
      FieldValue::List values = merged[pos] ? it->value.as_list() : FieldValue::List{it->value};
      values.push_back(sample.value);
      it->value = FieldValue(std::move(values));
      merged[pos] = true;
    }
  }
  sel.schema = combine_schemas(parts).schema;
  sel.gold = ExtractionOutput(std::move(gold));
  return sel;
}

}  // namespace

AugmentOutcome augment(std::span<const ChunkFields> pool, const AugmentationConfig& cfg,
                       const TokenCounter& tokenizer, const PromptTemplate& prompt, Rng& rng,
                       std::string example_id) {
  std::vector<std::size_t> available;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!pool[i].fields.empty()) available.push_back(i);
  }
  if (available.empty()) {
    throw Error(ErrorCode::InvalidArgument, "augmentation needs at least one chunk with fields");
  }

  AugmentOutcome outcome;
  outcome.available_chunks = available.size();
  const bool cross = rng.uniform01() < cfg.cross_chunk_probability;
  outcome.drawn_mode = cross ? AugmentMode::CrossChunk : AugmentMode::SingleChunk;
  outcome.chunk_count = 1;
  if (cross) {
    std::vector<double> weights;
    for (std::size_t k = 2; k <= 4 && k <= available.size(); ++k) weights.push_back(cfg.chunk_count_weights[k - 2]);
    if (!weights.empty()) outcome.chunk_count = 2 + rng.weighted_index(weights);
  }

  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    outcome.attempts = attempt + 1;
    Selection sel = draw_selection(pool, available, outcome.chunk_count, cfg, rng);
    const std::size_t tokens = count_tokens(sel.schema, sel.chunks, sel.gold, prompt, tokenizer);
    if (tokens >= cfg.token_min && tokens <= cfg.token_max) {
      outcome.example = AugmentedExample{std::move(example_id), std::move(sel.schema), std::move(sel.chunks),
                                         std::move(sel.gold), tokens};
      break;
    }
  }
  return outcome;
}

std::vector<AugmentOutcome> augment_corpus(std::span<const DocumentExtraction> extractions,
                                           const AugmentationConfig& cfg, const TokenCounter& tokenizer,
                                           const PromptTemplate& prompt, std::size_t draws_per_document,
                                           std::size_t workers) {
  cfg.validate();
  std::vector<std::vector<AugmentOutcome>> per_doc(extractions.size());
  parallel_for(extractions.size(), workers, [&](std::size_t d) {
    const auto& doc = extractions[d];
    if (!doc.memory || doc.memory->empty()) return;
    const auto pool = fields_by_chunk(doc.chunks, *doc.memory);
    Rng rng = Rng::for_stream(cfg.rng_seed, doc.doc_id);
    for (std::size_t k = 0; k < draws_per_document; ++k) {
      per_doc[d].push_back(augment(pool, cfg, tokenizer, prompt, rng, doc.doc_id + "#" + std::to_string(k)));
    }
  });
  std::vector<AugmentOutcome> out;
  for (auto& v : per_doc) {
    for (auto& o : v) out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = count; i > 1; --i) {
    const std::size_t j = rng.uniform_index(i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

void check_holdout_size(std::size_t count, std::size_t holdout_n) {
  if (count <= holdout_n) {
    throw Error(ErrorCode::InsufficientExamples, "holdout of " + std::to_string(holdout_n) + " needs more than " +
                                                     std::to_string(holdout_n) + " examples, got " +
                                                     std::to_string(count));
  }
}

}  // namespace extractbench

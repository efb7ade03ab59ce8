#include "extractbench/extractbench.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "extractbench/augment.hpp"
#include "extractbench/chunking.hpp"
#include "extractbench/config.hpp"
#include "extractbench/embedding.hpp"
#include "extractbench/errors.hpp"
#include "extractbench/harness.hpp"
#include "extractbench/matching.hpp"
#include "extractbench/memory.hpp"
#include "extractbench/reward.hpp"
#include "extractbench/schema.hpp"
#include "extractbench/training_math.hpp"

namespace eb = extractbench;

struct eb_config {
  eb::ToolConfig cfg;
};

struct eb_embedder {
  std::unique_ptr<eb::EmbeddingProvider> provider;
};

struct eb_schema {
  eb::ExtractionSchema schema;
};

namespace {

thread_local std::string g_last_error;

eb_status status_for(eb::ErrorCode code) {
  switch (code) {
    case eb::ErrorCode::InvalidArgument: return EB_ERR_INVALID_ARGUMENT;
    case eb::ErrorCode::MalformedSchema: return EB_ERR_MALFORMED_SCHEMA;
    case eb::ErrorCode::MalformedInput: return EB_ERR_MALFORMED_INPUT;
    case eb::ErrorCode::Io: return EB_ERR_IO;
    case eb::ErrorCode::EmbedderUnavailable: return EB_ERR_EMBEDDER_UNAVAILABLE;
    case eb::ErrorCode::DimensionMismatch: return EB_ERR_DIMENSION_MISMATCH;
    case eb::ErrorCode::NonFiniteNumber: return EB_ERR_NON_FINITE_NUMBER;
    case eb::ErrorCode::ShapeMismatch: return EB_ERR_SHAPE_MISMATCH;
    case eb::ErrorCode::LengthMismatch: return EB_ERR_LENGTH_MISMATCH;
    case eb::ErrorCode::IndexOutOfRange: return EB_ERR_INDEX_OUT_OF_RANGE;
    case eb::ErrorCode::DegenerateBatch: return EB_ERR_DEGENERATE_BATCH;
    case eb::ErrorCode::EmptyDocument: return EB_ERR_EMPTY_DOCUMENT;
    case eb::ErrorCode::ExtractorFailure: return EB_ERR_EXTRACTOR_FAILURE;
    case eb::ErrorCode::TokenizerUnavailable: return EB_ERR_TOKENIZER_UNAVAILABLE;
    case eb::ErrorCode::InsufficientExamples: return EB_ERR_INSUFFICIENT_EXAMPLES;
    case eb::ErrorCode::GoldSchemaMismatch: return EB_ERR_GOLD_SCHEMA_MISMATCH;
    case eb::ErrorCode::FingerprintMismatch: return EB_ERR_FINGERPRINT_MISMATCH;
    case eb::ErrorCode::GenerationFailure: return EB_ERR_GENERATION_FAILURE;
  }
  return EB_ERR_INTERNAL;
}

eb_status fail(eb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
eb_status guarded(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return EB_OK;
  } catch (const BufferTooSmall& e) {
    return fail(EB_ERR_BUFFER_TOO_SMALL, e.what());
  } catch (const eb::MalformedSchemaError& e) {
    std::string msg = e.what();
    if (e.offset() != eb::MalformedSchemaError::npos) msg += " (offset " + std::to_string(e.offset()) + ")";
    return fail(EB_ERR_MALFORMED_SCHEMA, msg);
  } catch (const eb::Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const eb::Json::exception& e) {
    return fail(EB_ERR_MALFORMED_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EB_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw eb::Error(eb::ErrorCode::InvalidArgument, what);
}

eb::ToolConfig effective_config(const eb_config* config) {
  if (config) return config->cfg;
  eb::ToolConfig c;
  c.apply_environment();
  return c;
}

std::unique_ptr<eb::EmbeddingProvider> embedder_for(const eb::ToolConfig& cfg) {
  return eb::make_embedder(cfg.embedder, cfg.embed_url, cfg.embed_cache_capacity);
}

std::unique_ptr<eb::ChunkExtractor> extractor_for(const eb::ToolConfig& cfg) {
  if (cfg.extractor == "http") {
    return std::make_unique<eb::HttpChatExtractor>(cfg.chat_options(), cfg.extractor_guidance);
  }
  require(cfg.extractor_fixture_dir.has_value(), "mock extractor needs extractor_fixture_dir");
  return std::make_unique<eb::MockExtractor>(*cfg.extractor_fixture_dir);
}

std::vector<eb::Json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eb::Error(eb::ErrorCode::Io, "cannot open " + path);
  std::vector<eb::Json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(eb::Json::parse(line));
    } catch (const eb::Json::exception& e) {
      throw eb::RecordError(eb::ErrorCode::MalformedInput, line_no, e.what());
    }
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<eb::Json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw eb::Error(eb::ErrorCode::Io, "cannot write " + path);
  for (const auto& r : records) out << r.dump() << '\n';
  if (!out) throw eb::Error(eb::ErrorCode::Io, "write failed for " + path);
}

std::vector<eb::DocumentExtraction> run_extraction(const std::string& corpus_path, const eb::ToolConfig& cfg) {
  const auto documents = eb::load_corpus(corpus_path);
  auto extractor = extractor_for(cfg);
  return eb::extract_corpus(documents, *extractor, cfg.workers, cfg.chunk_size, cfg.chunk_overlap);
}

}  // namespace

extern "C" {

const char* eb_version(void) { return "0.1.0"; }

const char* eb_status_name(eb_status status) {
  switch (status) {
    case EB_OK: return "Ok";
    case EB_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case EB_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= EB_ERR_INVALID_ARGUMENT && status <= EB_ERR_GENERATION_FAILURE) {
    return eb::to_string(static_cast<eb::ErrorCode>(status - 1));
  }
  return "Unknown";
}

const char* eb_last_error(void) { return g_last_error.c_str(); }

void eb_string_free(char* s) { std::free(s); }

eb_status eb_config_create(eb_config** out) {
  return guarded([&] {
    require(out, "out is null");
    auto c = std::make_unique<eb_config>();
    c->cfg.apply_environment();
    *out = c.release();
  });
}

void eb_config_destroy(eb_config* config) { delete config; }

eb_status eb_config_load_file(eb_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    config->cfg.load_file(path);
  });
}

eb_status eb_config_set(eb_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    config->cfg.set(key, value);
  });
}

eb_status eb_config_get(const eb_config* config, const char* key, char** value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    const auto v = config->cfg.get(key);
    if (!v) throw eb::Error(eb::ErrorCode::InvalidArgument, std::string("unknown configuration key '") + key + "'");
    *value = dup_string(*v);
  });
}

eb_status eb_embedder_create(const eb_config* config, eb_embedder** out) {
  return guarded([&] {
    require(out, "out is null");
    auto e = std::make_unique<eb_embedder>();
    e->provider = embedder_for(effective_config(config));
    *out = e.release();
  });
}

void eb_embedder_destroy(eb_embedder* embedder) { delete embedder; }

size_t eb_embedder_dimension(const eb_embedder* embedder) {
  return embedder ? embedder->provider->descriptor().dimension : 0;
}

eb_status eb_embedder_embed(eb_embedder* embedder, const char* const* texts, size_t count, double* out,
                            size_t out_len) {
  return guarded([&] {
    require(embedder && (texts || count == 0) && (out || out_len == 0), "null argument");
    std::vector<std::string> inputs;
    inputs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(texts[i], "null text");
      inputs.emplace_back(texts[i]);
    }
    const size_t dim = embedder->provider->descriptor().dimension;
    if (out_len < count * dim) {
      throw BufferTooSmall("output buffer holds " + std::to_string(out_len) + " values, need " +
                           std::to_string(count * dim));
    }
    const auto vectors = embedder->provider->embed(inputs);
    for (size_t i = 0; i < vectors.size(); ++i) {
      std::copy(vectors[i].components.begin(), vectors[i].components.end(), out + i * dim);
    }
  });
}

eb_status eb_schema_parse(const char* source, eb_schema** out) {
  return guarded([&] {
    require(source && out, "null argument");
    auto s = std::make_unique<eb_schema>();
    s->schema = eb::parse_schema(source);
    *out = s.release();
  });
}

void eb_schema_destroy(eb_schema* schema) { delete schema; }

size_t eb_schema_property_count(const eb_schema* schema) { return schema ? schema->schema.size() : 0; }

eb_status eb_schema_to_json(const eb_schema* schema, char** json) {
  return guarded([&] {
    require(schema && json, "null argument");
    *json = dup_string(schema->schema.serialize());
  });
}

eb_status eb_combine_schemas(const char* schemas_json, char** result_json) {
  return guarded([&] {
    require(schemas_json && result_json, "null argument");
    const auto arr = eb::Json::parse(schemas_json);
    require(arr.is_array(), "expected a JSON array of schemas");
    std::vector<eb::ExtractionSchema> parts;
    for (const auto& s : arr) parts.push_back(eb::schema_from_json(s));
    const auto combined = eb::combine_schemas(parts);
    eb::Json j = eb::Json::object();
    j["schema"] = combined.schema.to_json();
    j["collisions"] = combined.collisions;
    *result_json = dup_string(j.dump());
  });
}

eb_status eb_validate_output(const eb_schema* schema, const char* raw_output, eb_parse_mode mode,
                             char** report_json) {
  return guarded([&] {
    require(schema && raw_output && report_json, "null argument");
    const auto parsed =
        eb::parse_model_output(raw_output, mode == EB_PARSE_STRICT ? eb::ParseMode::Strict : eb::ParseMode::Lenient);
    eb::Json j = eb::Json::object();
    if (const auto* failure = std::get_if<eb::GateFailure>(&parsed)) {
      j["json_valid"] = false;
      j["parse_failure"] = eb::to_string(failure->reason);
      j["missing_required"] = eb::Json::array();
      j["type_mismatches"] = eb::Json::array();
    } else {
      const auto report = eb::validate_output(std::get<eb::ExtractionOutput>(parsed), schema->schema);
      j["json_valid"] = report.json_valid;
      j["missing_required"] = report.missing_required;
      j["type_mismatches"] = eb::Json::array();
      for (const auto& m : report.type_mismatches) {
        j["type_mismatches"].push_back({{"field", m.field}, {"expected", eb::to_string(m.expected)}});
      }
    }
    *report_json = dup_string(j.dump());
  });
}

eb_status eb_score(const eb_schema* schema, const char* gold_json, const char* prediction, const eb_config* config,
                   eb_embedder* embedder, double* total, eb_gate* gate, char** breakdown_json) {
  return guarded([&] {
    require(schema && gold_json && prediction && embedder, "null argument");
    const auto cfg = effective_config(config);
    const auto gold = eb::ExtractionOutput::from_json(eb::Json::parse(gold_json));
    const auto r =
        eb::compute_reward(prediction, gold, schema->schema, cfg.similarity, *embedder->provider, cfg.parse_mode);
    if (total) *total = r.total;
    if (gate) *gate = static_cast<eb_gate>(r.gate);
    if (breakdown_json) *breakdown_json = dup_string(r.to_json().dump());
  });
}

eb_status eb_score_files(const char* schema_path, const char* gold_path, const char* prediction_path,
                         const eb_config* config, eb_embedder* embedder, char** breakdown_json) {
  return guarded([&] {
    require(schema_path && gold_path && prediction_path && embedder && breakdown_json, "null argument");
    const auto cfg = effective_config(config);
    const auto r = eb::score_files(schema_path, gold_path, prediction_path, cfg.similarity, *embedder->provider,
                                   cfg.parse_mode);
    *breakdown_json = dup_string(r.to_json().dump(2));
  });
}

eb_status eb_optimal_matching(const double* scores, size_t rows, size_t cols, double tau, size_t* predicted_idx,
                              size_t* gold_idx, double* pair_scores, size_t capacity, size_t* pair_count) {
  return guarded([&] {
    require((scores || rows * cols == 0) && pair_count, "null argument");
    for (size_t i = 0; i < rows * cols; ++i) {
      if (!std::isfinite(scores[i])) throw eb::Error(eb::ErrorCode::NonFiniteNumber, "score matrix has a non-finite entry");
    }
    eb::ScoreMatrix m(rows, cols, std::vector<double>(scores, scores + rows * cols));
    const auto set = eb::optimal_matching(m, tau);
    *pair_count = set.pairs.size();
    if (set.pairs.size() > capacity) {
      throw BufferTooSmall("pair buffers too small");
    }
    for (size_t k = 0; k < set.pairs.size(); ++k) {
      if (predicted_idx) predicted_idx[k] = set.pairs[k].predicted;
      if (gold_idx) gold_idx[k] = set.pairs[k].gold;
      if (pair_scores) pair_scores[k] = set.pairs[k].score;
    }
  });
}

eb_status eb_evaluate(const char* tasks_path, const char* predictions_path, const char* model_name,
                      const eb_config* config, eb_embedder* embedder, char** report_json) {
  return guarded([&] {
    require(tasks_path && embedder && report_json, "null argument");
    const auto cfg = effective_config(config);
    const auto tasks = eb::load_tasks(std::filesystem::path(tasks_path));
    std::unique_ptr<eb::GenerationClient> generator;
    if (predictions_path) {
      generator = std::make_unique<eb::ReplayGenerator>(eb::ReplayGenerator::load(predictions_path));
    } else {
      generator = std::make_unique<eb::HttpChatGenerator>(cfg.chat_options());
    }
    eb::EvaluationOptions opts;
    opts.similarity = cfg.similarity;
    opts.parse_mode = cfg.parse_mode;
    opts.workers = cfg.workers;
    opts.model_name = model_name ? model_name : generator->name();
    opts.prompt = cfg.prompt_template();
    const auto report = eb::evaluate(tasks, *generator, opts, *embedder->provider);
    *report_json = dup_string(report.to_json().dump(2));
  });
}

eb_status eb_compare_reports(const char* reports_json, int format, char** out) {
  return guarded([&] {
    require(reports_json && out, "null argument");
    const auto arr = eb::Json::parse(reports_json);
    require(arr.is_array(), "expected a JSON array of reports");
    std::vector<eb::EvaluationReport> reports;
    for (const auto& r : arr) reports.push_back(eb::EvaluationReport::from_json(r));
    const auto cmp = eb::compare_reports(reports);
    *out = dup_string(format == 1 ? cmp.to_json().dump(2) : cmp.render_text());
  });
}

eb_status eb_chunk_text(const char* doc_id, const char* text, size_t size, size_t overlap, char** chunks_json) {
  return guarded([&] {
    require(doc_id && text && chunks_json, "null argument");
    eb::Json arr = eb::Json::array();
    for (const auto& c : eb::chunk_document(doc_id, text, size, overlap)) arr.push_back(c.to_json());
    *chunks_json = dup_string(arr.dump());
  });
}

eb_status eb_extract_corpus(const char* corpus_path, const eb_config* config, char** extractions_jsonl) {
  return guarded([&] {
    require(corpus_path && extractions_jsonl, "null argument");
    std::string out;
    for (const auto& d : run_extraction(corpus_path, effective_config(config))) {
      out += d.to_json().dump();
      out += '\n';
    }
    *extractions_jsonl = dup_string(out);
  });
}

eb_status eb_augment_corpus(const char* corpus_path, const eb_config* config, const char* output_path,
                            char** summary_json) {
  return guarded([&] {
    require(corpus_path && output_path, "null argument");
    const auto cfg = effective_config(config);
    auto aug = cfg.augmentation;
    aug.rng_seed = cfg.seed;
    const auto extractions = run_extraction(corpus_path, cfg);
    const eb::ApproxTokenCounter tokenizer;
    const auto outcomes =
        eb::augment_corpus(extractions, aug, tokenizer, cfg.prompt_template(), cfg.draws_per_document, cfg.workers);

    std::vector<eb::Json> records;
    std::size_t cross = 0;
    std::array<std::size_t, 5> counts{};
    for (const auto& o : outcomes) {
      if (o.drawn_mode == eb::AugmentMode::CrossChunk) ++cross;
      if (o.chunk_count < counts.size()) ++counts[o.chunk_count];
      if (o.example) records.push_back(o.example->to_json());
    }
    write_jsonl(output_path, records);

    if (summary_json) {
      eb::Json s = eb::Json::object();
      s["documents"] = extractions.size();
      eb::Json failed = eb::Json::array();
      for (const auto& d : extractions) {
        if (!d.memory) failed.push_back({{"doc_id", d.doc_id}, {"error", d.error}});
      }
      s["failed_documents"] = std::move(failed);
      s["draws"] = outcomes.size();
      s["emitted"] = records.size();
      s["skipped"] = outcomes.size() - records.size();
      s["cross_chunk"] = cross;
      s["chunk_counts"] = {{"1", counts[1]}, {"2", counts[2]}, {"3", counts[3]}, {"4", counts[4]}};
      *summary_json = dup_string(s.dump(2));
    }
  });
}

eb_status eb_holdout_split(const char* input_path, const eb_config* config, const char* train_path,
                           const char* test_path, int as_tasks, char** summary_json) {
  return guarded([&] {
    require(input_path && train_path && test_path, "null argument");
    const auto cfg = effective_config(config);
    auto records = read_jsonl(input_path);
    if (as_tasks) {
      for (auto& r : records) r = eb::AugmentedExample::from_json(r).to_task_json();
    }
    const auto [train, test] = eb::holdout_split(records, cfg.holdout_n, cfg.seed);
    write_jsonl(train_path, train);
    write_jsonl(test_path, test);
    if (summary_json) {
      eb::Json s = {{"total", records.size()}, {"train", train.size()}, {"test", test.size()}, {"seed", cfg.seed}};
      *summary_json = dup_string(s.dump(2));
    }
  });
}

eb_status eb_lora_apply(const double* base, const double* down, const double* up, size_t d, size_t k, size_t rank,
                        double alpha, double* out) {
  return guarded([&] {
    require(base && down && up && out, "null argument");
    eb::LoraFactors f;
    f.base = eb::Matrix(d, k, std::vector<double>(base, base + d * k));
    f.down = eb::Matrix(d, rank, std::vector<double>(down, down + d * rank));
    f.up = eb::Matrix(rank, k, std::vector<double>(up, up + rank * k));
    f.alpha = alpha;
    f.rank = rank;
    const auto w = eb::lora_apply(f);
    std::copy(w.data().begin(), w.data().end(), out);
  });
}

eb_status eb_warmup_lr(double step, double warmup_steps, double eta_max, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = eb::warmup_lr(step, warmup_steps, eta_max);
  });
}

eb_status eb_mask_labels(const int64_t* token_ids, size_t length, size_t assistant_start, int64_t ignore,
                         int64_t* labels) {
  return guarded([&] {
    require((token_ids && labels) || length == 0, "null argument");
    const auto masked = eb::mask_labels(std::span<const std::int64_t>(token_ids, length), assistant_start, ignore);
    std::copy(masked.begin(), masked.end(), labels);
  });
}

eb_status eb_checkpoint_memory_estimate(double m_model, double m_gradients, double m_activations, double layers,
                                        double checkpoints, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = eb::checkpoint_memory_estimate(m_model, m_gradients, m_activations, layers, checkpoints);
  });
}

eb_status eb_gae_advantages(const double* rewards, const double* values, size_t length, double gamma, double lambda,
                            double* advantages) {
  return guarded([&] {
    require(values && ((rewards && advantages) || length == 0), "null argument");
    eb::Trajectory t;
    t.rewards.assign(rewards, rewards + length);
    t.values.assign(values, values + length + 1);
    t.gamma = gamma;
    t.lambda = lambda;
    const auto adv = eb::gae_advantages(t);
    std::copy(adv.begin(), adv.end(), advantages);
  });
}

eb_status eb_grpo_clip_objective(const double* ratios, const double* advantages, size_t length, double epsilon,
                                 double* out) {
  return guarded([&] {
    require(ratios && advantages && out, "null argument");
    *out = eb::grpo_clip_objective(std::span<const double>(ratios, length),
                                   std::span<const double>(advantages, length), epsilon);
  });
}

eb_status eb_adapt_kl(double beta, double observed_kl, double* next_beta) {
  return guarded([&] {
    require(next_beta, "null argument");
    eb::KlControllerState s;
    s.beta = beta;
    *next_beta = eb::adapt_kl(s, observed_kl).beta;
  });
}

eb_status eb_batch_scale_rewards(const double* rewards, size_t length, double* out) {
  return guarded([&] {
    require((rewards && out) || length == 0, "null argument");
    const auto scaled = eb::batch_scale_rewards(std::span<const double>(rewards, length));
    std::copy(scaled.begin(), scaled.end(), out);
  });
}

eb_status eb_simulate_kl(double beta0, double initial_kl, size_t steps, double elasticity, char** trace_json) {
  return guarded([&] {
    require(trace_json, "null argument");
    eb::KlControllerState s;
    s.beta = beta0;
    const auto sim = eb::simulate_kl(s, initial_kl, steps, elasticity);
    eb::Json j = eb::Json::object();
    j["betas"] = sim.betas;
    j["divergences"] = sim.divergences;
    if (sim.entered_band_at) j["entered_band_at"] = *sim.entered_band_at;
    else j["entered_band_at"] = nullptr;
    *trace_json = dup_string(j.dump(2));
  });
}

}  // extern "C"

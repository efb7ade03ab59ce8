/*
 * extractbench C API.
 *
 * Every function returns an eb_status. On failure a message describing the
 * error is available from eb_last_error() on the same thread until the next
 * call into the library. Strings returned through `char**` out-parameters
 * are heap-allocated and must be released with eb_string_free().
 */
#ifndef EXTRACTBENCH_H
#define EXTRACTBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EB_API __declspec(dllexport)
#else
#define EB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eb_status {
  EB_OK = 0,
  EB_ERR_INVALID_ARGUMENT = 1,
  EB_ERR_MALFORMED_SCHEMA = 2,
  EB_ERR_MALFORMED_INPUT = 3,
  EB_ERR_IO = 4,
  EB_ERR_EMBEDDER_UNAVAILABLE = 5,
  EB_ERR_DIMENSION_MISMATCH = 6,
  EB_ERR_NON_FINITE_NUMBER = 7,
  EB_ERR_SHAPE_MISMATCH = 8,
  EB_ERR_LENGTH_MISMATCH = 9,
  EB_ERR_INDEX_OUT_OF_RANGE = 10,
  EB_ERR_DEGENERATE_BATCH = 11,
  EB_ERR_EMPTY_DOCUMENT = 12,
  EB_ERR_EXTRACTOR_FAILURE = 13,
  EB_ERR_TOKENIZER_UNAVAILABLE = 14,
  EB_ERR_INSUFFICIENT_EXAMPLES = 15,
  EB_ERR_GOLD_SCHEMA_MISMATCH = 16,
  EB_ERR_FINGERPRINT_MISMATCH = 17,
  EB_ERR_GENERATION_FAILURE = 18,
  EB_ERR_BUFFER_TOO_SMALL = 19,
  EB_ERR_INTERNAL = 100
} eb_status;

typedef enum eb_parse_mode { EB_PARSE_STRICT = 0, EB_PARSE_LENIENT = 1 } eb_parse_mode;

typedef enum eb_gate { EB_GATE_PASSED = 0, EB_GATE_INVALID_JSON = 1, EB_GATE_MISSING_REQUIRED = 2 } eb_gate;

EB_API const char* eb_version(void);
EB_API const char* eb_status_name(eb_status status);
EB_API const char* eb_last_error(void);
EB_API void eb_string_free(char* s);

/* ---- configuration ------------------------------------------------------ */

typedef struct eb_config eb_config;

/* Defaults, then EXTRACTBENCH_* environment variables. */
EB_API eb_status eb_config_create(eb_config** out);
EB_API void eb_config_destroy(eb_config* config);
/* Flat `key = value` file (see README for keys). */
EB_API eb_status eb_config_load_file(eb_config* config, const char* path);
EB_API eb_status eb_config_set(eb_config* config, const char* key, const char* value);
EB_API eb_status eb_config_get(const eb_config* config, const char* key, char** value);

/* ---- embeddings --------------------------------------------------------- */

typedef struct eb_embedder eb_embedder;

/* Backend, endpoint and cache size come from the config. */
EB_API eb_status eb_embedder_create(const eb_config* config, eb_embedder** out);
EB_API void eb_embedder_destroy(eb_embedder* embedder);
EB_API size_t eb_embedder_dimension(const eb_embedder* embedder);
/* Writes count * dimension doubles, row-major, into `out`. */
EB_API eb_status eb_embedder_embed(eb_embedder* embedder, const char* const* texts, size_t count, double* out,
                                   size_t out_len);

/* ---- schemas and scoring ------------------------------------------------ */

typedef struct eb_schema eb_schema;

EB_API eb_status eb_schema_parse(const char* source, eb_schema** out);
EB_API void eb_schema_destroy(eb_schema* schema);
EB_API size_t eb_schema_property_count(const eb_schema* schema);
EB_API eb_status eb_schema_to_json(const eb_schema* schema, char** json);
/* JSON array of schema objects -> combined schema plus collision list. */
EB_API eb_status eb_combine_schemas(const char* schemas_json, char** result_json);

/* Validation report as JSON: {json_valid, missing_required, type_mismatches}. */
EB_API eb_status eb_validate_output(const eb_schema* schema, const char* raw_output, eb_parse_mode mode,
                                    char** report_json);

/* Reward breakdown as JSON: {total, gate, per_field, ...}. */
EB_API eb_status eb_score(const eb_schema* schema, const char* gold_json, const char* prediction,
                          const eb_config* config, eb_embedder* embedder, double* total, eb_gate* gate,
                          char** breakdown_json);

/* Same as eb_score, reading the three inputs from files. */
EB_API eb_status eb_score_files(const char* schema_path, const char* gold_path, const char* prediction_path,
                                const eb_config* config, eb_embedder* embedder, char** breakdown_json);

/* Row-major rows x cols scores. Writes up to min(rows, cols) pairs. */
EB_API eb_status eb_optimal_matching(const double* scores, size_t rows, size_t cols, double tau,
                                     size_t* predicted_idx, size_t* gold_idx, double* pair_scores,
                                     size_t capacity, size_t* pair_count);

/* ---- benchmark harness ------------------------------------------------- */

/* Replay-backed when predictions_path is non-NULL, chat endpoint otherwise. */
EB_API eb_status eb_evaluate(const char* tasks_path, const char* predictions_path, const char* model_name,
                             const eb_config* config, eb_embedder* embedder, char** report_json);

/* JSON array of reports. format 0 = aligned text table, 1 = JSON. */
EB_API eb_status eb_compare_reports(const char* reports_json, int format, char** out);

/* ---- data pipeline ------------------------------------------------------ */

/* JSON array of {doc_id, index, start, end, text}. */
EB_API eb_status eb_chunk_text(const char* doc_id, const char* text, size_t size, size_t overlap,
                               char** chunks_json);

/* Corpus (directory of .txt or JSONL) -> JSONL of per-document extraction
   results using the configured extractor. */
EB_API eb_status eb_extract_corpus(const char* corpus_path, const eb_config* config, char** extractions_jsonl);

/* Corpus -> augmented examples written as JSONL to output_path; returns a
   JSON summary (draws, emitted, skipped, cross_chunk, chunk_counts). */
EB_API eb_status eb_augment_corpus(const char* corpus_path, const eb_config* config, const char* output_path,
                                   char** summary_json);

/* JSONL records in, two JSONL files out. as_tasks != 0 converts augmented
   examples to benchmark task records. */
EB_API eb_status eb_holdout_split(const char* input_path, const eb_config* config, const char* train_path,
                                  const char* test_path, int as_tasks, char** summary_json);

/* ---- training math ------------------------------------------------------ */

EB_API eb_status eb_lora_apply(const double* base, const double* down, const double* up, size_t d, size_t k,
                               size_t rank, double alpha, double* out);
EB_API eb_status eb_warmup_lr(double step, double warmup_steps, double eta_max, double* out);
EB_API eb_status eb_mask_labels(const int64_t* token_ids, size_t length, size_t assistant_start, int64_t ignore,
                                int64_t* labels);
EB_API eb_status eb_checkpoint_memory_estimate(double m_model, double m_gradients, double m_activations,
                                               double layers, double checkpoints, double* out);
/* values has length + 1 entries. */
EB_API eb_status eb_gae_advantages(const double* rewards, const double* values, size_t length, double gamma,
                                   double lambda, double* advantages);
EB_API eb_status eb_grpo_clip_objective(const double* ratios, const double* advantages, size_t length,
                                        double epsilon, double* out);
EB_API eb_status eb_adapt_kl(double beta, double observed_kl, double* next_beta);
EB_API eb_status eb_batch_scale_rewards(const double* rewards, size_t length, double* out);
/* JSON trace {betas, divergences, entered_band_at}. */
EB_API eb_status eb_simulate_kl(double beta0, double initial_kl, size_t steps, double elasticity,
                                char** trace_json);

#ifdef __cplusplus
}
#endif

#endif /* EXTRACTBENCH_H */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extractbench/chunking.hpp"
#include "extractbench/memory.hpp"
#include "extractbench/random.hpp"
#include "extractbench/schema.hpp"

namespace extractbench {

class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::size_t count(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

/// ceil(characters / 4), counting Unicode scalars.
class ApproxTokenCounter final : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override;
  std::string name() const override { return "approx-chars/4"; }
};

/// Extraction prompt with `{{schema}}` and `{{document}}` placeholders.
/// Shared by data generation and evaluation.
struct PromptTemplate {
  std::string version;
  std::string text;

  static PromptTemplate builtin();
  /// Loads a template file; the version is "custom-<fnv1a64 hex>" unless
  /// the text equals the builtin one.
  static PromptTemplate load(const std::filesystem::path& path);

  std::string render(std::string_view schema_json, std::string_view document) const;
  /// Template text with the placeholders removed.
  std::string static_text() const;
};

/// Tokens of prompt ∥ serialized schema ∥ chunk texts ∥ serialized gold.
std::size_t count_tokens(const ExtractionSchema& schema, std::span<const DocumentChunk> chunks,
                         const ExtractionOutput& gold, const PromptTemplate& prompt,
                         const TokenCounter& tokenizer);

struct AugmentationConfig {
  double cross_chunk_probability = 0.7;
  /// Weights for choosing 2, 3 or 4 chunks.
  std::array<double, 3> chunk_count_weights{0.5, 0.3, 0.2};
  std::size_t min_fields_per_chunk = 1;
  std::size_t max_fields_per_chunk = 3;
  std::size_t token_min = 532;
  std::size_t token_max = 1900;
  int max_retries = 8;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct FieldSample {
  FieldSpec spec;
  FieldValue value;
};

struct ChunkFields {
  DocumentChunk chunk;
  std::vector<FieldSample> fields;
};

/// Spec inferred from a value's runtime kind; empty instructions become
/// "Extract the <name>".
FieldSpec infer_field_spec(const std::string& name, const FieldValue& value, const std::string& instruction);

/// Groups memory records by their source chunk.
std::vector<ChunkFields> fields_by_chunk(std::span<const DocumentChunk> chunks, const ExtractionMemory& memory);

struct AugmentedExample {
  std::string example_id;
  ExtractionSchema schema;
  std::vector<DocumentChunk> chunks;
  ExtractionOutput gold;
  std::size_t token_count = 0;

  Json to_json() const;
  static AugmentedExample from_json(const Json& j);
  /// Benchmark task record: chunk texts joined by blank lines.
  Json to_task_json() const;

  friend bool operator==(const AugmentedExample&, const AugmentedExample&) = default;
};

enum class AugmentMode { SingleChunk, CrossChunk };

struct AugmentOutcome {
  AugmentMode drawn_mode = AugmentMode::SingleChunk;
  /// Chunk count after capping to the available chunks.
  std::size_t chunk_count = 1;
  std::size_t available_chunks = 0;
  int attempts = 0;
  /// Empty when every attempt fell outside the token budget (Skip).
  std::optional<AugmentedExample> example;
};

/// One augmentation draw. Mode and chunk count are drawn once; chunk and
/// field selection is re-drawn on each budget rejection, up to
/// cfg.max_retries extra attempts.
AugmentOutcome augment(std::span<const ChunkFields> pool, const AugmentationConfig& cfg,
                       const TokenCounter& tokenizer, const PromptTemplate& prompt, Rng& rng,
                       std::string example_id);

/// Runs `draws_per_document` draws per successful document extraction,
/// each document on its own stream Rng::for_stream(cfg.rng_seed, doc_id).
/// Output order is document order then draw order for any worker count.
std::vector<AugmentOutcome> augment_corpus(std::span<const DocumentExtraction> extractions,
                                           const AugmentationConfig& cfg, const TokenCounter& tokenizer,
                                           const PromptTemplate& prompt, std::size_t draws_per_document,
                                           std::size_t workers);

/// Seeded Fisher-Yates permutation of [0, count) (draws from the back).
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed);

/// Seeded shuffle; the first `holdout_n` go to test, the rest to train.
/// Throws InsufficientExamples unless examples.size() > holdout_n.
template <class T>
std::pair<std::vector<T>, std::vector<T>> holdout_split(const std::vector<T>& examples, std::size_t holdout_n,
                                                        std::uint64_t seed);

void check_holdout_size(std::size_t count, std::size_t holdout_n);

template <class T>
std::pair<std::vector<T>, std::vector<T>> holdout_split(const std::vector<T>& examples, std::size_t holdout_n,
                                                        std::uint64_t seed) {
  check_holdout_size(examples.size(), holdout_n);
  const auto order = shuffled_indices(examples.size(), seed);
  std::vector<T> train, test;
  test.reserve(holdout_n);
  train.reserve(examples.size() - holdout_n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < holdout_n ? test : train).push_back(examples[order[k]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace extractbench

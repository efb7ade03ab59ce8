#pragma once

#include <chrono>
#include <string>

#include "extractbench/embedding.hpp"
#include "extractbench/field_value.hpp"
#include "extractbench/matching.hpp"
#include "extractbench/schema.hpp"

namespace extractbench {

struct SimilarityConfig {
  double tau = 0.35;
  double date_half_life_days = 365.0;
  double numeric_rel_cap = 1.0;
  double numeric_floor_epsilon = 1e-9;

  /// Throws InvalidArgument when a parameter is out of range.
  void validate() const;
  Json to_json() const;
};

/// max(0, 1 - |p-g| / max(|g|, eps)); deviations at or beyond
/// numeric_rel_cap score 0.
double numeric_similarity(double predicted, double gold, const SimilarityConfig& cfg);

/// 2^(-|days| / half_life).
double date_similarity(std::chrono::sys_days predicted, std::chrono::sys_days gold,
                       const SimilarityConfig& cfg);

double boolean_similarity(bool predicted, bool gold) noexcept;

/// Cosine of the embeddings clamped to [0, 1]; identical strings score 1
/// without touching the embedder.
double string_similarity(const std::string& predicted, const std::string& gold,
                         EmbeddingProvider& embedder);

/// 2 * (matched score) / (|P| + |G|) for an already computed score matrix.
double list_similarity_from_scores(const ScoreMatrix& scores, double tau);

/// Pairwise item scores come from field_similarity under `item_spec`
/// (which may be null).
double list_similarity(const FieldValue::List& predicted, const FieldValue::List& gold,
                       const FieldSpec* item_spec, const SimilarityConfig& cfg,
                       EmbeddingProvider& embedder);

/// Type-aware comparison of one predicted value against its gold value.
/// A null `predicted` means the field is absent and scores 0.
double field_similarity(const FieldValue* predicted, const FieldValue& gold, const FieldSpec* spec,
                        const SimilarityConfig& cfg, EmbeddingProvider& embedder);

}  // namespace extractbench

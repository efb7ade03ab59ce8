#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extractbench/embedding.hpp"
#include "extractbench/schema.hpp"
#include "extractbench/similarity.hpp"

namespace extractbench {

enum class Gate { Passed, InvalidJson, MissingRequired };

const char* to_string(Gate gate) noexcept;
std::optional<Gate> gate_from_string(std::string_view s);

struct RewardBreakdown {
  double total = 0.0;
  /// Schema order.
  std::vector<std::pair<std::string, double>> per_field;
  Gate gate = Gate::InvalidJson;
  std::optional<GateFailure::Reason> parse_failure;
  std::vector<std::string> missing_fields;

  Json to_json() const;
};

/// Scores an already parsed prediction that passed the gate.
RewardBreakdown score_output(const ExtractionOutput& predicted, const ExtractionOutput& gold,
                             const ExtractionSchema& schema, const SimilarityConfig& cfg,
                             EmbeddingProvider& embedder);

/// Full reward: parse gate, required-field gate, then the mean of
/// field similarities over the schema properties. Embedder failures
/// propagate as exceptions.
RewardBreakdown compute_reward(std::string_view raw_prediction, const ExtractionOutput& gold,
                               const ExtractionSchema& schema, const SimilarityConfig& cfg,
                               EmbeddingProvider& embedder, ParseMode mode = ParseMode::Lenient);

}  // namespace extractbench

#include "extractbench/reward.hpp"

#include "extractbench/errors.hpp"

namespace extractbench {

const char* to_string(Gate gate) noexcept {
  switch (gate) {
    case Gate::Passed: return "Passed";
    case Gate::InvalidJson: return "InvalidJson";
    case Gate::MissingRequired: return "MissingRequired";
  }
  return "unknown";
}

std::optional<Gate> gate_from_string(std::string_view s) {
  if (s == "Passed") return Gate::Passed;
  if (s == "InvalidJson") return Gate::InvalidJson;
  if (s == "MissingRequired") return Gate::MissingRequired;
  return std::nullopt;
}

Json RewardBreakdown::to_json() const {
  Json j = Json::object();
  j["total"] = total;
  j["gate"] = to_string(gate);
  if (parse_failure) j["parse_failure"] = to_string(*parse_failure);
  if (!missing_fields.empty()) j["missing_fields"] = missing_fields;
  Json fields = Json::object();
  for (const auto& [name, score] : per_field) fields[name] = score;
  j["per_field"] = std::move(fields);
  return j;
}

RewardBreakdown score_output(const ExtractionOutput& predicted, const ExtractionOutput& gold,
                             const ExtractionSchema& schema, const SimilarityConfig& cfg,
                             EmbeddingProvider& embedder) {
  RewardBreakdown out;
  out.gate = Gate::Passed;
  if (schema.size() == 0) {
    out.total = 1.0;
    return out;
  }
  double sum = 0.0;
  for (const auto& spec : schema.properties()) {
    const FieldValue* g = gold.find(spec.name);
    if (!g) {
      throw Error(ErrorCode::GoldSchemaMismatch, "gold output has no value for '" + spec.name + "'");
    }
    const double s = field_similarity(predicted.find(spec.name), *g, &spec, cfg, embedder);
    out.per_field.emplace_back(spec.name, s);
    sum += s;
  }
  out.total = sum / static_cast<double>(schema.size());
  return out;
}

RewardBreakdown compute_reward(std::string_view raw_prediction, const ExtractionOutput& gold,
                               const ExtractionSchema& schema, const SimilarityConfig& cfg,
                               EmbeddingProvider& embedder, ParseMode mode) {
  auto parsed = parse_model_output(raw_prediction, mode);
  if (auto* failure = std::get_if<GateFailure>(&parsed)) {
    RewardBreakdown out;
    out.gate = Gate::InvalidJson;
    out.parse_failure = failure->reason;
    return out;
  }
  const auto& predicted = std::get<ExtractionOutput>(parsed);
  const auto report = validate_output(predicted, schema);
  if (!report.missing_required.empty()) {
    RewardBreakdown out;
    out.gate = Gate::MissingRequired;
    out.missing_fields = report.missing_required;
    return out;
  }
  return score_output(predicted, gold, schema, cfg, embedder);
}

}  // namespace extractbench

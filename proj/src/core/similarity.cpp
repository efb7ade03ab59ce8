#include "extractbench/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "extractbench/dates.hpp"
#include "extractbench/errors.hpp"

namespace extractbench {

void SimilarityConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0, 1]");
  if (!(date_half_life_days > 0.0)) throw Error(ErrorCode::InvalidArgument, "date_half_life must be positive");
  if (!(numeric_rel_cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "numeric_rel_cap must be positive");
  if (!(numeric_floor_epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "numeric_floor_epsilon must be positive");
  }
}

Json SimilarityConfig::to_json() const {
  Json j = Json::object();
  j["tau"] = tau;
  j["date_half_life_days"] = date_half_life_days;
  j["numeric_rel_cap"] = numeric_rel_cap;
  j["numeric_floor_epsilon"] = numeric_floor_epsilon;
  return j;
}

double numeric_similarity(double predicted, double gold, const SimilarityConfig& cfg) {
  if (!std::isfinite(predicted) || !std::isfinite(gold)) {
    throw Error(ErrorCode::NonFiniteNumber, "numeric similarity needs finite operands");
  }
  const double deviation = std::fabs(predicted - gold) / std::max(std::fabs(gold), cfg.numeric_floor_epsilon);
  if (deviation >= cfg.numeric_rel_cap) return 0.0;
  return std::max(0.0, 1.0 - deviation);
}

double date_similarity(std::chrono::sys_days predicted, std::chrono::sys_days gold,
                       const SimilarityConfig& cfg) {
  const auto delta = (predicted - gold).count();
  const double days = static_cast<double>(delta < 0 ? -delta : delta);
  return std::exp2(-days / cfg.date_half_life_days);
}

double boolean_similarity(bool predicted, bool gold) noexcept { return predicted == gold ? 1.0 : 0.0; }

double string_similarity(const std::string& predicted, const std::string& gold, EmbeddingProvider& embedder) {
  if (predicted == gold) return 1.0;
  const std::string texts[2] = {predicted, gold};
  const auto vecs = embedder.embed(texts);
  return std::clamp(cosine(vecs[0], vecs[1]), 0.0, 1.0);
}

double list_similarity_from_scores(const ScoreMatrix& scores, double tau) {
  const std::size_t total = scores.rows() + scores.cols();
  if (total == 0) return 1.0;
  if (scores.rows() == 0 || scores.cols() == 0) return 0.0;
  const MatchSet m = optimal_matching(scores, tau);
  return std::clamp(2.0 * m.total() / static_cast<double>(total), 0.0, 1.0);
}

double list_similarity(const FieldValue::List& predicted, const FieldValue::List& gold,
                       const FieldSpec* item_spec, const SimilarityConfig& cfg,
                       EmbeddingProvider& embedder) {
  ScoreMatrix scores(predicted.size(), gold.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = 0; j < gold.size(); ++j) {
      scores(i, j) = field_similarity(&predicted[i], gold[j], item_spec, cfg, embedder);
    }
  }
  return list_similarity_from_scores(scores, cfg.tau);
}

namespace {

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

double field_similarity(const FieldValue* predicted, const FieldValue& gold, const FieldSpec* spec,
                        const SimilarityConfig& cfg, EmbeddingProvider& embedder) {
  if (predicted == nullptr) return 0.0;
  const FieldValue& pred = *predicted;

  if (pred.is_list() || gold.is_list()) {
    const FieldSpec* item_spec = spec;
    if (spec && spec->kind == FieldKind::List) item_spec = spec->item_spec.get();
    if (pred.is_list() && gold.is_list()) {
      return list_similarity(pred.as_list(), gold.as_list(), item_spec, cfg, embedder);
    }
    const FieldValue::List p = pred.is_list() ? pred.as_list() : FieldValue::List{pred};
    const FieldValue::List g = gold.is_list() ? gold.as_list() : FieldValue::List{gold};
    return list_similarity(p, g, item_spec, cfg, embedder);
  }
  if (pred.is_number() && gold.is_number()) {
    return numeric_similarity(pred.as_number(), gold.as_number(), cfg);
  }
  if (pred.is_boolean() && gold.is_boolean()) {
    return boolean_similarity(pred.as_boolean(), gold.as_boolean());
  }
  if (pred.is_boolean() || gold.is_boolean()) {
    return lowercase(canonical_text(pred)) == lowercase(canonical_text(gold)) ? 1.0 : 0.0;
  }
  if (pred.is_object() && gold.is_object()) {
    const auto& members = gold.as_object();
    if (members.empty()) return 1.0;
    double sum = 0.0;
    for (const auto& m : members) {
      const FieldSpec* child = spec ? spec->child(m.name) : nullptr;
      sum += field_similarity(pred.find(m.name), m.value, child, cfg, embedder);
    }
    return sum / static_cast<double>(members.size());
  }
  if (pred.is_text() && gold.is_text()) {
    const auto pd = parse_date(pred.as_text());
    if (pd) {
      const auto gd = parse_date(gold.as_text());
      if (gd) return date_similarity(*pd, *gd, cfg);
    }
  }
  return string_similarity(canonical_text(pred), canonical_text(gold), embedder);
}

}  // namespace extractbench

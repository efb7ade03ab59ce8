#include "extractbench/harness.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "extractbench/errors.hpp"
#include "extractbench/parallel.hpp"
#include "extractbench/text.hpp"

namespace extractbench {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TaskRecord task_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "task record must be a JSON object");
  TaskRecord t;
  try {
    t.task_id = j.at("task_id").get<std::string>();
    t.schema = schema_from_json(j.at("schema"));
    t.document = j.at("document").get<std::string>();
    t.gold = ExtractionOutput::from_json(j.at("gold"));
    if (j.contains("domain") && !j["domain"].is_null()) t.domain = j["domain"].get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  const auto report = validate_output(t.gold, t.schema);
  if (!report.missing_required.empty()) {
    throw Error(ErrorCode::GoldSchemaMismatch, "gold lacks schema field '" + report.missing_required.front() + "'");
  }
  return t;
}

std::vector<TaskRecord> load_tasks(std::istream& in) {
  std::vector<TaskRecord> tasks;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw RecordError(ErrorCode::MalformedInput, line_no, e.what());
    }
    try {
      tasks.push_back(task_from_json(j));
    } catch (const Error& e) {
      const auto code = e.code() == ErrorCode::GoldSchemaMismatch ? e.code() : ErrorCode::MalformedInput;
      throw RecordError(code, line_no, e.what());
    }
    if (!ids.insert(tasks.back().task_id).second) {
      throw RecordError(ErrorCode::MalformedInput, line_no, "duplicate task_id '" + tasks.back().task_id + "'");
    }
  }
  return tasks;
}

std::vector<TaskRecord> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open task file " + path.string());
  return load_tasks(in);
}

ReplayGenerator::ReplayGenerator(std::map<std::string, std::string> predictions)
    : predictions_(std::move(predictions)) {}

ReplayGenerator ReplayGenerator::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open predictions " + path.string());
  std::map<std::string, std::string> predictions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      predictions[j.at("task_id").get<std::string>()] = j.at("prediction").get<std::string>();
    } catch (const Json::exception& e) {
      throw RecordError(ErrorCode::MalformedInput, line_no, e.what());
    }
  }
  return ReplayGenerator(std::move(predictions));
}

std::string ReplayGenerator::generate(const TaskRecord& task, const std::string&) {
  auto it = predictions_.find(task.task_id);
  if (it == predictions_.end()) {
    throw Error(ErrorCode::GenerationFailure, "no replayed prediction for task '" + task.task_id + "'");
  }
  return it->second;
}

Json ReplayGenerator::decoding() const { return Json{{"backend", "replay"}}; }

HttpChatGenerator::HttpChatGenerator(ChatClientOptions options) : client_(std::move(options)) {}

std::string HttpChatGenerator::generate(const TaskRecord&, const std::string& prompt) {
  return client_.complete({{"user", prompt}});
}

std::string HttpChatGenerator::name() const { return client_.options().model; }

Json HttpChatGenerator::decoding() const {
  const auto& o = client_.options();
  Json j = Json::object();
  j["backend"] = "chat";
  j["model"] = o.model;
  j["max_new_tokens"] = o.max_tokens;
  j["temperature"] = o.temperature;
  return j;
}

std::string config_fingerprint(const SimilarityConfig& cfg, const ProviderDescriptor& embedder, ParseMode mode,
                               const std::string& template_version) {
  Json j = Json::object();
  j["similarity"] = cfg.to_json();
  Json e = Json::object();
  e["backend"] = to_string(embedder.backend);
  e["dimension"] = embedder.dimension;
  e["endpoint"] = embedder.endpoint ? Json(*embedder.endpoint) : Json(nullptr);
  j["embedder"] = std::move(e);
  j["parse_mode"] = to_string(mode);
  j["template_version"] = template_version;
  return to_hex64(fnv1a64(j.dump()));
}

Json EvaluationReport::to_json() const {
  Json j = Json::object();
  j["model_name"] = model_name;
  j["task_count"] = task_count;
  j["mean_reward"] = mean_reward;
  j["json_validity"] = json_validity;
  j["failures"] = failures;
  j["config_fingerprint"] = config_fingerprint;
  j["template_version"] = template_version;
  j["parse_mode"] = parse_mode;
  j["similarity"] = similarity;
  j["embedder"] = embedder;
  j["decoding"] = decoding;
  Json tasks = Json::array();
  for (const auto& t : per_task) {
    Json row = Json::object();
    row["task_id"] = t.task_id;
    row["reward"] = t.reward;
    row["gate"] = to_string(t.gate);
    Json fields = Json::object();
    for (const auto& [name, s] : t.per_field) fields[name] = s;
    row["per_field"] = std::move(fields);
    if (t.generation_failed) row["error"] = t.error;
    tasks.push_back(std::move(row));
  }
  j["per_task"] = std::move(tasks);
  return j;
}

EvaluationReport EvaluationReport::from_json(const Json& j) {
  EvaluationReport r;
  try {
    r.model_name = j.at("model_name").get<std::string>();
    r.task_count = j.at("task_count").get<std::size_t>();
    r.mean_reward = j.at("mean_reward").get<double>();
    r.json_validity = j.at("json_validity").get<double>();
    r.failures = j.value("failures", std::size_t{0});
    r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    r.template_version = j.value("template_version", std::string());
    r.parse_mode = j.value("parse_mode", std::string());
    if (j.contains("similarity")) r.similarity = j["similarity"];
    if (j.contains("embedder")) r.embedder = j["embedder"];
    if (j.contains("decoding")) r.decoding = j["decoding"];
    for (const auto& row : j.value("per_task", Json::array())) {
      TaskScore t;
      t.task_id = row.at("task_id").get<std::string>();
      t.reward = row.at("reward").get<double>();
      const auto gate = gate_from_string(row.at("gate").get<std::string>());
      if (!gate) throw Error(ErrorCode::MalformedInput, "unknown gate in report");
      t.gate = *gate;
      if (row.contains("per_field")) {
        for (const auto& [name, s] : row["per_field"].items()) t.per_field.emplace_back(name, s.get<double>());
      }
      if (row.contains("error")) {
        t.generation_failed = true;
        t.error = row["error"].get<std::string>();
      }
      r.per_task.push_back(std::move(t));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("malformed report: ") + e.what());
  }
  return r;
}

EvaluationReport evaluate(std::span<const TaskRecord> tasks, GenerationClient& generator,
                          const EvaluationOptions& options, EmbeddingProvider& embedder) {
  options.similarity.validate();
  std::vector<TaskScore> scores(tasks.size());
  parallel_for(tasks.size(), options.workers, [&](std::size_t i) {
    const auto& task = tasks[i];
    auto& score = scores[i];
    score.task_id = task.task_id;
    std::string prediction;
    try {
      prediction = generator.generate(task, options.prompt.render(task.schema.serialize(), task.document));
    } catch (const std::exception& e) {
      score.generation_failed = true;
      score.error = e.what();
      score.gate = Gate::InvalidJson;
      score.reward = 0.0;
      return;
    }
    const auto breakdown =
        compute_reward(prediction, task.gold, task.schema, options.similarity, embedder, options.parse_mode);
    score.reward = breakdown.total;
    score.gate = breakdown.gate;
    score.per_field = breakdown.per_field;
  });
  std::sort(scores.begin(), scores.end(), [](const TaskScore& a, const TaskScore& b) { return a.task_id < b.task_id; });

  EvaluationReport report;
  report.model_name = options.model_name;
  report.task_count = scores.size();
  double sum = 0.0;
  std::size_t parsed = 0;
  for (const auto& s : scores) {
    sum += s.reward;
    if (s.gate != Gate::InvalidJson) ++parsed;
    if (s.generation_failed) ++report.failures;
  }
  if (!scores.empty()) {
    report.mean_reward = sum / static_cast<double>(scores.size());
    report.json_validity = static_cast<double>(parsed) / static_cast<double>(scores.size());
  }
  const auto descriptor = embedder.descriptor();
  report.config_fingerprint =
      config_fingerprint(options.similarity, descriptor, options.parse_mode, options.prompt.version);
  report.template_version = options.prompt.version;
  report.parse_mode = to_string(options.parse_mode);
  report.similarity = options.similarity.to_json();
  report.embedder = descriptor.to_json();
  report.decoding = generator.decoding();
  report.per_task = std::move(scores);
  return report;
}

std::string format_relative_improvement(double value, double baseline) {
  if (baseline == 0.0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.1f%%", (value - baseline) / baseline * 100.0);
  return buf;
}

Comparison compare_reports(std::span<const EvaluationReport> reports) {
  if (reports.size() < 2) throw Error(ErrorCode::InvalidArgument, "comparison needs at least two reports");
  const auto& fp = reports.front().config_fingerprint;
  for (const auto& r : reports) {
    if (r.config_fingerprint != fp) {
      throw Error(ErrorCode::FingerprintMismatch, "report '" + r.model_name + "' was scored under config " +
                                                      r.config_fingerprint + ", baseline under " + fp);
    }
  }
  Comparison c;
  c.config_fingerprint = fp;
  const double base = reports.front().mean_reward;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    ComparisonRow row;
    row.model_name = reports[i].model_name;
    row.mean_reward = reports[i].mean_reward;
    row.json_validity = reports[i].json_validity;
    row.delta = reports[i].mean_reward - base;
    if (i > 0 && base != 0.0) row.relative_improvement = (reports[i].mean_reward - base) / base;
    c.rows.push_back(std::move(row));
  }
  return c;
}

std::string Comparison::render_text() const {
  std::vector<std::array<std::string, 5>> cells;
  cells.push_back({"Model", "Mean Reward", "JSON Validity", "Delta", "Relative Improvement"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    char reward[32], validity[32], delta[32];
    std::snprintf(reward, sizeof reward, "%.3f", r.mean_reward);
    std::snprintf(validity, sizeof validity, "%.1f%%", r.json_validity * 100.0);
    std::snprintf(delta, sizeof delta, "%+.3f", r.delta);
    std::string rel = i == 0 ? "Baseline"
                             : format_relative_improvement(r.mean_reward, rows.front().mean_reward);
    cells.push_back({r.model_name, reward, validity, i == 0 ? "-" : delta, rel});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < 5; ++k) width[k] = std::max(width[k], row[k].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t k = 0; k < 5; ++k) {
      if (k) os << "  ";
      if (k == 0) os << std::left; else os << std::right;
      os << std::setw(static_cast<int>(width[k])) << cells[r][k];
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      os << std::string(total + 8, '-') << '\n';
    }
  }
  os << "config " << config_fingerprint << '\n';
  return os.str();
}

Json Comparison::to_json() const {
  Json j = Json::object();
  j["config_fingerprint"] = config_fingerprint;
  j["rows"] = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Json row = Json::object();
    row["model_name"] = r.model_name;
    row["mean_reward"] = r.mean_reward;
    row["json_validity"] = r.json_validity;
    row["delta"] = r.delta;
    row["relative_improvement"] = r.relative_improvement ? Json(*r.relative_improvement) : Json(nullptr);
    row["relative_improvement_text"] =
        i == 0 ? "Baseline" : format_relative_improvement(r.mean_reward, rows.front().mean_reward);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

RewardBreakdown score_files(const std::filesystem::path& schema_path, const std::filesystem::path& gold_path,
                            const std::filesystem::path& prediction_path, const SimilarityConfig& cfg,
                            EmbeddingProvider& embedder, ParseMode mode) {
  const auto schema = parse_schema(read_file(schema_path));
  Json gold_json;
  try {
    gold_json = Json::parse(read_file(gold_path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, "gold file: " + std::string(e.what()));
  }
  const auto gold = ExtractionOutput::from_json(gold_json);
  const auto report = validate_output(gold, schema);
  if (!report.missing_required.empty()) {
    throw Error(ErrorCode::GoldSchemaMismatch, "gold lacks schema field '" + report.missing_required.front() + "'");
  }
  const std::string prediction = read_file(prediction_path);
  return compute_reward(prediction, gold, schema, cfg, embedder, mode);
}

}  // namespace extractbench

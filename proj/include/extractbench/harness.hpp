#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extractbench/augment.hpp"
#include "extractbench/chat_client.hpp"
#include "extractbench/embedding.hpp"
#include "extractbench/reward.hpp"
#include "extractbench/schema.hpp"

namespace extractbench {

struct TaskRecord {
  std::string task_id;
  ExtractionSchema schema;
  std::string document;
  ExtractionOutput gold;
  std::optional<std::string> domain;
};

/// Parses one task JSON object; gold must supply every schema property.
TaskRecord task_from_json(const Json& j);

/// JSONL task records in file order. Blank lines are skipped. Errors are
/// RecordError with the 1-based line number (MalformedRecord or
/// GoldSchemaMismatch).
std::vector<TaskRecord> load_tasks(std::istream& in);
std::vector<TaskRecord> load_tasks(const std::filesystem::path& path);

class GenerationClient {
 public:
  virtual ~GenerationClient() = default;
  /// Throws Error(GenerationFailure) when no prediction can be produced.
  virtual std::string generate(const TaskRecord& task, const std::string& prompt) = 0;
  virtual std::string name() const = 0;
  virtual Json decoding() const = 0;
};

/// Canned predictions from JSONL {task_id, prediction}.
class ReplayGenerator final : public GenerationClient {
 public:
  explicit ReplayGenerator(std::map<std::string, std::string> predictions);
  static ReplayGenerator load(const std::filesystem::path& path);

  std::string generate(const TaskRecord& task, const std::string& prompt) override;
  std::string name() const override { return "replay"; }
  Json decoding() const override;

 private:
  std::map<std::string, std::string> predictions_;
};

class HttpChatGenerator final : public GenerationClient {
 public:
  explicit HttpChatGenerator(ChatClientOptions options);

  std::string generate(const TaskRecord& task, const std::string& prompt) override;
  std::string name() const override;
  Json decoding() const override;

 private:
  ChatClient client_;
};

struct EvaluationOptions {
  SimilarityConfig similarity;
  ParseMode parse_mode = ParseMode::Lenient;
  std::size_t workers = 1;
  std::string model_name = "model";
  PromptTemplate prompt = PromptTemplate::builtin();
};

struct TaskScore {
  std::string task_id;
  double reward = 0.0;
  Gate gate = Gate::InvalidJson;
  bool generation_failed = false;
  std::string error;
  std::vector<std::pair<std::string, double>> per_field;
};

struct EvaluationReport {
  std::string model_name;
  std::size_t task_count = 0;
  double mean_reward = 0.0;
  double json_validity = 0.0;
  std::size_t failures = 0;
  std::string config_fingerprint;
  std::string template_version;
  std::string parse_mode;
  Json similarity = Json::object();
  Json embedder = Json::object();
  Json decoding = Json::object();
  /// Sorted by task_id.
  std::vector<TaskScore> per_task;

  Json to_json() const;
  static EvaluationReport from_json(const Json& j);
};

/// 16 hex digits of FNV-1a over the canonical JSON of the similarity
/// config, embedder descriptor, parse mode and template version.
std::string config_fingerprint(const SimilarityConfig& cfg, const ProviderDescriptor& embedder, ParseMode mode,
                               const std::string& template_version);

/// Scores every task once. Generation failures score 0 with gate
/// InvalidJson and are tallied; embedder failures abort the run.
EvaluationReport evaluate(std::span<const TaskRecord> tasks, GenerationClient& generator,
                          const EvaluationOptions& options, EmbeddingProvider& embedder);

/// "+147.0%" style; "n/a" when the baseline is zero.
std::string format_relative_improvement(double value, double baseline);

struct ComparisonRow {
  std::string model_name;
  double mean_reward = 0.0;
  double json_validity = 0.0;
  double delta = 0.0;
  std::optional<double> relative_improvement;
};

struct Comparison {
  std::string config_fingerprint;
  /// First row is the baseline.
  std::vector<ComparisonRow> rows;

  std::string render_text() const;
  Json to_json() const;
};

/// Compares every report against the first. Throws FingerprintMismatch
/// unless all fingerprints agree, InvalidArgument for fewer than two.
Comparison compare_reports(std::span<const EvaluationReport> reports);

/// Reads a schema file, a gold output file and a raw prediction file.
RewardBreakdown score_files(const std::filesystem::path& schema_path, const std::filesystem::path& gold_path,
                            const std::filesystem::path& prediction_path, const SimilarityConfig& cfg,
                            EmbeddingProvider& embedder, ParseMode mode = ParseMode::Lenient);

std::string read_file(const std::filesystem::path& path);

}  // namespace extractbench

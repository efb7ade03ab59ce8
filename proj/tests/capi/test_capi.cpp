#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "extractbench/extractbench.h"

namespace {

std::string data(const std::string& rel) { return std::string(EB_TEST_DATA) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  eb_string_free(s);
  return out;
}

struct Handles {
  eb_config* config = nullptr;
  eb_embedder* embedder = nullptr;
  Handles() {
    REQUIRE(eb_config_create(&config) == EB_OK);
    REQUIRE(eb_config_set(config, "embedder", "deterministic") == EB_OK);
    REQUIRE(eb_embedder_create(config, &embedder) == EB_OK);
  }
  ~Handles() {
    eb_embedder_destroy(embedder);
    eb_config_destroy(config);
  }
};

const char* kSchema = R"({"type":"object","properties":{"a":{"type":"string"},"b":{"type":"number"}}})";

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(eb_version()).size() > 0);
  CHECK(std::string(eb_status_name(EB_OK)) == "Ok");
  CHECK(std::string(eb_status_name(EB_ERR_MALFORMED_SCHEMA)) == "MalformedSchema");
  CHECK(std::string(eb_status_name(EB_ERR_BUFFER_TOO_SMALL)) == "BufferTooSmall");
  eb_schema* s = nullptr;
  CHECK(eb_schema_parse("{\"type\":\"object\",\"properties\":", &s) == EB_ERR_MALFORMED_SCHEMA);
  CHECK(s == nullptr);
  CHECK(std::string(eb_last_error()).size() > 0);
  CHECK(eb_schema_parse(nullptr, &s) == EB_ERR_INVALID_ARGUMENT);
  eb_string_free(nullptr);
}

TEST_CASE("config handle") {
  eb_config* c = nullptr;
  REQUIRE(eb_config_create(&c) == EB_OK);
  CHECK(eb_config_set(c, "tau", "0.5") == EB_OK);
  char* v = nullptr;
  REQUIRE(eb_config_get(c, "tau", &v) == EB_OK);
  CHECK(take(v) == "0.5");
  CHECK(eb_config_set(c, "unknown_key", "1") == EB_ERR_INVALID_ARGUMENT);
  CHECK(eb_config_get(c, "unknown_key", &v) == EB_ERR_INVALID_ARGUMENT);
  CHECK(eb_config_load_file(c, data("augment/augment.conf").c_str()) == EB_OK);
  REQUIRE(eb_config_get(c, "chunk_size", &v) == EB_OK);
  CHECK(take(v) == "1200");
  CHECK(eb_config_load_file(c, data("missing.conf").c_str()) == EB_ERR_IO);
  eb_config_destroy(c);
}

TEST_CASE("embedder handle") {
  Handles h;
  CHECK(eb_embedder_dimension(h.embedder) == 384);
  const char* texts[] = {"hello", "hello", "world"};
  std::vector<double> out(3 * 384);
  REQUIRE(eb_embedder_embed(h.embedder, texts, 3, out.data(), out.size()) == EB_OK);
  double norm = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < 384; ++i) {
    norm += out[i] * out[i];
    diff += std::fabs(out[i] - out[384 + i]);
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diff == 0.0);
  CHECK(eb_embedder_embed(h.embedder, texts, 3, out.data(), 10) == EB_ERR_BUFFER_TOO_SMALL);
}

TEST_CASE("schema handle and scoring") {
  Handles h;
  eb_schema* s = nullptr;
  REQUIRE(eb_schema_parse(kSchema, &s) == EB_OK);
  CHECK(eb_schema_property_count(s) == 2);
  char* js = nullptr;
  REQUIRE(eb_schema_to_json(s, &js) == EB_OK);
  CHECK(nlohmann::json::parse(take(js))["properties"].size() == 2);

  double total = -1;
  eb_gate gate = EB_GATE_PASSED;
  char* breakdown = nullptr;
  REQUIRE(eb_score(s, R"({"a":"x","b":100})", R"({"a":"x","b":110})", h.config, h.embedder, &total, &gate,
                   &breakdown) == EB_OK);
  CHECK(gate == EB_GATE_PASSED);
  CHECK(total == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(nlohmann::json::parse(take(breakdown))["gate"] == "Passed");

  REQUIRE(eb_score(s, R"({"a":"x","b":100})", "garbage", h.config, h.embedder, &total, &gate, nullptr) == EB_OK);
  CHECK(gate == EB_GATE_INVALID_JSON);
  CHECK(total == 0.0);
  REQUIRE(eb_score(s, R"({"a":"x","b":100})", R"({"a":"x"})", h.config, h.embedder, &total, &gate, nullptr) == EB_OK);
  CHECK(gate == EB_GATE_MISSING_REQUIRED);
  CHECK(eb_score(s, R"({"a":"x"})", R"({"a":"x","b":1})", h.config, h.embedder, &total, &gate, nullptr) ==
        EB_ERR_GOLD_SCHEMA_MISMATCH);

  char* report = nullptr;
  REQUIRE(eb_validate_output(s, "```json\n{\"a\":1}\n```", EB_PARSE_STRICT, &report) == EB_OK);
  CHECK(nlohmann::json::parse(take(report))["json_valid"] == false);
  REQUIRE(eb_validate_output(s, "```json\n{\"a\":1}\n```", EB_PARSE_LENIENT, &report) == EB_OK);
  const auto rep = nlohmann::json::parse(take(report));
  CHECK(rep["json_valid"] == true);
  CHECK(rep["missing_required"] == nlohmann::json::array({"b"}));
  eb_schema_destroy(s);

  char* combined = nullptr;
  const std::string parts = std::string("[") + kSchema + "," +
                            R"({"type":"object","properties":{"b":{"type":"string"},"c":{"type":"boolean"}}}])";
  REQUIRE(eb_combine_schemas(parts.c_str(), &combined) == EB_OK);
  const auto cj = nlohmann::json::parse(take(combined));
  CHECK(cj["schema"]["properties"].size() == 3);
  CHECK(cj["collisions"] == nlohmann::json::array({"b"}));
}

TEST_CASE("score files through the C API") {
  Handles h;
  char* out = nullptr;
  REQUIRE(eb_score_files(data("appendix/example1_schema.json").c_str(), data("appendix/example1_gold.json").c_str(),
                         data("appendix/example1_gold.json").c_str(), h.config, h.embedder, &out) == EB_OK);
  CHECK(nlohmann::json::parse(take(out))["total"] == 1.0);
  CHECK(eb_score_files("/nonexistent", "/nonexistent", "/nonexistent", h.config, h.embedder, &out) == EB_ERR_IO);
}

TEST_CASE("optimal matching through the C API") {
  const double m[] = {0.9, 0.8, 0.85, 0.1};
  std::size_t p[2], g[2], n = 0;
  double sc[2];
  REQUIRE(eb_optimal_matching(m, 2, 2, 0.35, p, g, sc, 2, &n) == EB_OK);
  REQUIRE(n == 2);
  CHECK(p[0] == 0);
  CHECK(g[0] == 1);
  CHECK(p[1] == 1);
  CHECK(g[1] == 0);
  CHECK(sc[0] + sc[1] == doctest::Approx(1.65).epsilon(1e-12));
  CHECK(eb_optimal_matching(m, 2, 2, 0.35, p, g, sc, 1, &n) == EB_ERR_BUFFER_TOO_SMALL);
  const double edge[] = {0.35};
  REQUIRE(eb_optimal_matching(edge, 1, 1, 0.35, p, g, sc, 1, &n) == EB_OK);
  CHECK(n == 0);
}

TEST_CASE("evaluate and compare through the C API") {
  Handles h;
  char* report = nullptr;
  REQUIRE(eb_evaluate(data("golden/tasks.jsonl").c_str(), data("golden/predictions.jsonl").c_str(), "replay",
                      h.config, h.embedder, &report) == EB_OK);
  const auto r = nlohmann::json::parse(take(report));
  const auto expected = nlohmann::json::parse(slurp(data("golden/expected.json")));
  CHECK(std::fabs(r["mean_reward"].get<double>() - expected["mean_reward"].get<double>()) <= 1e-9);
  CHECK(r["task_count"] == 50);

  nlohmann::json reports = nlohmann::json::array();
  for (const char* f : {"base.json", "sft.json", "grpo.json"})
    reports.push_back(nlohmann::json::parse(slurp(data(std::string("reports/") + f))));
  char* text = nullptr;
  REQUIRE(eb_compare_reports(reports.dump().c_str(), 0, &text) == EB_OK);
  const auto t = take(text);
  CHECK(t.find("+118.5%") != std::string::npos);
  CHECK(t.find("+147.0%") != std::string::npos);
  REQUIRE(eb_compare_reports(reports.dump().c_str(), 1, &text) == EB_OK);
  CHECK(nlohmann::json::parse(take(text))["rows"].size() == 3);
  reports.push_back(nlohmann::json::parse(slurp(data("reports/other_config.json"))));
  CHECK(eb_compare_reports(reports.dump().c_str(), 0, &text) == EB_ERR_FINGERPRINT_MISMATCH);
}

TEST_CASE("pipeline through the C API") {
  char* chunks = nullptr;
  const std::string text(4000, 'x');
  REQUIRE(eb_chunk_text("d", text.c_str(), 2000, 200, &chunks) == EB_OK);
  const auto cj = nlohmann::json::parse(take(chunks));
  REQUIRE(cj.size() == 3);
  CHECK(cj[2]["start"] == 3600);
  CHECK(eb_chunk_text("d", "", 2000, 200, &chunks) == EB_ERR_EMPTY_DOCUMENT);
  CHECK(eb_chunk_text("d", "abc", 100, 100, &chunks) == EB_ERR_INVALID_ARGUMENT);

  eb_config* c = nullptr;
  REQUIRE(eb_config_create(&c) == EB_OK);
  REQUIRE(eb_config_load_file(c, data("augment/augment.conf").c_str()) == EB_OK);
  char* ex = nullptr;
  REQUIRE(eb_extract_corpus(data("augment/corpus.jsonl").c_str(), c, &ex) == EB_OK);
  std::istringstream lines(take(ex));
  std::string line;
  int docs = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    CHECK(!nlohmann::json::parse(line)["memory"].is_null());
    ++docs;
  }
  CHECK(docs == 6);

  const auto dir = std::filesystem::temp_directory_path() / ("eb_capi_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto out = (dir / "aug.jsonl").string();
  char* summary = nullptr;
  REQUIRE(eb_augment_corpus(data("augment/corpus.jsonl").c_str(), c, out.c_str(), &summary) == EB_OK);
  const auto s = nlohmann::json::parse(take(summary));
  CHECK(s["draws"] == 96);
  CHECK(s["emitted"].get<int>() + s["skipped"].get<int>() == 96);

  char* split = nullptr;
  const auto train = (dir / "train.jsonl").string(), test = (dir / "test.jsonl").string();
  REQUIRE(eb_holdout_split(out.c_str(), c, train.c_str(), test.c_str(), 1, &split) == EB_OK);
  const auto sp = nlohmann::json::parse(take(split));
  CHECK(sp["test"] == 10);
  CHECK(sp["train"].get<int>() + 10 == s["emitted"].get<int>());
  std::ifstream first(test);
  std::getline(first, line);
  CHECK(nlohmann::json::parse(line).contains("task_id"));

  CHECK(eb_config_set(c, "holdout_n", "100000") == EB_OK);
  CHECK(eb_holdout_split(out.c_str(), c, train.c_str(), test.c_str(), 0, &split) == EB_ERR_INSUFFICIENT_EXAMPLES);
  eb_config_destroy(c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("training math through the C API") {
  const double base[] = {1, 0, 0, 1}, down[] = {1, 2}, up[] = {3, 4};
  double w[4];
  REQUIRE(eb_lora_apply(base, down, up, 2, 2, 1, 2.0, w) == EB_OK);
  CHECK(w[0] == 1 + 2 * 3);
  CHECK(w[1] == 2 * 4);
  CHECK(w[2] == 2 * 6);
  CHECK(w[3] == 1 + 2 * 8);

  double lr = 0;
  REQUIRE(eb_warmup_lr(100, 100, 1e-4, &lr) == EB_OK);
  CHECK(lr == 1e-4);

  const int64_t ids[] = {5, 6, 7, 8};
  int64_t labels[4];
  REQUIRE(eb_mask_labels(ids, 4, 2, -100, labels) == EB_OK);
  CHECK(labels[0] == -100);
  CHECK(labels[3] == 8);
  CHECK(eb_mask_labels(ids, 4, 9, -100, labels) == EB_ERR_INDEX_OUT_OF_RANGE);

  double mem = 0;
  REQUIRE(eb_checkpoint_memory_estimate(0, 8, 0, 1, 4, &mem) == EB_OK);
  CHECK(mem == 4.0);

  const double r[] = {1.0}, v[] = {0.5, 2.0};
  double adv = 0;
  REQUIRE(eb_gae_advantages(r, v, 1, 0.9, 0.95, &adv) == EB_OK);
  CHECK(adv == doctest::Approx(2.3).epsilon(1e-15));

  const double ratio[] = {1.5}, a[] = {2.0};
  double obj = 0;
  REQUIRE(eb_grpo_clip_objective(ratio, a, 1, 0.2, &obj) == EB_OK);
  CHECK(obj == doctest::Approx(2.4).epsilon(1e-15));

  double beta = 0;
  REQUIRE(eb_adapt_kl(0.05, 4.0, &beta) == EB_OK);
  CHECK(beta == 0.025);

  const double batch[] = {0, 1};
  double scaled[2];
  REQUIRE(eb_batch_scale_rewards(batch, 2, scaled) == EB_OK);
  CHECK(scaled[0] == -1.0);
  CHECK(eb_batch_scale_rewards(batch, 1, scaled) == EB_ERR_DEGENERATE_BATCH);

  char* trace = nullptr;
  REQUIRE(eb_simulate_kl(0.05, 6.0, 50, 1.0, &trace) == EB_OK);
  const auto tj = nlohmann::json::parse(take(trace));
  CHECK(tj["betas"].size() == 51);
  CHECK(tj["entered_band_at"].is_number());
}

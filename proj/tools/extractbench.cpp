#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "extractbench/extractbench.h"

namespace {

struct CliFailure {
  int exit_code;
};

struct Owned {
  char* s = nullptr;
  ~Owned() { eb_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

int exit_code_for(eb_status st) {
  switch (st) {
    case EB_ERR_INVALID_ARGUMENT:
    case EB_ERR_MALFORMED_SCHEMA:
    case EB_ERR_MALFORMED_INPUT:
    case EB_ERR_IO:
    case EB_ERR_GOLD_SCHEMA_MISMATCH:
    case EB_ERR_EMPTY_DOCUMENT:
    case EB_ERR_INSUFFICIENT_EXAMPLES:
      return 2;
    default:
      return 1;
  }
}

void check(eb_status st) {
  if (st == EB_OK) return;
  std::cerr << "extractbench: " << eb_status_name(st) << ": " << eb_last_error() << "\n";
  throw CliFailure{exit_code_for(st)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "extractbench: cannot read " << path << "\n";
    throw CliFailure{2};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) {
    std::cerr << "extractbench: cannot write " << output_path << "\n";
    throw CliFailure{2};
  }
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string parse_mode;
  std::string embedder;
};

struct Config {
  eb_config* handle = nullptr;
  ~Config() { eb_config_destroy(handle); }
};

struct Embedder {
  eb_embedder* handle = nullptr;
  ~Embedder() { eb_embedder_destroy(handle); }
};

void build_config(const Globals& g, Config& c) {
  check(eb_config_create(&c.handle));
  if (!g.config_path.empty()) check(eb_config_load_file(c.handle, g.config_path.c_str()));
  if (g.seed) check(eb_config_set(c.handle, "seed", std::to_string(*g.seed).c_str()));
  if (g.workers) check(eb_config_set(c.handle, "workers", std::to_string(*g.workers).c_str()));
  if (!g.parse_mode.empty()) check(eb_config_set(c.handle, "parse_mode", g.parse_mode.c_str()));
  if (!g.embedder.empty()) check(eb_config_set(c.handle, "embedder", g.embedder.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document extraction scoring, benchmarking and data generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eb_version());

  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--parse-mode", g.parse_mode, "strict or lenient")->check(CLI::IsMember({"strict", "lenient"}));
  app.add_option("--embedder", g.embedder, "deterministic or remote")
      ->check(CLI::IsMember({"deterministic", "remote"}));

  std::string output;

  auto* score = app.add_subcommand("score", "score one prediction against its gold output");
  std::string schema_path, gold_path, prediction_path;
  score->add_option("--schema", schema_path)->required();
  score->add_option("--gold", gold_path)->required();
  score->add_option("--prediction", prediction_path)->required();

  auto* evaluate = app.add_subcommand("evaluate", "run a task set and write a report");
  std::string tasks_path, predictions_path, model_name;
  evaluate->add_option("--tasks", tasks_path)->required();
  evaluate->add_option("--predictions", predictions_path, "replay JSONL; omit to call the chat endpoint");
  evaluate->add_option("--model-name", model_name);
  evaluate->add_option("-o,--output", output);

  auto* chunk = app.add_subcommand("chunk", "split a text file into overlapping chunks");
  std::string input_path, doc_id;
  std::optional<std::size_t> chunk_size, chunk_overlap;
  chunk->add_option("input", input_path)->required();
  chunk->add_option("--doc-id", doc_id);
  chunk->add_option("--size", chunk_size);
  chunk->add_option("--overlap", chunk_overlap);
  chunk->add_option("-o,--output", output);

  auto* augment = app.add_subcommand("augment", "extract a corpus and generate training examples");
  std::string corpus_path, fixture_dir;
  std::optional<std::size_t> draws;
  augment->add_option("--corpus", corpus_path, "directory of .txt files or {doc_id,text} JSONL")->required();
  augment->add_option("--fixtures", fixture_dir, "mock extractor replies");
  augment->add_option("--draws", draws, "draws per document");
  augment->add_option("-o,--output", output)->required();

  auto* split = app.add_subcommand("split", "seeded train/test split of a JSONL file");
  std::string train_path, test_path;
  std::optional<std::size_t> holdout;
  bool as_tasks = false;
  split->add_option("input", input_path)->required();
  split->add_option("--train", train_path)->required();
  split->add_option("--test", test_path)->required();
  split->add_option("--holdout", holdout);
  split->add_flag("--as-tasks", as_tasks, "write benchmark task records");

  auto* simulate = app.add_subcommand("simulate-kl", "run the adaptive KL controller on a toy plant");
  double beta0 = 0.05, initial_kl = 6.0, elasticity = 1.0;
  std::size_t steps = 50;
  simulate->add_option("--beta", beta0, "initial coefficient")->capture_default_str();
  simulate->add_option("--initial-kl", initial_kl, "initial divergence")->capture_default_str();
  simulate->add_option("--steps", steps, "")->capture_default_str();
  simulate->add_option("--elasticity", elasticity, "")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "compare reports against the first one");
  std::vector<std::string> report_paths;
  bool compare_json = false;
  compare->add_option("reports", report_paths)->required()->expected(2, -1);
  compare->add_flag("--json", compare_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    build_config(g, cfg);

    if (*score) {
      Embedder emb;
      check(eb_embedder_create(cfg.handle, &emb.handle));
      Owned out;
      check(eb_score_files(schema_path.c_str(), gold_path.c_str(), prediction_path.c_str(), cfg.handle, emb.handle,
                           &out.s));
      emit(out.str(), "");
    } else if (*evaluate) {
      Embedder emb;
      check(eb_embedder_create(cfg.handle, &emb.handle));
      Owned out;
      check(eb_evaluate(tasks_path.c_str(), predictions_path.empty() ? nullptr : predictions_path.c_str(),
                        model_name.empty() ? nullptr : model_name.c_str(), cfg.handle, emb.handle, &out.s));
      emit(out.str(), output);
    } else if (*chunk) {
      if (chunk_size) check(eb_config_set(cfg.handle, "chunk_size", std::to_string(*chunk_size).c_str()));
      if (chunk_overlap) check(eb_config_set(cfg.handle, "chunk_overlap", std::to_string(*chunk_overlap).c_str()));
      Owned size, overlap;
      check(eb_config_get(cfg.handle, "chunk_size", &size.s));
      check(eb_config_get(cfg.handle, "chunk_overlap", &overlap.s));
      const std::string text = slurp(input_path);
      if (doc_id.empty()) {
        doc_id = input_path;
        if (const auto slash = doc_id.find_last_of('/'); slash != std::string::npos) doc_id.erase(0, slash + 1);
        if (const auto dot = doc_id.rfind('.'); dot != std::string::npos && dot > 0) doc_id.erase(dot);
      }
      Owned out;
      check(eb_chunk_text(doc_id.c_str(), text.c_str(), std::stoul(size.str()), std::stoul(overlap.str()), &out.s));
      emit(out.str(), output);
    } else if (*augment) {
      if (!fixture_dir.empty()) check(eb_config_set(cfg.handle, "extractor_fixture_dir", fixture_dir.c_str()));
      if (draws) check(eb_config_set(cfg.handle, "draws_per_document", std::to_string(*draws).c_str()));
      Owned summary;
      check(eb_augment_corpus(corpus_path.c_str(), cfg.handle, output.c_str(), &summary.s));
      std::cerr << summary.str() << "\n";
    } else if (*split) {
      if (holdout) check(eb_config_set(cfg.handle, "holdout_n", std::to_string(*holdout).c_str()));
      Owned summary;
      check(eb_holdout_split(input_path.c_str(), cfg.handle, train_path.c_str(), test_path.c_str(), as_tasks ? 1 : 0,
                             &summary.s));
      std::cerr << summary.str() << "\n";
    } else if (*simulate) {
      Owned out;
      check(eb_simulate_kl(beta0, initial_kl, steps, elasticity, &out.s));
      emit(out.str(), "");
    } else if (*compare) {
      std::string arr = "[";
      for (std::size_t i = 0; i < report_paths.size(); ++i) {
        if (i) arr += ",";
        arr += slurp(report_paths[i]);
      }
      arr += "]";
      Owned out;
      check(eb_compare_reports(arr.c_str(), compare_json ? 1 : 0, &out.s));
      emit(out.str(), "");
    }
  } catch (const CliFailure& f) {
    return f.exit_code;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "extractbench/augment.hpp"
#include "extractbench/embedding.hpp"
#include "extractbench/schema.hpp"
#include "extractbench/similarity.hpp"

namespace extractbench {

/// Flat `key = value` file: '#' starts a comment, values may be quoted,
/// `[section]` headers prefix keys as "section.key".
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Every tunable the tools expose, with their defaults.
struct ToolConfig {
  SimilarityConfig similarity;
  ParseMode parse_mode = ParseMode::Lenient;

  EmbeddingBackend embedder = EmbeddingBackend::Deterministic;
  std::optional<std::string> embed_url;
  std::size_t embed_cache_capacity = 100000;

  std::size_t workers = 1;
  std::uint64_t seed = 42;

  std::optional<std::string> llm_url;
  std::string llm_model;
  std::string llm_key;
  int max_new_tokens = 532;
  double temperature = 0.0;

  std::optional<std::filesystem::path> template_path;

  std::string extractor = "mock";
  std::optional<std::filesystem::path> extractor_fixture_dir;
  std::string extractor_guidance;

  std::size_t chunk_size = 2000;
  std::size_t chunk_overlap = 200;
  AugmentationConfig augmentation;
  std::size_t draws_per_document = 16;
  std::size_t holdout_n = 1000;

  /// Applies one setting; throws InvalidArgument for unknown keys or bad
  /// values.
  void set(std::string_view key, std::string_view value);
  std::optional<std::string> get(std::string_view key) const;

  void load_file(const std::filesystem::path& path);
  /// EXTRACTBENCH_EMBED_URL selects the remote embedder; the LLM variables
  /// fill the chat endpoint settings.
  void apply_environment();

  PromptTemplate prompt_template() const;
  ChatClientOptions chat_options() const;
};

}  // namespace extractbench

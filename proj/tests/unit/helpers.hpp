#pragma once

#include <filesystem>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "extractbench/embedding.hpp"
#include "extractbench/errors.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(EB_TEST_DATA) / rel; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fixed vectors per text; unknown texts get e_(dim-1).
class StubEmbedder final : public extractbench::EmbeddingProvider {
 public:
  explicit StubEmbedder(std::size_t dim = 4) : dim_(dim) {}

  void set(const std::string& text, std::vector<double> v) { table_[text] = std::move(v); }

  std::vector<extractbench::EmbeddingVector> embed(std::span<const std::string> texts) override {
    std::lock_guard lock(mu_);
    std::vector<extractbench::EmbeddingVector> out;
    for (const auto& t : texts) {
      ++calls_;
      auto it = table_.find(t);
      std::vector<double> v(dim_, 0.0);
      if (it != table_.end()) v = it->second;
      else v[dim_ - 1] = 1.0;
      double n = 0;
      for (double x : v) n += x * x;
      n = std::sqrt(n);
      for (double& x : v) x /= n;
      out.push_back({v});
    }
    return out;
  }

  extractbench::ProviderDescriptor descriptor() const override {
    return {extractbench::EmbeddingBackend::Deterministic, dim_, std::nullopt, 0};
  }

  std::size_t calls() const { return calls_; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> table_;
  std::size_t calls_ = 0;
  std::mutex mu_;
};

class FailingEmbedder final : public extractbench::EmbeddingProvider {
 public:
  std::vector<extractbench::EmbeddingVector> embed(std::span<const std::string>) override {
    throw extractbench::Error(extractbench::ErrorCode::EmbedderUnavailable, "embedding service is down");
  }
  extractbench::ProviderDescriptor descriptor() const override {
    return {extractbench::EmbeddingBackend::Remote, 384, "http://127.0.0.1:9", 0};
  }
};

}  // namespace testing

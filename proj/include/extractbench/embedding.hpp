#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extractbench/field_value.hpp"

namespace extractbench {

/// Unit-norm embedding.
struct EmbeddingVector {
  std::vector<double> components;

  std::size_t dimension() const noexcept { return components.size(); }
  double norm() const noexcept;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Dot product of two vectors divided by the product of their norms.
/// Throws DimensionMismatch on unequal lengths. Zero vectors yield 0.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

enum class EmbeddingBackend { Deterministic, Remote };

const char* to_string(EmbeddingBackend backend) noexcept;

struct ProviderDescriptor {
  EmbeddingBackend backend = EmbeddingBackend::Deterministic;
  std::size_t dimension = 384;
  std::optional<std::string> endpoint;
  std::size_t cache_capacity = 0;

  Json to_json() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// One normalized vector per input, in input order.
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
  virtual ProviderDescriptor descriptor() const = 0;

  EmbeddingVector embed_one(const std::string& text);
};

/// Offline backend: character trigrams (Unicode scalars) are hashed with a
/// seeded FNV-1a/splitmix64 mix into `dimension` signed buckets, then the
/// bucket vector is L2-normalized. Texts shorter than three characters
/// hash as a whole. A vector whose buckets cancel to zero is replaced by
/// the first standard basis vector.
class DeterministicEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultDimension = 384;
  static constexpr std::uint64_t kDefaultSeed = 0x9E3779B97F4A7C15ULL;

  explicit DeterministicEmbedder(std::size_t dimension = kDefaultDimension,
                                 std::uint64_t seed = kDefaultSeed);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  ProviderDescriptor descriptor() const override;

  EmbeddingVector embed_text(std::string_view text) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

struct RemoteEmbedderOptions {
  std::string endpoint;
  std::size_t expected_dimension = 384;
  std::size_t batch_size = 64;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{60000};
};

/// Client for the embedding service (`POST <endpoint>/embed`).
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  ProviderDescriptor descriptor() const override;

 private:
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> batch);

  RemoteEmbedderOptions options_;
};

/// Bounded LRU memo in front of another provider, keyed by exact text.
/// Safe for concurrent callers.
class CachingEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultCapacity = 100000;

  CachingEmbedder(std::unique_ptr<EmbeddingProvider> inner, std::size_t capacity = kDefaultCapacity);
  ~CachingEmbedder() override;

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  ProviderDescriptor descriptor() const override;

  std::size_t size() const;
  std::uint64_t hits() const;
  std::uint64_t misses() const;

 private:
  struct Cache;
  std::unique_ptr<EmbeddingProvider> inner_;
  std::unique_ptr<Cache> cache_;
};

/// Builds the configured backend wrapped in a memo (capacity 0 disables it).
std::unique_ptr<EmbeddingProvider> make_embedder(EmbeddingBackend backend,
                                                 const std::optional<std::string>& endpoint,
                                                 std::size_t cache_capacity = CachingEmbedder::kDefaultCapacity);

/// Remote when EXTRACTBENCH_EMBED_URL is set, deterministic otherwise.
std::unique_ptr<EmbeddingProvider> make_embedder_from_env(
    std::size_t cache_capacity = CachingEmbedder::kDefaultCapacity);

}  // namespace extractbench

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace extractbench {

/// Seedable stream built on std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. All derived draws use the documented mappings below
/// rather than the implementation-defined std distributions, so sequences
/// replay across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for one document: seed xor FNV-1a(stream_id).
  static Rng for_stream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t next() { return engine_(); }

  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform01();

  /// Uniform in [0, n) by rejection of the biased tail. n > 0.
  std::size_t uniform_index(std::size_t n);

  /// Index i with probability weights[i] / sum(weights), found by scanning
  /// cumulative sums against uniform01() * sum.
  std::size_t weighted_index(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace extractbench

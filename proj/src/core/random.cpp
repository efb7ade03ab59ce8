#include "extractbench/random.hpp"

#include <limits>

#include "extractbench/errors.hpp"
#include "extractbench/text.hpp"

namespace extractbench {

Rng Rng::for_stream(std::uint64_t seed, std::string_view stream_id) {
  return Rng(seed ^ fnv1a64(stream_id));
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_index over an empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = 0;
  do {
    x = next();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

std::size_t Rng::weighted_index(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (weights.empty() || !(sum > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "weighted_index needs positive total weight");
  }
  const double target = uniform01() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace extractbench

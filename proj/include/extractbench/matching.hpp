#pragma once

#include <cstddef>
#include <vector>

namespace extractbench {

/// Dense row-major |P| x |G| score matrix.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ScoreMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct MatchPair {
  std::size_t predicted;
  std::size_t gold;
  double score;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchSet {
  /// Sorted by predicted index.
  std::vector<MatchPair> pairs;

  double total() const noexcept;
};

/// Totals within this distance of the optimum count as ties.
inline constexpr double kMatchTieTolerance = 1e-9;

/// Maximum total score over one-to-one matchings that use only entries
/// strictly greater than `tau` (Hungarian method, O(n^3)).
double max_matching_weight(const ScoreMatrix& scores, double tau);

/// Maximum-weight matching restricted to entries > tau. Among optimal
/// matchings (within kMatchTieTolerance) returns the one whose sorted
/// (predicted, gold) pair list is lexicographically smallest.
MatchSet optimal_matching(const ScoreMatrix& scores, double tau);

}  // namespace extractbench

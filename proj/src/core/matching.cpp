#include "extractbench/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>

#include "extractbench/errors.hpp"

namespace extractbench {

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::ShapeMismatch, "score matrix data does not match its shape");
  }
}

ScoreMatrix ScoreMatrix::transposed() const {
  ScoreMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

double MatchSet::total() const noexcept {
  double s = 0.0;
  for (const auto& p : pairs) s += p.score;
  return s;
}

namespace {

// Minimum-cost perfect assignment on a square cost matrix (potentials
// formulation). Returns row -> column.
std::vector<std::size_t> hungarian_min_cost(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

double weight_of(const ScoreMatrix& s, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols, double tau) {
  const std::size_t n = std::max(rows.size(), cols.size());
  if (rows.empty() || cols.empty()) return 0.0;
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const double x = s(rows[a], cols[b]);
      if (x > tau) cost[a * n + b] = -x;
    }
  }
  const auto assignment = hungarian_min_cost(cost, n);
  double total = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const std::size_t b = assignment[a];
    if (b < cols.size()) {
      const double x = s(rows[a], cols[b]);
      if (x > tau) total += x;
    }
  }
  return total;
}

}  // namespace

double max_matching_weight(const ScoreMatrix& scores, double tau) {
  std::vector<std::size_t> rows(scores.rows()), cols(scores.cols());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  return weight_of(scores, rows, cols, tau);
}

MatchSet optimal_matching(const ScoreMatrix& scores, double tau) {
  MatchSet result;
  const double best = max_matching_weight(scores, tau);
  if (best <= 0.0) return result;

  std::vector<std::size_t> free_cols(scores.cols());
  std::iota(free_cols.begin(), free_cols.end(), 0);
  double fixed = 0.0;
  // Rows in order: take the smallest column that still admits an optimal
  // completion, otherwise leave the row unmatched.
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    std::vector<std::size_t> later_rows;
    for (std::size_t r = i + 1; r < scores.rows(); ++r) later_rows.push_back(r);
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      const std::size_t j = free_cols[k];
      const double x = scores(i, j);
      if (!(x > tau)) continue;
      std::vector<std::size_t> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(k));
      const double rest = weight_of(scores, later_rows, rest_cols, tau);
      if (fixed + x + rest >= best - kMatchTieTolerance) {
        result.pairs.push_back({i, j, x});
        fixed += x;
        free_cols = std::move(rest_cols);
        break;
      }
    }
  }
  return result;
}

}  // namespace extractbench

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace extractbench {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& data() const noexcept { return data_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);

/// Frozen base W0 (d x k) with the low-rank pair down = B (d x r) and
/// up = A (r x k).
struct LoraFactors {
  Matrix base;
  Matrix down;
  Matrix up;
  double alpha = 32.0;
  std::size_t rank = 16;
};

/// W0 + (alpha / rank) * B * A. Throws ShapeMismatch.
Matrix lora_apply(const LoraFactors& f);

/// Linear warmup to eta_max over t_warmup steps, then constant.
double warmup_lr(double step, double warmup_steps, double eta_max);

inline constexpr std::int64_t kIgnoreLabel = -100;

/// Positions before assistant_start become `ignore`; the rest copy ids.
std::vector<std::int64_t> mask_labels(std::span<const std::int64_t> token_ids, std::size_t assistant_start,
                                      std::int64_t ignore = kIgnoreLabel);

/// m_model + m_gradients / sqrt(n) + m_activations * layers / n.
double checkpoint_memory_estimate(double m_model, double m_gradients, double m_activations, double layers,
                                  double checkpoints);

struct Trajectory {
  std::vector<double> rewards;
  /// One value per state plus the terminal bootstrap value.
  std::vector<double> values;
  double gamma = 1.0;
  double lambda = 0.95;
};

/// Backward recursion A_t = delta_t + gamma * lambda * A_{t+1}, with
/// delta_t = r_t + gamma * V_{t+1} - V_t.
std::vector<double> gae_advantages(const Trajectory& traj);

/// mean_t min(r_t * A_t, clip(r_t, 1-eps, 1+eps) * A_t). This is the
/// objective to maximize; negate it for a descent loss.
double grpo_clip_objective(std::span<const double> ratios, std::span<const double> advantages,
                           double epsilon = 0.2);

struct KlControllerState {
  double beta = 0.05;
  double lower_bound = 1.5;
  double upper_bound = 3.5;
  double up_factor = 1.5;
  double down_factor = 0.5;
};

/// beta * up_factor below the band, beta * down_factor above it.
KlControllerState adapt_kl(const KlControllerState& state, double observed_kl);

/// (r - mean) / max(population std, 1e-8). Throws DegenerateBatch for
/// fewer than two rewards.
std::vector<double> batch_scale_rewards(std::span<const double> rewards);

struct KlSimulation {
  std::vector<double> betas;
  std::vector<double> divergences;
  std::optional<std::size_t> entered_band_at;
};

/// Runs the controller against a toy plant whose divergence scales as
/// beta^elasticity: after each update D <- D * (beta_new / beta_old)^elasticity.
KlSimulation simulate_kl(const KlControllerState& start, double initial_kl, std::size_t steps,
                         double elasticity = 1.0);

}  // namespace extractbench

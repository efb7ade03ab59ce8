#include "extractbench/training_math.hpp"

#include <algorithm>
#include <cmath>

#include "extractbench/errors.hpp"

namespace extractbench {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw Error(ErrorCode::ShapeMismatch, "matrix data does not match its shape");
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "cannot multiply " + std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                              "x" + std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix lora_apply(const LoraFactors& f) {
  if (f.rank < 1) throw Error(ErrorCode::ShapeMismatch, "LoRA rank must be at least 1");
  if (f.down.cols() != f.rank || f.up.rows() != f.rank || f.down.rows() != f.base.rows() ||
      f.up.cols() != f.base.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "LoRA factor shapes do not conform to the base matrix");
  }
  const double scale = f.alpha / static_cast<double>(f.rank);
  const Matrix delta = matmul(f.down, f.up);
  Matrix out = f.base;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += scale * delta(i, j);
  }
  return out;
}

double warmup_lr(double step, double warmup_steps, double eta_max) {
  if (step < 0.0 || !(warmup_steps > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "warmup needs step >= 0 and warmup_steps > 0");
  }
  if (step < warmup_steps) return step / warmup_steps * eta_max;
  return eta_max;
}

std::vector<std::int64_t> mask_labels(std::span<const std::int64_t> token_ids, std::size_t assistant_start,
                                      std::int64_t ignore) {
  if (assistant_start > token_ids.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "assistant_start " + std::to_string(assistant_start) +
                                                " beyond sequence length " + std::to_string(token_ids.size()));
  }
  std::vector<std::int64_t> labels(token_ids.begin(), token_ids.end());
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(assistant_start), ignore);
  return labels;
}

double checkpoint_memory_estimate(double m_model, double m_gradients, double m_activations, double layers,
                                  double checkpoints) {
  if (checkpoints < 1.0 || layers < 1.0) {
    throw Error(ErrorCode::InvalidArgument, "need at least one layer and one checkpoint");
  }
  return m_model + m_gradients / std::sqrt(checkpoints) + m_activations * (layers / checkpoints);
}

std::vector<double> gae_advantages(const Trajectory& traj) {
  const std::size_t T = traj.rewards.size();
  if (traj.values.size() != T + 1) {
    throw Error(ErrorCode::LengthMismatch, "trajectory needs one more value than rewards");
  }
  if (traj.gamma < 0.0 || traj.gamma > 1.0 || traj.lambda < 0.0 || traj.lambda > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "gamma and lambda must lie in [0, 1]");
  }
  std::vector<double> adv(T, 0.0);
  double running = 0.0;
  for (std::size_t t = T; t-- > 0;) {
    const double delta = traj.rewards[t] + traj.gamma * traj.values[t + 1] - traj.values[t];
    running = delta + traj.gamma * traj.lambda * running;
    adv[t] = running;
  }
  return adv;
}

double grpo_clip_objective(std::span<const double> ratios, std::span<const double> advantages, double epsilon) {
  if (ratios.size() != advantages.size()) {
    throw Error(ErrorCode::LengthMismatch, "ratios and advantages differ in length");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "clip epsilon must be positive");
  if (ratios.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    const double clipped = std::clamp(ratios[t], 1.0 - epsilon, 1.0 + epsilon);
    sum += std::min(ratios[t] * advantages[t], clipped * advantages[t]);
  }
  return sum / static_cast<double>(ratios.size());
}

KlControllerState adapt_kl(const KlControllerState& state, double observed_kl) {
  if (!(state.beta > 0.0) || !(state.lower_bound < state.upper_bound)) {
    throw Error(ErrorCode::InvalidArgument, "KL controller needs beta > 0 and lower < upper");
  }
  if (observed_kl < 0.0) throw Error(ErrorCode::InvalidArgument, "observed KL must be non-negative");
  KlControllerState next = state;
  if (observed_kl < state.lower_bound) {
    next.beta = state.beta * state.up_factor;
  } else if (observed_kl > state.upper_bound) {
    next.beta = state.beta * state.down_factor;
  }
  return next;
}

std::vector<double> batch_scale_rewards(std::span<const double> rewards) {
  if (rewards.size() < 2) throw Error(ErrorCode::DegenerateBatch, "batch scaling needs at least two rewards");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::max(std::sqrt(var / n), 1e-8);
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / sd);
  return out;
}

KlSimulation simulate_kl(const KlControllerState& start, double initial_kl, std::size_t steps, double elasticity) {
  KlSimulation sim;
  KlControllerState state = start;
  double kl = initial_kl;
  auto in_band = [&](double d) { return d >= state.lower_bound && d <= state.upper_bound; };
  sim.betas.push_back(state.beta);
  sim.divergences.push_back(kl);
  if (in_band(kl)) sim.entered_band_at = 0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const KlControllerState next = adapt_kl(state, kl);
    kl *= std::pow(next.beta / state.beta, elasticity);
    state = next;
    sim.betas.push_back(state.beta);
    sim.divergences.push_back(kl);
    if (!sim.entered_band_at && in_band(kl)) sim.entered_band_at = t;
  }
  return sim;
}

}  // namespace extractbench

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adamcheck/objectives.hpp"
#include "adamcheck/oracles.hpp"

namespace adamcheck {

// Constant-rate hyperparameters. nu0 must be strictly positive
// coordinate-wise; a scalar nu0 is broadcast before construction.
struct hyper_params {
  double eta = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::int64_t horizon = 0;
  std::vector<double> nu0;
  std::vector<double> m0;
};

/// Throws std::invalid_argument on violated invariants
/// (eta > 0, 0 <= beta1 < 1, 0 < beta2 < 1, horizon >= 1, nu0 > 0).
void validate(const hyper_params& hp);

/// The horizon-scaled rates eta = a/sqrt(T), beta2 = 1 - b/T,
/// beta1 = c sqrt(beta2); requires a, b > 0, 0 <= c < 1 and T > b.
hyper_params horizon_scaled_params(double a, double b, double c,
                                   std::int64_t horizon,
                                   std::vector<double> nu0,
                                   std::vector<double> m0);

struct step_params {
  double eta = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

// Per-step rate schedule: constant, horizon-scaled
// (eta = a/sqrt(T), beta2 = 1 - b/T, beta1 = c sqrt(beta2)), or explicit
// per-step tables of length T.
class schedule {
 public:
  static schedule constant(hyper_params hp);
  static schedule horizon_scaled(double a, double b, double c,
                                 std::int64_t horizon, std::vector<double> nu0,
                                 std::vector<double> m0);
  static schedule dynamic(std::vector<double> eta, std::vector<double> beta1,
                          std::vector<double> beta2, std::vector<double> nu0,
                          std::vector<double> m0);

  std::int64_t horizon() const noexcept { return horizon_; }
  /// Effective rates at step t (1-based). For t = horizon + 1 the last
  /// step's rates are reused (needed by the final surrogate conditioner).
  step_params at(std::int64_t t) const;
  bool constant_rates() const noexcept { return tables_.eta.empty(); }
  const std::vector<double>& nu0() const noexcept { return nu0_; }
  const std::vector<double>& m0() const noexcept { return m0_; }

 private:
  schedule() = default;
  step_params fixed_{};
  struct {
    std::vector<double> eta, beta1, beta2;
  } tables_;
  std::int64_t horizon_ = 0;
  std::vector<double> nu0_;
  std::vector<double> m0_;
};

// Optimizer iterate state. For Adam `nu` is the EMA conditioner; for AdaGrad
// it is the running accumulator.
struct opt_state {
  std::int64_t t = 0;
  std::vector<double> w;
  std::vector<double> m;
  std::vector<double> nu;
};

/// nu' = b2 nu + (1-b2) g.^2; m' = b1 m + (1-b1) g; w' = w - eta m'./sqrt(nu').
/// Passing per-step rates makes this the dynamical-hyperparameter variant.
void adam_step(opt_state& state, std::span<const double> g,
               const step_params& rates);

/// Accumulator nu' = nu + g.^2; w' = w - eta g ./ sqrt(nu'). A coordinate
/// with nu' = 0 (accumulator and gradient both zero) takes a zero step.
void adagrad_step(opt_state& state, std::span<const double> g, double eta);

void sgd_step(opt_state& state, std::span<const double> g, double eta);

/// Surrogate conditioner: b2 * prev_nu + (1-b2) sigma0^2, coordinate-wise.
std::vector<double> surrogate_nu(std::span<const double> prev_nu, double beta2,
                                 double sigma0);

/// Proxy point (w_t - k w_prev) / (1 - k) with k = beta1 / sqrt(beta2).
/// Requires k < 1; the first iterate uses the convention u_1 = w_1.
std::vector<double> proxy_point(std::span<const double> w_t,
                                std::span<const double> w_prev, double beta1,
                                double beta2);

/// Auxiliary quadratic form -eta * sum_i G_i^2 / sqrt(nu_tilde_next_i);
/// always <= 0.
double auxiliary_xi(std::span<const double> true_grad,
                    std::span<const double> nu_tilde_next, double eta);

struct trajectory_step {
  std::int64_t t = 0;           // 1-based
  std::vector<double> w;        // iterate before the step
  std::vector<double> g;        // stochastic gradient
  std::vector<double> true_grad;
  std::vector<double> nu;       // conditioner after the step
  std::vector<double> nu_tilde; // surrogate conditioner at this step
  std::vector<double> proxy;    // proxy point u_t (NaN if beta1 >= sqrt(beta2))
  std::vector<double> update_abs;  // |w_next - w| per coordinate
  double loss = 0.0;
  double grad_l2 = 0.0;
  double grad_l1 = 0.0;
  double xi = 0.0;
  double update_max = 0.0;
};

struct divergence_info {
  std::int64_t step = 0;
  std::string what;
};

// Full per-step record of a run plus the sampled output iterate. Records the
// running sums and the output draw separately; they are different quantities
// and are never conflated.
struct trajectory {
  std::uint64_t trajectory_id = 0;
  std::vector<trajectory_step> steps;
  std::vector<double> final_w;         // w_{T+1}
  std::vector<double> nu_tilde_final;  // surrogate at index T+1
  std::int64_t output_index = 0;       // r, uniform on {1, ..., T}
  std::vector<double> output_w;        // w_r
  double output_grad_l2 = 0.0;
  std::optional<divergence_info> divergence;

  double grad_l1_sum() const;
  double grad_l2_sum() const;
  double min_grad_l2() const;
  double final_loss() const;
  /// sum over t = 1..T+1 of sum_i sqrt(nu_tilde_{t,i}).
  double conditioner_sqrt_sum() const;
};

/// Runs Adam for schedule.horizon() steps from w1, recording every step.
/// A non-finite value aborts the run with a divergence record instead of
/// throwing. The output index r is drawn from the run-level stream
/// (base_seed, trajectory_id, step 0) before the loop starts.
trajectory adam_run(const objective& obj, const oracle_spec& oracle,
                    const schedule& sched, std::vector<double> w1,
                    std::uint64_t trajectory_id);

/// AdaGrad run with explicit initial accumulator (zero allowed).
trajectory adagrad_run(const objective& obj, const oracle_spec& oracle,
                       double eta, std::vector<double> accumulator0,
                       std::int64_t horizon, std::vector<double> w1,
                       std::uint64_t trajectory_id);

trajectory sgd_run(const objective& obj, const oracle_spec& oracle, double eta,
                   std::int64_t horizon, std::vector<double> w1,
                   std::uint64_t trajectory_id);

}  // namespace adamcheck

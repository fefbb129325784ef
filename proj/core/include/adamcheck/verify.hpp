#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adamcheck/bounds.hpp"
#include "adamcheck/optimizers.hpp"

namespace adamcheck {

// Outcome of one property check. `margin` is the worst-case signed slack
// (bound minus quantity); a failing check carries a witness that replays the
// worst case bit-exactly.
struct check_report {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  nlohmann::json witness;
  std::int64_t samples = 0;

  nlohmann::json to_json() const;
};

// Inequality slack for exact-in-real-arithmetic lemmas: relative 1e-9 plus
// absolute 1e-12, applied to the bound side. It only absorbs floating-point
// rounding.
inline constexpr double kCheckRelTol = 1e-9;
inline constexpr double kCheckAbsTol = 1e-12;

/// With b_n = beta2 b_{n-1} + (1-beta2) a_n^2 and b_0 > 0, verifies
/// sum_n a_n^2 / b_n <= (ln(b_T / b_0) - T ln beta2) / (1 - beta2).
check_report check_ratio_sum(double beta2, double b0,
                             std::span<const double> a_seq);

/// With additionally c_n = beta1 c_{n-1} + (1-beta1) a_n and c_0 = 0,
/// verifies sum_n c_n^2 / b_n <= (1-beta1)^2 / ((1 - beta1/sqrt(beta2))^2
/// (1-beta2)) * (ln(b_T / b_0) - T ln beta2). Requires beta1^2 < beta2;
/// beta1 = 0 reduces to check_ratio_sum.
check_report check_momentum_ratio_sum(double beta1, double beta2, double b0,
                                      std::span<const double> a_seq);

// Randomized-input generation for the two sequence lemmas. Cases are keyed
// on (base_seed, index) so a sweep's worst case replays exactly.
struct ratio_sum_case {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double b0 = 0.0;
  std::vector<double> seq;
  std::string family;
};
ratio_sum_case make_ratio_sum_case(std::uint64_t base_seed, std::int64_t index,
                                   bool with_momentum);

check_report ratio_sum_sweep(std::int64_t cases, std::uint64_t base_seed);
check_report momentum_ratio_sum_sweep(std::int64_t cases,
                                      std::uint64_t base_seed);

/// Per-coordinate update cap |w_{t+1,i} - w_{t,i}| <= eta (1-beta1) /
/// (sqrt(1-beta2) sqrt(1 - beta1^2/beta2)) at every recorded step
/// (absolute slack 1e-12). Requires beta1^2 < beta2.
check_report check_update_bound(const trajectory& traj, double eta,
                                double beta1, double beta2);

/// Surrogate conditioner recursion: nu_tilde_{t+1} >= beta2 nu_tilde_t and
/// nu_tilde_t >= (1-beta2) sigma0^2, coordinate-wise at every step.
check_report check_surrogate_recursion(const trajectory& traj, double beta2,
                                       double sigma0);

/// Monte-Carlo mean of sum_{t<=T+1} sum_i sqrt(nu_tilde_{t,i}) against the
/// deterministic conditioner-root-sum right-hand side. Requires >= 32
/// trajectories from identical configs with distinct seeds.
check_report check_conditioner_root_sum(std::span<const trajectory> ensemble,
                                        const bound_inputs& in);

/// Monte-Carlo mean of sum_t ||grad f(w_t)||_1 against the gradient-norm-sum
/// bound, within 3 standard errors. The l1 sum is the primary check; the l2
/// sum is reported alongside.
check_report check_grad_sum_bound(std::span<const trajectory> ensemble,
                                  const bound_inputs& in);

/// Monte-Carlo mean of ||grad f(w_r)|| against a precomputed output-iterate
/// bound, within 3 standard errors.
check_report check_output_grad_bound(std::span<const trajectory> ensemble,
                                     double bound_value);

inline constexpr double kEquivalenceTol = 1e-9;

/// Feeds one shared gradient stream to dynamical-rate Adam
/// (eta_t = eta/sqrt(t), beta1_t = 0, beta2_t = 1 - 1/t) and to AdaGrad with
/// a zero accumulator; passes when every iterate pair agrees to 1e-9.
/// The first gradient must be non-zero coordinate-wise.
check_report check_adagrad_equivalence(
    std::span<const double> w1, double eta,
    const std::vector<std::vector<double>>& gradient_stream);

}  // namespace adamcheck

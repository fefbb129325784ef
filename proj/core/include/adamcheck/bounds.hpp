#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adamcheck/optimizers.hpp"

namespace adamcheck {

/// Thrown when a bound evaluation produces a non-finite or non-positive
/// intermediate; carries the offending term's name.
class bound_evaluation_error : public std::runtime_error {
 public:
  bound_evaluation_error(std::string term, const std::string& detail)
      : std::runtime_error("bound evaluation failed at term '" + term +
                           "': " + detail),
        term_(std::move(term)) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

struct admissibility {
  bool admissible = false;
  double threshold = 0.0;  // largest admissible beta1
  std::string reason;
};

/// Hyperparameter admissibility: beta1 <= sqrt(beta2) - 8 sigma1^2
/// (1 - beta2) / beta2^2. With sigma1 = 0 this is exactly
/// beta1 <= sqrt(beta2).
admissibility check_hyperparams(double beta1, double beta2, double sigma1);

// Everything the closed-form bounds consume. nu_tilde_1 is always computed
// from (beta2, nu0, sigma0), never supplied. start_value and start_grad are
// taken at the fixed start point, so the first-iterate expectation terms are
// deterministic and must not be re-averaged by Monte-Carlo harnesses.
struct bound_inputs {
  double smoothness = 0.0;  // L
  double eta = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  std::int64_t horizon = 0;
  std::vector<double> nu0;
  double start_value = 0.0;         // f(u_1) = f(w_1)
  std::vector<double> start_grad;   // grad f(w_1)

  std::size_t dimension() const { return nu0.size(); }
  std::vector<double> nu_tilde_1() const;
  /// sum_i start_grad_i^2 / sqrt(nu_tilde_1_i).
  double start_grad_ratio() const;
};

// Constants of the gradient-norm-sum bound for constant rates, with the
// per-term breakdown kept so a failed check localizes to a term.
struct grad_sum_constants {
  double c1 = 0.0;
  double c1_smooth = 0.0;    // 32 L eta (1+k)^3 / ((1-b2) (1-k)^3)
  double c1_momentum = 0.0;  // 16 b1^2 sigma0 (1-b1) / (b2 sqrt(1-b2) (1-k)^3)
  double c1_affine = 0.0;    // 64 (1+s1^2) s1^2 L^2 eta^2 d / (b2^2 (1-k)^4 s0 (1-b2)^1.5)
  double c2 = 0.0;
  double c2_start = 0.0;     // (1-k)/(1-b1) * 8/eta * f(u_1)
  double c2_first_grad = 0.0;
  double c2_log = 0.0;
};

/// Rejects inadmissible (beta1, beta2, sigma1) with the admissibility reason.
grad_sum_constants grad_sum_bound_constants(const bound_inputs& in);

struct bound_report {
  double value = 0.0;
  nlohmann::json terms;  // one field per named term
};

/// Deterministic right-hand side of the conditioner-root-sum inequality:
/// 2 (T+1) sum_i sqrt(nu0_i + sigma0^2) + 24 X ln X + 12 sigma1^2 C2 /
/// sqrt(beta2), where X = d sigma1^2 C1 / sqrt(beta2) (X ln X -> 0 at X = 0).
double conditioner_root_sum_rhs(const grad_sum_constants& constants,
                                const bound_inputs& in);

/// Bound on E sum_t ||grad f(w_t)||: sqrt(C2 + 2 C1 d ln S) * sqrt(S) with
/// S = conditioner_root_sum_rhs.
bound_report grad_sum_bound(const grad_sum_constants& constants,
                            const bound_inputs& in);

// Constants of the output-iterate bound under the horizon-scaled schedule.
struct output_bound_constants {
  double a = 0.0, b = 0.0, c = 0.0;
  double d1 = 0.0;
  double d1_smooth = 0.0;  // 32 L a / b * (1+c)^3 / (1-c)^3
  double d1_noise = 0.0;   // 32 sigma0 / (sqrt(b) (1-c)^3)
  double d1_affine = 0.0;  // (1+s1^2) s1^2 L^2 d a^2 / ((1-c)^4 s0 b^1.5)
  double d2 = 0.0;
  double d2_start = 0.0;   // 8 f(u_1) / a
  double d2_log = 0.0;     // d1 (b d - sum_i ln nu0_i)
};

/// Rejects sigma0 = 0 (the affine term divides by sigma0) and invalid
/// (a, b, c).
output_bound_constants output_grad_bound_constants(double a, double b, double c,
                                                   const bound_inputs& in);

struct output_bound_report {
  double value = 0.0;
  /// Large-horizon limit of value * T^(1/4).
  double leading_coefficient = 0.0;
  nlohmann::json terms;
};

/// Bound on E ||grad f(w_r)|| at horizon T under the schedule
/// eta = a/sqrt(T), beta2 = 1 - b/T, beta1 = c sqrt(beta2).
output_bound_report output_grad_bound(const output_bound_constants& constants,
                                      const bound_inputs& in, std::int64_t T);

/// The horizon-scaled hyperparameters themselves; nu0 = 1, m0 = 0.
hyper_params scaled_schedule(double a, double b, double c, std::int64_t horizon,
                             std::size_t dimension);

struct rate_fit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
};

/// Ordinary least squares on (ln T, ln value). Requires at least 3 points,
/// all strictly positive.
rate_fit fit_rate(std::span<const std::pair<double, double>> points);

}  // namespace adamcheck

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adamcheck/objectives.hpp"

namespace adamcheck {

enum class oracle_kind { exact, gaussian_bounded, coordinate_affine };

oracle_kind oracle_kind_from_string(const std::string& name);
std::string to_string(oracle_kind kind);

// Stochastic gradient oracle description. `sigma0` is the additive noise
// floor. For the coordinate_affine kind, `sigma1` scales the
// gradient-proportional noise and must be >= 1: an unbiased estimate has
// E g_i^2 >= G_i^2, so no oracle can stay inside sigma0^2 + sigma1^2 G_i^2
// with sigma1 < 1 once |G_i| is large. `rho` in (0, 1] shrinks the affine
// kind's noise floor so its second moment sits strictly inside the declared
// budget.
struct oracle_spec {
  oracle_kind kind = oracle_kind::exact;
  double sigma0 = 0.0;
  double sigma1 = 1.0;
  double rho = 0.9;
  std::uint64_t base_seed = 0;
};

/// Throws std::invalid_argument if the spec violates its own constraints.
void validate(const oracle_spec& spec);

// Coordinate-wise noise budget (sigma0, sigma1) certified by the spec's kind:
// exact -> (0, 0); gaussian_bounded -> (sigma0, 1); coordinate_affine ->
// (sigma0, sigma1). Feeds the bound evaluations and the surrogate
// conditioner.
struct noise_budget {
  double sigma0 = 0.0;
  double sigma1 = 0.0;
};
noise_budget affine_budget(const oracle_spec& spec);

/// One stochastic gradient draw at w, keyed on (base_seed, trajectory_id,
/// step_index). Identical keys give bit-identical samples.
std::vector<double> sample(const oracle_spec& spec, const objective& obj,
                           std::span<const double> w,
                           std::uint64_t trajectory_id,
                           std::uint32_t step_index);

/// Applies the spec's noise model to an already-computed true gradient.
void sample_from_grad(const oracle_spec& spec,
                      std::span<const double> true_grad,
                      std::uint64_t trajectory_id, std::uint32_t step_index,
                      std::span<double> out);

struct moment_report {
  std::vector<double> mean_error;        // empirical mean of g - grad f
  std::vector<double> mean_error_se;
  std::vector<double> second_moment;     // empirical E g_i^2
  std::vector<double> second_moment_se;
  std::vector<double> second_moment_budget;  // declared per-coordinate bound
  double noise_second_moment = 0.0;      // empirical E ||g - grad f||^2
  double noise_second_moment_se = 0.0;
  double noise_budget_total = 0.0;       // declared full-vector bound
  bool unbiased_ok = false;
  bool bound_ok = false;                 // declared bound within 3 SE
  std::int64_t samples = 0;
};

// Empirical certification of the spec's declared noise bound at a point.
// Requires at least 100 samples; the pass/fail band is 3 standard errors.
moment_report estimate_moments(const oracle_spec& spec, const objective& obj,
                               std::span<const double> w, std::int64_t samples,
                               std::uint64_t trajectory_id = 0);

}  // namespace adamcheck

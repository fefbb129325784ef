#include "adamcheck/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "adamcheck/rng.hpp"
#include "adamcheck/vec.hpp"

namespace adamcheck {

oracle_kind oracle_kind_from_string(const std::string& name) {
  if (name == "exact") return oracle_kind::exact;
  if (name == "gaussian_bounded") return oracle_kind::gaussian_bounded;
  if (name == "coordinate_affine") return oracle_kind::coordinate_affine;
  throw std::invalid_argument("unknown oracle kind: " + name);
}

std::string to_string(oracle_kind kind) {
  switch (kind) {
    case oracle_kind::exact: return "exact";
    case oracle_kind::gaussian_bounded: return "gaussian_bounded";
    case oracle_kind::coordinate_affine: return "coordinate_affine";
  }
  return "unknown";
}

void validate(const oracle_spec& spec) {
  if (!(spec.sigma0 >= 0.0) || !std::isfinite(spec.sigma0)) {
    throw std::invalid_argument("oracle_spec: sigma0 must be non-negative");
  }
  if (spec.kind == oracle_kind::coordinate_affine) {
    if (!(spec.sigma1 >= 1.0) || !std::isfinite(spec.sigma1)) {
      throw std::invalid_argument(
          "oracle_spec: coordinate_affine requires sigma1 >= 1 "
          "(an unbiased oracle has E g_i^2 >= G_i^2)");
    }
    if (!(spec.rho > 0.0) || !(spec.rho <= 1.0)) {
      throw std::invalid_argument("oracle_spec: rho must lie in (0, 1]");
    }
  }
}

noise_budget affine_budget(const oracle_spec& spec) {
  switch (spec.kind) {
    case oracle_kind::exact:
      return {0.0, 0.0};
    case oracle_kind::gaussian_bounded:
      return {spec.sigma0, 1.0};
    case oracle_kind::coordinate_affine:
      return {spec.sigma0, spec.sigma1};
  }
  return {0.0, 0.0};
}

void sample_from_grad(const oracle_spec& spec,
                      std::span<const double> true_grad,
                      std::uint64_t trajectory_id, std::uint32_t step_index,
                      std::span<double> out) {
  const std::size_t d = true_grad.size();
  switch (spec.kind) {
    case oracle_kind::exact: {
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = true_grad[i];
      }
      return;
    }
    case oracle_kind::gaussian_bounded: {
      rng_stream stream(spec.base_seed, trajectory_id, step_index);
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = true_grad[i] + spec.sigma0 * stream.next_gaussian();
      }
      return;
    }
    case oracle_kind::coordinate_affine: {
      // g_i = G_i (1 + sqrt(sigma1^2 - 1) z1_i) + rho sigma0 z2_i, so
      // E g_i^2 = sigma1^2 G_i^2 + rho^2 sigma0^2, inside the declared budget.
      rng_stream stream(spec.base_seed, trajectory_id, step_index);
      const double grad_noise = std::sqrt(spec.sigma1 * spec.sigma1 - 1.0);
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = true_grad[i] * (1.0 + grad_noise * stream.next_gaussian());
      }
      const double floor = spec.rho * spec.sigma0;
      for (std::size_t i = 0; i < d; ++i) {
        out[i] += floor * stream.next_gaussian();
      }
      return;
    }
  }
}

std::vector<double> sample(const oracle_spec& spec, const objective& obj,
                           std::span<const double> w,
                           std::uint64_t trajectory_id,
                           std::uint32_t step_index) {
  validate(spec);
  std::vector<double> grad = obj.gradient(w);
  std::vector<double> out(grad.size());
  sample_from_grad(spec, grad, trajectory_id, step_index, out);
  return out;
}

moment_report estimate_moments(const oracle_spec& spec, const objective& obj,
                               std::span<const double> w,
                               std::int64_t samples,
                               std::uint64_t trajectory_id) {
  validate(spec);
  if (samples < 100) {
    throw std::invalid_argument("estimate_moments: need at least 100 samples");
  }
  const std::size_t d = obj.dimension();
  const std::vector<double> grad = obj.gradient(w);

  std::vector<double> err_sum(d, 0.0), err_sq_sum(d, 0.0);
  std::vector<double> sq_sum(d, 0.0), quad_sum(d, 0.0);
  double full_sum = 0.0, full_sq_sum = 0.0;
  std::vector<double> g(d);

  for (std::int64_t s = 0; s < samples; ++s) {
    sample_from_grad(spec, grad, trajectory_id,
                     static_cast<std::uint32_t>(s + 1), g);
    double full = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double err = g[i] - grad[i];
      err_sum[i] += err;
      err_sq_sum[i] += err * err;
      const double sq = g[i] * g[i];
      sq_sum[i] += sq;
      quad_sum[i] += sq * sq;
      full += err * err;
    }
    full_sum += full;
    full_sq_sum += full * full;
  }

  const double n = static_cast<double>(samples);
  moment_report report;
  report.samples = samples;
  report.mean_error.resize(d);
  report.mean_error_se.resize(d);
  report.second_moment.resize(d);
  report.second_moment_se.resize(d);
  report.second_moment_budget.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    report.mean_error[i] = err_sum[i] / n;
    const double err_var =
        std::max(err_sq_sum[i] / n - report.mean_error[i] * report.mean_error[i], 0.0);
    report.mean_error_se[i] = std::sqrt(err_var / n);
    report.second_moment[i] = sq_sum[i] / n;
    const double sq_var =
        std::max(quad_sum[i] / n - report.second_moment[i] * report.second_moment[i], 0.0);
    report.second_moment_se[i] = std::sqrt(sq_var / n);
  }
  report.noise_second_moment = full_sum / n;
  const double full_var = std::max(
      full_sq_sum / n - report.noise_second_moment * report.noise_second_moment,
      0.0);
  report.noise_second_moment_se = std::sqrt(full_var / n);

  // Declared budgets for the spec's own kind.
  const noise_budget budget = affine_budget(spec);
  for (std::size_t i = 0; i < d; ++i) {
    report.second_moment_budget[i] =
        budget.sigma0 * budget.sigma0 +
        budget.sigma1 * budget.sigma1 * grad[i] * grad[i];
  }
  switch (spec.kind) {
    case oracle_kind::exact:
      report.noise_budget_total = 0.0;
      report.bound_ok = report.noise_second_moment == 0.0;
      break;
    case oracle_kind::gaussian_bounded: {
      // Full-vector bound sigma^2 with sigma = sigma0 sqrt(d).
      report.noise_budget_total =
          spec.sigma0 * spec.sigma0 * static_cast<double>(d);
      report.bound_ok =
          report.noise_second_moment <=
          report.noise_budget_total + 3.0 * report.noise_second_moment_se;
      break;
    }
    case oracle_kind::coordinate_affine: {
      report.noise_budget_total = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < d; ++i) {
        report.noise_budget_total += report.second_moment_budget[i];
        ok = ok && report.second_moment[i] <=
                       report.second_moment_budget[i] +
                           3.0 * report.second_moment_se[i];
      }
      report.bound_ok = ok;
      break;
    }
  }

  const double noise_std = std::sqrt(report.noise_second_moment);
  report.unbiased_ok =
      l2_norm(report.mean_error) <= 5.0 * noise_std / std::sqrt(n);
  return report;
}

}  // namespace adamcheck

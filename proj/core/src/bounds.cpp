#include "adamcheck/bounds.hpp"

#include <cmath>
#include <numbers>

namespace adamcheck {

namespace {

// x ln x extended by continuity to 0 at x = 0.
double xlnx(double x) {
  return x > 0.0 ? x * std::log(x) : 0.0;
}

void require_finite(double v, const char* term) {
  if (!std::isfinite(v)) {
    throw bound_evaluation_error(term, "non-finite value");
  }
}

void require_positive(double v, const char* term) {
  require_finite(v, term);
  if (!(v > 0.0)) {
    throw bound_evaluation_error(term, "non-positive value");
  }
}

}  // namespace

admissibility check_hyperparams(double beta1, double beta2, double sigma1) {
  if (!(beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("check_hyperparams: beta2 must lie in (0, 1)");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0)) {
    throw std::invalid_argument("check_hyperparams: beta1 must lie in [0, 1)");
  }
  if (!(sigma1 >= 0.0)) {
    throw std::invalid_argument("check_hyperparams: sigma1 must be >= 0");
  }
  admissibility out;
  out.threshold = std::sqrt(beta2) -
                  8.0 * sigma1 * sigma1 * (1.0 - beta2) / (beta2 * beta2);
  out.admissible = beta1 <= out.threshold;
  if (out.admissible) {
    out.reason = "admissible";
  } else if (out.threshold < 0.0) {
    out.reason = "no beta1 >= 0 is admissible at this (beta2, sigma1)";
  } else {
    out.reason = "beta1 exceeds the admissible threshold";
  }
  return out;
}

std::vector<double> bound_inputs::nu_tilde_1() const {
  std::vector<double> out(nu0.size());
  const double floor = (1.0 - beta2) * sigma0 * sigma0;
  for (std::size_t i = 0; i < nu0.size(); ++i) {
    out[i] = beta2 * nu0[i] + floor;
  }
  return out;
}

double bound_inputs::start_grad_ratio() const {
  const std::vector<double> nu1 = nu_tilde_1();
  double sum = 0.0;
  for (std::size_t i = 0; i < nu1.size(); ++i) {
    sum += start_grad[i] * start_grad[i] / std::sqrt(nu1[i]);
  }
  return sum;
}

grad_sum_constants grad_sum_bound_constants(const bound_inputs& in) {
  const admissibility adm = check_hyperparams(in.beta1, in.beta2, in.sigma1);
  if (!adm.admissible) {
    throw std::invalid_argument("grad_sum_bound_constants: " + adm.reason);
  }
  const double d = static_cast<double>(in.dimension());
  const double ratio = in.beta1 / std::sqrt(in.beta2);
  const double one_minus_ratio = 1.0 - ratio;
  const double om_b2 = 1.0 - in.beta2;

  grad_sum_constants out;
  out.c1_smooth = 32.0 * in.smoothness * in.eta * std::pow(1.0 + ratio, 3) /
                  (om_b2 * std::pow(one_minus_ratio, 3));
  out.c1_momentum =
      in.beta1 == 0.0
          ? 0.0
          : 16.0 * in.beta1 * in.beta1 * in.sigma0 * (1.0 - in.beta1) /
                (in.beta2 * std::sqrt(om_b2) * std::pow(one_minus_ratio, 3));
  out.c1_affine =
      in.sigma1 == 0.0
          ? 0.0
          : 64.0 * (1.0 + in.sigma1 * in.sigma1) * in.sigma1 * in.sigma1 *
                in.smoothness * in.smoothness * in.eta * in.eta * d /
                (in.beta2 * in.beta2 * std::pow(one_minus_ratio, 4) *
                 in.sigma0 * std::pow(om_b2, 1.5));
  out.c1 = out.c1_smooth + out.c1_momentum + out.c1_affine;
  require_finite(out.c1, "c1");

  out.c2_start = one_minus_ratio / (1.0 - in.beta1) * 8.0 / in.eta *
                 in.start_value;
  out.c2_first_grad = 32.0 /
                      (in.beta2 * one_minus_ratio * one_minus_ratio) *
                      in.start_grad_ratio();
  double log_sum = 0.0;
  for (double nu : in.nu0) {
    log_sum += std::log(1.0 / std::sqrt(in.beta2 * nu)) -
               static_cast<double>(in.horizon) * std::log(in.beta2);
  }
  out.c2_log = 2.0 * out.c1 * log_sum;
  out.c2 = out.c2_start + out.c2_first_grad + out.c2_log;
  require_finite(out.c2, "c2");
  return out;
}

double conditioner_root_sum_rhs(const grad_sum_constants& constants,
                                const bound_inputs& in) {
  const double d = static_cast<double>(in.dimension());
  const double sqrt_b2 = std::sqrt(in.beta2);
  double root_sum = 0.0;
  for (double nu : in.nu0) {
    root_sum += std::sqrt(nu + in.sigma0 * in.sigma0);
  }
  const double base = 2.0 * static_cast<double>(in.horizon + 1) * root_sum;
  const double x = d * in.sigma1 * in.sigma1 * constants.c1 / sqrt_b2;
  const double log_term = 24.0 * xlnx(x);
  const double tail = 12.0 * in.sigma1 * in.sigma1 * constants.c2 / sqrt_b2;
  const double total = base + log_term + tail;
  require_positive(total, "conditioner_root_sum_rhs");
  return total;
}

bound_report grad_sum_bound(const grad_sum_constants& constants,
                            const bound_inputs& in) {
  const double d = static_cast<double>(in.dimension());
  const double root_sum = conditioner_root_sum_rhs(constants, in);
  const double log_factor_sq =
      constants.c2 + 2.0 * constants.c1 * d * std::log(root_sum);
  require_positive(log_factor_sq, "log_factor_sq");
  bound_report report;
  report.value = std::sqrt(log_factor_sq) * std::sqrt(root_sum);
  require_finite(report.value, "grad_sum_bound");
  report.terms = {
      {"c1", constants.c1},
      {"c1_smooth", constants.c1_smooth},
      {"c1_momentum", constants.c1_momentum},
      {"c1_affine", constants.c1_affine},
      {"c2", constants.c2},
      {"c2_start", constants.c2_start},
      {"c2_first_grad", constants.c2_first_grad},
      {"c2_log", constants.c2_log},
      {"conditioner_root_sum", root_sum},
      {"log_factor_sq", log_factor_sq},
      {"value", report.value},
  };
  return report;
}

output_bound_constants output_grad_bound_constants(double a, double b, double c,
                                                   const bound_inputs& in) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("output_grad_bound_constants: a, b must be positive");
  }
  if (!(c >= 0.0 && c < 1.0)) {
    throw std::invalid_argument("output_grad_bound_constants: c must lie in [0, 1)");
  }
  if (!(in.sigma0 > 0.0)) {
    throw std::invalid_argument(
        "output_grad_bound_constants: sigma0 must be positive "
        "(the affine term divides by sigma0)");
  }
  const double d = static_cast<double>(in.dimension());
  const double one_minus_c = 1.0 - c;

  output_bound_constants out;
  out.a = a;
  out.b = b;
  out.c = c;
  out.d1_smooth = 32.0 * in.smoothness * a / b * std::pow(1.0 + c, 3) /
                  std::pow(one_minus_c, 3);
  out.d1_noise = 32.0 * in.sigma0 / (std::sqrt(b) * std::pow(one_minus_c, 3));
  out.d1_affine =
      in.sigma1 == 0.0
          ? 0.0
          : (1.0 + in.sigma1 * in.sigma1) * in.sigma1 * in.sigma1 *
                in.smoothness * in.smoothness * d * a * a /
                (std::pow(one_minus_c, 4) * in.sigma0 * std::pow(b, 1.5));
  out.d1 = out.d1_smooth + out.d1_noise + out.d1_affine;
  require_finite(out.d1, "d1");

  out.d2_start = 8.0 / a * in.start_value;
  double log_sum = 0.0;
  for (double nu : in.nu0) {
    log_sum += std::log(nu);
  }
  out.d2_log = out.d1 * (b * d - log_sum);
  out.d2 = out.d2_start + out.d2_log;
  require_finite(out.d2, "d2");
  return out;
}

output_bound_report output_grad_bound(const output_bound_constants& constants,
                                      const bound_inputs& in, std::int64_t T) {
  if (!(static_cast<double>(T) > constants.b)) {
    throw std::invalid_argument("output_grad_bound: horizon must exceed b");
  }
  const double d = static_cast<double>(in.dimension());
  const double t = static_cast<double>(T);
  const double sqrt_t = std::sqrt(t);
  const double beta2 = 1.0 - constants.b / t;
  const double s1_sq = in.sigma1 * in.sigma1;
  const double omc_sq = (1.0 - constants.c) * (1.0 - constants.c);

  // First-iterate ratio with the schedule's own beta2.
  bound_inputs at_t = in;
  at_t.beta2 = beta2;
  const double start_ratio = at_t.start_grad_ratio();

  double root_sum = 0.0;
  for (double nu : in.nu0) {
    root_sum += std::sqrt(nu + 3.0 * constants.b * in.sigma0 * in.sigma0);
  }
  const double first_base = 2.0 * root_sum;
  const double first_d2 = 4.0 * constants.d2 * s1_sq * constants.b / sqrt_t;
  const double first_start =
      256.0 * s1_sq * constants.b * start_ratio / (omc_sq * t);
  const double first_log =
      s1_sq == 0.0
          ? 0.0
          : 16.0 * constants.d1 * s1_sq * constants.b / sqrt_t *
                std::log(std::numbers::e +
                         4.0 * constants.d1 * s1_sq * constants.b / sqrt_t);
  const double first_sq = first_base + first_d2 + first_start + first_log;
  require_positive(first_sq, "output_first_factor");

  const double second_log = 2.0 * constants.d1 * d * std::log(first_sq) / sqrt_t;
  const double second_start = 64.0 * start_ratio / (omc_sq * t);
  const double second_d2 = constants.d2 / sqrt_t;
  const double second_sq = second_log + second_start + second_d2;
  require_positive(second_sq, "output_second_factor");

  output_bound_report report;
  report.value = std::sqrt(first_sq) * std::sqrt(second_sq);
  require_finite(report.value, "output_grad_bound");
  // As T grows the first factor tends to first_base and the second to
  // (2 D1 d ln(first_base) + D2) / sqrt(T), so value * T^(1/4) converges.
  const double limit_second =
      2.0 * constants.d1 * d * std::log(first_base) + constants.d2;
  report.leading_coefficient = limit_second > 0.0
                                   ? std::sqrt(first_base * limit_second)
                                   : 0.0;
  report.terms = {
      {"d1", constants.d1},
      {"d1_smooth", constants.d1_smooth},
      {"d1_noise", constants.d1_noise},
      {"d1_affine", constants.d1_affine},
      {"d2", constants.d2},
      {"d2_start", constants.d2_start},
      {"d2_log", constants.d2_log},
      {"first_base", first_base},
      {"first_d2", first_d2},
      {"first_start", first_start},
      {"first_log", first_log},
      {"first_factor_sq", first_sq},
      {"second_log", second_log},
      {"second_start", second_start},
      {"second_d2", second_d2},
      {"second_factor_sq", second_sq},
      {"value", report.value},
      {"leading_coefficient", report.leading_coefficient},
  };
  return report;
}

hyper_params scaled_schedule(double a, double b, double c, std::int64_t horizon,
                             std::size_t dimension) {
  return horizon_scaled_params(a, b, c, horizon,
                               std::vector<double>(dimension, 1.0),
                               std::vector<double>(dimension, 0.0));
}

rate_fit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_rate: need at least 3 points");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [t, value] : points) {
    if (!(t > 0.0) || !(value > 0.0)) {
      throw std::invalid_argument("fit_rate: points must be strictly positive");
    }
    const double x = std::log(t);
    const double y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) {
    throw std::invalid_argument("fit_rate: degenerate abscissae");
  }
  rate_fit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (const auto& [t, value] : points) {
    const double r = std::log(value) - (fit.intercept + fit.slope * std::log(t));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

}  // namespace adamcheck

#include "adamcheck/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "adamcheck/rng.hpp"
#include "adamcheck/vec.hpp"

namespace adamcheck {

namespace {

struct mean_se {
  double mean = 0.0;
  double se = 0.0;
};

mean_se summarize(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / n;
  double var = 0.0;
  for (double v : values) {
    var += (v - mean) * (v - mean);
  }
  var = values.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

void require_clean_ensemble(std::span<const trajectory> ensemble,
                            const char* who) {
  if (ensemble.size() < 32) {
    throw std::invalid_argument(std::string(who) +
                                ": need at least 32 trajectories");
  }
  for (const auto& traj : ensemble) {
    if (traj.divergence) {
      throw std::invalid_argument(std::string(who) +
                                  ": ensemble contains a diverged trajectory");
    }
  }
}

}  // namespace

nlohmann::json check_report::to_json() const {
  return {
      {"name", name},
      {"pass", pass},
      {"margin", margin},
      {"witness", witness},
      {"samples", samples},
  };
}

check_report check_ratio_sum(double beta2, double b0,
                             std::span<const double> a_seq) {
  if (!(beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("check_ratio_sum: beta2 must lie in (0, 1)");
  }
  if (!(b0 > 0.0)) {
    throw std::invalid_argument("check_ratio_sum: b0 must be positive");
  }
  double b = b0;
  double lhs = 0.0;
  for (double a : a_seq) {
    b = beta2 * b + (1.0 - beta2) * a * a;
    lhs += a * a / b;
  }
  const double T = static_cast<double>(a_seq.size());
  const double rhs =
      (std::log(b / b0) - T * std::log(beta2)) / (1.0 - beta2);

  check_report report;
  report.name = "ratio_sum";
  report.samples = static_cast<std::int64_t>(a_seq.size());
  report.margin = rhs - lhs;
  report.pass = lhs <= rhs * (1.0 + kCheckRelTol) + kCheckAbsTol;
  report.witness = {{"beta2", beta2}, {"b0", b0}, {"length", a_seq.size()},
                    {"lhs", lhs}, {"rhs", rhs}};
  return report;
}

check_report check_momentum_ratio_sum(double beta1, double beta2, double b0,
                                      std::span<const double> a_seq) {
  if (!(beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument(
        "check_momentum_ratio_sum: beta2 must lie in (0, 1)");
  }
  if (!(beta1 >= 0.0) || !(beta1 * beta1 < beta2)) {
    throw std::invalid_argument(
        "check_momentum_ratio_sum: requires 0 <= beta1^2 < beta2");
  }
  if (!(b0 > 0.0)) {
    throw std::invalid_argument("check_momentum_ratio_sum: b0 must be positive");
  }
  double b = b0;
  double c = 0.0;
  double lhs = 0.0;
  for (double a : a_seq) {
    b = beta2 * b + (1.0 - beta2) * a * a;
    c = beta1 * c + (1.0 - beta1) * a;
    lhs += c * c / b;
  }
  const double T = static_cast<double>(a_seq.size());
  const double ratio = beta1 / std::sqrt(beta2);
  const double coeff = (1.0 - beta1) * (1.0 - beta1) /
                       ((1.0 - ratio) * (1.0 - ratio) * (1.0 - beta2));
  const double rhs = coeff * (std::log(b / b0) - T * std::log(beta2));

  check_report report;
  report.name = "momentum_ratio_sum";
  report.samples = static_cast<std::int64_t>(a_seq.size());
  report.margin = rhs - lhs;
  report.pass = lhs <= rhs * (1.0 + kCheckRelTol) + kCheckAbsTol;
  report.witness = {{"beta1", beta1}, {"beta2", beta2}, {"b0", b0},
                    {"length", a_seq.size()}, {"lhs", lhs}, {"rhs", rhs}};
  return report;
}

ratio_sum_case make_ratio_sum_case(std::uint64_t base_seed, std::int64_t index,
                                   bool with_momentum) {
  rng_stream stream(base_seed, static_cast<std::uint64_t>(index), 0);
  ratio_sum_case out;

  const std::uint64_t pick = stream.next_below(6);
  if (pick < 3) {
    const double fixed[3] = {0.5, 0.9, 0.999};
    out.beta2 = fixed[pick];
  } else {
    out.beta2 = 1.0 - std::pow(10.0, -0.05 - 3.5 * stream.next_unit());
  }
  out.beta1 = with_momentum
                  ? 0.999 * std::sqrt(out.beta2) * stream.next_unit()
                  : 0.0;
  out.b0 = std::exp(2.0 * stream.next_gaussian());

  const std::size_t length = 1 + stream.next_below(200);
  out.seq.resize(length);
  switch (stream.next_below(3)) {
    case 0:
      out.family = "normal";
      for (double& a : out.seq) {
        a = stream.next_gaussian();
      }
      break;
    case 1:
      out.family = "heavy_tailed";
      for (double& a : out.seq) {
        a = std::tan(std::numbers::pi * (stream.next_unit() - 0.5));
      }
      break;
    default:
      out.family = "sparse";
      for (double& a : out.seq) {
        a = stream.next_unit() < 0.8 ? 0.0 : 3.0 * stream.next_gaussian();
      }
      break;
  }
  return out;
}

namespace {

check_report ratio_sum_sweep_impl(std::int64_t cases, std::uint64_t base_seed,
                                  bool with_momentum) {
  check_report worst;
  worst.name = with_momentum ? "momentum_ratio_sum_sweep" : "ratio_sum_sweep";
  worst.pass = true;
  worst.margin = std::numeric_limits<double>::infinity();
  worst.samples = cases;
  std::int64_t worst_index = -1;
  double worst_relative = std::numeric_limits<double>::infinity();
  ratio_sum_case worst_case;

  for (std::int64_t i = 0; i < cases; ++i) {
    const ratio_sum_case c = make_ratio_sum_case(base_seed, i, with_momentum);
    const check_report r =
        with_momentum
            ? check_momentum_ratio_sum(c.beta1, c.beta2, c.b0, c.seq)
            : check_ratio_sum(c.beta2, c.b0, c.seq);
    worst.pass = worst.pass && r.pass;
    // Rank cases by margin relative to the bound so huge-RHS cases do not
    // mask near-violations.
    const double rhs = r.witness["rhs"].get<double>();
    const double relative = r.margin / std::max(std::abs(rhs), 1.0);
    if (relative < worst_relative) {
      worst_relative = relative;
      worst.margin = r.margin;
      worst_index = i;
      worst_case = c;
    }
  }
  worst.witness = {{"base_seed", base_seed},
                   {"index", worst_index},
                   {"beta1", worst_case.beta1},
                   {"beta2", worst_case.beta2},
                   {"b0", worst_case.b0},
                   {"length", worst_case.seq.size()},
                   {"family", worst_case.family}};
  return worst;
}

}  // namespace

check_report ratio_sum_sweep(std::int64_t cases, std::uint64_t base_seed) {
  return ratio_sum_sweep_impl(cases, base_seed, false);
}

check_report momentum_ratio_sum_sweep(std::int64_t cases,
                                      std::uint64_t base_seed) {
  return ratio_sum_sweep_impl(cases, base_seed, true);
}

check_report check_update_bound(const trajectory& traj, double eta,
                                double beta1, double beta2) {
  if (!(beta1 * beta1 < beta2)) {
    throw std::invalid_argument("check_update_bound: requires beta1^2 < beta2");
  }
  const double cap = eta * (1.0 - beta1) /
                     (std::sqrt(1.0 - beta2) *
                      std::sqrt(1.0 - beta1 * beta1 / beta2));
  check_report report;
  report.name = "update_bound";
  report.pass = true;
  report.margin = std::numeric_limits<double>::infinity();
  std::int64_t worst_t = 0;
  std::size_t worst_i = 0;
  double worst_update = 0.0;
  for (const auto& step : traj.steps) {
    for (std::size_t i = 0; i < step.update_abs.size(); ++i) {
      const double margin = cap - step.update_abs[i];
      if (margin < report.margin) {
        report.margin = margin;
        worst_t = step.t;
        worst_i = i;
        worst_update = step.update_abs[i];
      }
      report.pass = report.pass && step.update_abs[i] <= cap + kCheckAbsTol;
      ++report.samples;
    }
  }
  report.witness = {{"t", worst_t},       {"coordinate", worst_i},
                    {"update", worst_update}, {"cap", cap},
                    {"eta", eta},         {"beta1", beta1},
                    {"beta2", beta2}};
  return report;
}

check_report check_surrogate_recursion(const trajectory& traj, double beta2,
                                       double sigma0) {
  const double floor = (1.0 - beta2) * sigma0 * sigma0;
  check_report report;
  report.name = "surrogate_recursion";
  report.pass = true;
  report.margin = std::numeric_limits<double>::infinity();
  nlohmann::json worst;

  auto note = [&](double lhs, double rhs, std::int64_t t, std::size_t i,
                  const char* which) {
    const double margin = lhs - rhs;
    report.pass = report.pass &&
                  lhs >= rhs * (1.0 - kCheckRelTol) - kCheckAbsTol;
    if (margin < report.margin) {
      report.margin = margin;
      worst = {{"t", t}, {"coordinate", i}, {"kind", which},
               {"lhs", lhs}, {"rhs", rhs}};
    }
    ++report.samples;
  };

  const std::size_t n = traj.steps.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& step = traj.steps[k];
    const std::vector<double>& next =
        k + 1 < n ? traj.steps[k + 1].nu_tilde : traj.nu_tilde_final;
    for (std::size_t i = 0; i < step.nu_tilde.size(); ++i) {
      note(step.nu_tilde[i], floor, step.t, i, "floor");
      if (!next.empty()) {
        note(next[i], beta2 * step.nu_tilde[i], step.t, i, "growth");
      }
    }
  }
  report.witness = worst;
  return report;
}

check_report check_conditioner_root_sum(std::span<const trajectory> ensemble,
                                        const bound_inputs& in) {
  require_clean_ensemble(ensemble, "check_conditioner_root_sum");
  const grad_sum_constants constants = grad_sum_bound_constants(in);
  const double rhs = conditioner_root_sum_rhs(constants, in);

  std::vector<double> values;
  values.reserve(ensemble.size());
  std::uint64_t worst_seed = 0;
  double worst_value = -std::numeric_limits<double>::infinity();
  for (const auto& traj : ensemble) {
    values.push_back(traj.conditioner_sqrt_sum());
    if (values.back() > worst_value) {
      worst_value = values.back();
      worst_seed = traj.trajectory_id;
    }
  }
  const mean_se stat = summarize(values);
  const double se_fraction = stat.mean > 0.0 ? stat.se / stat.mean : 0.0;

  check_report report;
  report.name = "conditioner_root_sum";
  report.samples = static_cast<std::int64_t>(ensemble.size());
  report.margin = rhs - stat.mean;
  report.pass = stat.mean <= rhs * (1.0 + 3.0 * se_fraction);
  report.witness = {{"mean", stat.mean},
                    {"se", stat.se},
                    {"rhs", rhs},
                    {"worst_seed", worst_seed},
                    {"worst_value", worst_value}};
  return report;
}

check_report check_grad_sum_bound(std::span<const trajectory> ensemble,
                                  const bound_inputs& in) {
  require_clean_ensemble(ensemble, "check_grad_sum_bound");
  const grad_sum_constants constants = grad_sum_bound_constants(in);
  const bound_report bound = grad_sum_bound(constants, in);

  std::vector<double> l1_sums, l2_sums;
  l1_sums.reserve(ensemble.size());
  l2_sums.reserve(ensemble.size());
  for (const auto& traj : ensemble) {
    l1_sums.push_back(traj.grad_l1_sum());
    l2_sums.push_back(traj.grad_l2_sum());
  }
  const mean_se l1 = summarize(l1_sums);
  const mean_se l2 = summarize(l2_sums);

  check_report report;
  report.name = "grad_sum_bound";
  report.samples = static_cast<std::int64_t>(ensemble.size());
  report.margin = bound.value - l1.mean;
  report.pass = l1.mean <= bound.value + 3.0 * l1.se;
  report.witness = {{"l1_mean", l1.mean}, {"l1_se", l1.se},
                    {"l2_mean", l2.mean}, {"l2_se", l2.se},
                    {"rhs", bound.value}, {"terms", bound.terms}};
  return report;
}

check_report check_output_grad_bound(std::span<const trajectory> ensemble,
                                     double bound_value) {
  require_clean_ensemble(ensemble, "check_output_grad_bound");
  std::vector<double> values;
  values.reserve(ensemble.size());
  for (const auto& traj : ensemble) {
    values.push_back(traj.output_grad_l2);
  }
  const mean_se stat = summarize(values);

  check_report report;
  report.name = "output_grad_bound";
  report.samples = static_cast<std::int64_t>(ensemble.size());
  report.margin = bound_value - stat.mean;
  report.pass = stat.mean <= bound_value + 3.0 * stat.se;
  report.witness = {{"mean", stat.mean}, {"se", stat.se}, {"rhs", bound_value}};
  return report;
}

check_report check_adagrad_equivalence(
    std::span<const double> w1, double eta,
    const std::vector<std::vector<double>>& gradient_stream) {
  if (gradient_stream.empty()) {
    throw std::invalid_argument(
        "check_adagrad_equivalence: empty gradient stream");
  }
  const std::size_t d = w1.size();
  for (double g : gradient_stream.front()) {
    if (g == 0.0) {
      throw std::invalid_argument(
          "check_adagrad_equivalence: first gradient must be non-zero "
          "coordinate-wise");
    }
  }

  opt_state dyn;
  dyn.w.assign(w1.begin(), w1.end());
  dyn.m.assign(d, 0.0);
  dyn.nu.assign(d, 1.0);  // weight on nu0 vanishes at t = 1 (beta2_1 = 0)

  opt_state ada;
  ada.w.assign(w1.begin(), w1.end());
  ada.m.assign(d, 0.0);
  ada.nu.assign(d, 0.0);  // zero accumulator

  check_report report;
  report.name = "adagrad_equivalence";
  double max_diff = 0.0;
  std::int64_t worst_t = 0;
  std::size_t worst_i = 0;
  for (std::size_t k = 0; k < gradient_stream.size(); ++k) {
    const auto& g = gradient_stream[k];
    if (g.size() != d) {
      throw std::invalid_argument(
          "check_adagrad_equivalence: gradient dimension mismatch");
    }
    const double t = static_cast<double>(k + 1);
    adam_step(dyn, g, {eta / std::sqrt(t), 0.0, 1.0 - 1.0 / t});
    adagrad_step(ada, g, eta);
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = std::abs(dyn.w[i] - ada.w[i]);
      if (diff > max_diff) {
        max_diff = diff;
        worst_t = static_cast<std::int64_t>(k + 1);
        worst_i = i;
      }
    }
    report.samples += static_cast<std::int64_t>(d);
  }
  report.pass = max_diff <= kEquivalenceTol;
  report.margin = kEquivalenceTol - max_diff;
  report.witness = {{"max_diff", max_diff},
                    {"t", worst_t},
                    {"coordinate", worst_i},
                    {"eta", eta},
                    {"horizon", gradient_stream.size()}};
  return report;
}

}  // namespace adamcheck

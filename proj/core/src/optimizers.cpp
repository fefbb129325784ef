#include "adamcheck/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "adamcheck/rng.hpp"
#include "adamcheck/vec.hpp"

namespace adamcheck {

void validate(const hyper_params& hp) {
  if (!(hp.eta > 0.0) || !std::isfinite(hp.eta)) {
    throw std::invalid_argument("hyper_params: eta must be positive");
  }
  if (!(hp.beta1 >= 0.0 && hp.beta1 < 1.0)) {
    throw std::invalid_argument("hyper_params: beta1 must lie in [0, 1)");
  }
  if (!(hp.beta2 > 0.0 && hp.beta2 < 1.0)) {
    throw std::invalid_argument("hyper_params: beta2 must lie in (0, 1)");
  }
  if (hp.horizon < 1) {
    throw std::invalid_argument("hyper_params: horizon must be at least 1");
  }
  if (hp.nu0.empty()) {
    throw std::invalid_argument("hyper_params: nu0 must be non-empty");
  }
  for (double v : hp.nu0) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(
          "hyper_params: nu0 must be strictly positive coordinate-wise");
    }
  }
  if (!hp.m0.empty() && hp.m0.size() != hp.nu0.size()) {
    throw std::invalid_argument("hyper_params: m0 size must match nu0");
  }
}

hyper_params horizon_scaled_params(double a, double b, double c,
                                   std::int64_t horizon,
                                   std::vector<double> nu0,
                                   std::vector<double> m0) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("horizon_scaled: a and b must be positive");
  }
  if (!(c >= 0.0 && c < 1.0)) {
    throw std::invalid_argument("horizon_scaled: c must lie in [0, 1)");
  }
  if (!(static_cast<double>(horizon) > b)) {
    throw std::invalid_argument("horizon_scaled: horizon must exceed b");
  }
  const double t = static_cast<double>(horizon);
  hyper_params hp;
  hp.eta = a / std::sqrt(t);
  hp.beta2 = 1.0 - b / t;
  hp.beta1 = c * std::sqrt(hp.beta2);
  hp.horizon = horizon;
  hp.nu0 = std::move(nu0);
  hp.m0 = std::move(m0);
  validate(hp);
  return hp;
}

schedule schedule::constant(hyper_params hp) {
  if (hp.m0.empty()) {
    hp.m0.assign(hp.nu0.size(), 0.0);
  }
  validate(hp);
  schedule s;
  s.fixed_ = {hp.eta, hp.beta1, hp.beta2};
  s.horizon_ = hp.horizon;
  s.nu0_ = std::move(hp.nu0);
  s.m0_ = std::move(hp.m0);
  return s;
}

schedule schedule::horizon_scaled(double a, double b, double c,
                                  std::int64_t horizon,
                                  std::vector<double> nu0,
                                  std::vector<double> m0) {
  if (m0.empty()) {
    m0.assign(nu0.size(), 0.0);
  }
  return constant(
      horizon_scaled_params(a, b, c, horizon, std::move(nu0), std::move(m0)));
}

schedule schedule::dynamic(std::vector<double> eta, std::vector<double> beta1,
                           std::vector<double> beta2, std::vector<double> nu0,
                           std::vector<double> m0) {
  if (eta.empty() || eta.size() != beta1.size() || eta.size() != beta2.size()) {
    throw std::invalid_argument(
        "schedule::dynamic: tables must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(eta[i] > 0.0) || !(beta1[i] >= 0.0 && beta1[i] < 1.0) ||
        !(beta2[i] >= 0.0 && beta2[i] < 1.0)) {
      throw std::invalid_argument("schedule::dynamic: invalid rate at step " +
                                  std::to_string(i + 1));
    }
  }
  if (nu0.empty()) {
    throw std::invalid_argument("schedule::dynamic: nu0 must be non-empty");
  }
  for (double v : nu0) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("schedule::dynamic: nu0 must be positive");
    }
  }
  if (m0.empty()) {
    m0.assign(nu0.size(), 0.0);
  }
  schedule s;
  s.horizon_ = static_cast<std::int64_t>(eta.size());
  s.tables_.eta = std::move(eta);
  s.tables_.beta1 = std::move(beta1);
  s.tables_.beta2 = std::move(beta2);
  s.nu0_ = std::move(nu0);
  s.m0_ = std::move(m0);
  return s;
}

step_params schedule::at(std::int64_t t) const {
  if (t < 1) {
    throw std::out_of_range("schedule::at: step index starts at 1");
  }
  if (constant_rates()) {
    return fixed_;
  }
  const auto idx = static_cast<std::size_t>(std::min(t, horizon_) - 1);
  return {tables_.eta[idx], tables_.beta1[idx], tables_.beta2[idx]};
}

void adam_step(opt_state& state, std::span<const double> g,
               const step_params& rates) {
  const std::size_t d = state.w.size();
  for (std::size_t i = 0; i < d; ++i) {
    state.nu[i] = rates.beta2 * state.nu[i] + (1.0 - rates.beta2) * g[i] * g[i];
    state.m[i] = rates.beta1 * state.m[i] + (1.0 - rates.beta1) * g[i];
    state.w[i] -= rates.eta * state.m[i] / std::sqrt(state.nu[i]);
  }
  ++state.t;
}

void adagrad_step(opt_state& state, std::span<const double> g, double eta) {
  const std::size_t d = state.w.size();
  for (std::size_t i = 0; i < d; ++i) {
    state.nu[i] += g[i] * g[i];
    if (state.nu[i] > 0.0) {
      state.w[i] -= eta * g[i] / std::sqrt(state.nu[i]);
    }
    // accumulator and gradient both zero: the coordinate step is zero
  }
  ++state.t;
}

void sgd_step(opt_state& state, std::span<const double> g, double eta) {
  for (std::size_t i = 0; i < state.w.size(); ++i) {
    state.w[i] -= eta * g[i];
  }
  ++state.t;
}

std::vector<double> surrogate_nu(std::span<const double> prev_nu, double beta2,
                                 double sigma0) {
  std::vector<double> out(prev_nu.size());
  const double floor = (1.0 - beta2) * sigma0 * sigma0;
  for (std::size_t i = 0; i < prev_nu.size(); ++i) {
    out[i] = beta2 * prev_nu[i] + floor;
  }
  return out;
}

std::vector<double> proxy_point(std::span<const double> w_t,
                                std::span<const double> w_prev, double beta1,
                                double beta2) {
  if (w_t.size() != w_prev.size()) {
    throw std::invalid_argument("proxy_point: dimension mismatch");
  }
  if (!(beta2 > 0.0) || !(beta1 >= 0.0)) {
    throw std::invalid_argument("proxy_point: invalid rates");
  }
  const double ratio = beta1 / std::sqrt(beta2);
  if (!(ratio < 1.0)) {
    throw std::invalid_argument("proxy_point: requires beta1 < sqrt(beta2)");
  }
  std::vector<double> out(w_t.size());
  for (std::size_t i = 0; i < w_t.size(); ++i) {
    out[i] = (w_t[i] - ratio * w_prev[i]) / (1.0 - ratio);
  }
  return out;
}

double auxiliary_xi(std::span<const double> true_grad,
                    std::span<const double> nu_tilde_next, double eta) {
  if (true_grad.size() != nu_tilde_next.size()) {
    throw std::invalid_argument("auxiliary_xi: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < true_grad.size(); ++i) {
    if (!(nu_tilde_next[i] > 0.0)) {
      throw std::invalid_argument("auxiliary_xi: surrogate must be positive");
    }
    sum += true_grad[i] * true_grad[i] / std::sqrt(nu_tilde_next[i]);
  }
  return -eta * sum;
}

double trajectory::grad_l1_sum() const {
  double s = 0.0;
  for (const auto& step : steps) {
    s += step.grad_l1;
  }
  return s;
}

double trajectory::grad_l2_sum() const {
  double s = 0.0;
  for (const auto& step : steps) {
    s += step.grad_l2;
  }
  return s;
}

double trajectory::min_grad_l2() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& step : steps) {
    m = std::min(m, step.grad_l2);
  }
  return m;
}

double trajectory::final_loss() const {
  return steps.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : steps.back().loss;
}

double trajectory::conditioner_sqrt_sum() const {
  double s = 0.0;
  for (const auto& step : steps) {
    for (double v : step.nu_tilde) {
      s += std::sqrt(v);
    }
  }
  for (double v : nu_tilde_final) {
    s += std::sqrt(v);
  }
  return s;
}

namespace {

void fill_common_fields(trajectory_step& rec, const objective& obj,
                        const std::vector<double>& w) {
  rec.w = w;
  rec.true_grad = obj.gradient(w);
  rec.loss = obj.value(w);
  rec.grad_l2 = l2_norm(rec.true_grad);
  rec.grad_l1 = l1_norm(rec.true_grad);
}

void finish_output_draw(trajectory& traj) {
  if (traj.output_index >= 1 &&
      traj.output_index <= static_cast<std::int64_t>(traj.steps.size())) {
    const auto& rec = traj.steps[static_cast<std::size_t>(traj.output_index - 1)];
    traj.output_w = rec.w;
    traj.output_grad_l2 = rec.grad_l2;
  }
}

}  // namespace

trajectory adam_run(const objective& obj, const oracle_spec& oracle,
                    const schedule& sched, std::vector<double> w1,
                    std::uint64_t trajectory_id) {
  validate(oracle);
  const std::size_t d = obj.dimension();
  if (w1.size() != d || sched.nu0().size() != d) {
    throw std::invalid_argument("adam_run: dimension mismatch");
  }
  const std::int64_t horizon = sched.horizon();
  const double sigma0 = affine_budget(oracle).sigma0;

  trajectory traj;
  traj.trajectory_id = trajectory_id;
  traj.steps.reserve(static_cast<std::size_t>(horizon));

  // Run-level draws live on step index 0; oracle draws use the step index.
  rng_stream run_stream(oracle.base_seed, trajectory_id, 0);
  traj.output_index =
      1 + static_cast<std::int64_t>(run_stream.next_below(
              static_cast<std::uint64_t>(horizon)));

  opt_state state;
  state.w = std::move(w1);
  state.m = sched.m0();
  state.nu = sched.nu0();

  std::vector<double> g(d);
  std::vector<double> prev_w(d);
  std::vector<double> nu_tilde_next;
  bool m0_zero = true;
  for (double v : state.m) {
    m0_zero = m0_zero && v == 0.0;
  }

  for (std::int64_t t = 1; t <= horizon; ++t) {
    const step_params rates = sched.at(t);
    trajectory_step rec;
    rec.t = t;
    fill_common_fields(rec, obj, state.w);
    if (!all_finite(rec.true_grad) || !std::isfinite(rec.loss)) {
      traj.divergence = {t, "non-finite objective value or gradient"};
      break;
    }
    sample_from_grad(oracle, rec.true_grad, trajectory_id,
                     static_cast<std::uint32_t>(t), g);
    if (!all_finite(g)) {
      traj.divergence = {t, "non-finite stochastic gradient"};
      break;
    }
    rec.g = g;
    rec.nu_tilde = surrogate_nu(state.nu, rates.beta2, sigma0);

    if (t == 1) {
      rec.proxy = rec.w;  // u_1 = w_1
    } else if (rates.beta1 < std::sqrt(rates.beta2)) {
      rec.proxy = proxy_point(rec.w, traj.steps.back().w, rates.beta1,
                              rates.beta2);
    } else {
      rec.proxy.assign(d, std::numeric_limits<double>::quiet_NaN());
    }

    prev_w = state.w;
    adam_step(state, g, rates);
    if (!all_finite(state.w) || !all_finite(state.nu) ||
        !all_finite(state.m)) {
      traj.divergence = {t, "non-finite iterate after update"};
      break;
    }
    rec.nu = state.nu;
    rec.update_abs.resize(d);
    rec.update_max = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      rec.update_abs[i] = std::abs(state.w[i] - prev_w[i]);
      rec.update_max = std::max(rec.update_max, rec.update_abs[i]);
    }
    nu_tilde_next = surrogate_nu(state.nu, sched.at(t + 1).beta2, sigma0);
    rec.xi = auxiliary_xi(rec.true_grad, nu_tilde_next, rates.eta);
    traj.steps.push_back(std::move(rec));
  }

  if (!traj.divergence) {
    traj.final_w = state.w;
    traj.nu_tilde_final = nu_tilde_next;
  }
  finish_output_draw(traj);

  // Post-run guard: with constant rates and zero initial momentum the
  // per-coordinate update cap holds unconditionally, so a violation is an
  // implementation bug.
  if (!traj.divergence && sched.constant_rates() && m0_zero) {
    const step_params rates = sched.at(1);
    if (rates.beta1 * rates.beta1 < rates.beta2) {
      const double cap = rates.eta * (1.0 - rates.beta1) /
                         (std::sqrt(1.0 - rates.beta2) *
                          std::sqrt(1.0 - rates.beta1 * rates.beta1 / rates.beta2));
      for (const auto& rec : traj.steps) {
        if (rec.update_max > cap + 1e-12) {
          throw std::logic_error(
              "adam_run: per-coordinate update exceeded its cap at step " +
              std::to_string(rec.t));
        }
      }
    }
  }
  return traj;
}

namespace {

trajectory plain_run(const objective& obj, const oracle_spec& oracle,
                     double eta, std::int64_t horizon, std::vector<double> w1,
                     std::uint64_t trajectory_id, bool adagrad,
                     std::vector<double> accumulator0) {
  validate(oracle);
  const std::size_t d = obj.dimension();
  if (w1.size() != d) {
    throw std::invalid_argument("run: dimension mismatch");
  }
  if (!(eta > 0.0) || horizon < 1) {
    throw std::invalid_argument("run: eta must be positive and horizon >= 1");
  }
  if (adagrad) {
    if (accumulator0.size() != d) {
      throw std::invalid_argument("adagrad_run: accumulator dimension mismatch");
    }
    for (double v : accumulator0) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("adagrad_run: accumulator must be >= 0");
      }
    }
  }

  trajectory traj;
  traj.trajectory_id = trajectory_id;
  traj.steps.reserve(static_cast<std::size_t>(horizon));
  rng_stream run_stream(oracle.base_seed, trajectory_id, 0);
  traj.output_index =
      1 + static_cast<std::int64_t>(run_stream.next_below(
              static_cast<std::uint64_t>(horizon)));

  opt_state state;
  state.w = std::move(w1);
  state.m.assign(d, 0.0);
  state.nu = adagrad ? std::move(accumulator0) : std::vector<double>(d, 0.0);

  std::vector<double> g(d);
  std::vector<double> prev_w(d);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    trajectory_step rec;
    rec.t = t;
    fill_common_fields(rec, obj, state.w);
    if (!all_finite(rec.true_grad) || !std::isfinite(rec.loss)) {
      traj.divergence = {t, "non-finite objective value or gradient"};
      break;
    }
    sample_from_grad(oracle, rec.true_grad, trajectory_id,
                     static_cast<std::uint32_t>(t), g);
    if (!all_finite(g)) {
      traj.divergence = {t, "non-finite stochastic gradient"};
      break;
    }
    rec.g = g;
    rec.nu_tilde.assign(d, 0.0);
    rec.proxy = rec.w;

    prev_w = state.w;
    if (adagrad) {
      adagrad_step(state, g, eta);
    } else {
      sgd_step(state, g, eta);
    }
    if (!all_finite(state.w) || !all_finite(state.nu)) {
      traj.divergence = {t, "non-finite iterate after update"};
      break;
    }
    rec.nu = state.nu;
    rec.update_abs.resize(d);
    rec.update_max = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      rec.update_abs[i] = std::abs(state.w[i] - prev_w[i]);
      rec.update_max = std::max(rec.update_max, rec.update_abs[i]);
    }
    rec.xi = 0.0;
    traj.steps.push_back(std::move(rec));
  }
  if (!traj.divergence) {
    traj.final_w = state.w;
  }
  finish_output_draw(traj);
  return traj;
}

}  // namespace

trajectory adagrad_run(const objective& obj, const oracle_spec& oracle,
                       double eta, std::vector<double> accumulator0,
                       std::int64_t horizon, std::vector<double> w1,
                       std::uint64_t trajectory_id) {
  return plain_run(obj, oracle, eta, horizon, std::move(w1), trajectory_id,
                   true, std::move(accumulator0));
}

trajectory sgd_run(const objective& obj, const oracle_spec& oracle, double eta,
                   std::int64_t horizon, std::vector<double> w1,
                   std::uint64_t trajectory_id) {
  return plain_run(obj, oracle, eta, horizon, std::move(w1), trajectory_id,
                   false, {});
}

}  // namespace adamcheck

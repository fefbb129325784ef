#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adamcheck/objectives.hpp"
#include "adamcheck/optimizers.hpp"
#include "adamcheck/rng.hpp"

using namespace adamcheck;

namespace {

opt_state scalar_state(double w, double m, double nu) {
  opt_state s;
  s.w = {w};
  s.m = {m};
  s.nu = {nu};
  return s;
}

hyper_params scalar_params(double eta, double beta1, double beta2,
                           std::int64_t horizon, double nu0) {
  hyper_params hp;
  hp.eta = eta;
  hp.beta1 = beta1;
  hp.beta2 = beta2;
  hp.horizon = horizon;
  hp.nu0 = {nu0};
  hp.m0 = {0.0};
  return hp;
}

oracle_spec exact_oracle(std::uint64_t seed = 0) {
  oracle_spec spec;
  spec.kind = oracle_kind::exact;
  spec.base_seed = seed;
  return spec;
}

oracle_spec gaussian_oracle(double sigma0, std::uint64_t seed) {
  oracle_spec spec;
  spec.kind = oracle_kind::gaussian_bounded;
  spec.sigma0 = sigma0;
  spec.base_seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("adam_step matches hand arithmetic") {
  // constant-gradient fixed point of nu
  opt_state s = scalar_state(1.0, 0.0, 4.0);
  adam_step(s, std::vector<double>{2.0}, {0.1, 0.0, 0.5});
  CHECK(s.nu[0] == 4.0);
  CHECK(s.m[0] == 2.0);
  CHECK(s.w[0] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(s.t == 1);

  opt_state s2 = scalar_state(1.0, 0.0, 4.0);
  adam_step(s2, std::vector<double>{2.0}, {0.1, 0.5, 0.5});
  CHECK(s2.m[0] == 1.0);
  CHECK(s2.nu[0] == 4.0);
  CHECK(s2.w[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("adam_run equals a straight-line re-implementation") {
  const objective obj = make_quadratic({1.0});
  const schedule sched = schedule::constant(scalar_params(0.1, 0.9, 0.99, 5, 1.0));
  const trajectory traj = adam_run(obj, exact_oracle(), sched, {1.0}, 0);

  // independent re-implementation of the recursion, no shared code path
  double w = 1.0, m = 0.0, nu = 1.0;
  for (int t = 0; t < 5; ++t) {
    CHECK(traj.steps[t].w[0] == doctest::Approx(w).epsilon(1e-15));
    const double g = 2.0 * w;
    nu = 0.99 * nu + 0.01 * g * g;
    m = 0.9 * m + 0.1 * g;
    w = w - 0.1 * m / std::sqrt(nu);
    CHECK(traj.steps[t].nu[0] == doctest::Approx(nu).epsilon(1e-15));
  }
  CHECK(traj.final_w[0] == doctest::Approx(w).epsilon(1e-15));
}

TEST_CASE("adam_run basics") {
  const objective obj = make_quadratic({1.0});
  SUBCASE("horizon 1 forces the output index") {
    const schedule sched = schedule::constant(scalar_params(0.1, 0.9, 0.99, 1, 1.0));
    const trajectory traj = adam_run(obj, exact_oracle(), sched, {1.0}, 3);
    CHECK(traj.steps.size() == 1);
    CHECK(traj.output_index == 1);
    CHECK(traj.output_w == traj.steps[0].w);
  }
  SUBCASE("deterministic run decreases the gradient norm") {
    const schedule sched =
        schedule::constant(scalar_params(0.05, 0.9, 0.99, 200, 1.0));
    const trajectory traj = adam_run(obj, exact_oracle(), sched, {1.0}, 0);
    CHECK(traj.steps.back().grad_l2 < traj.steps.front().grad_l2);
    CHECK(traj.min_grad_l2() < 0.05);
  }
  SUBCASE("beta1 = 0 degenerates the proxy point to the iterate") {
    const schedule sched =
        schedule::constant(scalar_params(0.1, 0.0, 0.99, 50, 1.0));
    const trajectory traj =
        adam_run(obj, gaussian_oracle(0.5, 8), sched, {1.0}, 1);
    for (const auto& step : traj.steps) {
      CHECK(step.proxy == step.w);
    }
  }
  SUBCASE("output index is uniform over the horizon and recorded") {
    const schedule sched =
        schedule::constant(scalar_params(0.1, 0.0, 0.99, 10, 1.0));
    bool seen_not_one = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const trajectory traj = adam_run(obj, exact_oracle(5), sched, {1.0}, seed);
      CHECK(traj.output_index >= 1);
      CHECK(traj.output_index <= 10);
      seen_not_one = seen_not_one || traj.output_index != 1;
      CHECK(traj.output_w ==
            traj.steps[static_cast<std::size_t>(traj.output_index - 1)].w);
    }
    CHECK(seen_not_one);
  }
}

TEST_CASE("trajectories are bit-deterministic in config and seed") {
  const objective obj = make_quadratic({1.0, 2.0});
  hyper_params hp = scalar_params(0.05, 0.9, 0.999, 100, 1.0);
  hp.nu0 = {1.0, 1.0};
  hp.m0 = {0.0, 0.0};
  const schedule sched = schedule::constant(hp);
  const trajectory a =
      adam_run(obj, gaussian_oracle(1.0, 42), sched, {1.0, -1.0}, 9);
  const trajectory b =
      adam_run(obj, gaussian_oracle(1.0, 42), sched, {1.0, -1.0}, 9);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].w == b.steps[i].w);
    CHECK(a.steps[i].g == b.steps[i].g);
    CHECK(a.steps[i].nu == b.steps[i].nu);
  }
  CHECK(a.output_index == b.output_index);

  const trajectory c =
      adam_run(obj, gaussian_oracle(1.0, 42), sched, {1.0, -1.0}, 10);
  CHECK(a.steps[0].g != c.steps[0].g);
}

TEST_CASE("dynamic schedule with constant tables reproduces adam bit-exactly") {
  const objective obj = make_quadratic({1.0});
  const std::int64_t horizon = 50;
  const schedule fixed =
      schedule::constant(scalar_params(0.1, 0.9, 0.99, horizon, 1.0));
  const schedule tables = schedule::dynamic(
      std::vector<double>(horizon, 0.1), std::vector<double>(horizon, 0.9),
      std::vector<double>(horizon, 0.99), {1.0}, {0.0});
  const trajectory a = adam_run(obj, gaussian_oracle(0.5, 77), fixed, {1.0}, 2);
  const trajectory b = adam_run(obj, gaussian_oracle(0.5, 77), tables, {1.0}, 2);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].w == b.steps[i].w);
    CHECK(a.steps[i].nu == b.steps[i].nu);
  }
}

TEST_CASE("dynamical rates satisfy the accumulator identity") {
  // eta_t = eta / sqrt(t), beta1 = 0, beta2_t = 1 - 1/t: mu_t = t nu_t obeys
  // mu_t = mu_{t-1} + g_t^2 with mu_0 = 0.
  opt_state s = scalar_state(0.0, 0.0, 5.0);  // nu0 is irrelevant at t = 1
  rng_stream rng(4, 0, 0);
  double mu = 0.0;
  for (int t = 1; t <= 200; ++t) {
    const double g = rng.next_gaussian();
    adam_step(s, std::vector<double>{g},
              {1.0 / std::sqrt(static_cast<double>(t)), 0.0,
               1.0 - 1.0 / static_cast<double>(t)});
    mu += g * g;
    CHECK(static_cast<double>(t) * s.nu[0] ==
          doctest::Approx(mu).epsilon(1e-12));
  }
}

TEST_CASE("beta2 = 0 at the first step discards nu0") {
  for (double nu0 : {0.5, 4.0, 123.0}) {
    opt_state s = scalar_state(1.0, 0.0, nu0);
    adam_step(s, std::vector<double>{3.0}, {0.1, 0.0, 0.0});
    CHECK(s.nu[0] == 9.0);
  }
}

TEST_CASE("adagrad_step hand values") {
  opt_state s = scalar_state(0.0, 0.0, 1.0);
  adagrad_step(s, std::vector<double>{1.0}, 1.0);
  CHECK(s.nu[0] == 2.0);
  CHECK(s.w[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));

  SUBCASE("zero gradient is a no-op") {
    opt_state q = scalar_state(0.7, 0.0, 3.0);
    adagrad_step(q, std::vector<double>{0.0}, 1.0);
    CHECK(q.w[0] == 0.7);
    CHECK(q.nu[0] == 3.0);
  }
  SUBCASE("zero accumulator and zero gradient take a zero step") {
    opt_state q = scalar_state(0.7, 0.0, 0.0);
    adagrad_step(q, std::vector<double>{0.0}, 1.0);
    CHECK(q.w[0] == 0.7);
  }
  SUBCASE("three unit gradients from a zero accumulator") {
    opt_state q = scalar_state(0.0, 0.0, 0.0);
    for (int t = 0; t < 3; ++t) {
      adagrad_step(q, std::vector<double>{1.0}, 1.0);
    }
    const double expected =
        -(1.0 + 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0));
    CHECK(q.w[0] == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("sgd_step basics and geometric decay") {
  opt_state s = scalar_state(1.0, 0.0, 0.0);
  sgd_step(s, std::vector<double>{2.0}, 0.1);
  CHECK(s.w[0] == doctest::Approx(0.8).epsilon(1e-15));
  sgd_step(s, std::vector<double>{0.0}, 0.1);
  CHECK(s.w[0] == doctest::Approx(0.8).epsilon(1e-15));

  // on f = w^2 with eta = 0.4 the exact recursion is w <- 0.2 w
  const objective obj = make_quadratic({1.0});
  const trajectory traj = sgd_run(obj, exact_oracle(), 0.4, 10, {1.0}, 0);
  double w = 1.0;
  for (const auto& step : traj.steps) {
    CHECK(step.w[0] == doctest::Approx(w).epsilon(1e-14));
    w *= 0.2;
  }
}

TEST_CASE("surrogate conditioner") {
  CHECK(surrogate_nu(std::vector<double>{4.0}, 0.5, 2.0) ==
        std::vector<double>{4.0});
  CHECK(surrogate_nu(std::vector<double>{4.0}, 0.25, 0.0) ==
        std::vector<double>{1.0});

  // along a noisy trajectory: nu~_{t+1} - beta2 nu~_t =
  // (1-beta2)(beta2 g_t^2 + (1-beta2) sigma0^2) >= 0 per coordinate
  const objective obj = make_quadratic({1.0, 0.5});
  hyper_params hp = scalar_params(0.1, 0.9, 0.99, 100, 1.0);
  hp.nu0 = {1.0, 1.0};
  hp.m0 = {0.0, 0.0};
  const schedule sched = schedule::constant(hp);
  const double sigma0 = 1.0;
  const trajectory traj =
      adam_run(obj, gaussian_oracle(sigma0, 6), sched, {1.0, -2.0}, 4);
  for (std::size_t k = 0; k + 1 < traj.steps.size(); ++k) {
    const auto& cur = traj.steps[k];
    const auto& nxt = traj.steps[k + 1];
    for (std::size_t i = 0; i < 2; ++i) {
      const double diff = nxt.nu_tilde[i] - 0.99 * cur.nu_tilde[i];
      const double expected =
          0.01 * (0.99 * cur.g[i] * cur.g[i] + 0.01 * sigma0 * sigma0);
      CHECK(diff == doctest::Approx(expected).epsilon(1e-9));
      CHECK(diff >= 0.0);
    }
  }
}

TEST_CASE("proxy point") {
  CHECK(proxy_point(std::vector<double>{2.0}, std::vector<double>{1.0}, 0.0,
                    0.81) == std::vector<double>{2.0});
  CHECK(proxy_point(std::vector<double>{3.0}, std::vector<double>{3.0}, 0.45,
                    0.81) == std::vector<double>{3.0});
  // ratio = 0.45 / 0.9 = 0.5: u = (2 - 0.5) / 0.5 = 3
  CHECK(proxy_point(std::vector<double>{2.0}, std::vector<double>{1.0}, 0.45,
                    0.81)[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(proxy_point(std::vector<double>{1.0},
                              std::vector<double>{1.0}, 0.95, 0.81),
                  std::invalid_argument);
}

TEST_CASE("auxiliary quadratic form") {
  CHECK(auxiliary_xi(std::vector<double>{0.0, 0.0},
                     std::vector<double>{1.0, 2.0}, 0.3) == 0.0);
  CHECK(auxiliary_xi(std::vector<double>{2.0}, std::vector<double>{4.0}, 1.0) ==
        doctest::Approx(-2.0).epsilon(1e-15));

  const objective obj = make_quadratic({1.0, 0.5, 2.0});
  hyper_params hp;
  hp.eta = 0.1;
  hp.beta1 = 0.9;
  hp.beta2 = 0.999;
  hp.horizon = 1000;
  hp.nu0 = {1.0, 1.0, 1.0};
  hp.m0 = {0.0, 0.0, 0.0};
  const trajectory traj = adam_run(obj, gaussian_oracle(1.0, 12),
                                   schedule::constant(hp), {1.0, -2.0, 0.5}, 5);
  for (const auto& step : traj.steps) {
    CHECK(step.xi <= 0.0);
  }
}

TEST_CASE("conditioner stays positive with a floor under the surrogate") {
  const objective obj = make_quadratic({1.0});
  hyper_params hp = scalar_params(0.1, 0.5, 0.9, 500, 1.0);
  const double sigma0 = 0.7;
  const trajectory traj = adam_run(obj, gaussian_oracle(sigma0, 3),
                                   schedule::constant(hp), {2.0}, 8);
  const double floor = (1.0 - 0.9) * sigma0 * sigma0;
  for (const auto& step : traj.steps) {
    CHECK(step.nu[0] > 0.0);
    CHECK(step.nu_tilde[0] >= floor * (1.0 - 1e-12));
  }
  CHECK(traj.nu_tilde_final[0] >= floor * (1.0 - 1e-12));
}

TEST_CASE("momentum stays inside the convex hull of seen gradients") {
  const objective obj = make_quadratic({1.0});
  hyper_params hp = scalar_params(0.01, 0.9, 0.999, 300, 1.0);
  const trajectory traj = adam_run(obj, gaussian_oracle(0.5, 91),
                                   schedule::constant(hp), {1.0}, 17);
  double running_max = 0.0;  // |m0| = 0
  double m = 0.0;
  for (const auto& step : traj.steps) {
    running_max = std::max(running_max, std::abs(step.g[0]));
    m = 0.9 * m + 0.1 * step.g[0];
    CHECK(std::abs(m) <= running_max * (1.0 + 1e-12));
  }
}

TEST_CASE("divergence is reported with the first offending step") {
  SUBCASE("overflow at the first evaluation") {
    const objective obj = make_quadratic({1e300});
    hyper_params hp = scalar_params(0.1, 0.0, 0.9, 10, 1.0);
    const trajectory traj =
        adam_run(obj, exact_oracle(), schedule::constant(hp), {1e10}, 0);
    REQUIRE(traj.divergence.has_value());
    CHECK(traj.divergence->step == 1);
    CHECK(traj.steps.empty());
  }
  SUBCASE("geometric blow-up mid-run under sgd") {
    const objective obj = make_quadratic({1.0});
    const trajectory traj = sgd_run(obj, exact_oracle(), 2.0, 2000, {1.0}, 0);
    REQUIRE(traj.divergence.has_value());
    CHECK(traj.divergence->step > 1);
    CHECK(traj.steps.size() ==
          static_cast<std::size_t>(traj.divergence->step - 1));
  }
}

TEST_CASE("hyper parameter validation") {
  hyper_params hp = scalar_params(0.1, 0.9, 0.999, 10, 1.0);
  CHECK_NOTHROW(validate(hp));
  hp.nu0 = {0.0};
  CHECK_THROWS_AS(validate(hp), std::invalid_argument);
  hp.nu0 = {1.0};
  hp.beta2 = 1.0;
  CHECK_THROWS_AS(validate(hp), std::invalid_argument);
  hp.beta2 = 0.999;
  hp.beta1 = 1.0;
  CHECK_THROWS_AS(validate(hp), std::invalid_argument);
  hp.beta1 = 0.9;
  hp.eta = 0.0;
  CHECK_THROWS_AS(validate(hp), std::invalid_argument);

  CHECK_THROWS_AS(
      schedule::dynamic({0.1, 0.1}, {0.0}, {0.5, 0.5}, {1.0}, {0.0}),
      std::invalid_argument);
}

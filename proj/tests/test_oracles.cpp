#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adamcheck/objectives.hpp"
#include "adamcheck/oracles.hpp"
#include "adamcheck/rng.hpp"
#include "adamcheck/vec.hpp"

using namespace adamcheck;

namespace {

std::vector<double> random_point(rng_stream& rng, std::size_t d, double radius) {
  std::vector<double> w(d);
  for (double& x : w) {
    x = radius * (2.0 * rng.next_unit() - 1.0);
  }
  return w;
}

}  // namespace

TEST_CASE("exact oracle returns the true gradient") {
  const objective obj = make_quadratic({1.0, 1.0});
  oracle_spec spec;
  spec.kind = oracle_kind::exact;
  const std::vector<double> w{1.0, 2.0};
  for (std::uint32_t step = 1; step <= 5; ++step) {
    CHECK(sample(spec, obj, w, 0, step) == std::vector<double>{2.0, 4.0});
  }
  const moment_report report = estimate_moments(spec, obj, w, 200);
  CHECK(report.noise_second_moment == 0.0);
  CHECK(l2_norm(report.mean_error) == 0.0);
  CHECK(report.bound_ok);
  CHECK(report.unbiased_ok);
}

TEST_CASE("samples are bit-deterministic in the stream key") {
  const objective obj = make_quadratic({1.0, 1.0, 1.0, 1.0});
  oracle_spec spec;
  spec.kind = oracle_kind::gaussian_bounded;
  spec.sigma0 = 1.0;
  spec.base_seed = 99;
  const std::vector<double> w{0.5, -1.0, 2.0, 0.0};
  CHECK(sample(spec, obj, w, 3, 17) == sample(spec, obj, w, 3, 17));
  CHECK(sample(spec, obj, w, 3, 17) != sample(spec, obj, w, 3, 18));
  CHECK(sample(spec, obj, w, 3, 17) != sample(spec, obj, w, 4, 17));
}

TEST_CASE("gaussian oracle meets its variance budget") {
  const objective obj = make_quadratic({1.0, 1.0, 1.0, 1.0});
  oracle_spec spec;
  spec.kind = oracle_kind::gaussian_bounded;
  spec.sigma0 = 1.0;
  spec.base_seed = 7;
  const std::vector<double> w{0.3, -0.4, 1.0, 2.0};
  const moment_report report = estimate_moments(spec, obj, w, 100000);
  // E ||g - grad||^2 = d sigma0^2 = 4; Monte-Carlo lands within [3.8, 4.2]
  CHECK(report.noise_second_moment > 3.8);
  CHECK(report.noise_second_moment < 4.2);
  CHECK(report.noise_budget_total == 4.0);
  CHECK(report.bound_ok);
  CHECK(report.unbiased_ok);
}

TEST_CASE("affine oracle second moment sits inside its declared budget") {
  // grad = 1 per coordinate, sigma1 = 2, rho = 0.5, sigma0 = 1:
  // E g_i^2 = sigma1^2 + rho^2 sigma0^2 = 4.25 <= budget 1 + 4 = 5
  const objective obj = make_quadratic({0.5, 0.5});
  oracle_spec spec;
  spec.kind = oracle_kind::coordinate_affine;
  spec.sigma0 = 1.0;
  spec.sigma1 = 2.0;
  spec.rho = 0.5;
  spec.base_seed = 21;
  const std::vector<double> w{1.0, 1.0};  // grad = (1, 1)
  const moment_report report = estimate_moments(spec, obj, w, 100000);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(report.second_moment[i] == doctest::Approx(4.25).epsilon(0.05));
    CHECK(report.second_moment_budget[i] == 5.0);
  }
  CHECK(report.bound_ok);
  CHECK(report.unbiased_ok);
}

TEST_CASE("unbiasedness and declared bounds at 10 random points") {
  const objective obj = make_quadratic({1.0, 2.0, 0.5});
  rng_stream rng(555, 0, 0);
  for (int kind = 0; kind < 2; ++kind) {
    oracle_spec spec;
    spec.base_seed = 1000 + kind;
    if (kind == 0) {
      spec.kind = oracle_kind::gaussian_bounded;
      spec.sigma0 = 0.7;
    } else {
      spec.kind = oracle_kind::coordinate_affine;
      spec.sigma0 = 0.5;
      spec.sigma1 = 1.5;
    }
    for (int p = 0; p < 10; ++p) {
      const std::vector<double> w = random_point(rng, 3, 5.0);
      const moment_report report =
          estimate_moments(spec, obj, w, 20000, static_cast<std::uint64_t>(p));
      CHECK(report.bound_ok);
      CHECK(report.unbiased_ok);
    }
  }
}

TEST_CASE("bounded-variance certification embeds into the affine one") {
  // Re-interpret a gaussian_bounded spec with sigma0 = sigma = sigma0 sqrt(d)
  // and sigma1 = 1: every per-coordinate second moment must sit inside that
  // affine budget.
  const objective obj = make_quadratic({1.0, 1.0, 1.0, 1.0});
  oracle_spec spec;
  spec.kind = oracle_kind::gaussian_bounded;
  spec.sigma0 = 1.0;
  spec.base_seed = 31;
  const std::vector<double> w{2.0, -1.0, 0.5, 3.0};
  const moment_report report = estimate_moments(spec, obj, w, 50000);
  const double sigma = spec.sigma0 * 2.0;  // sigma0 sqrt(d), d = 4
  const std::vector<double> grad = obj.gradient(w);
  for (std::size_t i = 0; i < 4; ++i) {
    const double affine_budget_i = sigma * sigma + grad[i] * grad[i];
    CHECK(report.second_moment[i] <=
          affine_budget_i + 3.0 * report.second_moment_se[i]);
  }
}

TEST_CASE("affine oracle at sigma1 = 1 is pure additive noise") {
  // sqrt(sigma1^2 - 1) = 0: the gradient-proportional part vanishes and
  // E g_i^2 = G_i^2 + rho^2 sigma0^2, inside the budget for rho <= 1
  const objective obj = make_quadratic({0.5});
  oracle_spec spec;
  spec.kind = oracle_kind::coordinate_affine;
  spec.sigma0 = 1.0;
  spec.sigma1 = 1.0;
  spec.rho = 1.0;
  spec.base_seed = 88;
  const std::vector<double> w{3.0};  // grad = 3
  const moment_report report = estimate_moments(spec, obj, w, 50000);
  CHECK(report.second_moment[0] == doctest::Approx(10.0).epsilon(0.05));
  CHECK(report.bound_ok);
  CHECK(report.unbiased_ok);
}

TEST_CASE("invalid specs are rejected") {
  oracle_spec spec;
  spec.kind = oracle_kind::coordinate_affine;
  spec.sigma0 = 1.0;
  spec.sigma1 = 0.5;  // below 1: no unbiased oracle can satisfy the budget
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec.sigma1 = 1.5;
  spec.rho = 0.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec.rho = 1.5;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec.rho = 1.0;
  CHECK_NOTHROW(validate(spec));
  spec.sigma0 = -1.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("estimate_moments needs a sane sample count") {
  const objective obj = make_quadratic({1.0});
  oracle_spec spec;
  spec.kind = oracle_kind::exact;
  CHECK_THROWS_AS(estimate_moments(spec, obj, std::vector<double>{1.0}, 99),
                  std::invalid_argument);
}

TEST_CASE("affine budget helper certifies each kind") {
  oracle_spec spec;
  spec.sigma0 = 2.0;
  spec.sigma1 = 3.0;
  spec.kind = oracle_kind::exact;
  CHECK(affine_budget(spec).sigma0 == 0.0);
  CHECK(affine_budget(spec).sigma1 == 0.0);
  spec.kind = oracle_kind::gaussian_bounded;
  CHECK(affine_budget(spec).sigma0 == 2.0);
  CHECK(affine_budget(spec).sigma1 == 1.0);
  spec.kind = oracle_kind::coordinate_affine;
  CHECK(affine_budget(spec).sigma0 == 2.0);
  CHECK(affine_budget(spec).sigma1 == 3.0);
}

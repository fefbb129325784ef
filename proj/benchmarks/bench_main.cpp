#include <benchmark/benchmark.h>

#include <vector>

#include "adamcheck/bounds.hpp"
#include "adamcheck/objectives.hpp"
#include "adamcheck/optimizers.hpp"
#include "adamcheck/oracles.hpp"
#include "adamcheck/verify.hpp"

namespace {

using namespace adamcheck;

oracle_spec gaussian_oracle() {
  oracle_spec spec;
  spec.kind = oracle_kind::gaussian_bounded;
  spec.sigma0 = 1.0;
  spec.base_seed = 12345;
  return spec;
}

void BM_AdamRun(benchmark::State& state) {
  const auto horizon = static_cast<std::int64_t>(state.range(0));
  const std::size_t d = 10;
  const objective obj = make_quadratic(std::vector<double>(d, 0.5));
  hyper_params hp;
  hp.eta = 0.01;
  hp.beta1 = 0.9;
  hp.beta2 = 0.999;
  hp.horizon = horizon;
  hp.nu0.assign(d, 1.0);
  hp.m0.assign(d, 0.0);
  const schedule sched = schedule::constant(hp);
  const std::vector<double> w1(d, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adam_run(obj, gaussian_oracle(), sched, w1, seed++));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_AdamRun)->Arg(1000)->Arg(10000);

void BM_OracleSample(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const std::vector<double> grad(d, 1.0);
  std::vector<double> out(d);
  const oracle_spec spec = gaussian_oracle();
  std::uint32_t step = 1;
  for (auto _ : state) {
    sample_from_grad(spec, grad, 0, step++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_OracleSample)->Arg(10)->Arg(100);

void BM_LogisticGradient(benchmark::State& state) {
  const objective obj = make_synthetic_logistic(256, 16, 7);
  const std::vector<double> w(16, 0.1);
  std::vector<double> grad(16);
  for (auto _ : state) {
    obj.gradient_into(w, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_LogisticGradient);

void BM_GradSumBound(benchmark::State& state) {
  bound_inputs in;
  in.smoothness = 1.0;
  in.eta = 0.01;
  in.beta1 = 0.9;
  in.beta2 = 0.999;
  in.sigma0 = 1.0;
  in.sigma1 = 1.0;
  in.horizon = 10000;
  in.nu0 = {1.0, 1.0};
  in.start_value = 1.0;
  in.start_grad = {1.0, 1.0};
  for (auto _ : state) {
    const grad_sum_constants constants = grad_sum_bound_constants(in);
    benchmark::DoNotOptimize(grad_sum_bound(constants, in).value);
  }
}
BENCHMARK(BM_GradSumBound);

void BM_RatioSumCheck(benchmark::State& state) {
  const ratio_sum_case c = make_ratio_sum_case(42, 0, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_ratio_sum(c.beta2, c.b0, c.seq).margin);
  }
}
BENCHMARK(BM_RatioSumCheck);

}  // namespace

BENCHMARK_MAIN();

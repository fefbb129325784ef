// Command-line runner: config-driven experiments, property checks, rate
// scans, beta1 sweeps and the Adam/AdaGrad equivalence run. Exit code is 0
// iff every executed check passed and no cell errored.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adamcheck/harness.hpp"

namespace {

struct common_options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, common_options& opts) {
  cmd->add_option("config", opts.config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override the oracle base seed");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = hardware concurrency)");
}

adamcheck::experiment_config load(const common_options& opts) {
  auto config = adamcheck::experiment_config::from_file(opts.config_path);
  if (opts.seed) {
    config.oracle.base_seed = *opts.seed;
    config.raw["oracle"]["base_seed"] = *opts.seed;
  }
  if (opts.out_dir) {
    config.out_dir = *opts.out_dir;
  }
  if (opts.threads) {
    config.threads = *opts.threads;
  }
  return config;
}

void print_check(const adamcheck::check_report& check) {
  std::printf("  [%s] %-24s margin=%- .6g samples=%lld\n",
              check.pass ? "pass" : "FAIL", check.name.c_str(), check.margin,
              static_cast<long long>(check.samples));
}

int cmd_run(const common_options& opts) {
  const auto config = load(opts);
  const auto result = adamcheck::run_experiment(config);
  for (const auto& group : result.groups) {
    std::printf("horizon %lld: %zu seeds, %lld diverged, "
                "grad_l1_sum mean=%.6g, min_grad mean=%.6g\n",
                static_cast<long long>(group.horizon), group.seeds.size(),
                static_cast<long long>(group.diverged_count),
                group.grad_l1_sum.mean, group.min_grad_l2.mean);
    for (const auto& check : group.checks) {
      print_check(check);
    }
  }
  std::printf("outputs written to %s\n", config.out_dir.c_str());
  return result.all_checks_pass() ? 0 : 1;
}

int cmd_verify(const common_options& opts,
               const std::vector<std::string>& selected) {
  auto config = load(opts);
  if (!selected.empty()) {
    config.checks = selected;
  }
  if (config.checks.empty()) {
    std::fprintf(stderr, "verify: no checks selected (config 'checks' empty)\n");
    return 2;
  }
  const auto result = adamcheck::run_experiment(config);
  bool all_pass = true;
  for (const auto& group : result.groups) {
    std::printf("horizon %lld:\n", static_cast<long long>(group.horizon));
    for (const auto& check : group.checks) {
      print_check(check);
      all_pass = all_pass && check.pass;
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_rate(const common_options& opts) {
  const auto config = load(opts);
  const auto report = adamcheck::rate_experiment(config);
  for (const auto& warning : report.warnings) {
    std::printf("warning: %s\n", warning.c_str());
  }
  for (const auto& p : report.points) {
    std::printf("T=%-8lld empirical=%.6g (se %.2g)  rhs=%.6g  bound=%s\n",
                static_cast<long long>(p.horizon), p.empirical_min_grad,
                p.empirical_se, p.theoretical_rhs,
                p.bound_holds ? "holds" : "VIOLATED");
  }
  std::printf("empirical slope %.4f, theoretical slope %.4f\n",
              report.empirical_fit.slope, report.theoretical_fit.slope);
  const bool ok = report.bound_holds_everywhere &&
                  report.nonincreasing_within_se && report.warnings.empty();
  return ok ? 0 : 1;
}

int cmd_sweep(const common_options& opts) {
  const auto config = load(opts);
  const auto report = adamcheck::beta1_sweep(config);
  for (const auto& row : report.rows) {
    std::printf("beta1=%-8.6g loss=%.6g +- %.2g (%lld diverged)\n", row.beta1,
                row.mean_final_loss, row.se_final_loss,
                static_cast<long long>(row.diverged));
  }
  std::printf("trend: loss(beta1=%g) - loss(beta1=%g) = %.6g (3 SE = %.6g) -> %s\n",
              report.high_beta1, report.moderate_beta1, report.separation,
              3.0 * report.separation_se, report.trend_pass ? "pass" : "FAIL");
  return report.trend_pass ? 0 : 1;
}

int cmd_equiv(const common_options& opts) {
  const auto config = load(opts);
  const auto check = adamcheck::equivalence_experiment(config);
  print_check(check);
  return check.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-optimizer experiment harness and property verifier"};
  app.require_subcommand(1);

  common_options run_opts, verify_opts, rate_opts, sweep_opts, equiv_opts;
  std::vector<std::string> selected_checks;

  auto* run = app.add_subcommand("run", "run a config and emit results");
  add_common(run, run_opts);
  auto* verify =
      app.add_subcommand("verify", "run the selected property checks");
  add_common(verify, verify_opts);
  verify->add_option("--check", selected_checks,
                     "check name (repeatable; overrides the config list)");
  auto* rate = app.add_subcommand("rate", "horizon scan with slope fits");
  add_common(rate, rate_opts);
  auto* sweep = app.add_subcommand("sweep", "beta1 sweep of final loss");
  add_common(sweep, sweep_opts);
  auto* equiv =
      app.add_subcommand("equiv", "dyn-Adam vs AdaGrad shared-stream run");
  add_common(equiv, equiv_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (verify->parsed()) return cmd_verify(verify_opts, selected_checks);
    if (rate->parsed()) return cmd_rate(rate_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (equiv->parsed()) return cmd_equiv(equiv_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

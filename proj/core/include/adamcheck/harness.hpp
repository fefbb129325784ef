#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adamcheck/bounds.hpp"
#include "adamcheck/config.hpp"
#include "adamcheck/emit.hpp"
#include "adamcheck/verify.hpp"

namespace adamcheck {

struct seed_summary {
  std::uint64_t trajectory_id = 0;
  double final_loss = 0.0;
  double final_grad_l2 = 0.0;
  double min_grad_l2 = 0.0;
  double grad_l1_sum = 0.0;
  std::int64_t output_index = 0;
  double output_grad_l2 = 0.0;
  std::vector<double> output_w;
  bool diverged = false;
  std::int64_t divergence_step = 0;
};

struct aggregate {
  double mean = 0.0;
  double se = 0.0;
};

// Per-horizon cell group: seed rows in canonical (config) order plus
// aggregates recomputable from them.
struct horizon_group {
  std::int64_t horizon = 0;
  std::vector<seed_summary> seeds;
  aggregate final_loss, min_grad_l2, grad_l1_sum, output_grad_l2;
  std::int64_t diverged_count = 0;
  nlohmann::json bound;  // per-term breakdown when a bound applies
  std::vector<check_report> checks;
};

struct run_result {
  std::vector<horizon_group> groups;

  bool all_checks_pass() const;
  bool any_diverged() const;
  nlohmann::json to_json() const;
};

/// Executes every (horizon, seed) cell, runs the selected checks, and writes
/// summary.json, seeds.csv, checks.json (when checks ran) and per-trajectory
/// CSVs (when requested) under config.out_dir.
run_result run_experiment(const experiment_config& config);

struct rate_point {
  std::int64_t horizon = 0;
  double empirical_min_grad = 0.0;
  double empirical_se = 0.0;
  double output_grad_mean = 0.0;
  double output_grad_se = 0.0;
  double theoretical_rhs = 0.0;
  bool bound_holds = false;
  std::int64_t diverged = 0;
};

struct rate_report {
  std::vector<rate_point> points;
  rate_fit empirical_fit;
  rate_fit theoretical_fit;
  bool nonincreasing_within_se = false;
  bool bound_holds_everywhere = false;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Horizon scan under the horizon-scaled schedule: per horizon the ensemble
/// mean of min_t ||grad f(w_t)|| and of ||grad f(w_r)||, the output-iterate
/// bound, and log-log slope fits of both curves. Writes rate.json, rate.csv
/// and rate.svg.
rate_report rate_experiment(const experiment_config& config);

struct sweep_row {
  double beta1 = 0.0;
  double mean_final_loss = 0.0;
  double se_final_loss = 0.0;
  std::int64_t diverged = 0;
};

struct sweep_report {
  std::vector<sweep_row> rows;  // sorted by beta1
  double high_beta1 = 0.0;
  double moderate_beta1 = 0.0;
  double separation = 0.0;     // loss(high) - loss(moderate)
  double separation_se = 0.0;  // combined standard error
  bool trend_pass = false;     // separation >= 3 combined SE

  nlohmann::json to_json() const;
};

/// Final-loss table over beta1 values with eta, beta2, horizon fixed; the
/// trend verdict compares the largest beta1 against the one closest to 0.5.
/// Writes sweep.json and sweep.csv.
sweep_report beta1_sweep(const experiment_config& config);

/// Shared-stream equivalence run between dynamical-rate Adam and AdaGrad at
/// the config's dimension and horizon. Writes equiv.json.
check_report equivalence_experiment(const experiment_config& config);

}  // namespace adamcheck

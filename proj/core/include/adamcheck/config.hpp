#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adamcheck/oracles.hpp"

namespace adamcheck {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct objective_config {
  std::string kind;             // "quadratic" | "logistic"
  std::vector<double> scales;   // quadratic
  std::int64_t samples = 0;     // logistic
  std::int64_t features = 0;    // logistic
  std::uint64_t data_seed = 0;  // logistic

  std::size_t dimension() const;
};

struct schedule_config {
  std::string variant;  // "constant" | "horizon_scaled" | "dynamic"
  double eta = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
  std::vector<double> eta_table, beta1_table, beta2_table;
};

// One experiment document, schema version 1. Parsing is strict: any unknown
// key is rejected with its name, so config typos cannot silently change an
// experiment.
struct experiment_config {
  int schema_version = 1;
  objective_config objective;
  oracle_spec oracle;
  std::string optimizer = "adam";  // "adam" | "adagrad" | "sgd"
  schedule_config schedule;
  std::vector<std::int64_t> horizons;
  std::vector<double> start_point;
  std::vector<double> nu0;  // broadcast already resolved
  std::vector<double> m0;
  std::vector<std::uint64_t> seed_ids;
  std::vector<std::string> checks;
  std::vector<double> beta1_list;
  bool emit_trajectories = false;
  int threads = 1;  // 0 = hardware concurrency
  std::string out_dir = "out";

  nlohmann::json raw;  // the resolved document, echoed into outputs

  static experiment_config from_json(const nlohmann::json& doc);
  static experiment_config from_file(const std::filesystem::path& path);
};

/// Builds the configured objective with the start point already bound.
objective build_objective(const experiment_config& config);

}  // namespace adamcheck

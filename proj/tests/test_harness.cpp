#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "adamcheck/harness.hpp"

using namespace adamcheck;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("adamcheck_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json base_config() {
  return {
      {"schema_version", 1},
      {"objective", {{"kind", "quadratic"}, {"scales", {0.5, 0.5}}}},
      {"oracle",
       {{"kind", "gaussian_bounded"}, {"sigma0", 1.0}, {"base_seed", 321}}},
      {"optimizer", "adam"},
      {"schedule",
       {{"variant", "constant"}, {"eta", 0.01}, {"beta1", 0.9}, {"beta2", 0.999}}},
      {"horizon", 40},
      {"start_point", {1.0, 1.0}},
      {"nu0", 1.0},
      {"seeds", {{"count", 4}}},
  };
}

}  // namespace

TEST_CASE("config parsing is strict") {
  SUBCASE("valid document parses") {
    const experiment_config config = experiment_config::from_json(base_config());
    CHECK(config.objective.dimension() == 2);
    CHECK(config.seed_ids.size() == 4);
    CHECK(config.nu0 == std::vector<double>{1.0, 1.0});
    CHECK(config.horizons == std::vector<std::int64_t>{40});
  }
  SUBCASE("unknown top-level key is rejected by name") {
    nlohmann::json doc = base_config();
    doc["typo_key"] = 1;
    try {
      experiment_config::from_json(doc);
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
    }
  }
  SUBCASE("unknown nested key is rejected by name") {
    nlohmann::json doc = base_config();
    doc["oracle"]["sigma2"] = 1.0;
    try {
      experiment_config::from_json(doc);
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("sigma2") != std::string::npos);
    }
  }
  SUBCASE("missing required key is rejected") {
    nlohmann::json doc = base_config();
    doc.erase("start_point");
    CHECK_THROWS_AS(experiment_config::from_json(doc), config_error);
  }
  SUBCASE("start_point fill form broadcasts") {
    nlohmann::json doc = base_config();
    doc["start_point"] = {{"fill", 2.5}};
    const experiment_config config = experiment_config::from_json(doc);
    CHECK(config.start_point == std::vector<double>{2.5, 2.5});
  }
  SUBCASE("nu0 length mismatch is rejected") {
    nlohmann::json doc = base_config();
    doc["nu0"] = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(experiment_config::from_json(doc), config_error);
  }
  SUBCASE("horizon and horizon_list are exclusive") {
    nlohmann::json doc = base_config();
    doc["horizon_list"] = {10, 20};
    CHECK_THROWS_AS(experiment_config::from_json(doc), config_error);
    doc.erase("horizon");
    CHECK_NOTHROW(experiment_config::from_json(doc));
  }
  SUBCASE("unknown check name is rejected") {
    nlohmann::json doc = base_config();
    doc["checks"] = {"update_bound", "not_a_check"};
    try {
      experiment_config::from_json(doc);
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("not_a_check") != std::string::npos);
    }
  }
  SUBCASE("explicit seed ids are honored") {
    nlohmann::json doc = base_config();
    doc["seeds"] = {{"ids", {7, 9, 11}}};
    const experiment_config config = experiment_config::from_json(doc);
    CHECK(config.seed_ids == std::vector<std::uint64_t>{7, 9, 11});
  }
  SUBCASE("dynamic tables must match the horizon") {
    nlohmann::json doc = base_config();
    doc["schedule"] = {{"variant", "dynamic"},
                       {"eta", {0.1, 0.1}},
                       {"beta1", {0.0, 0.0}},
                       {"beta2", {0.5, 0.5}}};
    CHECK_THROWS_AS(experiment_config::from_json(doc), config_error);
    doc["horizon"] = 2;
    CHECK_NOTHROW(experiment_config::from_json(doc));
  }
}

TEST_CASE("run_experiment is deterministic and aggregates exactly") {
  nlohmann::json doc = base_config();
  doc["checks"] = {"update_bound", "surrogate_recursion"};
  doc["emit_trajectories"] = true;

  const fs::path dir_a = fresh_dir("run_a");
  const fs::path dir_b = fresh_dir("run_b");

  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir_a.string();
  const run_result result = run_experiment(config);

  config.out_dir = dir_b.string();
  run_experiment(config);

  SUBCASE("emitted bytes are identical across re-runs") {
    for (const char* name : {"summary.json", "seeds.csv", "checks.json"}) {
      CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    CHECK(slurp(dir_a / "traj_T40_seed0.csv") ==
          slurp(dir_b / "traj_T40_seed0.csv"));
  }
  SUBCASE("parallel execution emits the same bytes as serial") {
    const fs::path dir_c = fresh_dir("run_c");
    config.out_dir = dir_c.string();
    config.threads = 3;
    run_experiment(config);
    CHECK(slurp(dir_a / "summary.json") == slurp(dir_c / "summary.json"));
    CHECK(slurp(dir_a / "seeds.csv") == slurp(dir_c / "seeds.csv"));
  }
  SUBCASE("aggregates equal the mean of the per-seed column") {
    const horizon_group& group = result.groups.at(0);
    double sum = 0.0;
    for (const auto& row : group.seeds) {
      sum += row.grad_l1_sum;
    }
    CHECK(group.grad_l1_sum.mean ==
          doctest::Approx(sum / group.seeds.size()).epsilon(1e-15));
  }
  SUBCASE("checks ran and passed") {
    CHECK(result.all_checks_pass());
    CHECK(result.groups.at(0).checks.size() == 2);
  }
  SUBCASE("summary json round-trips through its own file") {
    const nlohmann::json parsed =
        nlohmann::json::parse(slurp(dir_a / "summary.json"));
    nlohmann::json expected = result.to_json();
    expected["config"] = config.raw;
    // the file was written from the dir_a run; out_dir is not part of raw
    CHECK(parsed == expected);
  }
}

TEST_CASE("exact oracle with one seed is reproducible") {
  nlohmann::json doc = base_config();
  doc["oracle"] = {{"kind", "exact"}};
  doc["seeds"] = {{"count", 1}};
  doc["horizon"] = 10;
  const fs::path dir = fresh_dir("exact");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  const run_result first = run_experiment(config);
  const run_result second = run_experiment(config);
  CHECK(first.to_json() == second.to_json());
}

TEST_CASE("trajectory csv carries the documented header") {
  const objective obj = make_quadratic({1.0});
  oracle_spec oracle;
  oracle.kind = oracle_kind::exact;
  hyper_params hp;
  hp.eta = 0.1;
  hp.beta1 = 0.0;
  hp.beta2 = 0.5;
  hp.horizon = 3;
  hp.nu0 = {1.0};
  const trajectory traj =
      adam_run(obj, oracle, schedule::constant(hp), {1.0}, 0);
  const fs::path path = fresh_dir("csv") / "traj.csv";
  emit_trajectory_csv(traj, path);
  const std::string body = slurp(path);
  CHECK(body.rfind("t,f,grad_l2,grad_l1,update_max,nu_min,nu_max,nu_tilde_min,xi\n",
                   0) == 0);
  // header plus one row per step
  CHECK(std::count(body.begin(), body.end(), '\n') == 4);
}

TEST_CASE("diverged-at-start trajectory emits a header-only csv") {
  const objective obj = make_quadratic({1e300});
  oracle_spec oracle;
  oracle.kind = oracle_kind::exact;
  hyper_params hp;
  hp.eta = 0.1;
  hp.beta1 = 0.0;
  hp.beta2 = 0.5;
  hp.horizon = 3;
  hp.nu0 = {1.0};
  const trajectory traj =
      adam_run(obj, oracle, schedule::constant(hp), {1e10}, 0);
  REQUIRE(traj.divergence.has_value());
  const fs::path path = fresh_dir("csv_empty") / "traj.csv";
  emit_trajectory_csv(traj, path);
  CHECK(slurp(path) ==
        std::string(kTrajectoryCsvHeader) + "\n");
}

TEST_CASE("svg plot has one path per series and labelled axes") {
  const plot_series a{"first", {{1e2, 1.0}, {1e3, 0.5}, {1e4, 0.2}}};
  const plot_series b{"second", {{1e2, 2.0}, {1e3, 1.0}, {1e4, 0.6}}};
  const std::string svg = render_svg_plot({a, b}, "horizon T", "metric");
  std::size_t paths = 0;
  for (std::size_t pos = svg.find("<path"); pos != std::string::npos;
       pos = svg.find("<path", pos + 1)) {
    ++paths;
  }
  CHECK(paths == 2);
  CHECK(svg.find("horizon T") != std::string::npos);
  CHECK(svg.find("metric") != std::string::npos);
  CHECK(svg.find("first") != std::string::npos);
  CHECK(svg.find("second") != std::string::npos);

  CHECK_THROWS_AS(
      render_svg_plot({plot_series{"bad", {{1.0, -1.0}}}}, "x", "y"),
      std::invalid_argument);
}

TEST_CASE("rate experiment produces fits, files and bound verdicts") {
  nlohmann::json doc = base_config();
  doc.erase("horizon");
  doc["horizon_list"] = {64, 128, 256, 512};
  doc["schedule"] = {{"variant", "horizon_scaled"}, {"a", 0.1}, {"b", 1.0}};
  doc["objective"] = {{"kind", "quadratic"},
                      {"scales", nlohmann::json::array({0.1, 0.1})}};
  doc["oracle"] = {{"kind", "gaussian_bounded"},
                   {"sigma0", 0.05},
                   {"base_seed", 77}};
  doc["start_point"] = {0.2, 0.2};
  doc["nu0"] = 2.5;
  doc["seeds"] = {{"count", 32}};
  const fs::path dir = fresh_dir("rate");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();

  const rate_report report = rate_experiment(config);
  CHECK(report.points.size() == 4);
  CHECK(report.bound_holds_everywhere);
  CHECK(report.warnings.empty());
  CHECK(report.theoretical_fit.slope < 0.0);
  for (const auto& p : report.points) {
    CHECK(p.empirical_min_grad <= p.theoretical_rhs);
  }
  CHECK(fs::exists(dir / "rate.json"));
  CHECK(fs::exists(dir / "rate.csv"));
  CHECK(fs::exists(dir / "rate.svg"));
}

TEST_CASE("adagrad config runs with a zero initial accumulator") {
  nlohmann::json doc = base_config();
  doc["optimizer"] = "adagrad";
  doc["schedule"] = {{"variant", "constant"}, {"eta", 0.5}};
  doc["nu0"] = 0.0;
  doc["horizon"] = 200;
  const fs::path dir = fresh_dir("adagrad");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  const run_result result = run_experiment(config);
  const horizon_group& group = result.groups.at(0);
  CHECK(group.diverged_count == 0);
  // the accumulator path actually optimizes
  CHECK(group.min_grad_l2.mean < 0.5);
  CHECK(group.bound.is_null());
}

TEST_CASE("horizon-scaled runs attach the output-iterate bound and check") {
  nlohmann::json doc = base_config();
  doc["schedule"] = {{"variant", "horizon_scaled"}, {"a", 0.1}, {"b", 1.0}};
  doc["horizon"] = 128;
  doc["seeds"] = {{"count", 32}};
  doc["checks"] = {"output_grad_bound"};
  const fs::path dir = fresh_dir("hscaled");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  const run_result result = run_experiment(config);
  const horizon_group& group = result.groups.at(0);
  CHECK(group.bound.at("kind") == "output_grad_bound");
  CHECK(group.bound.at("terms").contains("leading_coefficient"));
  REQUIRE(group.checks.size() == 1);
  CHECK(group.checks.at(0).pass);
}

TEST_CASE("rate experiment rejects a scan with no usable horizons") {
  // every cell overflows at the first evaluation, so every horizon is
  // excluded with a warning and the scan cannot be fitted
  nlohmann::json doc = base_config();
  doc.erase("horizon");
  doc["horizon_list"] = {64, 128, 256};
  doc["schedule"] = {{"variant", "horizon_scaled"}, {"a", 0.1}, {"b", 1.0}};
  doc["objective"] = {{"kind", "quadratic"},
                      {"scales", nlohmann::json::array({1e300, 1e300})}};
  doc["start_point"] = {1e10, 1e10};
  doc["seeds"] = {{"count", 4}};
  const fs::path dir = fresh_dir("rate_div");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  try {
    rate_experiment(config);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("excluded") != std::string::npos);
  }
}

TEST_CASE("beta1 sweep orders rows and detects duplicates deterministically") {
  nlohmann::json doc = base_config();
  doc["objective"] = {{"kind", "logistic"},
                      {"samples", 32},
                      {"features", 4},
                      {"data_seed", 7}};
  doc["oracle"] = {{"kind", "gaussian_bounded"},
                   {"sigma0", 0.5},
                   {"base_seed", 11}};
  doc["schedule"] = {{"variant", "constant"}, {"eta", 0.05}, {"beta2", 0.999}};
  doc["horizon"] = 60;
  doc["start_point"] = {{"fill", 0.0}};
  doc["seeds"] = {{"count", 8}};
  doc["beta1_list"] = {0.9, 0.5, 0.5};
  const fs::path dir = fresh_dir("sweep");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();

  const sweep_report report = beta1_sweep(config);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].beta1 == 0.5);
  CHECK(report.rows[1].beta1 == 0.5);
  CHECK(report.rows[2].beta1 == 0.9);
  // duplicate beta1 entries are bit-identical
  CHECK(report.rows[0].mean_final_loss == report.rows[1].mean_final_loss);
  CHECK(report.rows[0].se_final_loss == report.rows[1].se_final_loss);
  CHECK(fs::exists(dir / "sweep.json"));
  CHECK(fs::exists(dir / "sweep.csv"));
}

TEST_CASE("equivalence experiment emits a passing report") {
  nlohmann::json doc = base_config();
  doc["objective"] = {{"kind", "quadratic"},
                      {"scales", nlohmann::json::array(
                                     {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
                                      1.0, 1.0})}};
  doc["start_point"] = {{"fill", 0.0}};
  doc["schedule"] = {{"variant", "constant"}, {"eta", 1.0}, {"beta2", 0.999}};
  doc["horizon"] = 1000;
  const fs::path dir = fresh_dir("equiv");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  const check_report report = equivalence_experiment(config);
  CHECK(report.pass);
  CHECK(report.witness["max_diff"].get<double>() <= 1e-9);
  CHECK(fs::exists(dir / "equiv.json"));
}

TEST_CASE("checks that need other optimizers or schedules fail cleanly") {
  nlohmann::json doc = base_config();
  doc["optimizer"] = "sgd";
  doc["schedule"] = {{"variant", "constant"}, {"eta", 0.1}};
  doc["checks"] = {"update_bound"};
  const fs::path dir = fresh_dir("wrongopt");
  experiment_config config = experiment_config::from_json(doc);
  config.out_dir = dir.string();
  const run_result result = run_experiment(config);
  REQUIRE(result.groups.at(0).checks.size() == 1);
  CHECK(!result.groups.at(0).checks.at(0).pass);
  CHECK(!result.all_checks_pass());
}

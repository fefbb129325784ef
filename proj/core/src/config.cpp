#include "adamcheck/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace adamcheck {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) {
      throw config_error("config error: unknown key \"" + key + "\" in " +
                         where);
    }
  }
}

const json& require(const json& obj, const std::string& where,
                    const std::string& key) {
  if (!obj.contains(key)) {
    throw config_error("config error: missing key \"" + key + "\" in " + where);
  }
  return obj.at(key);
}

std::vector<double> number_array(const json& value, const std::string& where) {
  if (!value.is_array()) {
    throw config_error("config error: " + where + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) {
    if (!v.is_number()) {
      throw config_error("config error: " + where + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

// A scalar broadcasts to the objective dimension; an array must match it.
std::vector<double> broadcast_field(const json& value, std::size_t dim,
                                    const std::string& where) {
  if (value.is_number()) {
    return std::vector<double>(dim, value.get<double>());
  }
  std::vector<double> out = number_array(value, where);
  if (out.size() != dim) {
    throw config_error("config error: " + where + " length " +
                       std::to_string(out.size()) +
                       " does not match objective dimension " +
                       std::to_string(dim));
  }
  return out;
}

objective_config parse_objective(const json& obj) {
  if (!obj.is_object()) {
    throw config_error("config error: objective must be an object");
  }
  objective_config out;
  out.kind = require(obj, "objective", "kind").get<std::string>();
  if (out.kind == "quadratic") {
    reject_unknown_keys(obj, "objective", {"kind", "scales"});
    out.scales = number_array(require(obj, "objective", "scales"),
                              "objective.scales");
  } else if (out.kind == "logistic") {
    reject_unknown_keys(obj, "objective",
                        {"kind", "samples", "features", "data_seed"});
    out.samples = require(obj, "objective", "samples").get<std::int64_t>();
    out.features = require(obj, "objective", "features").get<std::int64_t>();
    out.data_seed = require(obj, "objective", "data_seed").get<std::uint64_t>();
    if (out.samples < 1 || out.features < 1) {
      throw config_error("config error: logistic sizes must be positive");
    }
  } else {
    throw config_error("config error: unknown objective kind \"" + out.kind +
                       "\"");
  }
  return out;
}

oracle_spec parse_oracle(const json& obj) {
  if (!obj.is_object()) {
    throw config_error("config error: oracle must be an object");
  }
  reject_unknown_keys(obj, "oracle",
                      {"kind", "sigma0", "sigma1", "rho", "base_seed"});
  oracle_spec out;
  out.kind = oracle_kind_from_string(
      require(obj, "oracle", "kind").get<std::string>());
  if (obj.contains("sigma0")) out.sigma0 = obj.at("sigma0").get<double>();
  if (obj.contains("sigma1")) out.sigma1 = obj.at("sigma1").get<double>();
  if (obj.contains("rho")) out.rho = obj.at("rho").get<double>();
  if (obj.contains("base_seed")) {
    out.base_seed = obj.at("base_seed").get<std::uint64_t>();
  }
  validate(out);
  return out;
}

schedule_config parse_schedule(const json& obj) {
  if (!obj.is_object()) {
    throw config_error("config error: schedule must be an object");
  }
  schedule_config out;
  out.variant = require(obj, "schedule", "variant").get<std::string>();
  if (out.variant == "constant") {
    reject_unknown_keys(obj, "schedule", {"variant", "eta", "beta1", "beta2"});
    out.eta = require(obj, "schedule", "eta").get<double>();
    out.beta1 = obj.value("beta1", 0.0);
    out.beta2 = obj.value("beta2", 0.999);
  } else if (out.variant == "horizon_scaled") {
    reject_unknown_keys(obj, "schedule", {"variant", "a", "b", "c"});
    out.a = require(obj, "schedule", "a").get<double>();
    out.b = require(obj, "schedule", "b").get<double>();
    out.c = obj.value("c", 0.0);
  } else if (out.variant == "dynamic") {
    reject_unknown_keys(obj, "schedule", {"variant", "eta", "beta1", "beta2"});
    out.eta_table = number_array(require(obj, "schedule", "eta"), "schedule.eta");
    out.beta1_table =
        number_array(require(obj, "schedule", "beta1"), "schedule.beta1");
    out.beta2_table =
        number_array(require(obj, "schedule", "beta2"), "schedule.beta2");
  } else {
    throw config_error("config error: unknown schedule variant \"" +
                       out.variant + "\"");
  }
  return out;
}

const std::set<std::string> kKnownChecks = {
    "update_bound",    "surrogate_recursion", "conditioner_root_sum",
    "grad_sum_bound",  "output_grad_bound",   "ratio_sum",
    "momentum_ratio_sum", "adagrad_equivalence",
};

}  // namespace

std::size_t objective_config::dimension() const {
  return kind == "quadratic" ? scales.size()
                             : static_cast<std::size_t>(features);
}

experiment_config experiment_config::from_json(const json& doc) {
  if (!doc.is_object()) {
    throw config_error("config error: document must be a JSON object");
  }
  reject_unknown_keys(doc, "document",
                      {"schema_version", "objective", "oracle", "optimizer",
                       "schedule", "horizon", "horizon_list", "start_point",
                       "nu0", "m0", "seeds", "checks", "beta1_list",
                       "emit_trajectories", "threads", "out_dir"});

  experiment_config out;
  out.raw = doc;
  out.schema_version = doc.value("schema_version", 1);
  if (out.schema_version != 1) {
    throw config_error("config error: unsupported schema_version " +
                       std::to_string(out.schema_version));
  }
  out.objective = parse_objective(require(doc, "document", "objective"));
  out.oracle = parse_oracle(require(doc, "document", "oracle"));
  out.optimizer = doc.value("optimizer", std::string("adam"));
  if (out.optimizer != "adam" && out.optimizer != "adagrad" &&
      out.optimizer != "sgd") {
    throw config_error("config error: unknown optimizer \"" + out.optimizer +
                       "\"");
  }
  out.schedule = parse_schedule(require(doc, "document", "schedule"));

  if (doc.contains("horizon") == doc.contains("horizon_list")) {
    throw config_error(
        "config error: exactly one of horizon / horizon_list is required");
  }
  if (doc.contains("horizon")) {
    out.horizons = {doc.at("horizon").get<std::int64_t>()};
  } else {
    for (const auto& v : doc.at("horizon_list")) {
      out.horizons.push_back(v.get<std::int64_t>());
    }
  }
  for (std::int64_t t : out.horizons) {
    if (t < 1) {
      throw config_error("config error: horizons must be >= 1");
    }
  }

  const std::size_t dim = out.objective.dimension();
  const json& start = require(doc, "document", "start_point");
  if (start.is_object()) {
    reject_unknown_keys(start, "start_point", {"fill"});
    out.start_point.assign(dim, require(start, "start_point", "fill").get<double>());
  } else {
    out.start_point = number_array(start, "start_point");
    if (out.start_point.size() != dim) {
      throw config_error("config error: start_point length does not match "
                         "objective dimension");
    }
  }
  out.nu0 = doc.contains("nu0")
                ? broadcast_field(doc.at("nu0"), dim, "nu0")
                : std::vector<double>(dim, 1.0);
  out.m0 = doc.contains("m0") ? broadcast_field(doc.at("m0"), dim, "m0")
                              : std::vector<double>(dim, 0.0);

  const json& seeds = require(doc, "document", "seeds");
  if (!seeds.is_object()) {
    throw config_error("config error: seeds must be an object");
  }
  reject_unknown_keys(seeds, "seeds", {"count", "ids"});
  if (seeds.contains("ids")) {
    for (const auto& v : seeds.at("ids")) {
      out.seed_ids.push_back(v.get<std::uint64_t>());
    }
  } else if (seeds.contains("count")) {
    const auto count = seeds.at("count").get<std::int64_t>();
    if (count < 1) {
      throw config_error("config error: seeds.count must be >= 1");
    }
    for (std::int64_t i = 0; i < count; ++i) {
      out.seed_ids.push_back(static_cast<std::uint64_t>(i));
    }
  } else {
    throw config_error("config error: seeds requires count or ids");
  }

  if (doc.contains("checks")) {
    for (const auto& v : doc.at("checks")) {
      const auto name = v.get<std::string>();
      if (!kKnownChecks.contains(name)) {
        throw config_error("config error: unknown check \"" + name + "\"");
      }
      out.checks.push_back(name);
    }
  }
  if (doc.contains("beta1_list")) {
    out.beta1_list = number_array(doc.at("beta1_list"), "beta1_list");
    for (double b : out.beta1_list) {
      if (!(b >= 0.0 && b < 1.0)) {
        throw config_error("config error: beta1_list entries must lie in [0, 1)");
      }
    }
  }
  out.emit_trajectories = doc.value("emit_trajectories", false);
  out.threads = doc.value("threads", 1);
  if (out.threads < 0) {
    throw config_error("config error: threads must be >= 0");
  }
  out.out_dir = doc.value("out_dir", std::string("out"));

  if (!out.schedule.eta_table.empty()) {
    if (out.horizons.size() != 1 ||
        out.schedule.eta_table.size() !=
            static_cast<std::size_t>(out.horizons[0])) {
      throw config_error(
          "config error: dynamic schedule tables must match the single horizon");
    }
  }
  return out;
}

experiment_config experiment_config::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("config error: cannot open " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw config_error("config error: " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

objective build_objective(const experiment_config& config) {
  objective obj = config.objective.kind == "quadratic"
                      ? make_quadratic(config.objective.scales)
                      : make_synthetic_logistic(
                            static_cast<std::size_t>(config.objective.samples),
                            static_cast<std::size_t>(config.objective.features),
                            config.objective.data_seed);
  obj.bind_start(config.start_point);
  return obj;
}

}  // namespace adamcheck

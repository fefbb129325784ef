#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adamcheck/optimizers.hpp"

namespace adamcheck {

/// Fixed trajectory CSV column order.
inline constexpr const char* kTrajectoryCsvHeader =
    "t,f,grad_l2,grad_l1,update_max,nu_min,nu_max,nu_tilde_min,xi";

/// Shortest round-trip decimal form; identical across runs.
std::string format_double(double v);

/// One row per recorded step under the fixed header.
void emit_trajectory_csv(const trajectory& traj,
                         const std::filesystem::path& path);

void emit_json(const nlohmann::json& doc, const std::filesystem::path& path);

void emit_text(const std::string& body, const std::filesystem::path& path);

struct plot_series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Static log-log line chart: one path element per series, labelled axes,
/// decade gridlines. All coordinates must be strictly positive.
std::string render_svg_plot(const std::vector<plot_series>& series,
                            const std::string& x_label,
                            const std::string& y_label);

void emit_svg_plot(const std::vector<plot_series>& series,
                   const std::string& x_label, const std::string& y_label,
                   const std::filesystem::path& path);

}  // namespace adamcheck

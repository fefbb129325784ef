#include "adamcheck/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adamcheck/vec.hpp"

namespace adamcheck {

namespace {

void write_file(const std::string& body, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("emit: cannot open " + path.string());
  }
  out << body;
  if (!out) {
    throw std::runtime_error("emit: write failed for " + path.string());
  }
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

void emit_trajectory_csv(const trajectory& traj,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& step : traj.steps) {
    out << step.t << ',' << format_double(step.loss) << ','
        << format_double(step.grad_l2) << ',' << format_double(step.grad_l1)
        << ',' << format_double(step.update_max) << ','
        << format_double(min_of(step.nu)) << ',' << format_double(max_of(step.nu))
        << ',' << format_double(min_of(step.nu_tilde)) << ','
        << format_double(step.xi) << '\n';
  }
  write_file(out.str(), path);
}

void emit_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  write_file(doc.dump(2) + "\n", path);
}

void emit_text(const std::string& body, const std::filesystem::path& path) {
  write_file(body, path);
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 60.0;

const char* series_color(std::size_t index) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  return palette[index % 6];
}

}  // namespace

std::string render_svg_plot(const std::vector<plot_series>& series,
                            const std::string& x_label,
                            const std::string& y_label) {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) {
        throw std::invalid_argument(
            "render_svg_plot: log-log chart needs positive coordinates");
      }
      const double lx = std::log10(x);
      const double ly = std::log10(y);
      if (first) {
        x_lo = x_hi = lx;
        y_lo = y_hi = ly;
        first = false;
      } else {
        x_lo = std::min(x_lo, lx);
        x_hi = std::max(x_hi, lx);
        y_lo = std::min(y_lo, ly);
        y_hi = std::max(y_hi, ly);
      }
    }
  }
  if (first) {
    throw std::invalid_argument("render_svg_plot: no points");
  }
  if (x_hi - x_lo < 1e-9) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi - y_lo < 1e-9) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double x_pad = 0.04 * (x_hi - x_lo);
  const double y_pad = 0.06 * (y_hi - y_lo);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double lx) {
    return kMarginLeft + (lx - x_lo) / (x_hi - x_lo) * plot_w;
  };
  auto sy = [&](double ly) {
    return kMarginTop + (y_hi - ly) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Decade gridlines with power-of-ten tick labels.
  for (int e = static_cast<int>(std::ceil(x_lo));
       e <= static_cast<int>(std::floor(x_hi)); ++e) {
    const double px = sx(e);
    svg << "  <line x1=\"" << px << "\" y1=\"" << kMarginTop << "\" x2=\"" << px
        << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << px << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(y_lo));
       e <= static_cast<int>(std::floor(y_hi)); ++e) {
    const double py = sy(e);
    svg << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << py << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << py
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << kMarginLeft - 6 << "\" y=\"" << py + 4
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }

  // Axes.
  svg << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h
      << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg << "  <text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << kHeight - 16 << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "  <text x=\"" << kMarginLeft << "\" y=\"" << kMarginTop - 10
      << "\" font-size=\"13\" text-anchor=\"start\">" << y_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    svg << "  <path fill=\"none\" stroke=\"" << series_color(k)
        << "\" stroke-width=\"2\" d=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double px = sx(std::log10(s.points[i].first));
      const double py = sy(std::log10(s.points[i].second));
      svg << (i == 0 ? 'M' : 'L') << px << ' ' << py << ' ';
    }
    svg << "\"/>\n";
    const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(k);
    svg << "  <line x1=\"" << kMarginLeft + plot_w + 10 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kMarginLeft + plot_w + 34 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << series_color(k) << "\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << kMarginLeft + plot_w + 40 << "\" y=\"" << ly
        << "\" font-size=\"12\">" << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg_plot(const std::vector<plot_series>& series,
                   const std::string& x_label, const std::string& y_label,
                   const std::filesystem::path& path) {
  write_file(render_svg_plot(series, x_label, y_label), path);
}

}  // namespace adamcheck

#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "relaycast/csv.hpp"

namespace relaycast::cli {
namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_number(std::round(v * 100.0) / 100.0); }

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

bool usable(double y, bool log_y) { return std::isfinite(y) && (!log_y || y > 0.0); }

}  // namespace

void write_svg(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !usable(y, spec.log_y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!(x_min < x_max)) {
    x_min = std::isfinite(x_min) ? x_min - 1.0 : 0.0;
    x_max = x_min + 2.0;
  }
  if (!(y_min <= y_max)) {
    y_min = spec.log_y ? 0.1 : 0.0;
    y_max = 1.0;
  }

  double lo;
  double hi;
  if (spec.log_y) {
    lo = std::floor(std::log10(y_min));
    hi = std::ceil(std::log10(y_max));
    if (lo == hi) hi = lo + 1.0;
  } else {
    const double pad = y_max > y_min ? 0.05 * (y_max - y_min) : 0.5;
    lo = y_min - pad;
    hi = y_max + pad;
  }

  const double w = spec.width;
  const double h = spec.height;
  const double plot_w = w - kLeft - kRight;
  const double plot_h = h - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) {
    const double v = spec.log_y ? std::log10(y) : y;
    return kTop + (hi - v) / (hi - lo) * plot_h;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";

  // Grid and ticks.
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const double x_step = nice_step(x_max - x_min);
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  }
  if (spec.log_y) {
    for (double d = lo; d <= hi; d += 1.0) {
      const double y = py(std::pow(10.0, d));
      out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft + plot_w)
          << "\" y2=\"" << num(y) << "\"/>\n";
    }
  }
  out << "</g>\n";
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << format_number(std::round(x * 1e6) / 1e6) << "</text>\n";
  }
  if (spec.log_y) {
    for (double d = lo; d <= hi; d += 1.0) {
      out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(std::pow(10.0, d)) + 4)
          << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
    }
  } else {
    const double y_step = nice_step(hi - lo);
    for (double y = std::ceil(lo / y_step) * y_step; y <= hi; y += y_step) {
      out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
          << "\" text-anchor=\"end\">" << format_number(std::round(y * 1e6) / 1e6) << "</text>\n";
    }
  }
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(h - 12)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(18 " << num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  for (const auto& s : series) {
    std::vector<std::string> runs(1);
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !usable(y, spec.log_y)) {
        if (!runs.back().empty()) runs.emplace_back();
        continue;
      }
      runs.back() += num(px(x)) + "," + num(py(y)) + " ";
    }
    for (const auto& run : runs) {
      if (run.empty()) continue;
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
      if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
      out << " points=\"" << run.substr(0, run.size() - 1) << "\"/>\n";
    }
  }

  double legend_y = kTop + 10;
  const double legend_x = kLeft + plot_w + 14;
  for (const auto& s : series) {
    out << "<line x1=\"" << num(legend_x) << "\" y1=\"" << num(legend_y) << "\" x2=\""
        << num(legend_x + 26) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"1.8\"";
    if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
    out << "/>\n<text x=\"" << num(legend_x + 32) << "\" y=\"" << num(legend_y + 4) << "\">"
        << escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace relaycast::cli

#include "sgnet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sgnet/error.hpp"

namespace sgnet {

std::string_view to_string(PlotKind kind) {
  return kind == PlotKind::ErrorVsDim ? "error_vs_dim" : "time_vs_dim";
}

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "error_vs_dim") return PlotKind::ErrorVsDim;
  if (name == "time_vs_dim") return PlotKind::TimeVsDim;
  throw InvalidArgument("unknown plot kind '" + std::string(name) + "' (error_vs_dim, time_vs_dim)");
}

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10 * mag;
}

}  // namespace

std::string render_svg(const std::vector<ResultsRow>& rows, PlotKind kind) {
  const bool log_y = kind == PlotKind::ErrorVsDim;
  std::map<std::string, Series> grouped;
  for (const auto& r : rows) {
    const double y = log_y ? r.rel_error : r.train_seconds;
    if (!std::isfinite(y) || (log_y && y <= 0.0)) continue;
    auto& s = grouped[r.experiment + " " + r.method];
    s.name = r.experiment + " " + r.method;
    s.points.emplace_back(static_cast<double>(r.M_plus_1), y);
  }
  if (grouped.empty()) throw InvalidArgument("no plottable rows");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& [_, s] : grouped) {
    std::stable_sort(s.points.begin(), s.points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  double y0, y1;
  if (log_y) {
    y0 = std::floor(std::log10(ymin));
    y1 = std::ceil(std::log10(ymax));
    if (y1 == y0) y1 = y0 + 1;
  } else {
    y0 = 0.0;
    y1 = ymax > 0 ? ymax * 1.1 : 1.0;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) {
    const double v = log_y ? std::log10(y) : y;
    return kTop + ph - (v - y0) / (y1 - y0) * ph;
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << (log_y ? "relative error vs system dimension" : "training time vs system dimension") << "</text>\n";

  // axes and ticks
  os << "<g stroke=\"#444\" fill=\"none\">\n"
     << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\"/>\n</g>\n<g fill=\"#222\">\n";
  const double xstep = std::max(1.0, nice_step(xmax - xmin, 6));
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep)
    os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(x)) << "\" y2=\""
       << num(kTop + ph + 5) << "\" stroke=\"#444\"/><text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 20)
       << "\" text-anchor=\"middle\">" << label(x) << "</text>\n";
  if (log_y) {
    for (double e = y0; e <= y1 + 1e-9; e += 1.0)
      os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(std::pow(10.0, e))) << "\" x2=\"" << num(kLeft)
         << "\" y2=\"" << num(py(std::pow(10.0, e))) << "\" stroke=\"#444\"/><text x=\"" << num(kLeft - 8)
         << "\" y=\"" << num(py(std::pow(10.0, e)) + 4) << "\" text-anchor=\"end\">1e" << label(e) << "</text>\n";
  } else {
    const double ystep = nice_step(y1 - y0, 5);
    for (double y = 0.0; y <= y1 + 1e-12; y += ystep)
      os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
         << num(py(y)) << "\" stroke=\"#444\"/><text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
         << "\" text-anchor=\"end\">" << label(y) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\">system dimension M+1</text>\n"
     << "<text transform=\"translate(20 " << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << (log_y ? "relative L2(H1) error" : "training time [s]") << "</text>\n</g>\n";

  // series
  std::size_t idx = 0;
  for (const auto& [_, s] : grouped) {
    const char* color = kColors[idx % (sizeof kColors / sizeof *kColors)];
    os << "<g class=\"series\" data-name=\"" << escape(s.name) << "\">\n";
    if (s.points.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i)
        os << (i ? " " : "") << num(px(s.points[i].first)) << ',' << num(py(s.points[i].second));
      os << "\"/>\n";
    }
    for (const auto& [x, y] : s.points)
      os << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(idx);
    os << "<line x1=\"" << num(kWidth - kRight + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(kWidth - kRight + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/><text x=\"" << num(kWidth - kRight + 46) << "\" y=\"" << num(ly + 4) << "\">"
       << escape(s.name) << "</text>\n</g>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

void plot_results(const std::string& csv_path, PlotKind kind, const std::string& svg_path) {
  const auto rows = read_results_file(csv_path);
  const std::string svg = render_svg(rows, kind);
  const auto parent = std::filesystem::path(svg_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(svg_path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + svg_path + "'");
  os << svg;
  if (!os) throw IoError("failed writing '" + svg_path + "'");
}

}  // namespace sgnet

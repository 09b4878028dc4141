#include "anyonlt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "anyonlt/error.hpp"

namespace anyonlt::svg {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

struct Frame {
  double xmin, xmax, ymin, ymax;
  bool log_x;
  double tx(double x) const {
    const double u = log_x ? std::log10(x) : x;
    const double a = log_x ? std::log10(xmin) : xmin, b = log_x ? std::log10(xmax) : xmax;
    return kLeft + (u - a) / (b - a) * (kWidth - kLeft - kRight);
  }
  double ty(double y) const { return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (hi > lo) return;
  const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
  lo -= pad;
  hi += pad;
}

void header(std::ostringstream& os, const Axes& axes) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << px(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(axes.title)
     << "</text>\n";
}

void frame_and_ticks(std::ostringstream& os, const Frame& f, const Axes& axes) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;
  os << "<rect x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\"" << px(x1 - x0) << "\" height=\"" << px(y1 - y0)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = t / 4.0;
    double xv = f.log_x ? std::pow(10.0, std::log10(f.xmin) + fx * (std::log10(f.xmax) - std::log10(f.xmin)))
                        : f.xmin + fx * (f.xmax - f.xmin);
    const double yv = f.ymin + fx * (f.ymax - f.ymin);
    os << "<text x=\"" << px(f.tx(xv)) << "\" y=\"" << px(y1 + 16) << "\" text-anchor=\"middle\">" << num(xv)
       << "</text>\n";
    os << "<text x=\"" << px(x0 - 6) << "\" y=\"" << px(f.ty(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << px((x0 + x1) / 2) << "\" y=\"" << px(kHeight - 12) << "\" text-anchor=\"middle\">"
     << escape(axes.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << px((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << px((y0 + y1) / 2) << ")\">" << escape(axes.y_label) << "</text>\n";
}

void validate(const Heatmap& map) {
  if (map.nx <= 0 || map.ny <= 0 || map.values.size() != static_cast<std::size_t>(map.nx) * map.ny)
    throw InvalidInput("heatmap is empty or its size does not match nx * ny");
  if (!(map.x1 > map.x0 && map.y1 > map.y0)) throw InvalidInput("heatmap extent is empty");
}

std::string color(double t) {
  // White to dark blue.
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * (1 - t) + 8 * t));
  const int g = static_cast<int>(std::lround(255 * (1 - t) + 48 * t));
  const int b = static_cast<int>(std::lround(255 * (1 - t) + 107 * t));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

void cells(std::ostringstream& os, const Heatmap& map, const Frame& f) {
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  const double span = *hi > *lo ? *hi - *lo : 1.0;
  const double dx = (map.x1 - map.x0) / map.nx, dy = (map.y1 - map.y0) / map.ny;
  for (int j = 0; j < map.ny; ++j)
    for (int i = 0; i < map.nx; ++i) {
      const double v = map.values[static_cast<std::size_t>(i + map.nx * j)];
      const double xa = f.tx(map.x0 + i * dx), xb = f.tx(map.x0 + (i + 1) * dx);
      const double ya = f.ty(map.y0 + (j + 1) * dy), yb = f.ty(map.y0 + j * dy);
      os << "<rect x=\"" << px(xa) << "\" y=\"" << px(ya) << "\" width=\"" << px(xb - xa + 0.3) << "\" height=\""
         << px(yb - ya + 0.3) << "\" fill=\"" << color((v - *lo) / span) << "\"/>\n";
    }
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const Axes& axes) {
  if (series.empty()) throw InvalidInput("line plot needs at least one series");
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), axes.log_x};
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) throw InvalidInput("series '" + s.label + "' is empty or ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (axes.log_x && !(s.x[i] > 0.0)) throw InvalidInput("log axis needs positive x values");
      f.xmin = std::min(f.xmin, s.x[i]);
      f.xmax = std::max(f.xmax, s.x[i]);
      f.ymin = std::min(f.ymin, s.y[i]);
      f.ymax = std::max(f.ymax, s.y[i]);
    }
  }
  if (f.log_x && !(f.xmax > f.xmin)) {
    f.xmin /= 2;
    f.xmax *= 2;
  }
  widen(f.xmin, f.xmax);
  widen(f.ymin, f.ymax);

  std::ostringstream os;
  header(os, axes);
  frame_and_ticks(os, f, axes);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << px(f.tx(s.x[i])) << ',' << px(f.ty(s.y[i]));
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx=\"" << px(f.tx(s.x[i])) << "\" cy=\"" << px(f.ty(s.y[i])) << "\" r=\"2.5\" fill=\"" << c
         << "\"/>\n";
    os << "<text x=\"" << px(kWidth - kRight - 8) << "\" y=\"" << px(kTop + 16 + 16 * k)
       << "\" text-anchor=\"end\" fill=\"" << c << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap_plot(const Heatmap& map, const Axes& axes) { return overlay_plot(map, {}, axes); }

std::string overlay_plot(const Heatmap& map, const std::vector<Rect>& rects, const Axes& axes) {
  validate(map);
  if (axes.log_x) throw InvalidInput("heatmaps use linear axes");
  Frame f{map.x0, map.x1, map.y0, map.y1, false};
  std::ostringstream os;
  header(os, axes);
  cells(os, map, f);
  for (const auto& r : rects) {
    const double xa = f.tx(r.x), xb = f.tx(r.x + r.width);
    const double ya = f.ty(r.y + r.height), yb = f.ty(r.y);
    os << "<rect x=\"" << px(xa) << "\" y=\"" << px(ya) << "\" width=\"" << px(xb - xa) << "\" height=\""
       << px(yb - ya) << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
  }
  frame_and_ticks(os, f, axes);
  os << "</svg>\n";
  return os.str();
}

}  // namespace anyonlt::svg

#pragma once

// Self-contained SVG figures: line charts, heatmaps and squares over a heatmap.
// Output depends only on the input (fixed number formatting, no timestamps).

#include <string>
#include <vector>

namespace anyonlt::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Values on an nx by ny grid covering [x0, x1] x [y0, y1]; index i + nx j.
struct Heatmap {
  int nx = 0, ny = 0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  std::vector<double> values;
};

struct Rect {
  double x = 0.0, y = 0.0, width = 0.0, height = 0.0;  // lower-left corner
};

struct Axes {
  std::string title, x_label, y_label;
  bool log_x = false;
};

/// Throws InvalidInput if there are no series or a series is empty or ragged.
std::string line_plot(const std::vector<Series>& series, const Axes& axes);
/// Throws InvalidInput on an empty or inconsistent heatmap.
std::string heatmap_plot(const Heatmap& map, const Axes& axes);
/// Heatmap with rectangle outlines drawn on top.
std::string overlay_plot(const Heatmap& map, const std::vector<Rect>& rects, const Axes& axes);

}  // namespace anyonlt::svg

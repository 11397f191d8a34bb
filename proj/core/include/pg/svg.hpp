#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pg {

/// One plotted series: median line plus optional interquartile band
/// (y_lo/y_hi empty means no band).
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_lo;
  std::vector<double> y_hi;
};

struct SvgOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 760;
  int height = 480;
};

/// Self-contained deterministic SVG: axes, ticks, median lines, shaded
/// quantile bands, legend. Non-finite points are dropped from the drawing.
void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const SvgOptions& options);

}  // namespace pg

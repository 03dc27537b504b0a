#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace segqa {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Renders a simple line plot (axes, ticks, legend, embedded 5x7 font) to an
/// 8-bit RGB PNG.
void write_line_plot_png(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, int width = 720, int height = 480);

}  // namespace segqa

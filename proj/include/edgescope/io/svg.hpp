#pragma once

#include <string>
#include <vector>

namespace edgescope {

/// One polyline on a plot.  Non-finite samples split the line into segments.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 760;
    int height = 480;
    bool log_y = false;
};

/// Render a static line plot as a standalone SVG file.
void write_svg_plot(const std::string& path, const PlotSpec& spec);

}  // namespace edgescope

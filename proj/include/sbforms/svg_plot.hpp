#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sbf {

// Minimal self-contained SVG emitter for the CLI's optional figures.
// Deterministic output: fixed canvas, "%.6g" numbers, no timestamps.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool stems = false; // stems from y=0 with markers instead of a polyline
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log2_x = false; // plot against log2(x)
};

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);

} // namespace sbf

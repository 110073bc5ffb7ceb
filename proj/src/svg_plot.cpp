#include "sbforms/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sbf {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    auto tx = [&](double x) { return options.log2_x ? std::log2(x) : x; };
    bool any = false;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            any = true;
            x_lo = std::min(x_lo, tx(x));
            x_hi = std::max(x_hi, tx(x));
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
        if (s.stems) {
            y_lo = std::min(y_lo, 0.0);
            y_hi = std::max(y_hi, 0.0);
        }
    }
    if (!any) {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if (x_hi - x_lo < 1e-12) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi - y_lo < 1e-12) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double pad_y = 0.05 * (y_hi - y_lo);
    y_lo -= pad_y;
    y_hi += pad_y;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
        << "font-family=\"sans-serif\">" << escape(options.title) << "</text>\n";

    // frame
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // ticks
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
        const double sx = kMarginLeft + plot_w * t / 4.0;
        svg << "<line x1=\"" << sx << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << sx
            << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << sx << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << fmt(options.log2_x ? std::exp2(fx) : fx) << "</text>\n";
        const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
        const double sy = py(fy);
        svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << sy << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(fy)
            << "</text>\n";
    }
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << escape(options.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << kMarginTop + plot_h / 2 << ")\">"
        << escape(options.y_label) << "</text>\n";

    int color_idx = 0;
    double legend_y = kMarginTop + 14.0;
    for (const auto& s : series) {
        const char* color = kColors[color_idx % 6];
        ++color_idx;
        if (s.stems) {
            const double y0 = py(std::clamp(0.0, y_lo, y_hi));
            for (const auto& [x, y] : s.points) {
                svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(y0) << "\" x2=\""
                    << fmt(px(x)) << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"" << color
                    << "\"/>\n";
                svg << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
                << "points=\"";
            for (const auto& [x, y] : s.points)
                svg << fmt(px(x)) << "," << fmt(py(y)) << " ";
            svg << "\"/>\n";
        }
        if (!s.label.empty()) {
            svg << "<rect x=\"" << kMarginLeft + plot_w - 150 << "\" y=\"" << legend_y - 9
                << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
            svg << "<text x=\"" << kMarginLeft + plot_w - 136 << "\" y=\"" << legend_y
                << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(s.label)
                << "</text>\n";
            legend_y += 16.0;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace sbf

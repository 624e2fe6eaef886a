#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace swimfollow {

struct Series {
    std::string label;       // empty label stays out of the legend
    std::string color;       // css color; empty picks from the default palette
    std::vector<double> x;
    std::vector<double> y;
    double stroke_width = 1.5;
};

struct Axes {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
    bool equal = false;  // same mm-per-pixel on both axes, for trajectories
};

/// One standalone SVG holding a grid of line plots, `cols` panels per row.
void write_svg_panels(const std::filesystem::path& path, const std::vector<Axes>& panels,
                      std::size_t cols, double panel_w = 640.0, double panel_h = 420.0);

inline void write_svg_plot(const std::filesystem::path& path, const Axes& axes,
                           double w = 640.0, double h = 420.0) {
    write_svg_panels(path, {axes}, 1, w, h);
}

} // namespace swimfollow

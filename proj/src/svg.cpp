#include "swimfollow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "swimfollow/errors.hpp"

namespace swimfollow {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Tick label without trailing zeros.
std::string tick_label(double v) {
    if (v == 0.0) v = 0.0;  // avoid -0
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void expand(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
};

/// Tick spacing of the 1/2/5 decade family giving 4 to 8 ticks.
double tick_step(double span) {
    if (span <= 0.0) return 1.0;
    const double rough = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(rough)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= rough) return mag * m;
    }
    return mag * 10.0;
}

struct PanelLayout {
    double x0, y0, w, h;          // plot area in svg coordinates
    Range xr, yr;

    double sx(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
    double sy(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void draw_panel(std::ostringstream& out, const Axes& axes, double ox, double oy,
                double panel_w, double panel_h) {
    const double ml = 58.0, mr = 14.0, mt = axes.title.empty() ? 14.0 : 32.0, mb = 44.0;
    PanelLayout lay;
    lay.x0 = ox + ml;
    lay.y0 = oy + mt;
    lay.w = panel_w - ml - mr;
    lay.h = panel_h - mt - mb;

    bool any = false;
    Range xr, yr;
    xr.lo = yr.lo = std::numeric_limits<double>::infinity();
    xr.hi = yr.hi = -std::numeric_limits<double>::infinity();
    for (const Series& s : axes.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xr.expand(s.x[i]);
            yr.expand(s.y[i]);
            any = true;
        }
    }
    if (!any) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    if (xr.hi <= xr.lo) xr.hi = xr.lo + 1.0;
    if (yr.hi <= yr.lo) yr.hi = yr.lo + 1.0;
    double xpad = 0.05 * (xr.hi - xr.lo), ypad = 0.05 * (yr.hi - yr.lo);
    xr.lo -= xpad;
    xr.hi += xpad;
    yr.lo -= ypad;
    yr.hi += ypad;
    if (axes.equal) {
        const double sx = (xr.hi - xr.lo) / lay.w, sy = (yr.hi - yr.lo) / lay.h;
        const double s = std::max(sx, sy);
        const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
        xr.lo = cx - 0.5 * s * lay.w;
        xr.hi = cx + 0.5 * s * lay.w;
        yr.lo = cy - 0.5 * s * lay.h;
        yr.hi = cy + 0.5 * s * lay.h;
    }
    lay.xr = xr;
    lay.yr = yr;

    out << "<rect x=\"" << fmt(lay.x0) << "\" y=\"" << fmt(lay.y0) << "\" width=\""
        << fmt(lay.w) << "\" height=\"" << fmt(lay.h)
        << "\" fill=\"white\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    const double xstep = tick_step(xr.hi - xr.lo);
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-9 * xstep; t += xstep) {
        const double px = lay.sx(t);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(lay.y0) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(lay.y0 + lay.h)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(lay.y0 + lay.h + 16.0)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">"
            << tick_label(t) << "</text>\n";
    }
    const double ystep = tick_step(yr.hi - yr.lo);
    for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-9 * ystep; t += ystep) {
        const double py = lay.sy(t);
        out << "<line x1=\"" << fmt(lay.x0) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(lay.x0 + lay.w) << "\" y2=\"" << fmt(py)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << fmt(lay.x0 - 6.0) << "\" y=\"" << fmt(py + 4.0)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">" << tick_label(t)
            << "</text>\n";
    }

    std::size_t color_i = 0;
    for (const Series& s : axes.series) {
        const std::string color =
            s.color.empty() ? kPalette[color_i % (sizeof(kPalette) / sizeof(kPalette[0]))]
                            : s.color;
        ++color_i;
        if (s.x.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
            << fmt(s.stroke_width) << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << fmt(lay.sx(s.x[i])) << "," << fmt(lay.sy(s.y[i])) << " ";
        }
        out << "\"/>\n";
    }

    if (!axes.title.empty()) {
        out << "<text x=\"" << fmt(ox + panel_w / 2.0) << "\" y=\"" << fmt(oy + 20.0)
            << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\">"
            << escape(axes.title) << "</text>\n";
    }
    out << "<text x=\"" << fmt(lay.x0 + lay.w / 2.0) << "\" y=\""
        << fmt(lay.y0 + lay.h + 34.0)
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\">"
        << escape(axes.xlabel) << "</text>\n";
    out << "<text x=\"" << fmt(ox + 14.0) << "\" y=\"" << fmt(lay.y0 + lay.h / 2.0)
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 "
        << fmt(ox + 14.0) << " " << fmt(lay.y0 + lay.h / 2.0) << ")\">" << escape(axes.ylabel)
        << "</text>\n";

    double ly = lay.y0 + 14.0;
    color_i = 0;
    for (const Series& s : axes.series) {
        const std::string color =
            s.color.empty() ? kPalette[color_i % (sizeof(kPalette) / sizeof(kPalette[0]))]
                            : s.color;
        ++color_i;
        if (s.label.empty()) continue;
        const double lx = lay.x0 + lay.w - 120.0;
        out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4.0) << "\" x2=\""
            << fmt(lx + 22.0) << "\" y2=\"" << fmt(ly - 4.0) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(lx + 28.0) << "\" y=\"" << fmt(ly)
            << "\" font-size=\"11\" fill=\"#333333\">" << escape(s.label) << "</text>\n";
        ly += 16.0;
    }
}

} // namespace

void write_svg_panels(const std::filesystem::path& path, const std::vector<Axes>& panels,
                      std::size_t cols, double panel_w, double panel_h) {
    if (panels.empty() || cols == 0) throw ConfigError("svg needs at least one panel");
    const std::size_t rows = (panels.size() + cols - 1) / cols;
    const double width = panel_w * static_cast<double>(std::min(cols, panels.size()));
    const double height = panel_h * static_cast<double>(rows);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
        << fmt(height) << "\" font-family=\"sans-serif\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const double ox = static_cast<double>(i % cols) * panel_w;
        const double oy = static_cast<double>(i / cols) * panel_h;
        draw_panel(out, panels[i], ox, oy, panel_w, panel_h);
    }
    out << "</svg>\n";

    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path.string());
    const std::string text = out.str();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

} // namespace swimfollow

#include "odl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace odl {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 600.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 430.0;

const char* const kPalette[6] = {"#1b6ca8", "#c23b22", "#2e8b57",
                                 "#8e5ba6", "#b8860b", "#3d3d3d"};

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range data_range(const std::vector<PlotSeries>& series, bool use_x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const PlotSeries& s : series) {
        const std::vector<double>& v = use_x ? s.x : s.y;
        for (double value : v) {
            if (!std::isfinite(value)) continue;
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
    }
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) return {lo - 0.5, hi + 0.5};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Mapper {
    Range xr, yr;
    double px(double x) const { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft); }
    double py(double y) const { return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop); }
};

void open_document(std::string& out, const std::string& title, const std::string& x_label,
                   const std::string& y_label, const Mapper& map) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + title +
           "</text>\n";
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
           num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = map.xr.lo + (map.xr.hi - map.xr.lo) * i / 4.0;
        const double fy = map.yr.lo + (map.yr.hi - map.yr.lo) * i / 4.0;
        const double px = map.px(fx);
        const double py = map.py(fy);
        out += "<line x1=\"" + num(px) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(px) +
               "\" y2=\"" + num(kBottom + 5) + "\" stroke=\"#444444\"/>\n";
        out += "<text x=\"" + num(px) + "\" y=\"" + num(kBottom + 20) +
               "\" text-anchor=\"middle\">" + tick_label(fx) + "</text>\n";
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft) +
               "\" y2=\"" + num(py) + "\" stroke=\"#444444\"/>\n";
        out += "<text x=\"" + num(kLeft - 9) + "\" y=\"" + num(py + 4) +
               "\" text-anchor=\"end\">" + tick_label(fy) + "</text>\n";
    }
    out += "<text x=\"" + num((kLeft + kRight) / 2) + "\" y=\"466\" text-anchor=\"middle\">" +
           x_label + "</text>\n";
    out += "<text x=\"16\" y=\"" + num((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num((kTop + kBottom) / 2) +
           ")\">" + y_label + "</text>\n";
}

void draw_legend(std::string& out, const std::vector<PlotSeries>& series) {
    double y = kTop + 16.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].label.empty()) continue;
        const char* color = kPalette[i % 6];
        out += "<circle cx=\"" + num(kRight - 120.0) + "\" cy=\"" + num(y - 4.0) +
               "\" r=\"4\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + num(kRight - 110.0) + "\" y=\"" + num(y) + "\" fill=\"" + color +
               "\">" + series[i].label + "</text>\n";
        y += 17.0;
    }
}

} // namespace

std::string svg_scatter(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<PlotSeries>& series,
                        bool identity_line) {
    Mapper map{data_range(series, true), data_range(series, false)};
    std::string out;
    open_document(out, title, x_label, y_label, map);

    if (identity_line) {
        const double lo = std::max(map.xr.lo, map.yr.lo);
        const double hi = std::min(map.xr.hi, map.yr.hi);
        if (lo < hi) {
            out += "<line x1=\"" + num(map.px(lo)) + "\" y1=\"" + num(map.py(lo)) + "\" x2=\"" +
                   num(map.px(hi)) + "\" y2=\"" + num(map.py(hi)) +
                   "\" stroke=\"#999999\" stroke-dasharray=\"5 4\"/>\n";
        }
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % 6];
        const std::size_t n = std::min(series[i].x.size(), series[i].y.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(series[i].x[k]) || !std::isfinite(series[i].y[k])) continue;
            out += "<circle cx=\"" + num(map.px(series[i].x[k])) + "\" cy=\"" +
                   num(map.py(series[i].y[k])) + "\" r=\"2.5\" fill=\"" + color +
                   "\" fill-opacity=\"0.75\"/>\n";
        }
    }
    draw_legend(out, series);
    out += "</svg>\n";
    return out;
}

std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series) {
    Mapper map{data_range(series, true), data_range(series, false)};
    std::string out;
    open_document(out, title, x_label, y_label, map);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % 6];
        const std::size_t n = std::min(series[i].x.size(), series[i].y.size());
        std::string points;
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(series[i].x[k]) || !std::isfinite(series[i].y[k])) continue;
            if (!points.empty()) points += ' ';
            points += num(map.px(series[i].x[k])) + "," + num(map.py(series[i].y[k]));
            out += "<circle cx=\"" + num(map.px(series[i].x[k])) + "\" cy=\"" +
                   num(map.py(series[i].y[k])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        if (!points.empty()) {
            out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
        }
    }
    draw_legend(out, series);
    out += "</svg>\n";
    return out;
}

} // namespace odl

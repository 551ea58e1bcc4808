#pragma once

#include <string>
#include <vector>

namespace odl {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static scatter plot (one color per series), optionally with a dashed
/// y = x reference line. Returns the complete SVG document.
std::string svg_scatter(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<PlotSeries>& series,
                        bool identity_line);

/// Static line plot, one polyline per series with point markers.
std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series);

} // namespace odl

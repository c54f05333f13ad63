#pragma once

#include <string>
#include <vector>

namespace gatewave {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotRule {
    double y;
    std::string label;
};

struct PlotSpec {
    std::string title;
    std::string x_label;  // include units, e.g. "frequency (MHz)"
    std::string y_label;
    std::vector<PlotSeries> series;
    std::vector<PlotRule> h_rules;
};

/// Self-contained SVG: axes with ticks, one polyline per series (a lone
/// marker for single-point series), legend, optional horizontal rules.
/// Byte-stable for identical inputs. Throws EmptyData when no series has
/// any point.
std::string emit_plot_svg(const PlotSpec& spec);

}  // namespace gatewave

#include "gatewave/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

constexpr double kW = 640, kH = 420;
constexpr double kL = 70, kR = 150, kT = 40, kB = 52;  // margins (legend on the right)

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

// Tick spacing on the 1-2-5 ladder covering roughly 5 intervals.
double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    if (r < 1.5) return mag;
    if (r < 3.5) return 2 * mag;
    if (r < 7.5) return 5 * mag;
    return 10 * mag;
}

}  // namespace

std::string emit_plot_svg(const PlotSpec& spec) {
    bool any = false;
    for (const auto& s : spec.series)
        if (!s.x.empty()) any = true;
    if (!any) throw EmptyData("plot: no data points");

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : spec.series) {
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
        for (double v : s.y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    for (const auto& r : spec.h_rules) {
        y0 = std::min(y0, r.y);
        y1 = std::max(y1, r.y);
    }
    if (x1 <= x0) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (y1 <= y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    const double pad_y = 0.06 * (y1 - y0);
    y0 -= pad_y;
    y1 += pad_y;

    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kT + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
       << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kL + pw / 2 << "\" y=\"22\" font-size=\"15\" "
          "text-anchor=\"middle\" font-family=\"sans-serif\">"
       << spec.title << "</text>\n";

    // Axes box.
    os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\""
       << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double sx = nice_step(x1 - x0);
    for (double x = std::ceil(x0 / sx) * sx; x <= x1 + 1e-12 * sx; x += sx) {
        os << "<line x1=\"" << fmt_g6(px(x)) << "\" y1=\"" << kT + ph << "\" x2=\""
           << fmt_g6(px(x)) << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << fmt_g6(px(x)) << "\" y=\"" << kT + ph + 18
           << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
           << fmt_g6(x) << "</text>\n";
    }
    const double sy = nice_step(y1 - y0);
    for (double y = std::ceil(y0 / sy) * sy; y <= y1 + 1e-12 * sy; y += sy) {
        os << "<line x1=\"" << kL - 5 << "\" y1=\"" << fmt_g6(py(y)) << "\" x2=\"" << kL
           << "\" y2=\"" << fmt_g6(py(y)) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << kL - 8 << "\" y=\"" << fmt_g6(py(y) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
           << fmt_g6(y) << "</text>\n";
    }

    os << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 12
       << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << spec.x_label << "</text>\n"
       << "<text x=\"18\" y=\"" << kT + ph / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "transform=\"rotate(-90 18 "
       << kT + ph / 2 << ")\">" << spec.y_label << "</text>\n";

    for (const auto& r : spec.h_rules) {
        os << "<line x1=\"" << kL << "\" y1=\"" << fmt_g6(py(r.y)) << "\" x2=\""
           << kL + pw << "\" y2=\"" << fmt_g6(py(r.y))
           << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n"
           << "<text x=\"" << kL + pw - 4 << "\" y=\"" << fmt_g6(py(r.y) - 4)
           << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#555555\" "
              "font-family=\"sans-serif\">"
           << r.label << "</text>\n";
    }

    int ci = 0;
    for (const auto& s : spec.series) {
        const char* color = kColors[ci % 8];
        if (s.x.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << fmt_g6(px(s.x[i])) << ',' << fmt_g6(py(s.y[i])) << ' ';
            os << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << "<circle cx=\"" << fmt_g6(px(s.x[i])) << "\" cy=\"" << fmt_g6(py(s.y[i]))
               << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        const double ly = kT + 16 + 18 * ci;
        os << "<line x1=\"" << kL + pw + 10 << "\" y1=\"" << fmt_g6(ly - 4) << "\" x2=\""
           << kL + pw + 30 << "\" y2=\"" << fmt_g6(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n"
           << "<text x=\"" << kL + pw + 34 << "\" y=\"" << fmt_g6(ly)
           << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gatewave

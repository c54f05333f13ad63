#include "gatewave/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gatewave/errors.hpp"
#include "gatewave/waveform_util.hpp"

namespace gatewave {

WaveformStats waveform_stats(const Trace& trace, const std::string& node, double rail_v) {
    if (trace.size() < 4) throw IncompleteCycle("trace too short for waveform stats");
    std::vector<double> t = trace.times();
    std::vector<double> v = trace.series(node);

    WaveformStats s;
    s.v_max = *std::max_element(v.begin(), v.end());
    s.v_min = *std::min_element(v.begin(), v.end());
    const double span = s.v_max - s.v_min;
    if (!(span > 1e-9))
        throw IncompleteCycle("series " + node + " is constant; no cycle to measure");

    s.overshoot_v = std::max(0.0, s.v_max - rail_v);
    s.avg = trace.average(node);

    const double mid = 0.5 * (s.v_max + s.v_min);
    double above = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        const double a = v[i - 1] - mid;
        const double b = v[i] - mid;
        if (a >= 0.0 && b >= 0.0) {
            above += dt;
        } else if ((a >= 0.0) != (b >= 0.0)) {
            const double w = a / (a - b);  // crossing position inside the segment
            above += (a >= 0.0) ? w * dt : (1.0 - w) * dt;
        }
    }
    s.measured_duty = above / (t.back() - t.front());

    // Thresholds on the per-period span: high-frequency waveforms never reach
    // the rails, so rail-based thresholds would be unmeasurable.
    const double v10 = s.v_min + 0.1 * span;
    const double v90 = s.v_min + 0.9 * span;
    // Wrap edges across the period seam only for genuinely periodic traces.
    if (std::fabs(v.back() - v.front()) <= 0.05 * span) extend_periodic(t, v);
    s.rise_10_90_s = transition_time(t, v, v10, v90, /*rising=*/true);
    s.fall_10_90_s = transition_time(t, v, v10, v90, /*rising=*/false);
    if (s.rise_10_90_s < 0.0 || s.fall_10_90_s < 0.0)
        throw IncompleteCycle("series " + node + " holds no complete rise/fall cycle");
    return s;
}

PowerStats power_stats(const Trace& trace, const RailSpec& rail,
                       const ThermalModel& thermal) {
    if (trace.size() < 4) throw IncompleteCycle("trace too short for power stats");
    PowerStats s;
    for (const auto& col : rail.current_series) s.avg_rail_current_a += trace.average(col);
    if (!rail.shoot_series.empty())
        s.penetration_charge_c = trace.integral(rail.shoot_series);
    // At periodic steady state the rail energy equals the stage dissipation,
    // so the rail power is the dissipation attributed to this stage.
    s.dissipation_w = s.avg_rail_current_a * rail.rail_v;
    s.junction_temp_c = thermal.steady_state_c(s.dissipation_w);
    s.runaway = s.junction_temp_c >= thermal.runaway_threshold_c;
    return s;
}

double compare_traces(const Trace& a, const Trace& b,
                      const std::vector<std::string>& nodes, double scale_v) {
    const double lo = std::max(a.span_begin(), b.span_begin());
    const double hi = std::min(a.span_end(), b.span_end());
    if (!(lo < hi)) throw GridMismatch("trace spans do not overlap");

    std::vector<double> grid;
    for (double t : a.times())
        if (t >= lo && t <= hi) grid.push_back(t);
    for (double t : b.times())
        if (t >= lo && t <= hi) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double dev = 0.0;
    for (const auto& node : nodes) {
        const std::size_t ca = a.column(node);
        const std::size_t cb = b.column(node);
        for (double t : grid)
            dev = std::max(dev, std::fabs(a.interpolate(ca, t) - b.interpolate(cb, t)));
    }
    return dev / scale_v;
}

EnergyReport energy_report(const Trace& trace) {
    EnergyReport r;
    r.e_in_j = trace.integral("p_in_total");
    r.e_diss_j = trace.integral("p_diss_total");
    r.imbalance = (r.e_in_j != 0.0) ? std::fabs(r.e_in_j - r.e_diss_j) / std::fabs(r.e_in_j)
                                    : std::fabs(r.e_diss_j);
    return r;
}

GateChargeReport gate_charge_report(const Trace& trace, const std::string& gate_current) {
    GateChargeReport r;
    const auto& t = trace.times();
    const auto& i = trace.series(gate_current);
    double net = 0.0, turnover = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double dt = t[k] - t[k - 1];
        net += 0.5 * (i[k] + i[k - 1]) * dt;
        turnover += 0.5 * (std::fabs(i[k]) + std::fabs(i[k - 1])) * dt;
    }
    r.net_charge_c = std::fabs(net);
    r.per_edge_charge_c = 0.5 * turnover;
    return r;
}

}  // namespace gatewave

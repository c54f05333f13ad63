#include "gatewave/load.hpp"

#include <algorithm>
#include <cmath>

#include "gatewave/errors.hpp"
#include "gatewave/waveform_util.hpp"

namespace gatewave {

// ---------------------------------------------------------------------------
// waveform utilities (shared with metrics)
// ---------------------------------------------------------------------------

std::vector<Crossing> find_crossings(const std::vector<double>& t,
                                     const std::vector<double>& y, double level) {
    std::vector<Crossing> out;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = y[i - 1] - level;
        const double b = y[i] - level;
        if (a == 0.0 && b == 0.0) continue;
        if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
            const double w = a / (a - b);
            out.push_back({t[i - 1] + w * (t[i] - t[i - 1]), b > a});
        }
    }
    return out;
}

double transition_time(const std::vector<double>& t, const std::vector<double>& y,
                       double lo_level, double hi_level, bool rising) {
    const auto lo = find_crossings(t, y, lo_level);
    const auto hi = find_crossings(t, y, hi_level);
    if (rising) {
        for (const auto& c0 : lo) {
            if (!c0.rising) continue;
            for (const auto& c1 : hi)
                if (c1.rising && c1.time_s > c0.time_s) {
                    // Use the last lo crossing before this hi crossing.
                    double start = c0.time_s;
                    for (const auto& c : lo)
                        if (c.rising && c.time_s > start && c.time_s < c1.time_s)
                            start = c.time_s;
                    return c1.time_s - start;
                }
        }
    } else {
        for (const auto& c0 : hi) {
            if (c0.rising) continue;
            for (const auto& c1 : lo)
                if (!c1.rising && c1.time_s > c0.time_s) {
                    double start = c0.time_s;
                    for (const auto& c : hi)
                        if (!c.rising && c.time_s > start && c.time_s < c1.time_s)
                            start = c.time_s;
                    return c1.time_s - start;
                }
        }
    }
    return -1.0;
}

void extend_periodic(std::vector<double>& t, std::vector<double>& y) {
    const std::size_t n = t.size();
    if (n < 2) return;
    const double span = t.back() - t.front();
    t.reserve(2 * n);
    y.reserve(2 * n);
    for (std::size_t i = 1; i < n; ++i) {
        t.push_back(t[i] + span);
        y.push_back(y[i]);
    }
}

// ---------------------------------------------------------------------------
// monotone cubic table
// ---------------------------------------------------------------------------

MonotoneCubicTable::MonotoneCubicTable(std::vector<double> x, std::vector<double> y,
                                       std::string key)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw ValidationError(key, "table needs at least two (v, cap) rows");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError(key, "table abscissae must be strictly increasing");

    // Fritsch-Carlson slopes: weighted harmonic mean of adjacent secants,
    // zero at local extrema. Keeps each segment inside its knot interval.
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    slope_[0] = d[0];
    slope_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

double MonotoneCubicTable::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

void MonotoneCubicTable::validate_capacitance(const std::string& key) const {
    if (x_.size() < 2) throw ValidationError(key, "table needs at least two rows");
    for (std::size_t i = 0; i < y_.size(); ++i) {
        if (!(y_[i] > 0.0)) throw ValidationError(key, "capacitance values must be > 0");
        if (i > 0 && y_[i] > y_[i - 1])
            throw ValidationError(key, "capacitance must be non-increasing in voltage");
    }
}

// ---------------------------------------------------------------------------
// SiC MOSFET
// ---------------------------------------------------------------------------

namespace {

// Datasheet-shaped typical curves for a 1200-V small-die device; placeholder
// values declared in the shipped preset tables as well.
MonotoneCubicTable default_cgd() {
    return MonotoneCubicTable(
        {-20, -10, -5, 0, 2, 5, 10, 15, 20, 30, 40, 50},
        {100e-12, 95e-12, 88e-12, 60e-12, 40e-12, 25e-12, 15e-12, 10e-12, 8e-12,
         6e-12, 5e-12, 4e-12},
        "load.device.cgd_table");
}

MonotoneCubicTable default_cds() {
    return MonotoneCubicTable(
        {0, 1, 2, 5, 8, 12, 16, 20, 28, 36, 44, 50},
        {200e-12, 160e-12, 135e-12, 100e-12, 80e-12, 62e-12, 50e-12, 42e-12,
         32e-12, 26e-12, 22e-12, 20e-12},
        "load.device.cds_table");
}

}  // namespace

SicMosfetModel::SicMosfetModel() : cgd_table(default_cgd()), cds_table(default_cds()) {}

void SicMosfetModel::validate(const char* p) const {
    const std::string prefix(p);
    if (!(vth_v > 0.0)) throw ValidationError(prefix + ".vth_v", "must be > 0");
    if (!(kp_a_per_v2 > 0.0)) throw ValidationError(prefix + ".kp_a_per_v2", "must be > 0");
    if (!(cgs_f > 0.0)) throw ValidationError(prefix + ".cgs_f", "must be > 0");
    if (!(rg_internal_ohm >= 0.0))
        throw ValidationError(prefix + ".rg_internal_ohm", "must be >= 0");
    cgd_table.validate_capacitance(prefix + ".cgd_table");
    cds_table.validate_capacitance(prefix + ".cds_table");
}

double channel_current(const SicMosfetModel& m, double v_gs, double v_ds) {
    if (v_ds < 0.0) return -channel_current(m, v_gs - v_ds, -v_ds);
    const double vov = v_gs - m.vth_v;
    if (vov <= 0.0) return 0.0;
    if (v_ds < vov) return m.kp_a_per_v2 * (vov * v_ds - 0.5 * v_ds * v_ds);
    return 0.5 * m.kp_a_per_v2 * vov * vov;
}

void HardSwitchCircuit::validate(const char* p) const {
    const std::string prefix(p);
    if (!(v_link_v > 0.0)) throw ValidationError(prefix + ".v_link_v", "must be > 0");
    if (!(r_limit_ohm > 0.0)) throw ValidationError(prefix + ".r_limit_ohm", "must be > 0");
    if (!(r_gate_ext_ohm >= 0.0))
        throw ValidationError(prefix + ".r_gate_ext_ohm", "must be >= 0");
    device.validate((prefix + ".device").c_str());
}

void OpenLoad::validate(const char* p) const {
    if (!(probe_cap_f > 0.0))
        throw ValidationError(std::string(p) + ".probe_cap_f", "must be > 0");
}

LoadDeriv hard_switch_derivs(const HardSwitchCircuit& c, double v_gate, double v_drain,
                             double i_gate_in) {
    const SicMosfetModel& d = c.device;
    const double cgd = d.cgd_table(v_drain - v_gate);
    const double cds = d.cds_table(v_drain);
    const double cgs = d.cgs_f;

    LoadDeriv out;
    out.i_channel_a = channel_current(d, v_gate, v_drain);
    out.i_link_a = (c.v_link_v - v_drain) / c.r_limit_ohm;
    const double i_drain_net = out.i_link_a - out.i_channel_a;

    // [cgs+cgd, -cgd; -cgd, cds+cgd] [dvg; dvd] = [i_gate_in; i_drain_net]
    const double a = cgs + cgd;
    const double b = -cgd;
    const double e = cds + cgd;
    const double det = a * e - b * b;
    if (!(det > 1e-30) || !std::isfinite(det))
        throw SingularCapacitance("device capacitance matrix is singular (det = " +
                                  std::to_string(det) + ")");
    out.dv_gate_dt = (e * i_gate_in - b * i_drain_net) / det;
    out.dv_drain_dt = (a * i_drain_net - b * i_gate_in) / det;
    return out;
}

SwitchingTimes switching_times(const Trace& trace, const std::string& drain_series) {
    if (trace.size() < 4) throw IncompleteCycle("trace too short for switching times");
    std::vector<double> t = trace.times();
    std::vector<double> v = trace.series(drain_series);

    const double v_max = *std::max_element(v.begin(), v.end());
    const double v_min = *std::min_element(v.begin(), v.end());
    const double span = v_max - v_min;
    if (!(span > 1e-9))
        throw IncompleteCycle("drain voltage has no swing; no switching cycle present");

    const double v10 = v_min + 0.1 * span;
    const double v90 = v_min + 0.9 * span;

    // Wrap the cycle only when the trace really is one period; otherwise the
    // seam would fabricate an edge out of mismatched endpoints.
    if (std::fabs(v.back() - v.front()) <= 0.05 * span) extend_periodic(t, v);
    const double t_on = transition_time(t, v, v10, v90, /*rising=*/false);
    const double t_off = transition_time(t, v, v10, v90, /*rising=*/true);
    if (t_on < 0.0 || t_off < 0.0)
        throw IncompleteCycle("no complete on/off cycle of the drain voltage");
    return {t_on, t_off};
}

}  // namespace gatewave

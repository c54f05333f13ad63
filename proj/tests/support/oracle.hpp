#pragma once

// Test-side reference machinery, independent of the production integration
// path: a dense fixed-step classical RK4 integrator and an adaptive Simpson
// quadrature. Used to freeze expected values and to cross-check the
// trapezoidal solver.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gatewave/solver.hpp"
#include "gatewave/trace.hpp"

namespace gatewave::testing {

struct OracleRun {
    Trace trace;           // strided samples: states then outputs
    Vec output_averages;   // full-resolution trapezoid averages over [avg_from, t1]
};

inline OracleRun rk4_reference(OdeSystem& sys, double t0, double t1, const Vec& y0,
                               double dt, int stride = 1, double avg_from = -1.0) {
    sys.instantaneous_mode();
    const int n = sys.num_states();
    const int n_out = sys.num_outputs();
    if (avg_from < t0) avg_from = t0;

    std::vector<std::string> names = sys.state_names();
    std::vector<char> units = sys.state_units();
    {
        auto on = sys.output_names();
        auto ou = sys.output_units();
        names.insert(names.end(), on.begin(), on.end());
        units.insert(units.end(), ou.begin(), ou.end());
    }
    OracleRun run{Trace(names, units), Vec(static_cast<std::size_t>(n_out), 0.0)};

    Vec y = y0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    Vec out_prev(n_out), out_cur(n_out);
    Vec row(static_cast<std::size_t>(n + n_out));
    double avg_span = 0.0;

    const long steps = std::lround((t1 - t0) / dt);
    if (steps < 1) throw std::invalid_argument("rk4_reference: empty step range");

    auto record = [&](double t) {
        std::copy(y.begin(), y.end(), row.begin());
        if (n_out) sys.outputs(t, y.data(), row.data() + n);
        run.trace.append(t, row.data());
    };
    if (n_out) sys.outputs(t0, y.data(), out_prev.data());
    record(t0);

    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        sys.rhs(t, y.data(), k1.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        sys.rhs(t + 0.5 * dt, tmp.data(), k2.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        sys.rhs(t + 0.5 * dt, tmp.data(), k3.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
        sys.rhs(t + dt, tmp.data(), k4.data());
        for (int i = 0; i < n; ++i)
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const double t_next = t + dt;
        if (n_out) {
            sys.outputs(t_next, y.data(), out_cur.data());
            if (t_next > avg_from) {
                const double w = std::min(dt, t_next - avg_from);
                for (int i = 0; i < n_out; ++i)
                    run.output_averages[i] += 0.5 * (out_prev[i] + out_cur[i]) * w;
                avg_span += w;
            }
            std::swap(out_prev, out_cur);
        }
        if ((s + 1) % stride == 0 || s + 1 == steps) record(t_next);
    }
    if (avg_span > 0.0)
        for (double& v : run.output_averages) v /= avg_span;
    return run;
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 40) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int d) -> double {
        const double m = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, m, flo, flm, fmid, left, d - 1) +
               rec(m, hi, fmid, frm, fhi, right, d - 1);
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

}  // namespace gatewave::testing

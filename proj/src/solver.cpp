#include "gatewave/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

// Internal safety applied to the step-acceptance test. The accepted value is
// the two-half-step solution whose true error is ~est/3, and the margin keeps
// the accumulated global error of smooth runs at or below the requested
// tolerance instead of N times it.
constexpr double kErrorSafety = 0.03;
constexpr double kGrowLimit = 4.0;
constexpr double kShrinkLimit = 0.2;

}  // namespace

void SolverOptions::validate() const {
    if (!(rel_tol > 0.0)) throw ValidationError("solver.rel_tol", "must be > 0");
    if (!(abs_tol_v > 0.0)) throw ValidationError("solver.abs_tol_v", "must be > 0");
    if (!(dt_min_s > 0.0)) throw ValidationError("solver.dt_min_s", "must be > 0");
    if (!(dt_max_s >= dt_min_s))
        throw ValidationError("solver.dt_max_s", "must be >= dt_min_s");
    if (newton_max_iter <= 0)
        throw ValidationError("solver.newton_max_iter", "must be > 0");
    if (!(newton_tol > 0.0)) throw ValidationError("solver.newton_tol", "must be > 0");
    if (!(pss_period_tol > 0.0))
        throw ValidationError("solver.pss_period_tol", "must be > 0");
    if (pss_max_periods <= 0)
        throw ValidationError("solver.pss_max_periods", "must be > 0");
}

void OdeSystem::prepare_interval(double, double) {}
void OdeSystem::instantaneous_mode() {}

std::vector<Breakpoint> OdeSystem::breakpoints(double, double) const { return {}; }

std::vector<std::string> OdeSystem::state_names() const {
    std::vector<std::string> names;
    for (int i = 0; i < num_states(); ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::vector<char> OdeSystem::state_units() const {
    return std::vector<char>(static_cast<std::size_t>(num_states()), 'V');
}

Vec OdeSystem::state_scales() const {
    return Vec(static_cast<std::size_t>(num_states()), 1.0);
}

void OdeSystem::outputs(double, const double*, double*) const {}

Vec OdeSystem::initial_state() const {
    return Vec(static_cast<std::size_t>(num_states()), 0.0);
}

// ---------------------------------------------------------------------------
// Newton
// ---------------------------------------------------------------------------

Vec newton_solve(const ResidualFn& residual, Vec guess, double tol, int max_iter,
                 const JacobianFn* jacobian) {
    const int n = static_cast<int>(guess.size());
    Vec r = residual(guess);
    double norm = max_abs(r);
    for (int it = 0; it < max_iter; ++it) {
        if (norm <= tol && all_finite(guess)) return guess;
        std::vector<double> jac;
        if (jacobian) {
            jac = (*jacobian)(guess);
        } else {
            jac.assign(static_cast<std::size_t>(n) * n, 0.0);
            for (int j = 0; j < n; ++j) {
                const double h = std::sqrt(1e-16) * std::max(std::fabs(guess[j]), 1.0);
                Vec xp = guess;
                xp[j] += h;
                const Vec rp = residual(xp);
                for (int i = 0; i < n; ++i) jac[i * n + j] = (rp[i] - r[i]) / h;
            }
        }
        Vec step = r;
        for (double& v : step) v = -v;
        if (!lu_solve(jac, step, n)) throw NewtonDivergence(it, norm);
        for (int i = 0; i < n; ++i) guess[i] += step[i];
        if (!all_finite(guess)) throw NewtonDivergence(it + 1, norm);
        r = residual(guess);
        norm = max_abs(r);
    }
    if (norm <= tol) return guess;
    throw NewtonDivergence(max_iter, norm);
}

// ---------------------------------------------------------------------------
// Implicit trapezoidal stepper
// ---------------------------------------------------------------------------

namespace {

class TrapezoidalStepper {
public:
    TrapezoidalStepper(OdeSystem& system, const SolverOptions& opts)
        : sys_(system),
          opts_(opts),
          n_(system.num_states()),
          scales_(system.state_scales()),
          fx_(static_cast<std::size_t>(n_)),
          fp_(static_cast<std::size_t>(n_)),
          xp_(static_cast<std::size_t>(n_)),
          g_(static_cast<std::size_t>(n_)),
          jac_(static_cast<std::size_t>(n_) * n_) {}

    // One implicit trapezoidal step from (t, y, f) over dt. Returns false on
    // Newton failure (caller retries with a smaller step). On success also
    // reports how many Newton iterations were used.
    bool step(double t, const Vec& y, const Vec& f, double dt, Vec& out,
              int* iters_used = nullptr) {
        Vec x(y);
        for (int i = 0; i < n_; ++i) x[i] = y[i] + dt * f[i];  // predictor
        const double t1 = t + dt;

        for (int it = 0; it < opts_.newton_max_iter; ++it) {
            if (!all_finite(x)) return false;
            sys_.rhs(t1, x.data(), fx_.data());
            for (int i = 0; i < n_; ++i)
                g_[i] = x[i] - y[i] - 0.5 * dt * (f[i] + fx_[i]);

            // J = I - dt/2 * df/dx by forward differences, scaled perturbation.
            for (int j = 0; j < n_; ++j) {
                const double h =
                    std::sqrt(1e-16) * std::max(std::fabs(x[j]), 1e-3 * scales_[j]);
                xp_ = x;
                xp_[j] += h;
                sys_.rhs(t1, xp_.data(), fp_.data());
                for (int i = 0; i < n_; ++i)
                    jac_[i * n_ + j] =
                        ((i == j) ? 1.0 : 0.0) - 0.5 * dt * (fp_[i] - fx_[i]) / h;
            }
            Vec step = g_;
            for (double& v : step) v = -v;
            if (!lu_solve(jac_, step, n_)) return false;  // jac_ rebuilt next iteration
            double dnorm = 0.0;
            for (int i = 0; i < n_; ++i) {
                x[i] += step[i];
                dnorm = std::max(dnorm, std::fabs(step[i]) / scales_[i]);
            }
            if (!all_finite(x)) return false;
            if (dnorm <= opts_.newton_tol) {
                out = x;
                if (iters_used) *iters_used = it + 1;
                return true;
            }
        }
        return false;
    }

private:
    OdeSystem& sys_;
    const SolverOptions& opts_;
    int n_;
    Vec scales_;
    Vec fx_, fp_, xp_, g_;
    std::vector<double> jac_;
};

}  // namespace

Trace integrate(OdeSystem& system, double t0, double t1, const Vec* y0,
                const SolverOptions& opts) {
    opts.validate();
    if (!(t0 < t1)) throw ValidationError("integrate", "t0 must be < t1");
    const int n = system.num_states();
    const int n_out = system.num_outputs();

    std::vector<std::string> names = system.state_names();
    std::vector<char> units = system.state_units();
    {
        auto on = system.output_names();
        auto ou = system.output_units();
        names.insert(names.end(), on.begin(), on.end());
        units.insert(units.end(), ou.begin(), ou.end());
    }
    Trace trace(names, units);

    // Mandatory step boundaries, sorted and deduplicated. Stops closer than
    // the resolvable spacing (dt_min or a few ulps of t) collapse into one.
    const double t_gap =
        std::max(opts.dt_min_s, 8.0 * (std::fabs(t0) + std::fabs(t1)) * 1e-16);
    std::vector<Breakpoint> bps = system.breakpoints(t0, t1);
    std::sort(bps.begin(), bps.end(),
              [](const Breakpoint& a, const Breakpoint& b) { return a.time_s < b.time_s; });
    std::vector<Breakpoint> stops;
    for (const auto& bp : bps) {
        if (bp.time_s <= t0 + t_gap || bp.time_s >= t1 - t_gap) continue;
        if (!stops.empty() && bp.time_s - stops.back().time_s <= t_gap) continue;
        stops.push_back(bp);
    }
    stops.push_back({t1, ""});

    Vec y = y0 ? *y0 : system.initial_state();
    if (static_cast<int>(y.size()) != n)
        throw ValidationError("integrate", "initial state size mismatch");

    Vec row(static_cast<std::size_t>(n + n_out));
    auto record = [&](double t, const Vec& state) {
        std::copy(state.begin(), state.end(), row.begin());
        if (n_out > 0) system.outputs(t, state.data(), row.data() + n);
        trace.append(t, row.data());
    };
    for (const auto& bp : stops)
        if (!bp.label.empty()) trace.add_event(bp.time_s, bp.label);

    record(t0, y);

    TrapezoidalStepper stepper(system, opts);
    const Vec scales = system.state_scales();
    Vec f(static_cast<std::size_t>(n));
    Vec y_full(static_cast<std::size_t>(n)), y_half(static_cast<std::size_t>(n)),
        y_half2(static_cast<std::size_t>(n)), f_half(static_cast<std::size_t>(n));

    double t = t0;
    std::size_t stop_idx = 0;
    double dt = std::max(std::min(opts.dt_max_s, stops[0].time_s - t0) / 16.0,
                         opts.dt_min_s);

    while (t < t1) {
        while (stops[stop_idx].time_s <= t) ++stop_idx;
        const double t_stop = stops[stop_idx].time_s;

        double dt_try = std::min({dt, opts.dt_max_s, t_stop - t});
        bool land_on_stop = (dt_try >= t_stop - t);
        if (!land_on_stop && (t_stop - t - dt_try) < opts.dt_min_s) {
            dt_try = t_stop - t;
            land_on_stop = true;
        }

        system.prepare_interval(t, t + dt_try);
        system.rhs(t, y.data(), f.data());

        bool accepted = false;
        int newton_retries = 0;
        while (!accepted) {
            bool ok = stepper.step(t, y, f, dt_try, y_full) &&
                      stepper.step(t, y, f, 0.5 * dt_try, y_half);
            if (ok) {
                system.rhs(t + 0.5 * dt_try, y_half.data(), f_half.data());
                ok = stepper.step(t + 0.5 * dt_try, y_half, f_half, 0.5 * dt_try, y_half2);
            }
            if (!ok) {
                if (++newton_retries > 5)
                    throw NewtonDivergence(opts.newton_max_iter, max_abs(f));
                dt_try *= 0.25;
                land_on_stop = false;
                if (dt_try < opts.dt_min_s) throw StepUnderflow(t);
                system.prepare_interval(t, t + dt_try);
                continue;
            }

            // Step-doubling estimate: y_full - y_half2 is ~3x the local error
            // of the accepted two-half-step solution.
            double est_over_tol = 0.0;
            for (int i = 0; i < n; ++i) {
                const double tol =
                    opts.abs_tol_v * scales[i] +
                    opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_half2[i]));
                est_over_tol = std::max(est_over_tol, std::fabs(y_full[i] - y_half2[i]) / tol);
            }

            const bool at_floor = dt_try <= opts.dt_min_s * 4.0;
            if (est_over_tol <= kErrorSafety || (at_floor && est_over_tol <= 1.0)) {
                const double t_mid = t + 0.5 * dt_try;
                const double t_end = land_on_stop ? t_stop : t + dt_try;
                if (t_mid > t && t_mid < t_end) record(t_mid, y_half);
                t = t_end;
                y = y_half2;
                record(t, y);
                accepted = true;
                const double fac =
                    (est_over_tol > 0.0)
                        ? 0.9 * std::cbrt(kErrorSafety / est_over_tol)
                        : kGrowLimit;
                dt = dt_try * std::clamp(fac, kShrinkLimit, kGrowLimit);
            } else if (at_floor) {
                throw StepUnderflow(t);
            } else {
                const double fac = std::clamp(
                    0.9 * std::cbrt(kErrorSafety / est_over_tol), kShrinkLimit, 0.9);
                dt_try = std::max(dt_try * fac, opts.dt_min_s);
                land_on_stop = false;
                system.prepare_interval(t, t + dt_try);
            }
        }
    }
    system.instantaneous_mode();
    return trace;
}

PssResult run_to_pss(OdeSystem& system, double period_s, const SolverOptions& opts,
                     const Vec* y0) {
    opts.validate();
    if (!(period_s > 0.0)) throw ValidationError("run_to_pss", "period must be > 0");
    const Vec scales = system.state_scales();
    const int n = system.num_states();
    Vec prev = y0 ? *y0 : system.initial_state();

    double residual = 0.0;
    for (int k = 0; k < opts.pss_max_periods; ++k) {
        const double t0 = static_cast<double>(k) * period_s;
        Trace tr = integrate(system, t0, t0 + period_s, &prev, opts);
        Vec next(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            next[i] = tr.value(static_cast<std::size_t>(i), tr.size() - 1);

        residual = 0.0;
        for (int i = 0; i < n; ++i)
            residual = std::max(residual, std::fabs(next[i] - prev[i]) / scales[i]);

        if (residual <= opts.pss_period_tol)
            return {std::move(tr), k + 1, std::move(next)};
        prev = std::move(next);
    }
    throw NoSteadyState(opts.pss_max_periods, residual);
}

}  // namespace gatewave

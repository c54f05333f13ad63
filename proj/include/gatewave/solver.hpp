#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gatewave/linalg.hpp"
#include "gatewave/trace.hpp"

namespace gatewave {

struct SolverOptions {
    double rel_tol = 1e-6;
    double abs_tol_v = 1e-4;
    double dt_min_s = 1e-15;
    double dt_max_s = 1e-9;
    int newton_max_iter = 20;
    double newton_tol = 1e-10;
    double pss_period_tol = 1e-4;
    int pss_max_periods = 200;

    void validate() const;
};

struct Breakpoint {
    double time_s;
    std::string label;
};

/// Right-hand side of an assembled circuit. Implementations must be pure in
/// (t, y) apart from the discrete-input snapshot controlled through
/// prepare_interval: the solver never takes a step across a breakpoint, and
/// announces each integration interval so discontinuous inputs (logic
/// levels) stay frozen inside it.
class OdeSystem {
public:
    virtual ~OdeSystem() = default;

    virtual int num_states() const = 0;
    virtual void rhs(double t, const double* y, double* dy) const = 0;

    /// Snapshot discrete inputs for [t0, t1]; default keeps instantaneous
    /// evaluation (discrete inputs read directly at t).
    virtual void prepare_interval(double t0, double t1);
    virtual void instantaneous_mode();

    /// Mandatory step boundaries in (t0, t1): control edges and delayed
    /// logic-decision instants.
    virtual std::vector<Breakpoint> breakpoints(double t0, double t1) const;

    virtual std::vector<std::string> state_names() const;
    virtual std::vector<char> state_units() const;
    /// Magnitude scale per state used in error and PSS norms.
    virtual Vec state_scales() const;

    /// Derived per-sample quantities recorded alongside states (branch
    /// currents, power sums).
    virtual int num_outputs() const { return 0; }
    virtual std::vector<std::string> output_names() const { return {}; }
    virtual std::vector<char> output_units() const { return {}; }
    virtual void outputs(double t, const double* y, double* out) const;

    /// Default initial state; systems override with their DC solution.
    virtual Vec initial_state() const;
};

/// Solve residual(x) = 0 by damped-free Newton iteration with a
/// forward-difference Jacobian (or a supplied one). Returns x with
/// ||residual(x)||_inf <= tol. Throws NewtonDivergence with the iteration
/// count and last norm on failure or a singular Jacobian.
using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<std::vector<double>(const Vec&)>;  // row-major n*n

Vec newton_solve(const ResidualFn& residual, Vec guess, double tol, int max_iter,
                 const JacobianFn* jacobian = nullptr);

/// Trapezoidal-rule transient integration over [t0, t1] with Newton solution
/// of each implicit step, step-doubling local error control and mandatory
/// breakpoint alignment. y0 = nullptr starts from system.initial_state().
Trace integrate(OdeSystem& system, double t0, double t1, const Vec* y0,
                const SolverOptions& opts);

struct PssResult {
    Trace period_trace;  // final period
    int n_periods;
    Vec boundary_state;  // state at the end of the final period
};

/// Integrate period by period from t = 0 until the state at period
/// boundaries moves by less than pss_period_tol in the scaled max norm.
/// Throws NoSteadyState after pss_max_periods.
PssResult run_to_pss(OdeSystem& system, double period_s, const SolverOptions& opts,
                     const Vec* y0 = nullptr);

}  // namespace gatewave

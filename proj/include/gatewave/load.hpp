#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gatewave/trace.hpp"

namespace gatewave {

/// Monotone piecewise-cubic table (Fritsch-Carlson slopes). Interpolated
/// values never leave the bracketing knot interval, so a non-increasing
/// capacitance table cannot produce negative capacitance between knots.
/// Flat extrapolation beyond the end knots.
class MonotoneCubicTable {
public:
    MonotoneCubicTable() = default;
    MonotoneCubicTable(std::vector<double> x, std::vector<double> y,
                       std::string key = "table");

    double operator()(double x) const;
    const std::vector<double>& knots_x() const { return x_; }
    const std::vector<double>& knots_y() const { return y_; }
    bool empty() const { return x_.empty(); }

    /// Enforce: x strictly increasing, y strictly positive, y non-increasing.
    void validate_capacitance(const std::string& key) const;

private:
    std::vector<double> x_, y_, slope_;
};

/// Behavioral model of the driven SiC power MOSFET: square-law channel,
/// constant gate-source capacitance, voltage-dependent Miller and output
/// capacitances from monotone tables.
struct SicMosfetModel {
    double vth_v = 4.0;
    double kp_a_per_v2 = 0.06;
    double cgs_f = 390e-12;
    MonotoneCubicTable cgd_table;  // v_dg -> F
    MonotoneCubicTable cds_table;  // v_ds -> F
    double rg_internal_ohm = 6.0;

    SicMosfetModel();
    void validate(const char* key_prefix = "load.device") const;
};

/// Level-1 behavioral channel current. Zero below threshold, triode /
/// saturation above, C1-continuous across the region boundary. Negative
/// v_ds is handled by source/drain symmetry.
double channel_current(const SicMosfetModel& m, double v_gs, double v_ds);

/// Hard-switching test circuit: resistively current-limited link with the
/// device gate driven straight from the push-pull output.
struct HardSwitchCircuit {
    double v_link_v = 50.0;
    double r_limit_ohm = 100.0;
    double r_gate_ext_ohm = 0.0;
    SicMosfetModel device;

    void validate(const char* key_prefix = "load") const;
};

/// No driving target; the output node carries only probe/pad capacitance.
struct OpenLoad {
    double probe_cap_f = 10e-12;

    void validate(const char* key_prefix = "load") const;
};

struct LoadDeriv {
    double dv_gate_dt;
    double dv_drain_dt;
    double i_channel_a;
    double i_link_a;
};

/// Charge-based two-node update of the device gate/drain pair given the
/// current injected into the gate node. Throws SingularCapacitance when the
/// assembled 2x2 capacitance matrix is not invertible.
LoadDeriv hard_switch_derivs(const HardSwitchCircuit& c, double v_gate, double v_drain,
                             double i_gate_in);

struct SwitchingTimes {
    double t_on_s;   // 10-90 % fall of v_ds
    double t_off_s;  // 10-90 % rise of v_ds
};

/// 10-90 % transition durations of the drain voltage over one periodic
/// cycle. Throws IncompleteCycle when the trace holds no full cycle.
SwitchingTimes switching_times(const Trace& trace,
                               const std::string& drain_series = "v_sic_drain");

}  // namespace gatewave

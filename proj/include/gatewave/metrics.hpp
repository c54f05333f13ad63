#pragma once

#include <string>
#include <vector>

#include "gatewave/chain.hpp"
#include "gatewave/stages.hpp"
#include "gatewave/trace.hpp"

namespace gatewave {

/// Per-node waveform measurements over one periodic-steady-state period.
struct WaveformStats {
    double v_max = 0.0;
    double v_min = 0.0;
    double overshoot_v = 0.0;  // above the commanded rail
    double rise_10_90_s = 0.0;
    double fall_10_90_s = 0.0;
    double measured_duty = 0.0;  // fraction above the min/max midpoint
    double avg = 0.0;
};

/// Per-rail power measurements over one PSS period.
struct PowerStats {
    double avg_rail_current_a = 0.0;
    double penetration_charge_c = 0.0;  // per cycle
    double dissipation_w = 0.0;
    double junction_temp_c = 0.0;
    bool runaway = false;
};

/// Extremes, 10-90 % edge times and duty of one series over the trace
/// (one full PSS period). Throws IncompleteCycle when the series is
/// constant or holds no complete rising and falling transition.
WaveformStats waveform_stats(const Trace& trace, const std::string& node, double rail_v);

/// Rail current average, cross-conduction charge per cycle and the thermal
/// verdict at the steady-state junction temperature for the dissipated
/// power. Requires the trace to span one PSS period.
PowerStats power_stats(const Trace& trace, const RailSpec& rail, const ThermalModel& thermal);

/// Max scaled deviation between two traces over the named series, after
/// resampling both onto the union grid of the overlapping span. Throws
/// GridMismatch when the spans do not overlap.
double compare_traces(const Trace& a, const Trace& b,
                      const std::vector<std::string>& nodes, double scale_v);

struct EnergyReport {
    double e_in_j = 0.0;    // per period, summed over rails
    double e_diss_j = 0.0;  // per period, summed over stages
    double imbalance = 0.0; // |e_in - e_diss| / e_in
};

/// Per-period energy bookkeeping from the recorded p_in_total/p_diss_total
/// series.
EnergyReport energy_report(const Trace& trace);

struct GateChargeReport {
    double net_charge_c = 0.0;       // |integral of gate current| per period
    double per_edge_charge_c = 0.0;  // half the absolute gate charge turnover
};

GateChargeReport gate_charge_report(const Trace& trace,
                                    const std::string& gate_current = "i_gate_sic");

}  // namespace gatewave

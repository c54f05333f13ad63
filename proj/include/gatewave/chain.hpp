#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "gatewave/load.hpp"
#include "gatewave/signal.hpp"
#include "gatewave/solver.hpp"
#include "gatewave/stages.hpp"

namespace gatewave {

using LoadVariant = std::variant<OpenLoad, HardSwitchCircuit>;

/// How much of the chain a system instantiates.
enum class ChainMode {
    IsolatorOnly,  // one isolator driving its totem-pole input capacitance
    SubChainLow,   // low-side isolator + totem-pole + GaN gate load
    Full,          // both sides, push-pull stage and the configured load
};

/// Per-rail bookkeeping for power metrics: the rail voltage and the trace
/// series whose sum is the rail current.
struct RailSpec {
    std::string name;
    double rail_v;
    std::vector<std::string> current_series;
    std::string shoot_series;  // empty when the rail has no cross-conduction branch
};

/// The fixed gate-drive chain topology: PWM -> isolators -> complementary
/// Si pairs -> GaN push-pull -> load. High-side stages are simulated in
/// their floating frame (node voltages relative to the push-pull output),
/// which is how the floating supplies reference them; common-mode coupling
/// between frames is not modeled.
class DriverChain : public OdeSystem {
public:
    DriverChain(ChainMode mode, PwmSpec pwm, IsolatorModel iso_lo, TotemPoleModel tp_lo,
                IsolatorModel iso_hi, TotemPoleModel tp_hi, GanPushPullModel pp,
                LoadVariant load);

    int num_states() const override { return n_states_; }
    void rhs(double t, const double* y, double* dy) const override;
    void prepare_interval(double t0, double t1) override;
    void instantaneous_mode() override;
    std::vector<Breakpoint> breakpoints(double t0, double t1) const override;
    std::vector<std::string> state_names() const override { return state_names_; }
    std::vector<char> state_units() const override { return state_units_; }
    Vec state_scales() const override { return scales_; }
    int num_outputs() const override { return static_cast<int>(output_names_.size()); }
    std::vector<std::string> output_names() const override { return output_names_; }
    std::vector<char> output_units() const override { return output_units_; }
    void outputs(double t, const double* y, double* out) const override;

    /// Off-state DC solution by forward substitution through the chain.
    Vec initial_state() const override;

    std::vector<RailSpec> rail_specs() const;
    const PwmSpec& pwm() const { return pwm_; }

private:
    struct SideIdx {
        int iso = -1;
        int tpj = -1;    // totem output junction (present when out_l_h > 0)
        int tloop = -1;  // gate-loop inductor current
        int gg = -1;     // driven GaN gate node
        bool branch = false;
    };

    struct Work;  // per-evaluation currents, filled by eval()

    bool logic_level(Side side, double t) const;
    void eval(double t, const double* y, Work& w) const;

    ChainMode mode_;
    PwmSpec pwm_;
    IsolatorModel iso_[2];  // [0] = low, [1] = high
    TotemPoleModel tp_[2];
    GanPushPullModel pp_;
    LoadVariant load_;

    SideIdx side_[2];
    int idx_pp_ = -1;
    int idx_lpar_ = -1;
    int idx_vload_ = -1;
    int idx_vg_ = -1;
    int idx_vd_ = -1;
    bool merged_output_ = false;  // open load folded into the push-pull node
    int n_states_ = 0;
    int n_sides_ = 1;

    std::vector<std::string> state_names_;
    std::vector<char> state_units_;
    std::vector<std::string> output_names_;
    std::vector<char> output_units_;
    Vec scales_;

    bool snapped_ = false;
    bool snap_level_[2] = {false, false};
};

/// Push-pull stage driven by prescribed gate waveforms, for stage-level
/// experiments (dead-time sweeps, step responses).
class PushPullSystem : public OdeSystem {
public:
    using GateFn = std::function<double(double)>;

    PushPullSystem(GanPushPullModel pp, LoadVariant load, GateFn gate_hi, GateFn gate_lo,
                   std::vector<double> mandatory_times = {});

    int num_states() const override { return n_states_; }
    void rhs(double t, const double* y, double* dy) const override;
    std::vector<Breakpoint> breakpoints(double t0, double t1) const override;
    std::vector<std::string> state_names() const override { return state_names_; }
    std::vector<char> state_units() const override { return state_units_; }
    Vec state_scales() const override { return scales_; }
    int num_outputs() const override { return static_cast<int>(output_names_.size()); }
    std::vector<std::string> output_names() const override { return output_names_; }
    std::vector<char> output_units() const override { return output_units_; }
    void outputs(double t, const double* y, double* out) const override;
    Vec initial_state() const override;

private:
    GanPushPullModel pp_;
    LoadVariant load_;
    GateFn gate_hi_, gate_lo_;
    std::vector<double> mandatory_times_;

    int idx_pp_ = 0;
    int idx_lpar_ = -1;
    int idx_vload_ = -1;
    int idx_vg_ = -1;
    int idx_vd_ = -1;
    bool merged_output_ = false;
    int n_states_ = 0;

    std::vector<std::string> state_names_;
    std::vector<char> state_units_;
    std::vector<std::string> output_names_;
    std::vector<char> output_units_;
    Vec scales_;
};

/// Average current drawn from the shared isolator/totem-pole rail at
/// periodic steady state of the low-side sub-chain, with the rail voltage
/// overridden on both models. gan_load supplies the driven gate capacitance.
/// Throws NoSteadyState if periodic convergence fails.
double avg_supply_current(const TotemPoleModel& tp, const IsolatorModel& iso,
                          const GanPushPullModel& gan_load, double f_hz, double rail_v,
                          PwmSpec pwm, const SolverOptions& opts,
                          int* n_periods_out = nullptr);

}  // namespace gatewave

#pragma once

namespace gatewave {

/// Digital isolator output stage: a delayed two-level logic decision feeding
/// a slew-limited first-order driver. The two free shaping parameters
/// (out_resistance_ohm, slew_limit_v_per_s) are calibration values.
struct IsolatorModel {
    double prop_delay_s = 10e-9;
    double out_resistance_ohm = 150.0;
    double slew_limit_v_per_s = 6.0e7;
    /// Sink-to-source drive ratio of the output stage; the pull-down path is
    /// this factor faster (real drivers sink harder than they source).
    double pulldown_strength = 1.15;
    double rail_v = 3.5;
    double self_cap_f = 30e-12;
    double static_current_a = 1e-3;  // quiescent draw on the output-side rail
    /// Internal switching charge drawn from the output-side rail per input
    /// edge (the transceiver core's dynamic consumption).
    double dynamic_charge_c = 220e-12;

    void validate(const char* key_prefix = "isolator") const;
};

struct IsolatorDeriv {
    double dv_out_dt;   // V/s
    double i_supply_a;  // dynamic rail current, >= 0 during pull-up, 0 otherwise
};

/// Slew-limited RC response toward the rail (logic high) or ground. C_total
/// is the node capacitance including the downstream input capacitance.
IsolatorDeriv isolator_rhs(const IsolatorModel& m, bool logic_high, double v_out,
                           double c_total_f);

/// Complementary Si-MOSFET pair driven by one isolator output. Inverting:
/// a high control voltage turns the lower (N) device on, a low one the
/// upper (P) device. The thresholds differ per device as they do in real
/// complementary pairs; set vth_p_v equal to vth_v for a symmetric pair.
/// The optional output branch (out_l_h/out_r_ohm/out_cap_f) models the
/// package/trace loop between the pair and the driven gate; zero inductance
/// collapses it to the plain first-order drive.
struct TotemPoleModel {
    double vth_v = 1.35;   // lower-device threshold
    double vth_p_v = 1.95; // upper-device threshold (gate-source magnitude)
    double ron_ohm = 2.0;
    double transconductance_s = 1.12;  // conductance slope in the partially-on region
    double input_cap_f = 120e-12;
    double cross_cond_sat_a = 0.95;
    double rail_v = 3.5;
    double out_l_h = 430e-9;
    double out_r_ohm = 59.0;
    double out_cap_f = 15e-12;

    /// Simultaneous-conduction window in control-voltage terms:
    /// (vth_v, rail_v - vth_p_v); empty when the thresholds meet.
    double window_lo_v() const { return vth_v; }
    double window_hi_v() const { return rail_v - vth_p_v; }

    void validate(const char* key_prefix = "totem") const;
};

struct TotemCurrents {
    double i_up_a;
    double i_down_a;
    double i_shoot_a;
};

/// Device currents of the pair at control voltage v_ctrl and output node
/// voltage v_out. i_shoot is the reported cross-conduction component,
/// min(g_up, g_down) * rail capped at cross_cond_sat_a; it is a diagnostic
/// decomposition, already contained in i_up/i_down.
TotemCurrents totem_currents(const TotemPoleModel& m, double v_ctrl, double v_out);

/// GaN-HEMT push-pull output pair. parasitic_l_h/parasitic_r_ohm model the
/// series output path (the Prototype-A vs. -B layout knob); out_cap_f is the
/// pair's output-node capacitance.
struct GanPushPullModel {
    double vth_v = 1.0;
    double ron_ohm = 0.4;
    double transconductance_s = 10.0;
    double ciss_f = 150e-12;
    double rail_v = 18.0;
    double parasitic_l_h = 2e-9;
    double parasitic_r_ohm = 1.5;
    double out_cap_f = 120e-12;

    void validate(const char* key_prefix = "pushpull") const;
};

struct PushPullCurrents {
    double i_hi_a;     // rail -> output through the upper device
    double i_lo_a;     // output -> ground through the lower device
    double i_shoot_a;  // min-conduction cross current, uncapped
};

PushPullCurrents pushpull_currents(const GanPushPullModel& m, double v_gate_hi,
                                   double v_gate_lo, double v_out);

/// First-order junction-to-ambient thermal network with a latched runaway
/// threshold.
struct ThermalModel {
    double r_th_k_per_w = 83.4;
    double c_th_j_per_k = 0.02;
    double ambient_c = 25.0;
    double runaway_threshold_c = 100.0;

    void validate(const char* key_prefix = "thermal") const;
    double steady_state_c(double power_w) const { return ambient_c + r_th_k_per_w * power_w; }
};

struct ThermalStep {
    double t_next_c;
    bool runaway;
};

/// Exact exponential update toward ambient + r_th * power over dt. The exact
/// form keeps the update a contraction for any dt > 0.
ThermalStep thermal_step(const ThermalModel& m, double t_junction_c, double power_w,
                         double dt_s);

/// Saturating conduction of one device: exactly 0 at or below threshold,
/// approaching 1/ron at full enhancement, continuously differentiable.
double device_conductance(double overdrive_v, double transconductance_s, double ron_ohm);

}  // namespace gatewave

#include "gatewave/stages.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

void require(bool ok, const char* prefix, const char* field, const char* reason) {
    if (!ok) throw ValidationError(std::string(prefix) + "." + field, reason);
}

}  // namespace

double device_conductance(double overdrive_v, double transconductance_s, double ron_ohm) {
    if (overdrive_v <= 0.0) return 0.0;
    const double x = overdrive_v * transconductance_s * ron_ohm;
    const double th = std::tanh(x);
    return th * th / ron_ohm;
}

void IsolatorModel::validate(const char* p) const {
    require(prop_delay_s > 0.0, p, "prop_delay_s", "must be > 0");
    require(out_resistance_ohm > 0.0, p, "out_resistance_ohm", "must be > 0");
    require(slew_limit_v_per_s > 0.0, p, "slew_limit_v_per_s", "must be > 0");
    require(pulldown_strength > 0.0, p, "pulldown_strength", "must be > 0");
    require(rail_v >= 2.5 && rail_v <= 6.0, p, "rail_v",
            "outside the device supply range [2.5, 6.0] V");
    require(self_cap_f > 0.0, p, "self_cap_f", "must be > 0");
    require(static_current_a >= 0.0, p, "static_current_a", "must be >= 0");
    require(dynamic_charge_c >= 0.0, p, "dynamic_charge_c", "must be >= 0");
}

IsolatorDeriv isolator_rhs(const IsolatorModel& m, bool logic_high, double v_out,
                           double c_total_f) {
    const double v_target = logic_high ? m.rail_v : 0.0;
    const double tau = m.out_resistance_ohm * c_total_f;
    // Smooth saturation of the RC rate at the slew limit. A hard clamp would
    // leave the mid-swing dynamics with zero state dependence, so a
    // compressed high-frequency orbit could park anywhere; the tanh keeps
    // the RC behavior for small errors and the slew cap for large ones while
    // every orbit stays strictly contracting.
    const double x = (v_target - v_out) / (tau * m.slew_limit_v_per_s);
    const double gain = logic_high ? 1.0 : m.pulldown_strength;
    const double dv = gain * m.slew_limit_v_per_s * std::tanh(x);
    const double i_supply = logic_high ? std::max(0.0, c_total_f * dv) : 0.0;
    return {dv, i_supply};
}

void TotemPoleModel::validate(const char* p) const {
    require(vth_v > 0.0, p, "vth_v", "must be > 0");
    require(vth_p_v > 0.0, p, "vth_p_v", "must be > 0");
    require(ron_ohm > 0.0, p, "ron_ohm", "must be > 0");
    require(transconductance_s > 0.0, p, "transconductance_s", "must be > 0");
    require(input_cap_f > 0.0, p, "input_cap_f", "must be > 0");
    require(cross_cond_sat_a > 0.0, p, "cross_cond_sat_a", "must be > 0");
    require(rail_v > 0.0, p, "rail_v", "must be > 0");
    require(out_l_h >= 0.0, p, "out_l_h", "must be >= 0");
    require(out_r_ohm >= 0.0, p, "out_r_ohm", "must be >= 0");
    require(out_cap_f >= 0.0, p, "out_cap_f", "must be >= 0");
    if (out_l_h > 0.0)
        require(out_cap_f > 0.0, p, "out_cap_f",
                "must be > 0 when out_l_h > 0 (the junction node needs capacitance)");
}

TotemCurrents totem_currents(const TotemPoleModel& m, double v_ctrl, double v_out) {
    const double g_up = device_conductance(m.rail_v - v_ctrl - m.vth_p_v,
                                           m.transconductance_s, m.ron_ohm);
    const double g_down =
        device_conductance(v_ctrl - m.vth_v, m.transconductance_s, m.ron_ohm);
    TotemCurrents c;
    c.i_up_a = g_up * (m.rail_v - v_out);
    c.i_down_a = g_down * v_out;
    c.i_shoot_a = std::min(std::min(g_up, g_down) * m.rail_v, m.cross_cond_sat_a);
    return c;
}

void GanPushPullModel::validate(const char* p) const {
    require(vth_v > 0.0, p, "vth_v", "must be > 0");
    require(ron_ohm > 0.0, p, "ron_ohm", "must be > 0");
    require(transconductance_s > 0.0, p, "transconductance_s", "must be > 0");
    require(ciss_f > 0.0, p, "ciss_f", "must be > 0");
    require(rail_v > 0.0, p, "rail_v", "must be > 0");
    require(parasitic_l_h >= 0.0, p, "parasitic_l_h", "must be >= 0");
    require(parasitic_r_ohm >= 0.0, p, "parasitic_r_ohm", "must be >= 0");
    require(out_cap_f >= 0.0, p, "out_cap_f", "must be >= 0");
    if (parasitic_l_h > 0.0)
        require(out_cap_f > 0.0, p, "out_cap_f",
                "must be > 0 when parasitic_l_h > 0 (the output node needs capacitance)");
}

PushPullCurrents pushpull_currents(const GanPushPullModel& m, double v_gate_hi,
                                   double v_gate_lo, double v_out) {
    const double g_hi =
        device_conductance(v_gate_hi - m.vth_v, m.transconductance_s, m.ron_ohm);
    const double g_lo =
        device_conductance(v_gate_lo - m.vth_v, m.transconductance_s, m.ron_ohm);
    PushPullCurrents c;
    c.i_hi_a = g_hi * (m.rail_v - v_out);
    c.i_lo_a = g_lo * v_out;
    c.i_shoot_a = std::min(g_hi, g_lo) * m.rail_v;
    return c;
}

void ThermalModel::validate(const char* p) const {
    require(r_th_k_per_w > 0.0, p, "r_th_k_per_w", "must be > 0");
    require(c_th_j_per_k > 0.0, p, "c_th_j_per_k", "must be > 0");
    require(runaway_threshold_c > ambient_c, p, "runaway_threshold_c",
            "must exceed ambient_c");
}

ThermalStep thermal_step(const ThermalModel& m, double t_junction_c, double power_w,
                         double dt_s) {
    if (!(dt_s > 0.0)) throw ValidationError("thermal_step.dt", "must be > 0");
    const double t_fix = m.steady_state_c(power_w);
    const double decay = std::exp(-dt_s / (m.r_th_k_per_w * m.c_th_j_per_k));
    const double t_next = t_fix + (t_junction_c - t_fix) * decay;
    return {t_next, t_next >= m.runaway_threshold_c};
}

}  // namespace gatewave

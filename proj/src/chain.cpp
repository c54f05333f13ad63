#include "gatewave/chain.hpp"

#include <algorithm>
#include <cmath>

#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

constexpr int kLow = 0;
constexpr int kHigh = 1;

Side input_side(int side) { return side == kHigh ? Side::High : Side::Low; }

// DC drain voltage on the resistive load line for a held gate voltage.
// (v_link - v)/r_limit - i_channel(v_gate, v) is strictly decreasing in v,
// so bisection is exact enough and unconditionally safe.
double dc_drain_voltage(const HardSwitchCircuit& c, double v_gate) {
    double lo = 0.0, hi = c.v_link_v;
    auto residual = [&](double v) {
        return (c.v_link_v - v) / c.r_limit_ohm - channel_current(c.device, v_gate, v);
    };
    if (residual(lo) <= 0.0) return lo;
    if (residual(hi) >= 0.0) return hi;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// DriverChain
// ---------------------------------------------------------------------------

struct DriverChain::Work {
    bool level[2] = {false, false};
    IsolatorDeriv iso[2] = {};
    double i_iso_pull_down[2] = {0.0, 0.0};
    TotemCurrents tc[2] = {};
    double v_tp_node[2] = {0.0, 0.0};  // node the pair switches (junction or gate)
    double i_loop[2] = {0.0, 0.0};
    PushPullCurrents pc = {};
    double v_pp = 0.0;
    double i_out = 0.0;   // current leaving the push-pull node into the output path
    double i_gate = 0.0;  // hard switch: current into the device gate network
    LoadDeriv ld = {};
};

DriverChain::DriverChain(ChainMode mode, PwmSpec pwm, IsolatorModel iso_lo,
                         TotemPoleModel tp_lo, IsolatorModel iso_hi, TotemPoleModel tp_hi,
                         GanPushPullModel pp, LoadVariant load)
    : mode_(mode), pwm_(std::move(pwm)), pp_(pp), load_(std::move(load)) {
    iso_[kLow] = iso_lo;
    iso_[kHigh] = iso_hi;
    tp_[kLow] = tp_lo;
    tp_[kHigh] = tp_hi;

    pwm_.validate();
    pp_.validate();
    n_sides_ = (mode_ == ChainMode::Full) ? 2 : 1;
    for (int s = 0; s < n_sides_; ++s) {
        iso_[s].validate(s == kLow ? "isolator_lo" : "isolator_hi");
        if (mode_ != ChainMode::IsolatorOnly)
            tp_[s].validate(s == kLow ? "totem_lo" : "totem_hi");
        if (mode_ != ChainMode::IsolatorOnly && tp_[s].rail_v != iso_[s].rail_v)
            throw ValidationError(s == kLow ? "totem_lo.rail_v" : "totem_hi.rail_v",
                                  "must equal its isolator rail (shared supply)");
    }

    auto add_state = [&](const char* name, char unit, double scale) {
        state_names_.push_back(name);
        state_units_.push_back(unit);
        scales_.push_back(scale);
        return n_states_++;
    };

    static const char* kIsoName[2] = {"v_iso_lo", "v_iso_hi"};
    static const char* kTpjName[2] = {"v_tpj_lo", "v_tpj_hi"};
    static const char* kLoopName[2] = {"i_tploop_lo", "i_tploop_hi"};
    static const char* kGateName[2] = {"v_gg_lo", "v_gg_hi"};

    for (int s = 0; s < n_sides_; ++s) {
        side_[s].iso = add_state(kIsoName[s], 'V', iso_[s].rail_v);
        if (mode_ == ChainMode::IsolatorOnly) continue;
        side_[s].branch = tp_[s].out_l_h > 0.0;
        if (side_[s].branch) {
            side_[s].tpj = add_state(kTpjName[s], 'V', tp_[s].rail_v);
            side_[s].tloop = add_state(kLoopName[s], 'A', 1.0);
        }
        side_[s].gg = add_state(kGateName[s], 'V', tp_[s].rail_v);
    }

    if (mode_ == ChainMode::Full) {
        const bool has_lpar = pp_.parasitic_l_h > 0.0;
        if (std::holds_alternative<OpenLoad>(load_)) {
            const auto& ol = std::get<OpenLoad>(load_);
            ol.validate();
            merged_output_ = !has_lpar;
            const double cap = merged_output_ ? pp_.out_cap_f + ol.probe_cap_f : pp_.out_cap_f;
            if (!(cap > 0.0))
                throw ValidationError("pushpull.out_cap_f",
                                      "push-pull output node has no capacitance");
            idx_pp_ = add_state("v_pp", 'V', pp_.rail_v);
            if (has_lpar) {
                idx_lpar_ = add_state("i_lpar", 'A', 1.0);
                idx_vload_ = add_state("v_load", 'V', pp_.rail_v);
            }
        } else {
            const auto& hs = std::get<HardSwitchCircuit>(load_);
            hs.validate();
            if (!(pp_.out_cap_f > 0.0))
                throw ValidationError("pushpull.out_cap_f",
                                      "must be > 0 when driving the switching load");
            if (!has_lpar &&
                !(pp_.parasitic_r_ohm + hs.r_gate_ext_ohm + hs.device.rg_internal_ohm > 0.0))
                throw ValidationError("load.r_gate_ext_ohm",
                                      "gate path needs nonzero resistance when "
                                      "parasitic_l_h = 0");
            idx_pp_ = add_state("v_pp", 'V', pp_.rail_v);
            if (has_lpar) idx_lpar_ = add_state("i_lpar", 'A', 1.0);
            idx_vg_ = add_state("v_sic_gate", 'V', pp_.rail_v);
            idx_vd_ = add_state("v_sic_drain", 'V', hs.v_link_v);
        }
    }

    auto add_output = [&](const char* name, char unit) {
        output_names_.push_back(name);
        output_units_.push_back(unit);
    };
    add_output("i_rail_iso_lo", 'A');
    if (mode_ != ChainMode::IsolatorOnly) {
        add_output("i_rail_tp_lo", 'A');
        add_output("i_shoot_tp_lo", 'A');
    }
    if (mode_ == ChainMode::Full) {
        add_output("i_rail_iso_hi", 'A');
        add_output("i_rail_tp_hi", 'A');
        add_output("i_shoot_tp_hi", 'A');
        add_output("i_rail_pp", 'A');
        add_output("i_shoot_pp", 'A');
        if (idx_vd_ >= 0) {
            add_output("i_gate_sic", 'A');
            add_output("i_chan_sic", 'A');
            add_output("i_link", 'A');
        }
    }
    add_output("p_in_total", 'W');
    add_output("p_diss_total", 'W');
}

bool DriverChain::logic_level(Side side, double t) const {
    const int s = (side == Side::High) ? kHigh : kLow;
    const double v = eval_side(pwm_, side, t - iso_[s].prop_delay_s);
    return v >= 0.5 * pwm_.logic_high_v;
}

void DriverChain::prepare_interval(double t0, double t1) {
    const double tm = 0.5 * (t0 + t1);
    snap_level_[kLow] = logic_level(Side::Low, tm);
    snap_level_[kHigh] = logic_level(Side::High, tm);
    snapped_ = true;
}

void DriverChain::instantaneous_mode() { snapped_ = false; }

void DriverChain::eval(double t, const double* y, Work& w) const {
    for (int s = 0; s < n_sides_; ++s) {
        const Side sd = input_side(s);
        w.level[s] = snapped_ ? snap_level_[s == kHigh ? kHigh : kLow] : logic_level(sd, t);

        // The totem-pole input capacitance loads the isolator in every mode;
        // fig-3 style isolator measurements are taken in circuit.
        const double c_tot = iso_[s].self_cap_f + tp_[s].input_cap_f;
        const double v_iso = y[side_[s].iso];
        w.iso[s] = isolator_rhs(iso_[s], w.level[s], v_iso, c_tot);
        w.i_iso_pull_down[s] =
            w.level[s] ? 0.0 : std::max(0.0, -c_tot * w.iso[s].dv_out_dt);

        if (mode_ == ChainMode::IsolatorOnly) continue;

        const double v_node = side_[s].branch ? y[side_[s].tpj] : y[side_[s].gg];
        w.v_tp_node[s] = v_node;
        w.tc[s] = totem_currents(tp_[s], v_iso, v_node);
        w.i_loop[s] = side_[s].branch ? y[side_[s].tloop] : 0.0;
    }

    if (mode_ != ChainMode::Full) return;

    w.v_pp = y[idx_pp_];
    w.pc = pushpull_currents(pp_, y[side_[kHigh].gg], y[side_[kLow].gg], w.v_pp);

    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        const double rg_tot = hs.device.rg_internal_ohm + hs.r_gate_ext_ohm;
        if (idx_lpar_ >= 0) {
            w.i_gate = y[idx_lpar_];
        } else {
            w.i_gate = (w.v_pp - y[idx_vg_]) / (pp_.parasitic_r_ohm + rg_tot);
        }
        w.i_out = w.i_gate;
        w.ld = hard_switch_derivs(hs, y[idx_vg_], y[idx_vd_], w.i_gate);
    } else if (idx_lpar_ >= 0) {
        w.i_out = y[idx_lpar_];
    } else {
        w.i_out = 0.0;  // load capacitance folded into the push-pull node
    }
}

void DriverChain::rhs(double t, const double* y, double* dy) const {
    Work w;
    eval(t, y, w);

    for (int s = 0; s < n_sides_; ++s) {
        dy[side_[s].iso] = w.iso[s].dv_out_dt;
        if (mode_ == ChainMode::IsolatorOnly) continue;
        const double i_pair = w.tc[s].i_up_a - w.tc[s].i_down_a;
        if (side_[s].branch) {
            const TotemPoleModel& tp = tp_[s];
            dy[side_[s].tpj] = (i_pair - w.i_loop[s]) / tp.out_cap_f;
            dy[side_[s].tloop] =
                (y[side_[s].tpj] - y[side_[s].gg] - tp.out_r_ohm * w.i_loop[s]) / tp.out_l_h;
            dy[side_[s].gg] = w.i_loop[s] / pp_.ciss_f;
        } else {
            dy[side_[s].gg] = i_pair / (pp_.ciss_f + tp_[s].out_cap_f);
        }
    }

    if (mode_ != ChainMode::Full) return;

    double c_pp = pp_.out_cap_f;
    if (merged_output_) c_pp += std::get<OpenLoad>(load_).probe_cap_f;
    dy[idx_pp_] = (w.pc.i_hi_a - w.pc.i_lo_a - w.i_out) / c_pp;

    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        if (idx_lpar_ >= 0) {
            const double rg_tot = hs.device.rg_internal_ohm + hs.r_gate_ext_ohm;
            dy[idx_lpar_] = (w.v_pp - pp_.parasitic_r_ohm * w.i_gate - rg_tot * w.i_gate -
                             y[idx_vg_]) /
                            pp_.parasitic_l_h;
        }
        dy[idx_vg_] = w.ld.dv_gate_dt;
        dy[idx_vd_] = w.ld.dv_drain_dt;
    } else if (idx_lpar_ >= 0) {
        const auto& ol = std::get<OpenLoad>(load_);
        dy[idx_lpar_] = (w.v_pp - pp_.parasitic_r_ohm * y[idx_lpar_] - y[idx_vload_]) /
                        pp_.parasitic_l_h;
        dy[idx_vload_] = y[idx_lpar_] / ol.probe_cap_f;
    }
}

void DriverChain::outputs(double t, const double* y, double* out) const {
    Work w;
    eval(t, y, w);

    double p_in = 0.0, p_diss = 0.0;
    int k = 0;

    auto emit_side = [&](int s) {
        // Core dynamic draw averages to two edges' charge per period.
        const double i_core = iso_[s].static_current_a +
                              2.0 * iso_[s].dynamic_charge_c * pwm_.frequency_hz;
        const double i_rail_iso = w.iso[s].i_supply_a + i_core;
        out[k++] = i_rail_iso;
        p_in += i_rail_iso * iso_[s].rail_v;
        p_diss += w.iso[s].i_supply_a * (iso_[s].rail_v - y[side_[s].iso]) +
                  w.i_iso_pull_down[s] * y[side_[s].iso] +
                  i_core * iso_[s].rail_v;
        if (mode_ == ChainMode::IsolatorOnly) return;
        out[k++] = w.tc[s].i_up_a;
        out[k++] = w.tc[s].i_shoot_a;
        p_in += w.tc[s].i_up_a * tp_[s].rail_v;
        p_diss += w.tc[s].i_up_a * (tp_[s].rail_v - w.v_tp_node[s]) +
                  w.tc[s].i_down_a * w.v_tp_node[s] +
                  w.i_loop[s] * w.i_loop[s] * tp_[s].out_r_ohm;
    };

    emit_side(kLow);
    if (mode_ == ChainMode::Full) {
        emit_side(kHigh);
        out[k++] = w.pc.i_hi_a;
        out[k++] = w.pc.i_shoot_a;
        p_in += w.pc.i_hi_a * pp_.rail_v;
        p_diss += w.pc.i_hi_a * (pp_.rail_v - w.v_pp) + w.pc.i_lo_a * w.v_pp;
        if (idx_vd_ >= 0) {
            const auto& hs = std::get<HardSwitchCircuit>(load_);
            const double rg_tot = hs.device.rg_internal_ohm + hs.r_gate_ext_ohm;
            out[k++] = w.i_gate;
            out[k++] = w.ld.i_channel_a;
            out[k++] = w.ld.i_link_a;
            p_in += w.ld.i_link_a * hs.v_link_v;
            p_diss += w.i_gate * w.i_gate * (rg_tot + pp_.parasitic_r_ohm) +
                      w.ld.i_channel_a * y[idx_vd_] +
                      w.ld.i_link_a * w.ld.i_link_a * hs.r_limit_ohm;
        } else if (idx_lpar_ >= 0) {
            p_diss += y[idx_lpar_] * y[idx_lpar_] * pp_.parasitic_r_ohm;
        }
    }
    out[k++] = p_in;
    out[k++] = p_diss;
}

std::vector<Breakpoint> DriverChain::breakpoints(double t0, double t1) const {
    const double T = pwm_.period_s();
    struct Base {
        double offset;
        std::string label;
    };
    std::vector<Base> bases;
    const double threshold = 0.5 * pwm_.logic_high_v;
    for (int s = 0; s < n_sides_; ++s) {
        const Side sd = input_side(s);
        const char* tag = (s == kHigh) ? "hi" : "lo";
        const double start = (sd == Side::High) ? 0.0 : pwm_.resolved_phase() * T;
        const double duty = (sd == Side::High) ? pwm_.duty_high : pwm_.duty_low;
        bases.push_back({start, std::string(tag) + "_in_rise"});
        bases.push_back({start + pwm_.rise_fall_s, ""});
        bases.push_back({start + duty * T, std::string(tag) + "_in_fall"});
        bases.push_back({start + duty * T + pwm_.rise_fall_s, ""});
        const auto cross = threshold_crossings(pwm_, sd, threshold);
        bases.push_back({cross.first + iso_[s].prop_delay_s, std::string(tag) + "_iso_on"});
        bases.push_back({cross.second + iso_[s].prop_delay_s, std::string(tag) + "_iso_off"});
    }

    std::vector<Breakpoint> out;
    for (const auto& b : bases) {
        const double base = std::fmod(b.offset, T);
        const long k0 = static_cast<long>(std::floor((t0 - base) / T));
        for (long k = k0;; ++k) {
            const double t = base + static_cast<double>(k) * T;
            if (t > t1) break;
            if (t > t0 && t < t1) out.push_back({t, b.label});
        }
    }
    return out;
}

Vec DriverChain::initial_state() const {
    Vec y(static_cast<std::size_t>(n_states_), 0.0);
    double v_gg[2] = {0.0, 0.0};
    for (int s = 0; s < n_sides_; ++s) {
        const bool level = logic_level(input_side(s), 0.0);
        const double v_iso = level ? iso_[s].rail_v : 0.0;
        y[side_[s].iso] = v_iso;
        if (mode_ == ChainMode::IsolatorOnly) continue;
        const TotemPoleModel& tp = tp_[s];
        const double g_up = device_conductance(tp.rail_v - v_iso - tp.vth_p_v,
                                               tp.transconductance_s, tp.ron_ohm);
        const double g_dn =
            device_conductance(v_iso - tp.vth_v, tp.transconductance_s, tp.ron_ohm);
        const double g_sum = g_up + g_dn;
        const double v_node = (g_sum > 1e-15) ? g_up * tp.rail_v / g_sum : 0.0;
        if (side_[s].branch) {
            y[side_[s].tpj] = v_node;
            y[side_[s].tloop] = 0.0;
        }
        y[side_[s].gg] = v_node;
        v_gg[s] = v_node;
    }
    if (mode_ != ChainMode::Full) return y;

    const double g_hi =
        device_conductance(v_gg[kHigh] - pp_.vth_v, pp_.transconductance_s, pp_.ron_ohm);
    const double g_lo =
        device_conductance(v_gg[kLow] - pp_.vth_v, pp_.transconductance_s, pp_.ron_ohm);
    const double g_sum = g_hi + g_lo;
    const double v_pp = (g_sum > 1e-15) ? g_hi * pp_.rail_v / g_sum : 0.0;
    y[idx_pp_] = v_pp;
    if (idx_vload_ >= 0) y[idx_vload_] = v_pp;
    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        y[idx_vg_] = v_pp;  // no DC gate current
        y[idx_vd_] = dc_drain_voltage(hs, v_pp);
    }
    return y;
}

std::vector<RailSpec> DriverChain::rail_specs() const {
    std::vector<RailSpec> rails;
    if (mode_ == ChainMode::IsolatorOnly) {
        rails.push_back({"dsil", iso_[kLow].rail_v, {"i_rail_iso_lo"}, ""});
        return rails;
    }
    rails.push_back({"dsil", tp_[kLow].rail_v, {"i_rail_iso_lo", "i_rail_tp_lo"},
                     "i_shoot_tp_lo"});
    if (mode_ == ChainMode::Full) {
        rails.push_back({"dsih", tp_[kHigh].rail_v, {"i_rail_iso_hi", "i_rail_tp_hi"},
                         "i_shoot_tp_hi"});
        rails.push_back({"dgan", pp_.rail_v, {"i_rail_pp"}, "i_shoot_pp"});
        if (std::holds_alternative<HardSwitchCircuit>(load_))
            rails.push_back({"link", std::get<HardSwitchCircuit>(load_).v_link_v,
                             {"i_link"}, ""});
    }
    return rails;
}

// ---------------------------------------------------------------------------
// PushPullSystem
// ---------------------------------------------------------------------------

PushPullSystem::PushPullSystem(GanPushPullModel pp, LoadVariant load, GateFn gate_hi,
                               GateFn gate_lo, std::vector<double> mandatory_times)
    : pp_(pp),
      load_(std::move(load)),
      gate_hi_(std::move(gate_hi)),
      gate_lo_(std::move(gate_lo)),
      mandatory_times_(std::move(mandatory_times)) {
    pp_.validate();
    std::sort(mandatory_times_.begin(), mandatory_times_.end());

    auto add_state = [&](const char* name, char unit, double scale) {
        state_names_.push_back(name);
        state_units_.push_back(unit);
        scales_.push_back(scale);
        return n_states_++;
    };

    const bool has_lpar = pp_.parasitic_l_h > 0.0;
    if (std::holds_alternative<OpenLoad>(load_)) {
        std::get<OpenLoad>(load_).validate();
        merged_output_ = !has_lpar;
        idx_pp_ = add_state("v_pp", 'V', pp_.rail_v);
        if (has_lpar) {
            idx_lpar_ = add_state("i_lpar", 'A', 1.0);
            idx_vload_ = add_state("v_load", 'V', pp_.rail_v);
        }
    } else {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        hs.validate();
        if (!(pp_.out_cap_f > 0.0))
            throw ValidationError("pushpull.out_cap_f",
                                  "must be > 0 when driving the switching load");
        idx_pp_ = add_state("v_pp", 'V', pp_.rail_v);
        if (has_lpar) idx_lpar_ = add_state("i_lpar", 'A', 1.0);
        idx_vg_ = add_state("v_sic_gate", 'V', pp_.rail_v);
        idx_vd_ = add_state("v_sic_drain", 'V', hs.v_link_v);
    }

    output_names_ = {"i_rail_pp", "i_shoot_pp", "p_in_total", "p_diss_total"};
    output_units_ = {'A', 'A', 'W', 'W'};
}

void PushPullSystem::rhs(double t, const double* y, double* dy) const {
    const double v_pp = y[idx_pp_];
    const auto pc = pushpull_currents(pp_, gate_hi_(t), gate_lo_(t), v_pp);

    double i_out = 0.0;
    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        const double rg_tot = hs.device.rg_internal_ohm + hs.r_gate_ext_ohm;
        double i_gate;
        if (idx_lpar_ >= 0) {
            i_gate = y[idx_lpar_];
            dy[idx_lpar_] = (v_pp - pp_.parasitic_r_ohm * i_gate - rg_tot * i_gate -
                             y[idx_vg_]) /
                            pp_.parasitic_l_h;
        } else {
            i_gate = (v_pp - y[idx_vg_]) / (pp_.parasitic_r_ohm + rg_tot);
        }
        const auto ld = hard_switch_derivs(hs, y[idx_vg_], y[idx_vd_], i_gate);
        dy[idx_vg_] = ld.dv_gate_dt;
        dy[idx_vd_] = ld.dv_drain_dt;
        i_out = i_gate;
    } else if (idx_lpar_ >= 0) {
        const auto& ol = std::get<OpenLoad>(load_);
        i_out = y[idx_lpar_];
        dy[idx_lpar_] = (v_pp - pp_.parasitic_r_ohm * i_out - y[idx_vload_]) /
                        pp_.parasitic_l_h;
        dy[idx_vload_] = i_out / ol.probe_cap_f;
    }

    double c_pp = pp_.out_cap_f;
    if (merged_output_) c_pp += std::get<OpenLoad>(load_).probe_cap_f;
    dy[idx_pp_] = (pc.i_hi_a - pc.i_lo_a - i_out) / c_pp;
}

void PushPullSystem::outputs(double t, const double* y, double* out) const {
    const double v_pp = y[idx_pp_];
    const auto pc = pushpull_currents(pp_, gate_hi_(t), gate_lo_(t), v_pp);
    out[0] = pc.i_hi_a;
    out[1] = pc.i_shoot_a;
    double p_in = pc.i_hi_a * pp_.rail_v;
    double p_diss = pc.i_hi_a * (pp_.rail_v - v_pp) + pc.i_lo_a * v_pp;
    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        const double rg_tot = hs.device.rg_internal_ohm + hs.r_gate_ext_ohm;
        const double i_gate = (idx_lpar_ >= 0)
                                  ? y[idx_lpar_]
                                  : (v_pp - y[idx_vg_]) / (pp_.parasitic_r_ohm + rg_tot);
        const auto ld = hard_switch_derivs(hs, y[idx_vg_], y[idx_vd_], i_gate);
        p_in += ld.i_link_a * hs.v_link_v;
        p_diss += i_gate * i_gate * (rg_tot + pp_.parasitic_r_ohm) +
                  ld.i_channel_a * y[idx_vd_] + ld.i_link_a * ld.i_link_a * hs.r_limit_ohm;
    } else if (idx_lpar_ >= 0) {
        p_diss += y[idx_lpar_] * y[idx_lpar_] * pp_.parasitic_r_ohm;
    }
    out[2] = p_in;
    out[3] = p_diss;
}

std::vector<Breakpoint> PushPullSystem::breakpoints(double t0, double t1) const {
    std::vector<Breakpoint> out;
    for (double t : mandatory_times_)
        if (t > t0 && t < t1) out.push_back({t, ""});
    return out;
}

Vec PushPullSystem::initial_state() const {
    Vec y(static_cast<std::size_t>(n_states_), 0.0);
    const double g_hi =
        device_conductance(gate_hi_(0.0) - pp_.vth_v, pp_.transconductance_s, pp_.ron_ohm);
    const double g_lo =
        device_conductance(gate_lo_(0.0) - pp_.vth_v, pp_.transconductance_s, pp_.ron_ohm);
    const double g_sum = g_hi + g_lo;
    const double v_pp = (g_sum > 1e-15) ? g_hi * pp_.rail_v / g_sum : 0.0;
    y[idx_pp_] = v_pp;
    if (idx_vload_ >= 0) y[idx_vload_] = v_pp;
    if (idx_vd_ >= 0) {
        const auto& hs = std::get<HardSwitchCircuit>(load_);
        y[idx_vg_] = v_pp;
        y[idx_vd_] = dc_drain_voltage(hs, v_pp);
    }
    return y;
}

// ---------------------------------------------------------------------------
// fig-5 style rail-current measurement
// ---------------------------------------------------------------------------

double avg_supply_current(const TotemPoleModel& tp, const IsolatorModel& iso,
                          const GanPushPullModel& gan_load, double f_hz, double rail_v,
                          PwmSpec pwm, const SolverOptions& opts, int* n_periods_out) {
    IsolatorModel iso_r = iso;
    TotemPoleModel tp_r = tp;
    iso_r.rail_v = rail_v;
    tp_r.rail_v = rail_v;
    pwm.frequency_hz = f_hz;

    DriverChain chain(ChainMode::SubChainLow, pwm, iso_r, tp_r, iso_r, tp_r, gan_load,
                      OpenLoad{});
    SolverOptions o = opts;
    o.dt_max_s = std::min(o.dt_max_s, 1.0 / f_hz / 40.0);
    const auto pss = run_to_pss(chain, 1.0 / f_hz, o);
    if (n_periods_out) *n_periods_out = pss.n_periods;
    return pss.period_trace.average("i_rail_iso_lo") +
           pss.period_trace.average("i_rail_tp_lo");
}

}  // namespace gatewave

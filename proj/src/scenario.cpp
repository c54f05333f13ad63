#include "gatewave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

// Explicit key resolver; plain and easy to keep in sync with the docs.
double* find_numeric(Scenario& s, const std::string& key) {
    auto is = [&](const char* k) { return key == k; };

    if (is("pwm.frequency_hz")) return &s.pwm.frequency_hz;
    if (is("pwm.duty_high")) return &s.pwm.duty_high;
    if (is("pwm.duty_low")) return &s.pwm.duty_low;
    if (is("pwm.logic_high_v")) return &s.pwm.logic_high_v;
    if (is("pwm.logic_low_v")) return &s.pwm.logic_low_v;
    if (is("pwm.rise_fall_s")) return &s.pwm.rise_fall_s;

    auto iso = [&](const char* prefix, IsolatorModel& m) -> double* {
        const std::string p(prefix);
        if (key == p + ".prop_delay_s") return &m.prop_delay_s;
        if (key == p + ".out_resistance_ohm") return &m.out_resistance_ohm;
        if (key == p + ".slew_limit_v_per_s") return &m.slew_limit_v_per_s;
        if (key == p + ".pulldown_strength") return &m.pulldown_strength;
        if (key == p + ".rail_v") return &m.rail_v;
        if (key == p + ".self_cap_f") return &m.self_cap_f;
        if (key == p + ".static_current_a") return &m.static_current_a;
        if (key == p + ".dynamic_charge_c") return &m.dynamic_charge_c;
        return nullptr;
    };
    if (auto* p = iso("isolator_lo", s.isolator_lo)) return p;
    if (auto* p = iso("isolator_hi", s.isolator_hi)) return p;

    auto totem = [&](const char* prefix, TotemPoleModel& m) -> double* {
        const std::string p(prefix);
        if (key == p + ".vth_v") return &m.vth_v;
        if (key == p + ".vth_p_v") return &m.vth_p_v;
        if (key == p + ".ron_ohm") return &m.ron_ohm;
        if (key == p + ".transconductance_s") return &m.transconductance_s;
        if (key == p + ".input_cap_f") return &m.input_cap_f;
        if (key == p + ".cross_cond_sat_a") return &m.cross_cond_sat_a;
        if (key == p + ".rail_v") return &m.rail_v;
        if (key == p + ".out_l_h") return &m.out_l_h;
        if (key == p + ".out_r_ohm") return &m.out_r_ohm;
        if (key == p + ".out_cap_f") return &m.out_cap_f;
        return nullptr;
    };
    if (auto* p = totem("totem_lo", s.totem_lo)) return p;
    if (auto* p = totem("totem_hi", s.totem_hi)) return p;

    if (is("pushpull.vth_v")) return &s.pushpull.vth_v;
    if (is("pushpull.ron_ohm")) return &s.pushpull.ron_ohm;
    if (is("pushpull.transconductance_s")) return &s.pushpull.transconductance_s;
    if (is("pushpull.ciss_f")) return &s.pushpull.ciss_f;
    if (is("pushpull.rail_v")) return &s.pushpull.rail_v;
    if (is("pushpull.parasitic_l_h")) return &s.pushpull.parasitic_l_h;
    if (is("pushpull.parasitic_r_ohm")) return &s.pushpull.parasitic_r_ohm;
    if (is("pushpull.out_cap_f")) return &s.pushpull.out_cap_f;

    if (is("thermal.r_th_k_per_w")) return &s.thermal.r_th_k_per_w;
    if (is("thermal.c_th_j_per_k")) return &s.thermal.c_th_j_per_k;
    if (is("thermal.ambient_c")) return &s.thermal.ambient_c;
    if (is("thermal.runaway_threshold_c")) return &s.thermal.runaway_threshold_c;

    if (auto* ol = std::get_if<OpenLoad>(&s.load)) {
        if (is("load.probe_cap_f")) return &ol->probe_cap_f;
    }
    if (auto* hs = std::get_if<HardSwitchCircuit>(&s.load)) {
        if (is("load.v_link_v")) return &hs->v_link_v;
        if (is("load.r_limit_ohm")) return &hs->r_limit_ohm;
        if (is("load.r_gate_ext_ohm")) return &hs->r_gate_ext_ohm;
        if (is("load.device.vth_v")) return &hs->device.vth_v;
        if (is("load.device.kp_a_per_v2")) return &hs->device.kp_a_per_v2;
        if (is("load.device.cgs_f")) return &hs->device.cgs_f;
        if (is("load.device.rg_internal_ohm")) return &hs->device.rg_internal_ohm;
    }

    if (is("solver.rel_tol")) return &s.solver.rel_tol;
    if (is("solver.abs_tol_v")) return &s.solver.abs_tol_v;
    if (is("solver.dt_min_s")) return &s.solver.dt_min_s;
    if (is("solver.dt_max_s")) return &s.solver.dt_max_s;
    if (is("solver.newton_tol")) return &s.solver.newton_tol;
    if (is("solver.pss_period_tol")) return &s.solver.pss_period_tol;

    return nullptr;
}

}  // namespace

std::vector<std::string> numeric_param_names(const Scenario& s) {
    static const char* base[] = {
        "pwm.frequency_hz", "pwm.duty_high", "pwm.duty_low", "pwm.phase_offset",
        "pwm.logic_high_v", "pwm.logic_low_v", "pwm.rise_fall_s",
        "isolator_lo.prop_delay_s", "isolator_lo.out_resistance_ohm",
        "isolator_lo.slew_limit_v_per_s", "isolator_lo.pulldown_strength", "isolator_lo.rail_v",
        "isolator_lo.self_cap_f", "isolator_lo.static_current_a", "isolator_lo.dynamic_charge_c",
        "isolator_hi.prop_delay_s", "isolator_hi.out_resistance_ohm",
        "isolator_hi.slew_limit_v_per_s", "isolator_hi.pulldown_strength", "isolator_hi.rail_v",
        "isolator_hi.self_cap_f", "isolator_hi.static_current_a", "isolator_hi.dynamic_charge_c",
        "totem_lo.vth_v", "totem_lo.vth_p_v", "totem_lo.ron_ohm", "totem_lo.transconductance_s",
        "totem_lo.input_cap_f", "totem_lo.cross_cond_sat_a", "totem_lo.rail_v",
        "totem_lo.out_l_h", "totem_lo.out_r_ohm", "totem_lo.out_cap_f",
        "totem_hi.vth_v", "totem_hi.vth_p_v", "totem_hi.ron_ohm", "totem_hi.transconductance_s",
        "totem_hi.input_cap_f", "totem_hi.cross_cond_sat_a", "totem_hi.rail_v",
        "totem_hi.out_l_h", "totem_hi.out_r_ohm", "totem_hi.out_cap_f",
        "pushpull.vth_v", "pushpull.ron_ohm", "pushpull.transconductance_s",
        "pushpull.ciss_f", "pushpull.rail_v", "pushpull.parasitic_l_h",
        "pushpull.parasitic_r_ohm", "pushpull.out_cap_f",
        "thermal.r_th_k_per_w", "thermal.c_th_j_per_k", "thermal.ambient_c",
        "thermal.runaway_threshold_c",
        "solver.rel_tol", "solver.abs_tol_v", "solver.dt_min_s", "solver.dt_max_s",
        "solver.newton_tol",
    };
    std::vector<std::string> names(std::begin(base), std::end(base));
    if (std::holds_alternative<OpenLoad>(s.load)) {
        names.push_back("load.probe_cap_f");
    } else {
        for (const char* k :
             {"load.v_link_v", "load.r_limit_ohm", "load.r_gate_ext_ohm",
              "load.device.vth_v", "load.device.kp_a_per_v2", "load.device.cgs_f",
              "load.device.rg_internal_ohm"})
            names.push_back(k);
    }
    return names;
}

void set_param(Scenario& s, const std::string& path, double value) {
    if (path == "pwm.phase_offset") {
        s.pwm.phase_offset = value;
        return;
    }
    double* p = find_numeric(s, path);
    if (!p) throw BadParamPath(path);
    *p = value;
}

void Scenario::validate() const {
    try {
        pwm.validate();
    } catch (const OverlapError& e) {
        throw ValidationError("pwm.duty_high", e.what());
    }
    isolator_lo.validate("isolator_lo");
    isolator_hi.validate("isolator_hi");
    totem_lo.validate("totem_lo");
    totem_hi.validate("totem_hi");
    pushpull.validate("pushpull");
    thermal.validate("thermal");
    if (totem_lo.rail_v != isolator_lo.rail_v)
        throw ValidationError("totem_lo.rail_v",
                              "must equal isolator_lo.rail_v (shared supply)");
    if (totem_hi.rail_v != isolator_hi.rail_v)
        throw ValidationError("totem_hi.rail_v",
                              "must equal isolator_hi.rail_v (shared supply)");
    if (const auto* ol = std::get_if<OpenLoad>(&load))
        ol->validate("load");
    else
        std::get<HardSwitchCircuit>(load).validate("load");
}

DriverChain Scenario::make_chain(ChainMode mode) const {
    return DriverChain(mode, pwm, isolator_lo, totem_lo, isolator_hi, totem_hi, pushpull,
                       load);
}

SolverOptions Scenario::solver_for_period() const {
    SolverOptions o = solver;
    o.dt_max_s = std::min(o.dt_max_s, pwm.period_s() / 40.0);
    return o;
}

namespace {

struct KeyValue {
    std::string key, value;
    int line;
};

std::vector<KeyValue> parse_lines(const std::string& text) {
    std::vector<KeyValue> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected `key = value`");
        KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (kv.key.empty() || kv.value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
        out.push_back(std::move(kv));
    }
    return out;
}

}  // namespace

Scenario scenario_from_string(const std::string& text,
                              const std::filesystem::path& base_dir) {
    Scenario s;
    const auto kvs = parse_lines(text);

    // The load kind decides which load keys exist, so apply it first.
    for (const auto& kv : kvs) {
        if (kv.key != "load.kind") continue;
        if (kv.value == "open")
            s.load = OpenLoad{};
        else if (kv.value == "hard_switch")
            s.load = HardSwitchCircuit{};
        else
            throw ValidationError("load.kind", "must be `open` or `hard_switch`");
    }

    bool rail_iso_lo = false, rail_iso_hi = false, rail_tp_lo = false, rail_tp_hi = false;

    for (const auto& kv : kvs) {
        if (kv.key == "load.kind") continue;
        if (kv.key == "label") {
            s.label = kv.value;
            continue;
        }
        if (kv.key == "load.device.cgd_table" || kv.key == "load.device.cds_table") {
            auto* hs = std::get_if<HardSwitchCircuit>(&s.load);
            if (!hs)
                throw ValidationError(kv.key, "only valid when load.kind = hard_switch");
            const auto rows = read_cv_table(base_dir / kv.value);
            std::vector<double> xs, ys;
            for (const auto& [x, y] : rows) {
                xs.push_back(x);
                ys.push_back(y);
            }
            MonotoneCubicTable table(xs, ys, kv.key);
            if (kv.key == "load.device.cgd_table")
                hs->device.cgd_table = std::move(table);
            else
                hs->device.cds_table = std::move(table);
            continue;
        }
        double value;
        if (!parse_double(kv.value, value))
            throw ValidationError(kv.key, "not a finite number (line " +
                                              std::to_string(kv.line) + ")");
        if (kv.key == "pwm.phase_offset") {
            s.pwm.phase_offset = value;
            continue;
        }
        if (kv.key == "solver.newton_max_iter" || kv.key == "solver.pss_max_periods") {
            if (value < 1 || value != std::floor(value))
                throw ValidationError(kv.key, "must be a positive integer");
            (kv.key == "solver.newton_max_iter" ? s.solver.newton_max_iter
                                                : s.solver.pss_max_periods) =
                static_cast<int>(value);
            continue;
        }
        double* p = find_numeric(s, kv.key);
        if (!p) throw ValidationError(kv.key, "unknown key");
        *p = value;
        if (kv.key == "isolator_lo.rail_v") rail_iso_lo = true;
        if (kv.key == "isolator_hi.rail_v") rail_iso_hi = true;
        if (kv.key == "totem_lo.rail_v") rail_tp_lo = true;
        if (kv.key == "totem_hi.rail_v") rail_tp_hi = true;
    }

    // Totem rails inherit their isolator's rail unless set explicitly.
    if (rail_iso_lo && !rail_tp_lo) s.totem_lo.rail_v = s.isolator_lo.rail_v;
    if (rail_iso_hi && !rail_tp_hi) s.totem_hi.rail_v = s.isolator_hi.rail_v;

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open scenario file: " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    Scenario s = scenario_from_string(buf.str(), path.parent_path());
    return s;
}

}  // namespace gatewave

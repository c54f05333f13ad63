// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gatewave/errors.hpp"
#include "gatewave/metrics.hpp"
#include "gatewave/presets.hpp"
#include "gatewave/scenario.hpp"
#include "gatewave/signal.hpp"
#include "gatewave/sweep.hpp"
#include "support/oracle.hpp"
#include "support/systems.hpp"

using namespace gatewave;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = fs::path(GATEWAVE_SOURCE_DIR) / "presets";

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int n, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s  [%s]\n", pass ? "PASS" : "FAIL", n, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int n, const char* name,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(n, name, pass, detail);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// 1. solver order + linear RC accuracy, < 5 s
// ---------------------------------------------------------------------------
bool criterion1(std::string& detail) {
    Timer timer;
    testing::SmoothChain sys;
    const double t1 = 150e-9;
    const auto ref =
        testing::rk4_reference(sys, 0.0, t1, sys.initial_state(), 1e-12, 1000);

    auto end_err = [&](double dt_max) {
        SolverOptions opts;
        opts.rel_tol = 1e9;  // fixed-step: every step lands on dt_max
        opts.abs_tol_v = 1e9;
        opts.dt_max_s = dt_max;
        Trace tr = integrate(sys, 0.0, t1, nullptr, opts);
        double err = 0.0;
        for (std::size_t c = 0; c < 3; ++c)
            err = std::max(err, std::fabs(tr.value(c, tr.size() - 1) -
                                          ref.trace.value(c, ref.trace.size() - 1)));
        return err;
    };
    const double e1 = end_err(0.25e-9);
    const double e2 = end_err(0.125e-9);
    const double factor = e1 / e2;

    testing::RcSystem rc(10e-9, 1.0);
    SolverOptions opts;
    opts.rel_tol = 1e-6;
    opts.abs_tol_v = 1e-9;
    opts.dt_max_s = 2e-9;
    Vec y0{0.0};
    const Trace tr = integrate(rc, 0.0, 10e-9, &y0, opts);
    const double rc_err =
        std::fabs(tr.value(0, tr.size() - 1) - (1.0 - std::exp(-1.0)));

    const double secs = timer.seconds();
    std::ostringstream os;
    os << "step-halving error factor " << factor << " in [3.5, 4.5]; RC error "
       << rc_err << " <= 1e-6; " << secs << " s < 5 s";
    detail = os.str();
    return factor >= 3.5 && factor <= 4.5 && rc_err <= 1e-6 && secs < 5.0;
}

// ---------------------------------------------------------------------------
// 2. analytic RC steady-state oracle, 0.1 %
// ---------------------------------------------------------------------------
bool criterion2(std::string& detail) {
    Scenario s;
    s.isolator_lo.slew_limit_v_per_s = 1e12;  // pure-RC regime
    s.isolator_lo.pulldown_strength = 1.0;
    s.isolator_lo.out_resistance_ohm = 100.0;
    s.isolator_lo.self_cap_f = 30e-12;
    s.totem_lo.input_cap_f = 120e-12;
    s.pwm.frequency_hz = 1.0 / 60e-9;
    s.pwm.duty_high = s.pwm.duty_low = 0.5;
    s.pwm.rise_fall_s = 0.0;
    s.solver.rel_tol = 1e-8;
    s.solver.abs_tol_v = 1e-7;
    s.solver.dt_max_s = 1e-9;
    s.solver.pss_period_tol = 1e-7;

    DriverChain chain = s.make_chain(ChainMode::IsolatorOnly);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver);
    const auto& v = pss.period_trace.series("v_iso_lo");
    const double pp = *std::max_element(v.begin(), v.end()) -
                      *std::min_element(v.begin(), v.end());
    const double tau = 100.0 * 150e-12;
    const double expect = s.isolator_lo.rail_v * std::tanh(60e-9 / (4.0 * tau));
    const double rel = std::fabs(pp - expect) / expect;
    std::ostringstream os;
    os << "peak-to-peak " << pp << " vs rail*tanh(T/4RC) " << expect
       << ", rel deviation " << rel << " <= 1e-3";
    detail = os.str();
    return rel <= 1e-3;
}

// ---------------------------------------------------------------------------
// 3. supply-current grid with thermal verdicts, < 60 s
// ---------------------------------------------------------------------------
bool criterion3(std::string& detail) {
    Timer timer;
    const Scenario base = load_scenario(kPresets / "fig5.conf");
    const std::vector<double> rails = {3.0, 3.5, 4.0, 4.5};
    const std::vector<double> freqs = {1e6, 2e6, 5e6, 10e6, 20e6, 30e6};

    std::vector<std::vector<double>> grid(rails.size(),
                                          std::vector<double>(freqs.size(), 0.0));
    for (std::size_t r = 0; r < rails.size(); ++r)
        for (std::size_t f = 0; f < freqs.size(); ++f)
            grid[r][f] = supply_current_point(base, rails[r], freqs[f]).avg_current_a;

    const double i_ref = grid[3][3];  // (4.5 V, 10 MHz)
    bool mono = true;
    for (std::size_t r = 0; r < rails.size(); ++r)
        for (std::size_t f = 1; f < freqs.size(); ++f)
            if (grid[r][f] < grid[r][f - 1] - 1e-6) mono = false;
    for (std::size_t f = 0; f < freqs.size(); ++f)
        for (std::size_t r = 1; r < rails.size(); ++r)
            if (grid[r][f] < grid[r - 1][f] - 1e-6) mono = false;

    bool runaway_45 = true;
    for (std::size_t f = 3; f < freqs.size(); ++f)
        if (base.thermal.steady_state_c(grid[3][f] * 4.5) <
            base.thermal.runaway_threshold_c)
            runaway_45 = false;
    const double i38 = supply_current_point(base, 3.8, 20e6).avg_current_a;
    const bool safe_38 =
        base.thermal.steady_state_c(i38 * 3.8) < base.thermal.runaway_threshold_c;

    const double secs = timer.seconds();
    std::ostringstream os;
    os << "I(4.5V,10MHz) " << i_ref << " in [0.16, 0.24]; grid monotone "
       << (mono ? "yes" : "NO") << "; runaway(4.5V,>=10MHz) "
       << (runaway_45 ? "latched" : "NO") << "; (3.8V,20MHz) "
       << (safe_38 ? "safe" : "RUNAWAY") << "; " << secs << " s < 60 s";
    detail = os.str();
    return i_ref >= 0.16 && i_ref <= 0.24 && mono && runaway_45 && safe_38 &&
           secs < 60.0;
}

// ---------------------------------------------------------------------------
// 4. driving-capability rolloff of the totem-pole output
// ---------------------------------------------------------------------------
bool criterion4(std::string& detail) {
    const Scenario base = load_scenario(kPresets / "fig7.conf");
    const std::vector<double> freqs = {1e6, 5e6, 10e6, 14e6, 20e6, 25e6, 30e6};
    SweepOptions so;
    so.node = "v_gg_lo";
    so.workers = 1;
    const SweepResult res = sweep(base, "pwm.frequency_hz", freqs, so);

    auto vmax = [&](double f) -> double {
        for (const auto& row : res.rows)
            if (row.value == f && row.converged) return row.wave.v_max;
        return -1.0;
    };
    bool plateau = true;
    for (double f : {1e6, 5e6, 10e6, 14e6}) {
        const double v = vmax(f);
        if (!(v >= 3.51 && v <= 4.29)) plateau = false;
    }
    const bool non_inc =
        vmax(20e6) + 1e-3 >= vmax(25e6) && vmax(25e6) + 1e-3 >= vmax(30e6);
    const double v30 = vmax(30e6);

    std::ostringstream os;
    os << "plateau(1-14MHz) max " << vmax(14e6) << " in [3.51, 4.29]; "
       << vmax(20e6) << " >= " << vmax(25e6) << " >= " << v30 << "; v_max(30MHz) "
       << v30 << " in [2.0, 3.0]";
    detail = os.str();
    return plateau && non_inc && v30 >= 2.0 && v30 <= 3.0;
}

// ---------------------------------------------------------------------------
// 5. 20-MHz hard switching, < 30 s
// ---------------------------------------------------------------------------
bool criterion5(std::string& detail) {
    Timer timer;
    const Scenario s = load_scenario(kPresets / "fig10.conf");
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const auto w_gate = waveform_stats(pss.period_trace, "v_sic_gate", 18.0);
    const auto w_drain = waveform_stats(pss.period_trace, "v_sic_drain", 50.0);
    const auto st = switching_times(pss.period_trace);
    const double secs = timer.seconds();

    std::ostringstream os;
    os << pss.n_periods << " periods <= 50; gate peak " << w_gate.v_max
       << " >= 17.1 V; v_ds on " << w_drain.v_min << " < 5 V, off " << w_drain.v_max
       << " > 45 V; t_off " << st.t_off_s << " > t_on " << st.t_on_s << "; " << secs
       << " s < 30 s";
    detail = os.str();
    return pss.n_periods <= 50 && w_gate.v_max >= 17.1 && w_drain.v_min < 5.0 &&
           w_drain.v_max > 45.0 && st.t_off_s > st.t_on_s && secs < 30.0;
}

// ---------------------------------------------------------------------------
// 6. push-pull penetration charge vs dead time
// ---------------------------------------------------------------------------
bool criterion6(std::string& detail) {
    // Prescribed trapezoidal gate drive of the output pair; dead time set
    // through the input duty ratios. The simultaneous-conduction traversal
    // time is the span both edges spend between the device thresholds.
    GanPushPullModel pp;  // defaults; open load
    const double rail_tp = 3.8;
    const double f = 10e6;
    const double t_edge = 4e-9;
    const double traversal = t_edge * (rail_tp - 2.0 * pp.vth_v) / rail_tp;

    auto charge_at = [&](double dead) {
        PwmSpec spec;
        spec.frequency_hz = f;
        spec.rise_fall_s = t_edge;
        const double d = 0.5 + dead * f;  // dead = (2D - 1)/2 * T
        spec.duty_high = spec.duty_low = d;
        spec.validate();
        std::vector<double> marks;
        for (const auto& e : edge_schedule(spec, 0.0, 1.0 / f)) {
            marks.push_back(e.time_s);
            marks.push_back(e.time_s + t_edge);
        }
        PushPullSystem sys(
            pp, OpenLoad{},
            [spec, rail_tp](double t) { return rail_tp * eval_conduction(spec, Side::High, t); },
            [spec, rail_tp](double t) { return rail_tp * eval_conduction(spec, Side::Low, t); },
            marks);
        SolverOptions opts;
        opts.dt_max_s = 0.5e-9;
        const Trace tr = integrate(sys, 0.0, 1.0 / f, nullptr, opts);
        return tr.integral("i_shoot_pp");
    };

    std::vector<double> q_partial;
    for (double frac : {0.0, 0.25, 0.5, 0.75, 0.95})
        q_partial.push_back(charge_at(frac * traversal));
    const double q_full = charge_at(traversal);
    const double q_beyond = charge_at(1.5 * traversal);

    bool decreasing = true, positive = true;
    for (std::size_t i = 0; i < q_partial.size(); ++i) {
        if (!(q_partial[i] > 0.0)) positive = false;
        if (i > 0 && !(q_partial[i] < q_partial[i - 1])) decreasing = false;
    }
    std::ostringstream os;
    os << "charges (nC) at 0..0.95 traversal:";
    for (double q : q_partial) os << ' ' << q * 1e9;
    os << "; at >= traversal: " << q_full << ", " << q_beyond << " (exactly 0)";
    detail = os.str();
    return positive && decreasing && q_full == 0.0 && q_beyond == 0.0;
}

// ---------------------------------------------------------------------------
// 7. conservation at PSS
// ---------------------------------------------------------------------------
bool criterion7(std::string& detail) {
    const Scenario s = load_scenario(kPresets / "fig10.conf");
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const auto er = energy_report(pss.period_trace);
    const auto gr = gate_charge_report(pss.period_trace);
    const double charge_ratio = gr.net_charge_c / gr.per_edge_charge_c;
    std::ostringstream os;
    os << "rail-vs-dissipation imbalance " << er.imbalance
       << " <= 5e-3; net/per-edge gate charge " << charge_ratio << " < 1e-3";
    detail = os.str();
    return er.imbalance <= 5e-3 && charge_ratio < 1e-3;
}

// ---------------------------------------------------------------------------
// 8. prototype parasitic-inductance ordering
// ---------------------------------------------------------------------------
bool criterion8(std::string& detail) {
    double overshoot[2];
    const char* files[2] = {"fig8_prototype_a.conf", "fig8_prototype_b.conf"};
    for (int i = 0; i < 2; ++i) {
        const Scenario s = load_scenario(kPresets / files[i]);
        DriverChain chain = s.make_chain(ChainMode::Full);
        const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
        overshoot[i] =
            waveform_stats(pss.period_trace, "v_load", s.pushpull.rail_v).overshoot_v;
    }
    std::ostringstream os;
    os << "output overshoot A " << overshoot[0] << " V > B " << overshoot[1] << " V";
    detail = os.str();
    return overshoot[0] > overshoot[1];
}

// ---------------------------------------------------------------------------
// 9. preset determinism, including multi-worker sweeps
// ---------------------------------------------------------------------------
bool criterion9(std::string& detail) {
    const fs::path out_a = fs::temp_directory_path() / "gatewave_acc_run_a";
    const fs::path out_b = fs::temp_directory_path() / "gatewave_acc_run_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    bool all_equal = true;
    std::string first_diff;
    for (const auto& name : preset_names()) {
        const int workers = (name == "fig5" || name == "fig7") ? 4 : 1;
        run_preset(name, out_a, kPresets, workers);
        run_preset(name, out_b, kPresets, workers);
        const std::string a = slurp(out_a / name / "stats.csv");
        const std::string b = slurp(out_b / name / "stats.csv");
        if (a.empty() || a != b) {
            all_equal = false;
            if (first_diff.empty()) first_diff = name;
        }
    }
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    detail = all_equal ? "stats.csv byte-identical across reruns for all presets"
                       : ("stats.csv differs for " + first_diff);
    return all_equal;
}

}  // namespace

int main() {
    run_criterion(1, "solver order and linear RC accuracy", criterion1);
    run_criterion(2, "analytic RC square-wave steady state", criterion2);
    run_criterion(3, "supply-current grid and thermal verdicts", criterion3);
    run_criterion(4, "totem-pole output rolloff", criterion4);
    run_criterion(5, "20-MHz hard switching", criterion5);
    run_criterion(6, "penetration charge vs dead time", criterion6);
    run_criterion(7, "energy and gate-charge conservation", criterion7);
    run_criterion(8, "prototype surge ordering", criterion8);
    run_criterion(9, "preset determinism", criterion9);
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}

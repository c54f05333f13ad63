#include "gatewave/presets.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"
#include "gatewave/metrics.hpp"
#include "gatewave/plot.hpp"
#include "gatewave/sweep.hpp"

#ifdef __linux__
#include <unistd.h>
#endif

namespace gatewave {

namespace fs = std::filesystem;

bool PresetReport::pass() const {
    for (const auto& b : bounds)
        if (!b.pass) return false;
    return true;
}

std::string PresetReport::summary_text() const {
    std::ostringstream os;
    os << "preset: " << preset << "\n";
    if (bounds.empty()) os << "(no bounds declared)\n";
    for (const auto& b : bounds)
        os << (b.pass ? "PASS" : "FAIL") << "  " << b.name << "  [" << b.detail << "]\n";
    os << "overall: " << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig3", "fig5", "fig7", "fig8", "fig10"};
    return names;
}

namespace {

std::string canonical_name(const std::string& name) {
    if (name == "fig10_hardswitch_20mhz") return "fig10";
    return name;
}

}  // namespace

bool is_preset_name(const std::string& name) {
    const std::string c = canonical_name(name);
    const auto& names = preset_names();
    return std::find(names.begin(), names.end(), c) != names.end();
}

fs::path default_presets_dir() {
#ifdef __linux__
    char buf[4096];
    const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n > 0) {
        buf[n] = '\0';
        const fs::path candidate = fs::path(buf).parent_path() / "presets";
        if (fs::exists(candidate)) return candidate;
    }
#endif
    return fs::path("presets");
}

namespace {

// ---------------------------------------------------------------------------
// stats.csv accumulation (stable documented schema)
// ---------------------------------------------------------------------------

class StatsTable {
public:
    void add_wave(const std::string& scenario, const std::string& name,
                  const std::string& param, double value, const WaveformStats& w) {
        std::ostringstream os;
        os << scenario << ",node," << name << ',' << param << ',' << fmt_g12(value) << ','
           << fmt_g12(w.v_max) << ',' << fmt_g12(w.v_min) << ',' << fmt_g12(w.overshoot_v)
           << ',' << fmt_g12(w.rise_10_90_s) << ',' << fmt_g12(w.fall_10_90_s) << ','
           << fmt_g12(w.measured_duty) << ',' << fmt_g12(w.avg) << ",,,,,";
        rows_.push_back(os.str());
    }

    void add_power(const std::string& scenario, const std::string& name,
                   const std::string& param, double value, const PowerStats& p) {
        std::ostringstream os;
        os << scenario << ",rail," << name << ',' << param << ',' << fmt_g12(value)
           << ",,,,,,,," << fmt_g12(p.avg_rail_current_a) << ','
           << fmt_g12(p.penetration_charge_c) << ',' << fmt_g12(p.dissipation_w) << ','
           << fmt_g12(p.junction_temp_c) << ',' << (p.runaway ? 1 : 0);
        rows_.push_back(os.str());
    }

    std::string str() const {
        std::string out =
            "scenario,item,name,param,value,v_max,v_min,overshoot_v,rise_10_90_s,"
            "fall_10_90_s,measured_duty,avg_v,avg_rail_current_a,penetration_charge_c,"
            "dissipation_w,junction_temp_c,runaway\n";
        for (const auto& r : rows_) {
            out += r;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::string> rows_;
};

struct Ctx {
    fs::path out_dir;
    fs::path presets_dir;
    int workers;
    PresetReport report;
    StatsTable stats;

    void write(const std::string& rel, const std::string& content) {
        const fs::path p = out_dir / rel;
        atomic_write(p, content);
        report.files.push_back(p);
    }

    void bound(const std::string& name, bool pass, const std::string& detail) {
        report.bounds.push_back({name, detail, pass});
    }

    Scenario load(const std::string& file) const {
        return load_scenario(presets_dir / file);
    }
};

std::string trace_csv(const Trace& tr) {
    std::ostringstream os;
    tr.write_csv(os);
    return os.str();
}

PlotSeries time_series(const Trace& tr, const std::string& col, const std::string& label) {
    PlotSeries s;
    s.label = label;
    const double t0 = tr.span_begin();
    const auto& data = tr.series(col);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        s.x.push_back((tr.time(i) - t0) * 1e9);  // ns
        s.y.push_back(data[i]);
    }
    return s;
}

std::string in_range(double v, double lo, double hi) {
    return fmt_g12(v) + " in [" + fmt_g12(lo) + ", " + fmt_g12(hi) + "]";
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    workers = std::min<int>(resolve_workers(workers), static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// fig3: isolator output at 1 MHz and 20 MHz
// ---------------------------------------------------------------------------

void run_fig3(Ctx& c) {
    const Scenario base = c.load("fig3.conf");
    struct Run {
        double f_hz;
        const char* tag;
    };
    const Run runs[] = {{1e6, "1mhz"}, {20e6, "20mhz"}};

    WaveformStats w[2];
    std::vector<PlotSeries> series;
    for (int i = 0; i < 2; ++i) {
        Scenario s = base;
        s.pwm.frequency_hz = runs[i].f_hz;
        DriverChain chain = s.make_chain(ChainMode::IsolatorOnly);
        const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
        w[i] = waveform_stats(pss.period_trace, "v_iso_lo", s.isolator_lo.rail_v);
        c.stats.add_wave(s.label, "v_iso_lo", "pwm.frequency_hz", runs[i].f_hz, w[i]);
        c.write(std::string("trace_") + runs[i].tag + ".csv", trace_csv(pss.period_trace));
        PlotSpec ps;
        ps.title = std::string("isolator output, ") + runs[i].tag;
        ps.x_label = "time (ns)";
        ps.y_label = "v_iso_lo (V)";
        ps.series.push_back(time_series(pss.period_trace, "v_iso_lo", "v_iso_lo"));
        c.write(std::string("plot_") + runs[i].tag + ".svg", emit_plot_svg(ps));
    }

    c.bound("1 MHz swing reaches the rail", w[0].v_max >= 3.3 && w[0].v_min <= 0.2,
            "v_max " + fmt_g12(w[0].v_max) + " >= 3.3, v_min " + fmt_g12(w[0].v_min) +
                " <= 0.2");
    c.bound("20 MHz on-state level", w[1].v_max >= 2.1 && w[1].v_max <= 2.9,
            in_range(w[1].v_max, 2.1, 2.9));
    c.bound("20 MHz off-state level", w[1].v_min >= 0.8 && w[1].v_min <= 1.6,
            in_range(w[1].v_min, 0.8, 1.6));
    c.bound("20 MHz band straddles both pair thresholds",
            w[1].v_min < base.totem_lo.window_lo_v() &&
                w[1].v_max > base.totem_lo.rail_v - base.totem_lo.vth_p_v,
            "band [" + fmt_g12(w[1].v_min) + ", " + fmt_g12(w[1].v_max) + "]");
}

// ---------------------------------------------------------------------------
// fig5: average supply current vs frequency, rail family
// ---------------------------------------------------------------------------

void run_fig5(Ctx& c) {
    const Scenario base = c.load("fig5.conf");
    const std::vector<double> rails = {3.0, 3.5, 4.0, 4.5};
    const std::vector<double> freqs = {1e6, 2e6, 5e6, 10e6, 20e6, 30e6};

    struct Point {
        double rail, f;
        SupplyPoint sp;
        std::string error;
    };
    std::vector<Point> pts;
    for (double r : rails)
        for (double f : freqs) pts.push_back({r, f, {}, ""});
    pts.push_back({3.8, 20e6, {}, ""});  // operating-point verification

    parallel_for(pts.size(), c.workers, [&](std::size_t i) {
        try {
            pts[i].sp = supply_current_point(base, pts[i].rail, pts[i].f);
        } catch (const SimError& e) {
            pts[i].error = e.what();
        }
    });

    for (const auto& p : pts) {
        if (!p.error.empty()) {
            c.bound("point (" + fmt_g12(p.rail) + " V, " + fmt_g12(p.f / 1e6) +
                        " MHz) converges",
                    false, p.error);
            continue;
        }
        PowerStats ps;
        ps.avg_rail_current_a = p.sp.avg_current_a;
        ps.penetration_charge_c = p.sp.penetration_charge_c;
        ps.dissipation_w = p.sp.avg_current_a * p.rail;
        ps.junction_temp_c = base.thermal.steady_state_c(ps.dissipation_w);
        ps.runaway = ps.junction_temp_c >= base.thermal.runaway_threshold_c;
        c.stats.add_power(base.label, "dsil", "rail=" + fmt_g12(p.rail) + ";f_hz", p.f, ps);
    }

    auto current_at = [&](double rail, double f) -> const Point& {
        for (const auto& p : pts)
            if (p.rail == rail && p.f == f) return p;
        throw SimError("fig5 grid point missing");
    };

    // Declared bounds.
    const double i_ref = current_at(4.5, 10e6).sp.avg_current_a;
    c.bound("avg current (4.5 V, 10 MHz) = 0.20 A +/- 20 %",
            i_ref >= 0.16 && i_ref <= 0.24, in_range(i_ref, 0.16, 0.24));

    bool mono_f = true, mono_rail = true;
    for (double r : rails)
        for (std::size_t j = 1; j < freqs.size(); ++j)
            if (current_at(r, freqs[j]).sp.avg_current_a <
                current_at(r, freqs[j - 1]).sp.avg_current_a - 1e-6)
                mono_f = false;
    for (double f : freqs)
        for (std::size_t j = 1; j < rails.size(); ++j)
            if (current_at(rails[j], f).sp.avg_current_a <
                current_at(rails[j - 1], f).sp.avg_current_a - 1e-6)
                mono_rail = false;
    c.bound("current monotone non-decreasing in frequency", mono_f,
            mono_f ? "all rails" : "violated");
    c.bound("current monotone non-decreasing in rail voltage", mono_rail,
            mono_rail ? "all frequencies" : "violated");

    bool runaway_45 = true;
    for (double f : {10e6, 20e6, 30e6}) {
        const auto& p = current_at(4.5, f);
        if (base.thermal.steady_state_c(p.sp.avg_current_a * 4.5) <
            base.thermal.runaway_threshold_c)
            runaway_45 = false;
    }
    c.bound("thermal runaway at (4.5 V, >= 10 MHz)", runaway_45,
            runaway_45 ? "flag latched at 10/20/30 MHz" : "not reached");

    const auto& p38 = current_at(3.8, 20e6);
    const double t38 = base.thermal.steady_state_c(p38.sp.avg_current_a * 3.8);
    c.bound("no runaway at (3.8 V, 20 MHz)", t38 < base.thermal.runaway_threshold_c,
            "junction " + fmt_g12(t38) + " degC < " +
                fmt_g12(base.thermal.runaway_threshold_c));

    PlotSpec ps;
    ps.title = "Si pair supply current vs switching frequency";
    ps.x_label = "frequency (MHz)";
    ps.y_label = "avg supply current (A)";
    for (double r : rails) {
        PlotSeries s;
        s.label = fmt_g6(r) + " V";
        for (double f : freqs) {
            s.x.push_back(f / 1e6);
            s.y.push_back(current_at(r, f).sp.avg_current_a);
        }
        ps.series.push_back(std::move(s));
    }
    ps.h_rules.push_back({0.2, "thermal limit"});
    c.write("plot_supply_current.svg", emit_plot_svg(ps));
}

// ---------------------------------------------------------------------------
// fig7: driving-capability rolloff of the totem-pole output
// ---------------------------------------------------------------------------

void run_fig7(Ctx& c) {
    const Scenario base = c.load("fig7.conf");
    const std::vector<double> freqs = {1e6, 5e6, 10e6, 14e6, 20e6, 25e6, 30e6};

    SweepOptions so;
    so.node = "v_gg_lo";
    so.rail = "dsil";
    so.workers = c.workers;
    const SweepResult res = sweep(base, "pwm.frequency_hz", freqs, so);

    for (const auto& row : res.rows) {
        if (!row.converged) {
            c.bound("point " + fmt_g12(row.value / 1e6) + " MHz converges", false,
                    row.error);
            continue;
        }
        c.stats.add_wave(base.label, "v_gg_lo", "pwm.frequency_hz", row.value, row.wave);
    }
    c.write("sweep.csv", sweep_csv(res));

    auto vmax_at = [&](double f) {
        for (const auto& r : res.rows)
            if (r.value == f && r.converged) return r.wave.v_max;
        return -1.0;
    };

    bool plateau = true;
    std::string detail;
    for (double f : {1e6, 5e6, 10e6, 14e6}) {
        const double v = vmax_at(f);
        if (!(v >= 3.51 && v <= 4.29)) plateau = false;
        detail += fmt_g6(f / 1e6) + "MHz:" + fmt_g6(v) + " ";
    }
    c.bound("plateau v_max = 3.9 V +/- 10 % (1-14 MHz)", plateau, detail + "in [3.51, 4.29]");

    const bool non_inc = vmax_at(20e6) + 1e-3 >= vmax_at(25e6) &&
                         vmax_at(25e6) + 1e-3 >= vmax_at(30e6);
    c.bound("v_max non-increasing for f >= 20 MHz", non_inc,
            fmt_g6(vmax_at(20e6)) + " >= " + fmt_g6(vmax_at(25e6)) + " >= " +
                fmt_g6(vmax_at(30e6)));

    const double v30 = vmax_at(30e6);
    c.bound("v_max at 30 MHz = 2.5 V +/- 20 %", v30 >= 2.0 && v30 <= 3.0,
            in_range(v30, 2.0, 3.0));

    PlotSpec ps;
    ps.title = "totem-pole output maximum vs switching frequency";
    ps.x_label = "frequency (MHz)";
    ps.y_label = "v_max (V)";
    PlotSeries s;
    s.label = "v_gg_lo max";
    for (const auto& r : res.rows)
        if (r.converged) {
            s.x.push_back(r.value / 1e6);
            s.y.push_back(r.wave.v_max);
        }
    ps.series.push_back(std::move(s));
    c.write("plot_vmax.svg", emit_plot_svg(ps));
}

// ---------------------------------------------------------------------------
// fig8: prototype surge comparison at 14 MHz, open load
// ---------------------------------------------------------------------------

void run_fig8(Ctx& c) {
    const Scenario a = c.load("fig8_prototype_a.conf");
    const Scenario b = c.load("fig8_prototype_b.conf");

    double overshoot[2];
    const Scenario* scns[2] = {&a, &b};
    const char* tags[2] = {"prototype_a", "prototype_b"};
    PlotSpec ps;
    ps.title = "driver output at 14 MHz, open load";
    ps.x_label = "time (ns)";
    ps.y_label = "output voltage (V)";

    for (int i = 0; i < 2; ++i) {
        const Scenario& s = *scns[i];
        DriverChain chain = s.make_chain(ChainMode::Full);
        const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
        const char* node = chain.num_states() > 0 && pss.period_trace.has_series("v_load")
                               ? "v_load"
                               : "v_pp";
        const auto w = waveform_stats(pss.period_trace, node, s.pushpull.rail_v);
        overshoot[i] = w.overshoot_v;
        c.stats.add_wave(s.label, node, "pushpull.parasitic_l_h", s.pushpull.parasitic_l_h,
                         w);
        c.write(std::string("trace_") + tags[i] + ".csv", trace_csv(pss.period_trace));
        ps.series.push_back(time_series(pss.period_trace, node, tags[i]));
    }
    c.write("plot_output.svg", emit_plot_svg(ps));

    c.bound("output surge strictly larger for Prototype-A", overshoot[0] > overshoot[1],
            "overshoot A " + fmt_g12(overshoot[0]) + " V > B " + fmt_g12(overshoot[1]) +
                " V");
}

// ---------------------------------------------------------------------------
// fig10: 20-MHz hard switching of the SiC device
// ---------------------------------------------------------------------------

void run_fig10(Ctx& c) {
    const Scenario s = c.load("fig10.conf");
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const Trace& tr = pss.period_trace;

    c.write("trace_pss.csv", trace_csv(tr));

    const auto w_gate = waveform_stats(tr, "v_sic_gate", s.pushpull.rail_v);
    const auto w_drain = waveform_stats(
        tr, "v_sic_drain", std::get<HardSwitchCircuit>(s.load).v_link_v);
    const auto w_gg = waveform_stats(tr, "v_gg_lo", s.totem_lo.rail_v);
    c.stats.add_wave(s.label, "v_sic_gate", "pwm.frequency_hz", s.pwm.frequency_hz, w_gate);
    c.stats.add_wave(s.label, "v_sic_drain", "pwm.frequency_hz", s.pwm.frequency_hz,
                     w_drain);
    c.stats.add_wave(s.label, "v_gg_lo", "pwm.frequency_hz", s.pwm.frequency_hz, w_gg);
    for (const auto& rail : chain.rail_specs())
        c.stats.add_power(s.label, rail.name, "pwm.frequency_hz", s.pwm.frequency_hz,
                          power_stats(tr, rail, s.thermal));

    const auto st = switching_times(tr);

    c.bound("PSS within 50 periods", pss.n_periods <= 50,
            std::to_string(pss.n_periods) + " periods");
    c.bound("SiC gate peak >= 17.1 V (0.95 x 18 V rail)", w_gate.v_max >= 17.1,
            fmt_g12(w_gate.v_max) + " V");
    c.bound("on-state v_ds < 5 V", w_drain.v_min < 5.0, fmt_g12(w_drain.v_min) + " V");
    c.bound("off-state v_ds > 45 V", w_drain.v_max > 45.0, fmt_g12(w_drain.v_max) + " V");
    c.bound("turn-off slower than turn-on", st.t_off_s > st.t_on_s,
            "t_off " + fmt_g12(st.t_off_s) + " s > t_on " + fmt_g12(st.t_on_s) + " s");

    PlotSpec ps;
    ps.title = "20-MHz hard switching";
    ps.x_label = "time (ns)";
    ps.y_label = "voltage (V)";
    ps.series.push_back(time_series(tr, "v_sic_drain", "v_ds"));
    ps.series.push_back(time_series(tr, "v_sic_gate", "v_gs"));
    ps.series.push_back(time_series(tr, "v_gg_lo", "v_gg_lo"));
    c.write("plot_switching.svg", emit_plot_svg(ps));
}

}  // namespace

SupplyPoint supply_current_point(const Scenario& s, double rail_v, double f_hz) {
    IsolatorModel iso = s.isolator_lo;
    TotemPoleModel tp = s.totem_lo;
    iso.rail_v = rail_v;
    tp.rail_v = rail_v;
    PwmSpec pwm = s.pwm;
    pwm.frequency_hz = f_hz;

    DriverChain chain(ChainMode::SubChainLow, pwm, iso, tp, iso, tp, s.pushpull,
                      OpenLoad{});
    SolverOptions o = s.solver;
    o.dt_max_s = std::min(o.dt_max_s, 1.0 / f_hz / 40.0);
    const auto pss = run_to_pss(chain, 1.0 / f_hz, o);

    SupplyPoint p;
    p.n_periods = pss.n_periods;
    p.avg_current_a = pss.period_trace.average("i_rail_iso_lo") +
                      pss.period_trace.average("i_rail_tp_lo");
    p.penetration_charge_c = pss.period_trace.integral("i_shoot_tp_lo");
    return p;
}

PresetReport run_preset(const std::string& name, const fs::path& out_root,
                        const fs::path& presets_dir, int workers) {
    const std::string canon = canonical_name(name);
    if (!is_preset_name(canon)) throw UnknownPreset(name);

    Ctx c;
    c.out_dir = out_root / canon;
    c.presets_dir = presets_dir;
    c.workers = workers;
    c.report.preset = canon;

    if (canon == "fig3") run_fig3(c);
    else if (canon == "fig5") run_fig5(c);
    else if (canon == "fig7") run_fig7(c);
    else if (canon == "fig8") run_fig8(c);
    else run_fig10(c);

    c.write("stats.csv", c.stats.str());
    c.write("summary", c.report.summary_text());
    return c.report;
}

PresetReport run_scenario_file(const fs::path& scenario_path, const fs::path& out_root) {
    const Scenario s = load_scenario(scenario_path);
    Ctx c;
    c.out_dir = out_root / s.label;
    c.report.preset = s.label;

    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const Trace& tr = pss.period_trace;
    c.write("trace_pss.csv", trace_csv(tr));

    for (const auto& node : {"v_iso_lo", "v_gg_lo", "v_pp"}) {
        if (!tr.has_series(node)) continue;
        try {
            c.stats.add_wave(s.label, node, "pwm.frequency_hz", s.pwm.frequency_hz,
                             waveform_stats(tr, node, s.totem_lo.rail_v));
        } catch (const IncompleteCycle&) {
            // constant node (e.g. held-off side); skip its row
        }
    }
    for (const auto& rail : chain.rail_specs())
        c.stats.add_power(s.label, rail.name, "pwm.frequency_hz", s.pwm.frequency_hz,
                          power_stats(tr, rail, s.thermal));

    PlotSpec ps;
    ps.title = s.label;
    ps.x_label = "time (ns)";
    ps.y_label = "voltage (V)";
    for (const auto& node : {"v_iso_lo", "v_gg_lo", "v_pp"})
        if (tr.has_series(node)) ps.series.push_back(time_series(tr, node, node));
    c.write("plot_nodes.svg", emit_plot_svg(ps));

    c.write("stats.csv", c.stats.str());
    c.write("summary", c.report.summary_text());
    return c.report;
}

}  // namespace gatewave

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gatewave/errors.hpp"
#include "gatewave/load.hpp"
#include "gatewave/solver.hpp"

using namespace gatewave;

TEST_CASE("channel current: cutoff, region continuity, load line") {
    SicMosfetModel m;
    CHECK(channel_current(m, 0.0, 10.0) == 0.0);
    CHECK(channel_current(m, m.vth_v, 25.0) == 0.0);

    // Triode and saturation agree at the boundary v_ds = v_gs - vth.
    const double vgs = 9.0;
    const double vov = vgs - m.vth_v;
    const double tri = m.kp_a_per_v2 * (vov * vov - 0.5 * vov * vov);
    CHECK(channel_current(m, vgs, vov) == doctest::Approx(tri).epsilon(1e-12));
    CHECK(channel_current(m, vgs, vov * (1 + 1e-9)) ==
          doctest::Approx(tri).epsilon(1e-6));

    // Fully enhanced device on the 50 V / 100 ohm load line: small drop.
    HardSwitchCircuit c;
    double lo = 0.0, hi = c.v_link_v;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double r = (c.v_link_v - mid) / c.r_limit_ohm -
                         channel_current(c.device, 18.0, mid);
        (r > 0 ? lo : hi) = mid;
    }
    const double v_on = 0.5 * (lo + hi);
    CHECK(v_on < 5.0);
    CHECK(channel_current(c.device, 18.0, v_on) ==
          doctest::Approx((c.v_link_v - v_on) / c.r_limit_ohm).epsilon(1e-6));
}

TEST_CASE("channel current monotone in both terminals") {
    SicMosfetModel m;
    for (double vds : {0.5, 2.0, 10.0, 40.0}) {
        double prev = -1.0;
        for (double vgs = 0.0; vgs <= 18.0; vgs += 0.5) {
            const double i = channel_current(m, vgs, vds);
            CHECK(i >= prev - 1e-15);
            prev = i;
        }
    }
    for (double vgs : {5.0, 9.0, 18.0}) {
        double prev = -1.0;
        for (double vds = 0.0; vds <= 50.0; vds += 1.0) {
            const double i = channel_current(m, vgs, vds);
            CHECK(i >= prev - 1e-15);
            prev = i;
        }
    }
}

TEST_CASE("monotone table stays inside its bracketing knots") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> du(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs, ys;
        double x = 0.0, y = 300e-12;
        for (int i = 0; i < 10; ++i) {
            xs.push_back(x);
            ys.push_back(y);
            x += du(rng) * 5.0;
            y -= du(rng) * 25e-12;
        }
        MonotoneCubicTable t(xs, ys);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            for (int k = 0; k <= 50; ++k) {
                const double xx = xs[i - 1] + (xs[i] - xs[i - 1]) * k / 50.0;
                const double v = t(xx);
                CHECK(v <= ys[i - 1] + 1e-18);
                CHECK(v >= ys[i] - 1e-18);
            }
        }
        // Flat extrapolation.
        CHECK(t(xs.front() - 5.0) == ys.front());
        CHECK(t(xs.back() + 5.0) == ys.back());
    }
}

TEST_CASE("table validation rejects bad capacitance data") {
    CHECK_THROWS_AS(MonotoneCubicTable({0.0}, {1e-12}), ValidationError);
    CHECK_THROWS_AS(MonotoneCubicTable({0.0, 0.0}, {1e-12, 1e-12}), ValidationError);
    MonotoneCubicTable rising({0.0, 1.0}, {1e-12, 2e-12});
    CHECK_THROWS_AS(rising.validate_capacitance("t"), ValidationError);
    MonotoneCubicTable nonpos({0.0, 1.0}, {0.0, 0.0});
    CHECK_THROWS_AS(nonpos.validate_capacitance("t"), ValidationError);
}

TEST_CASE("off-state equilibrium has zero derivatives") {
    HardSwitchCircuit c;
    const auto d = hard_switch_derivs(c, 0.0, c.v_link_v, 0.0);
    CHECK(d.dv_gate_dt == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.dv_drain_dt == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.i_channel_a == 0.0);
}

TEST_CASE("zeroed capacitance matrix reports SingularCapacitance") {
    HardSwitchCircuit c;
    c.device.cgs_f = 0.0;
    c.device.cgd_table = MonotoneCubicTable({-50.0, 50.0}, {0.0, 0.0});
    c.device.cds_table = MonotoneCubicTable({0.0, 50.0}, {0.0, 0.0});
    CHECK_THROWS_AS(hard_switch_derivs(c, 0.0, 25.0, 0.0), SingularCapacitance);
}

namespace {

// Gate driven by an ideal square source through the internal gate resistance;
// constant capacitances. Used for the analytic turn-on/turn-off ratio check.
class SteppedLoad : public OdeSystem {
public:
    SteppedLoad(HardSwitchCircuit c, double period, double v_drive)
        : c_(std::move(c)), period_(period), v_drive_(v_drive) {}

    int num_states() const override { return 2; }
    std::vector<std::string> state_names() const override {
        return {"v_sic_gate", "v_sic_drain"};
    }
    void rhs(double t, const double* y, double* dy) const override {
        const double drive = snapped_ ? snap_ : drive_at(t);
        const double i_gate = (drive - y[0]) / c_.device.rg_internal_ohm;
        const auto d = hard_switch_derivs(c_, y[0], y[1], i_gate);
        dy[0] = d.dv_gate_dt;
        dy[1] = d.dv_drain_dt;
    }
    void prepare_interval(double t0, double t1) override {
        snap_ = drive_at(0.5 * (t0 + t1));
        snapped_ = true;
    }
    void instantaneous_mode() override { snapped_ = false; }
    double drive_at(double t) const {
        return (std::fmod(t, period_) < 0.5 * period_) ? v_drive_ : 0.0;
    }
    std::vector<Breakpoint> breakpoints(double t0, double t1) const override {
        std::vector<Breakpoint> out;
        const double half = 0.5 * period_;
        for (long k = 1; static_cast<double>(k) * half < t1; ++k) {
            const double t = static_cast<double>(k) * half;
            if (t > t0 && t < t1) out.push_back({t, ""});
        }
        return out;
    }
    Vec state_scales() const override { return {20.0, c_.v_link_v}; }
    Vec initial_state() const override { return {0.0, c_.v_link_v}; }

private:
    HardSwitchCircuit c_;
    double period_, v_drive_;
    bool snapped_ = false;
    double snap_ = 0.0;
};

}  // namespace

TEST_CASE("switching-time ratio matches the linearized RC prediction") {
    HardSwitchCircuit c;
    c.v_link_v = 1.0;  // deep triode: the channel is nearly a fixed conductance
    c.device.cgs_f = 300e-12;
    // Near-zero Miller coupling keeps the drain transitions clean exponentials.
    c.device.cgd_table = MonotoneCubicTable({-50.0, 50.0}, {0.1e-12, 0.1e-12});
    c.device.cds_table = MonotoneCubicTable({0.0, 50.0}, {149.9e-12, 149.9e-12});
    c.device.rg_internal_ohm = 0.5;  // gate pinned fast against Miller kick
    c.device.kp_a_per_v2 = 0.005;
    const double vgs_on = 18.0;

    const double period = 8e-6;
    SteppedLoad sys(c, period, vgs_on);
    SolverOptions opts;
    opts.rel_tol = 1e-8;
    opts.abs_tol_v = 1e-8;
    opts.dt_max_s = period / 4000.0;
    const auto pss = run_to_pss(sys, period, opts);
    const auto st = switching_times(pss.period_trace);

    const double c_d = 150e-12;
    const double tau_off = c.r_limit_ohm * c_d;
    // Channel conductance linearized at mid-swing of the tiny drain excursion.
    const double v_on = 1.0 / (1.0 + c.r_limit_ohm * c.device.kp_a_per_v2 *
                                         (vgs_on - c.device.vth_v));
    const double g_ch =
        c.device.kp_a_per_v2 * (vgs_on - c.device.vth_v - 0.5 * 0.5 * (1.0 + v_on));
    const double tau_on = c_d / (1.0 / c.r_limit_ohm + g_ch);
    CHECK(st.t_off_s / st.t_on_s ==
          doctest::Approx(tau_off / tau_on).epsilon(0.05));
    CHECK(st.t_off_s > st.t_on_s);
}

TEST_CASE("switching_times demands a complete cycle") {
    Trace half({"v_sic_drain"}, {'V'});
    // Rising half-cycle only.
    for (int i = 0; i <= 100; ++i) {
        const double t = i * 1e-9;
        const double v = 50.0 * i / 100.0;
        half.append(t, &v);
    }
    CHECK_THROWS_AS(switching_times(half), IncompleteCycle);

    Trace flat({"v_sic_drain"}, {'V'});
    for (int i = 0; i <= 10; ++i) {
        const double t = i * 1e-9;
        const double v = 25.0;
        flat.append(t, &v);
    }
    CHECK_THROWS_AS(switching_times(flat), IncompleteCycle);
}

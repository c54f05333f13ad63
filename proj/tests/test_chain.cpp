#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gatewave/errors.hpp"
#include "gatewave/load.hpp"
#include "gatewave/metrics.hpp"
#include "gatewave/scenario.hpp"
#include "support/oracle.hpp"

using namespace gatewave;

namespace {

Scenario hard_switch_scenario() {
    Scenario s;
    s.pwm.frequency_hz = 20e6;
    s.pwm.duty_high = s.pwm.duty_low = 0.55;
    s.isolator_lo.rail_v = s.isolator_hi.rail_v = 3.8;
    s.totem_lo.rail_v = s.totem_hi.rail_v = 3.8;
    s.load = HardSwitchCircuit{};
    return s;
}

}  // namespace

TEST_CASE("initial state is a DC equilibrium of the chain") {
    Scenario s = hard_switch_scenario();
    DriverChain chain = s.make_chain(ChainMode::Full);
    const Vec y0 = chain.initial_state();
    Vec dy(y0.size());
    chain.instantaneous_mode();
    chain.rhs(0.0, y0.data(), dy.data());
    const Vec scales = chain.state_scales();
    for (std::size_t i = 0; i < dy.size(); ++i)
        CHECK(std::fabs(dy[i]) * 1e-9 / scales[i] < 1e-3);  // < 0.1 % of scale per ns
}

TEST_CASE("control breakpoints land exactly on the time grid") {
    Scenario s = hard_switch_scenario();
    DriverChain chain = s.make_chain(ChainMode::Full);
    const double T = s.pwm.period_s();
    const Trace tr = integrate(chain, 0.0, T, nullptr, s.solver_for_period());
    for (const auto& bp : chain.breakpoints(0.0, T)) {
        bool found = false;
        for (std::size_t i = 0; i < tr.size(); ++i)
            if (tr.time(i) == bp.time_s) found = true;
        CHECK(found);
    }
}

TEST_CASE("sub-chain rail energy balances dissipation at PSS") {
    Scenario s;
    s.isolator_lo.rail_v = s.totem_lo.rail_v = 4.0;
    s.pwm.frequency_hz = 10e6;
    DriverChain chain = s.make_chain(ChainMode::SubChainLow);
    SolverOptions opts = s.solver_for_period();
    opts.rel_tol = 1e-6;
    const auto pss = run_to_pss(chain, s.pwm.period_s(), opts);
    const auto er = energy_report(pss.period_trace);
    CHECK(er.imbalance < 5e-3);
}

TEST_CASE("full chain energy balance at PSS, hard switching") {
    Scenario s = hard_switch_scenario();
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const auto er = energy_report(pss.period_trace);
    CHECK(er.imbalance < 5e-3);

    // Gate node charge balance over the period.
    const auto gr = gate_charge_report(pss.period_trace);
    CHECK(gr.net_charge_c < 1e-3 * gr.per_edge_charge_c);
}

TEST_CASE("rail current at PSS matches the dense fixed-step reference") {
    // Frozen from the dt = 1 ps RK4 reference over 20 periods of the
    // (3.5 V, 5 MHz) sub-chain, averaged over the settled second half.
    const double i_reference = 0.00873416;
    Scenario s;
    const double i = avg_supply_current(s.totem_lo, s.isolator_lo, s.pushpull, 5e6,
                                        3.5, s.pwm, s.solver);
    CHECK(i == doctest::Approx(i_reference).epsilon(0.01));
}

TEST_CASE("supply current vanishes as frequency goes to zero without static draw") {
    Scenario s;
    s.isolator_lo.static_current_a = 0.0;
    const double i = avg_supply_current(s.totem_lo, s.isolator_lo, s.pushpull, 1e4,
                                        3.5, s.pwm, s.solver);
    CHECK(i >= 0.0);
    CHECK(i < 2e-4);
}

TEST_CASE("held-high drive settles the device onto the load line") {
    Scenario s = hard_switch_scenario();
    const auto& hs = std::get<HardSwitchCircuit>(s.load);
    // Gate held at 18 V through the gate network: drain settles where the
    // limiter current equals the channel current.
    PushPullSystem sys(
        s.pushpull, s.load, [](double) { return 25.0; }, [](double) { return 0.0; });
    SolverOptions opts;
    opts.dt_max_s = 0.5e-9;
    const Trace tr = integrate(sys, 0.0, 400e-9, nullptr, opts);
    const double v_g = tr.value(tr.column("v_sic_gate"), tr.size() - 1);
    const double v_d = tr.value(tr.column("v_sic_drain"), tr.size() - 1);
    CHECK(v_g == doctest::Approx(18.0).epsilon(1e-3));
    CHECK(channel_current(hs.device, v_g, v_d) ==
          doctest::Approx((hs.v_link_v - v_d) / hs.r_limit_ohm).epsilon(1e-3));
    CHECK(v_d < 5.0);
}

TEST_CASE("supply current is monotone over the 10x10 rail/frequency grid") {
    Scenario s;
    std::vector<double> rails, freqs;
    for (int i = 0; i < 10; ++i) {
        rails.push_back(3.0 + 1.5 * i / 9.0);
        freqs.push_back(1e6 * std::pow(30.0, i / 9.0));
    }
    std::vector<std::vector<double>> grid(10, std::vector<double>(10));
    for (int r = 0; r < 10; ++r)
        for (int f = 0; f < 10; ++f)
            grid[r][f] = avg_supply_current(s.totem_lo, s.isolator_lo, s.pushpull,
                                            freqs[f], rails[r], s.pwm, s.solver);
    for (int r = 0; r < 10; ++r)
        for (int f = 1; f < 10; ++f) {
            INFO("rail ", rails[r], " f ", freqs[f]);
            CHECK(grid[r][f] >= grid[r][f - 1] - 1e-6);
        }
    for (int f = 0; f < 10; ++f)
        for (int r = 1; r < 10; ++r) {
            INFO("rail ", rails[r], " f ", freqs[f]);
            CHECK(grid[r][f] >= grid[r - 1][f] - 1e-6);
        }
}

TEST_CASE("adaptive chain trace tracks the dense fixed-step reference") {
    Scenario s = hard_switch_scenario();
    DriverChain chain = s.make_chain(ChainMode::Full);
    const double T = s.pwm.period_s();

    SolverOptions opts = s.solver_for_period();
    opts.rel_tol = 1e-6;
    opts.dt_max_s = 0.25e-9;  // keep the comparison grid interpolation honest
    const Vec y0 = chain.initial_state();
    const Trace mine = integrate(chain, 0.0, T, &y0, opts);

    DriverChain chain2 = s.make_chain(ChainMode::Full);
    const auto ref = testing::rk4_reference(chain2, 0.0, T, y0, 1e-12, 100);

    const double dev = compare_traces(
        mine, ref.trace, {"v_sic_gate", "v_sic_drain", "v_gg_lo", "v_pp"}, 50.0);
    CHECK(dev < 0.005);
}

TEST_CASE("drain voltage stays inside the link window with no output inductance") {
    Scenario s = hard_switch_scenario();
    s.pushpull.parasitic_l_h = 0.0;
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    // The Miller path kicks the drain about one percent above the link
    // while the gate rises and the channel is still off (bounded by the
    // cgd share of the node capacitance and the limiter discharge); beyond
    // that the node must stay inside the link window.
    const auto& vd = pss.period_trace.series("v_sic_drain");
    for (double v : vd) {
        CHECK(v >= -0.1);
        CHECK(v <= 50.0 + 1.0);
    }
}

TEST_CASE("rails must match between isolator and totem pole") {
    Scenario s;
    s.totem_lo.rail_v = 4.2;  // isolator still at default
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK_THROWS_AS(s.make_chain(ChainMode::SubChainLow), ValidationError);
}

TEST_CASE("measured duty of the push-pull output approaches the conduction duty") {
    // Near-complementary duties: with a vanishing dead time the open output
    // barely floats, so the measured duty tracks the conduction duty. (With
    // large dead time the unloaded node holds its level through the gaps.)
    Scenario s;
    s.pwm.frequency_hz = 1e6;
    s.pwm.duty_high = s.pwm.duty_low = 0.51;
    s.isolator_lo.rail_v = s.isolator_hi.rail_v = 3.8;
    s.totem_lo.rail_v = s.totem_hi.rail_v = 3.8;
    DriverChain chain = s.make_chain(ChainMode::Full);
    const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
    const auto w = waveform_stats(pss.period_trace, "v_pp", s.pushpull.rail_v);
    CHECK(w.measured_duty == doctest::Approx(1.0 - 0.51).epsilon(0.02));
}

#include "gatewave/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"

namespace gatewave {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GATEWAVE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

SweepRow run_point(const Scenario& base, const std::string& param_path, double value,
                   const SweepOptions& opts) {
    SweepRow row;
    row.value = value;
    try {
        Scenario s = base;
        set_param(s, param_path, value);
        s.validate();
        DriverChain chain = s.make_chain(ChainMode::Full);
        const auto pss = run_to_pss(chain, s.pwm.period_s(), s.solver_for_period());
        row.n_periods = pss.n_periods;
        row.wave = waveform_stats(pss.period_trace, opts.node,
                                  s.totem_lo.rail_v);
        for (const auto& rail : chain.rail_specs()) {
            if (rail.name == opts.rail) {
                row.power = power_stats(pss.period_trace, rail, s.thermal);
                break;
            }
        }
        row.converged = true;
    } catch (const BadParamPath&) {
        throw;  // a bad path fails the whole sweep, not one point
    } catch (const SimError& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepResult sweep(const Scenario& base, const std::string& param_path,
                  const std::vector<double>& values, const SweepOptions& opts) {
    {
        // Validate the path up front on a scratch copy.
        Scenario probe = base;
        set_param(probe, param_path, values.empty() ? 0.0 : values.front());
    }

    SweepResult result;
    result.label = base.label;
    result.param_path = param_path;
    result.node = opts.node;
    result.rail = opts.rail;
    result.rows.resize(values.size());

    const int workers =
        std::min<int>(resolve_workers(opts.workers), std::max<std::size_t>(values.size(), 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i)
            result.rows[i] = run_point(base, param_path, values[i], opts);
        return result;
    }

    // Results land in preallocated slots indexed by value position, so the
    // assembled table is identical regardless of scheduling.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) return;
                result.rows[i] = run_point(base, param_path, values[i], opts);
            }
        });
    }
    for (auto& th : pool) th.join();
    return result;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "label,param,value,converged,n_periods,error,node,v_max,v_min,overshoot_v,"
          "rise_10_90_s,fall_10_90_s,measured_duty,avg_v,rail,avg_rail_current_a,"
          "penetration_charge_c,dissipation_w,junction_temp_c,runaway\n";
    for (const auto& row : r.rows) {
        os << r.label << ',' << r.param_path << ',' << fmt_g12(row.value) << ','
           << (row.converged ? 1 : 0) << ',' << row.n_periods << ','
           << '"' << row.error << '"' << ',' << r.node << ',';
        if (row.converged) {
            os << fmt_g12(row.wave.v_max) << ',' << fmt_g12(row.wave.v_min) << ','
               << fmt_g12(row.wave.overshoot_v) << ',' << fmt_g12(row.wave.rise_10_90_s)
               << ',' << fmt_g12(row.wave.fall_10_90_s) << ','
               << fmt_g12(row.wave.measured_duty) << ',' << fmt_g12(row.wave.avg);
        } else {
            os << ",,,,,,";
        }
        os << ',' << r.rail << ',';
        if (row.converged) {
            os << fmt_g12(row.power.avg_rail_current_a) << ','
               << fmt_g12(row.power.penetration_charge_c) << ','
               << fmt_g12(row.power.dissipation_w) << ','
               << fmt_g12(row.power.junction_temp_c) << ',' << (row.power.runaway ? 1 : 0);
        } else {
            os << ",,,,";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace gatewave

// gatewave: behavioral transient simulator for a GaN/SiC gate-drive chain.
//
// Exit codes: 0 pass, 1 declared-bound failure, 2 usage/config error,
// 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gatewave/csvio.hpp"
#include "gatewave/errors.hpp"
#include "gatewave/plot.hpp"
#include "gatewave/presets.hpp"
#include "gatewave/scenario.hpp"
#include "gatewave/sweep.hpp"

namespace fs = std::filesystem;
using namespace gatewave;

namespace {

std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> out;
    auto fail = [&](const std::string& why) {
        throw ValidationError("--values", why + ": " + spec);
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto next = s.find(sep, pos);
            parts.push_back(s.substr(pos, next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        return parts;
    };
    auto num = [&](const std::string& s) {
        try {
            std::size_t p = 0;
            const double v = std::stod(s, &p);
            if (p != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail("malformed number '" + s + "'");
            return 0.0;
        }
    };

    if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
        const auto parts = split(spec.substr(4), ':');
        if (parts.size() != 3) fail("range needs start:stop:count");
        const double a = num(parts[0]), b = num(parts[1]);
        const int n = static_cast<int>(num(parts[2]));
        if (n < 1) fail("count must be >= 1");
        const bool logscale = spec[2] == 'g';
        for (int i = 0; i < n; ++i) {
            const double w = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(logscale ? a * std::pow(b / a, w) : a + (b - a) * w);
        }
        return out;
    }
    for (const auto& part : split(spec, ',')) out.push_back(num(part));
    if (out.empty()) fail("no values");
    return out;
}

int exit_code_for(const PresetReport& r) { return r.pass() ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gatewave - gate-drive chain transient simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string out_dir = "out";
    std::string presets_dir;
    int workers = 0;
    bool seedless = false;  // reserved; the simulator has no random state
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--presets-dir", presets_dir, "preset catalog directory");
    app.add_option("--workers", workers, "worker count (overrides GATEWAVE_WORKERS)");
    app.add_flag("--seedless", seedless, "reserved; runs are deterministic by design");

    auto* cmd_run = app.add_subcommand("run", "run a preset or scenario file");
    std::string run_target;
    cmd_run->add_option("target", run_target, "preset name or scenario file")->required();

    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep of a scenario");
    std::string sweep_scn, sweep_param, sweep_values, sweep_node = "v_gg_lo",
                            sweep_rail = "dsil";
    cmd_sweep->add_option("scenario", sweep_scn, "scenario file")->required();
    cmd_sweep->add_option("--param", sweep_param, "numeric key path")->required();
    cmd_sweep->add_option("--values", sweep_values,
                          "comma list, lin:a:b:n or log:a:b:n")->required();
    cmd_sweep->add_option("--node", sweep_node, "waveform observable node");
    cmd_sweep->add_option("--rail", sweep_rail, "power observable rail");

    auto* cmd_validate = app.add_subcommand("validate", "validate a scenario file");
    std::string val_scn;
    cmd_validate->add_option("scenario", val_scn, "scenario file")->required();

    auto* cmd_list = app.add_subcommand("list-presets", "list the preset catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const fs::path pdir = presets_dir.empty() ? default_presets_dir() : fs::path(presets_dir);

    try {
        if (cmd_list->parsed()) {
            for (const auto& name : preset_names()) std::cout << name << "\n";
            return 0;
        }
        if (cmd_validate->parsed()) {
            const Scenario s = load_scenario(val_scn);
            std::cout << "ok: " << s.label << "\n";
            return 0;
        }
        if (cmd_run->parsed()) {
            PresetReport report;
            if (is_preset_name(run_target)) {
                report = run_preset(run_target, out_dir, pdir, workers);
            } else if (fs::exists(run_target)) {
                report = run_scenario_file(run_target, out_dir);
            } else {
                throw UnknownPreset(run_target);
            }
            std::cout << report.summary_text();
            return exit_code_for(report);
        }
        if (cmd_sweep->parsed()) {
            const Scenario base = load_scenario(sweep_scn);
            SweepOptions so;
            so.node = sweep_node;
            so.rail = sweep_rail;
            so.workers = workers;
            const auto values = parse_values(sweep_values);
            const SweepResult res = sweep(base, sweep_param, values, so);

            std::string safe_param = sweep_param;
            for (char& ch : safe_param)
                if (ch == '.') ch = '_';
            const fs::path dir = fs::path(out_dir) / ("sweep_" + safe_param);
            atomic_write(dir / "sweep.csv", sweep_csv(res));
            std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";

            bool all_ok = true;
            for (const auto& row : res.rows) {
                if (!row.converged) {
                    all_ok = false;
                    std::cout << "failed point " << fmt_g12(row.value) << ": " << row.error
                              << "\n";
                }
            }
            return all_ok ? 0 : 3;
        }
    } catch (const UnknownPreset& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadParamPath& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

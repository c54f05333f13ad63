#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gatewave/scenario.hpp"

namespace gatewave {

struct BoundCheck {
    std::string name;
    std::string detail;  // measured value and limit, human readable
    bool pass = false;
};

struct PresetReport {
    std::string preset;
    std::vector<BoundCheck> bounds;
    std::vector<std::filesystem::path> files;

    bool pass() const;
    std::string summary_text() const;
};

/// Canonical preset names (aliases accepted by run_preset are not listed).
const std::vector<std::string>& preset_names();
bool is_preset_name(const std::string& name);

/// Directory holding the shipped preset scenario files, resolved relative to
/// the running executable, falling back to ./presets.
std::filesystem::path default_presets_dir();

/// Execute a named experiment preset: runs its scenarios, writes
/// trace_*.csv, stats.csv, plot_*.svg and a `summary` file under
/// out_root/<preset>/, and evaluates the preset's declared bounds.
/// Throws UnknownPreset before touching the filesystem for unknown names.
PresetReport run_preset(const std::string& name, const std::filesystem::path& out_root,
                        const std::filesystem::path& presets_dir, int workers = 0);

/// Run an arbitrary scenario file end to end (full chain, PSS) with the same
/// output layout; no bounds are declared.
PresetReport run_scenario_file(const std::filesystem::path& scenario_path,
                               const std::filesystem::path& out_root);

/// Point measurement behind fig-5 style supply-current grids.
struct SupplyPoint {
    double avg_current_a = 0.0;
    double penetration_charge_c = 0.0;
    int n_periods = 0;
};
SupplyPoint supply_current_point(const Scenario& s, double rail_v, double f_hz);

}  // namespace gatewave

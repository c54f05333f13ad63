#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gatewave/chain.hpp"
#include "gatewave/load.hpp"
#include "gatewave/signal.hpp"
#include "gatewave/solver.hpp"
#include "gatewave/stages.hpp"

namespace gatewave {

/// A full chain + load configuration. Field defaults are the calibrated
/// Prototype-B parameter set; scenario files override individual keys.
struct Scenario {
    std::string label = "default";
    PwmSpec pwm;
    IsolatorModel isolator_lo;
    IsolatorModel isolator_hi;
    TotemPoleModel totem_lo;
    TotemPoleModel totem_hi;
    GanPushPullModel pushpull;
    ThermalModel thermal;
    LoadVariant load = OpenLoad{};
    SolverOptions solver;

    void validate() const;

    DriverChain make_chain(ChainMode mode) const;

    /// Solver options with dt_max additionally capped for one PWM period.
    SolverOptions solver_for_period() const;
};

/// Parse a scenario file (flat `key = value` lines, `#` comments). Missing
/// keys keep their defaults; an empty file yields the all-defaults scenario
/// labeled "default". Throws ParseError on unreadable/malformed input and
/// ValidationError naming the offending key.
Scenario load_scenario(const std::filesystem::path& path);

/// Same, from an in-memory string; table paths resolve against base_dir.
Scenario scenario_from_string(const std::string& text,
                              const std::filesystem::path& base_dir);

/// Assign a numeric field addressed by its config key path. Throws
/// BadParamPath when the path does not address a numeric field of this
/// scenario (including keys of the other load kind).
void set_param(Scenario& s, const std::string& path, double value);

/// All numeric key paths valid for this scenario's load kind.
std::vector<std::string> numeric_param_names(const Scenario& s);

}  // namespace gatewave

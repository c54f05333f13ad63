#pragma once

#include <string>
#include <vector>

#include "gatewave/metrics.hpp"
#include "gatewave/scenario.hpp"

namespace gatewave {

struct SweepRow {
    double value = 0.0;
    bool converged = false;
    int n_periods = 0;
    std::string error;  // failure message; empty when converged
    WaveformStats wave;
    PowerStats power;
};

struct SweepResult {
    std::string label;
    std::string param_path;
    std::string node;
    std::string rail;
    std::vector<SweepRow> rows;  // one per value, input order
};

struct SweepOptions {
    std::string node = "v_gg_lo";  // waveform observable
    std::string rail = "dsil";     // power observable
    int workers = 0;               // 0: GATEWAVE_WORKERS env var, then core count
};

/// Independent full-chain PSS run per value of the addressed parameter.
/// Failed points carry their error message instead of being dropped; row
/// order follows the input values. Throws BadParamPath for an unknown path.
SweepResult sweep(const Scenario& base, const std::string& param_path,
                  const std::vector<double>& values, const SweepOptions& opts = {});

/// One row per value with the stable documented column order.
std::string sweep_csv(const SweepResult& r);

int resolve_workers(int requested);

}  // namespace gatewave

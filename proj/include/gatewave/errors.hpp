#pragma once

#include <stdexcept>
#include <string>

namespace gatewave {

/// Base class for all simulator errors.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

/// PWM duty ratios command overlapping conduction on the two push-pull sides.
class OverlapError : public SimError {
public:
    explicit OverlapError(const std::string& what) : SimError(what) {}
};

/// Scenario/config validation failure; carries the offending key.
class ValidationError : public SimError {
public:
    ValidationError(std::string key, const std::string& reason)
        : SimError(key + ": " + reason), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Config file could not be read or parsed.
class ParseError : public SimError {
public:
    explicit ParseError(const std::string& what) : SimError(what) {}
};

/// Newton iteration failed to converge; carries last diagnostics.
class NewtonDivergence : public SimError {
public:
    NewtonDivergence(int iterations, double last_norm)
        : SimError("Newton iteration diverged after " + std::to_string(iterations) +
                   " iterations (residual norm " + std::to_string(last_norm) + ")"),
          iterations_(iterations),
          last_norm_(last_norm) {}
    int iterations() const { return iterations_; }
    double last_norm() const { return last_norm_; }

private:
    int iterations_;
    double last_norm_;
};

/// Step control hit dt_min with the local error still above tolerance.
class StepUnderflow : public SimError {
public:
    explicit StepUnderflow(double t)
        : SimError("step size underflow at t = " + std::to_string(t) + " s") {}
};

/// Periodic steady state was not reached within pss_max_periods.
class NoSteadyState : public SimError {
public:
    NoSteadyState(int periods, double residual)
        : SimError("no periodic steady state after " + std::to_string(periods) +
                   " periods (boundary residual " + std::to_string(residual) + ")") {}
};

/// Trace does not contain the full switching cycle a measurement needs.
class IncompleteCycle : public SimError {
public:
    explicit IncompleteCycle(const std::string& what) : SimError(what) {}
};

/// Two traces have non-overlapping time spans.
class GridMismatch : public SimError {
public:
    explicit GridMismatch(const std::string& what) : SimError(what) {}
};

/// Assembled device capacitance matrix is not invertible (bad C-V table).
class SingularCapacitance : public SimError {
public:
    explicit SingularCapacitance(const std::string& what) : SimError(what) {}
};

/// Preset name not present in the catalog.
class UnknownPreset : public SimError {
public:
    explicit UnknownPreset(const std::string& name)
        : SimError("unknown preset: " + name) {}
};

/// Sweep parameter path does not address a numeric scenario field.
class BadParamPath : public SimError {
public:
    explicit BadParamPath(const std::string& path)
        : SimError("bad parameter path: " + path) {}
};

/// Plot was asked to render an empty data set.
class EmptyData : public SimError {
public:
    explicit EmptyData(const std::string& what) : SimError(what) {}
};

}  // namespace gatewave

#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace gatewave {

enum class Side { High, Low };
enum class EdgeDir { Rise, Fall };

/// Dual complementary PWM control description. duty_high/duty_low are the
/// fractions of the period each INPUT is logic-high; the driven push-pull
/// side conducts while its input is low, so conduction duty is 1 - duty.
struct PwmSpec {
    double frequency_hz = 1e6;
    double duty_high = 0.5;
    double duty_low = 0.5;
    /// Low-side input rise placement as a fraction of the period relative to
    /// the high-side rise at t = 0. Unset means symmetric placement, which
    /// gives both transitions equal dead time.
    std::optional<double> phase_offset;
    double logic_high_v = 5.0;
    double logic_low_v = 0.0;
    double rise_fall_s = 1e-9;

    double period_s() const { return 1.0 / frequency_hz; }
    double resolved_phase() const;

    /// Throws OverlapError when the conduction intervals would overlap
    /// (duty_high + duty_low < 1) and ValidationError for other bad fields.
    void validate() const;
};

struct ControlEdge {
    double time_s;
    Side side;
    EdgeDir dir;
};

/// Trapezoidal-edged input values of both sides at time t. Periodic in
/// 1/frequency_hz; t may be any non-negative time.
std::pair<double, double> eval_control(const PwmSpec& spec, double t);

/// Single-side input value.
double eval_side(const PwmSpec& spec, Side side, double t);

/// Idealized conduction-side waveform (high while the side conducts),
/// same trapezoidal edge shape, levels [0, 1]. Used to drive a push-pull
/// stage directly in stage-level experiments.
double eval_conduction(const PwmSpec& spec, Side side, double t);

/// Edge start times of both sides in [t0, t1), sorted ascending.
std::vector<ControlEdge> edge_schedule(const PwmSpec& spec, double t0, double t1);

/// Dead time per transition: (duty_high + duty_low - 1)/2 * period.
double dead_time(const PwmSpec& spec);

/// Times within one period at which the given side's input crosses the
/// logic threshold, as {rise_crossing, fall_crossing} offsets from t = 0.
std::pair<double, double> threshold_crossings(const PwmSpec& spec, Side side,
                                              double threshold_v);

}  // namespace gatewave

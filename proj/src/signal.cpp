#include "gatewave/signal.hpp"

#include <algorithm>
#include <cmath>

#include "gatewave/errors.hpp"

namespace gatewave {

namespace {

double duty_of(const PwmSpec& s, Side side) {
    return side == Side::High ? s.duty_high : s.duty_low;
}

double start_of(const PwmSpec& s, Side side) {
    return side == Side::High ? 0.0 : s.resolved_phase() * s.period_s();
}

// Value of one side's trapezoid at phase u in [0, T), measured from the
// side's own rise start.
double trapezoid(const PwmSpec& s, double duty, double u) {
    const double T = s.period_s();
    const double rf = s.rise_fall_s;
    const double lo = s.logic_low_v;
    const double hi = s.logic_high_v;
    const double t_fall = duty * T;
    if (rf <= 0.0) return (u < t_fall) ? hi : lo;
    if (u < rf) return lo + (hi - lo) * (u / rf);
    if (u < t_fall) return hi;
    if (u < t_fall + rf) return hi - (hi - lo) * ((u - t_fall) / rf);
    return lo;
}

double wrap_phase(double x, double T) {
    double u = std::fmod(x, T);
    if (u < 0.0) u += T;
    return u;
}

}  // namespace

double PwmSpec::resolved_phase() const {
    if (phase_offset) return *phase_offset;
    // Symmetric placement: both dead-time gaps equal.
    return (duty_high - duty_low + 1.0) / 2.0;
}

void PwmSpec::validate() const {
    if (!(frequency_hz > 0.0))
        throw ValidationError("pwm.frequency_hz", "must be > 0");
    if (!(duty_high > 0.0 && duty_high < 1.0))
        throw ValidationError("pwm.duty_high", "must be in (0, 1)");
    if (!(duty_low > 0.0 && duty_low < 1.0))
        throw ValidationError("pwm.duty_low", "must be in (0, 1)");
    if (duty_high + duty_low < 1.0)
        throw OverlapError(
            "pwm.duty_high + pwm.duty_low must be >= 1; the commanded "
            "conduction intervals of the two sides would overlap");
    if (phase_offset && !(*phase_offset >= 0.0 && *phase_offset < 1.0))
        throw ValidationError("pwm.phase_offset", "must be in [0, 1)");
    if (!(rise_fall_s >= 0.0))
        throw ValidationError("pwm.rise_fall_s", "must be >= 0");
    const double T = period_s();
    const double shortest =
        std::min({duty_high, 1.0 - duty_high, duty_low, 1.0 - duty_low}) * T;
    if (rise_fall_s > shortest)
        throw ValidationError("pwm.rise_fall_s",
                              "edge longer than the shortest logic segment");
    if (!(logic_high_v > logic_low_v))
        throw ValidationError("pwm.logic_high_v", "must exceed logic_low_v");
}

double eval_side(const PwmSpec& spec, Side side, double t) {
    const double T = spec.period_s();
    const double u = wrap_phase(t - start_of(spec, side), T);
    return trapezoid(spec, duty_of(spec, side), u);
}

std::pair<double, double> eval_control(const PwmSpec& spec, double t) {
    return {eval_side(spec, Side::High, t), eval_side(spec, Side::Low, t)};
}

double eval_conduction(const PwmSpec& spec, Side side, double t) {
    const double v = eval_side(spec, side, t);
    return (spec.logic_high_v - v) / (spec.logic_high_v - spec.logic_low_v);
}

std::vector<ControlEdge> edge_schedule(const PwmSpec& spec, double t0, double t1) {
    if (!(t0 < t1)) throw ValidationError("edge_schedule", "t0 must be < t1");
    const double T = spec.period_s();
    std::vector<ControlEdge> edges;
    for (Side side : {Side::High, Side::Low}) {
        const double s = start_of(spec, side);
        const double f = s + duty_of(spec, side) * T;
        for (double base : {s, f}) {
            const EdgeDir dir = (base == s) ? EdgeDir::Rise : EdgeDir::Fall;
            const long k0 = static_cast<long>(std::ceil((t0 - base) / T - 1e-12));
            for (long k = k0;; ++k) {
                const double t = base + static_cast<double>(k) * T;
                if (t >= t1) break;
                if (t >= t0) edges.push_back({t, side, dir});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const ControlEdge& a, const ControlEdge& b) {
        if (a.time_s != b.time_s) return a.time_s < b.time_s;
        return static_cast<int>(a.side) < static_cast<int>(b.side);
    });
    return edges;
}

double dead_time(const PwmSpec& spec) {
    if (spec.duty_high + spec.duty_low < 1.0)
        throw OverlapError("dead_time undefined: duty_high + duty_low < 1");
    return (spec.duty_high + spec.duty_low - 1.0) / 2.0 * spec.period_s();
}

std::pair<double, double> threshold_crossings(const PwmSpec& spec, Side side,
                                              double threshold_v) {
    const double T = spec.period_s();
    const double span = spec.logic_high_v - spec.logic_low_v;
    const double frac =
        std::clamp((threshold_v - spec.logic_low_v) / span, 0.0, 1.0);
    const double s = start_of(spec, side);
    const double rise = s + spec.rise_fall_s * frac;
    const double fall = s + duty_of(spec, side) * T + spec.rise_fall_s * (1.0 - frac);
    return {wrap_phase(rise, T), wrap_phase(fall, T)};
}

}  // namespace gatewave

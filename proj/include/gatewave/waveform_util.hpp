#pragma once

#include <cstddef>
#include <vector>

namespace gatewave {

/// One threshold crossing found by linear interpolation between samples.
struct Crossing {
    double time_s;
    bool rising;
};

/// All crossings of `level` in (t, y), in time order.
std::vector<Crossing> find_crossings(const std::vector<double>& t,
                                     const std::vector<double>& y, double level);

/// 10-90 % transition duration between lo_level and hi_level.
/// For rising = true: earliest interval from an upward crossing of lo_level
/// to the next upward crossing of hi_level; for falling: from a downward
/// crossing of hi_level to the next downward crossing of lo_level.
/// Returns a negative value when no such transition exists.
double transition_time(const std::vector<double>& t, const std::vector<double>& y,
                       double lo_level, double hi_level, bool rising);

/// Periodic extension of one cycle: appends the samples again shifted by the
/// span so transitions wrapping the cycle boundary become measurable.
void extend_periodic(std::vector<double>& t, std::vector<double>& y);

}  // namespace gatewave

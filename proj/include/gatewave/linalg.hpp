#pragma once

#include <cstddef>
#include <vector>

namespace gatewave {

using Vec = std::vector<double>;

/// Solve A x = b in place by partial-pivot LU; A is n x n row-major and is
/// destroyed. On return b holds x. Returns false if A is numerically singular.
bool lu_solve(std::vector<double>& a, Vec& b, int n);

double max_abs(const Vec& v);
bool all_finite(const Vec& v);

}  // namespace gatewave

#include "gatewave/linalg.hpp"

#include <cmath>
#include <utility>

namespace gatewave {

bool lu_solve(std::vector<double>& a, Vec& b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            double v = std::fabs(a[i * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        const double inv = 1.0 / a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] * inv;
            if (m == 0.0) continue;
            a[i * n + k] = m;
            for (int j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            b[i] -= m * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
        if (!std::isfinite(b[i])) return false;
    }
    return true;
}

double max_abs(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace gatewave

#pragma once

// Test-only reference computations. Nothing here shares code with the
// library's numerical paths.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
           + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson on a smooth integrand.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Γ(z) for z in (0, 3) from the defining integral with t = u^(1/z), which
/// turns ∫ t^(z−1) e^(−t) dt into (1/z) ∫ exp(−u^(1/z)) du.
inline double gamma_by_integration(double z) {
    const double upper = std::pow(60.0, z);
    auto f = [z](double u) { return std::exp(-std::pow(u, 1.0 / z)); };
    return adaptive_simpson(f, 0.0, upper) / z;
}

} // namespace oracle

#include "fracls/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fracls::quad {
namespace {

constexpr long double kHalfPi = std::numbers::pi_v<long double> / 2.0L;

// Past this abscissa exp(-π sinh t) underflows long double.
const long double kMaxT = std::asinh(11000.0L / std::numbers::pi_v<long double>);

// Contribution of the symmetric node pair ±t, already multiplied by the weight.
// Returns false once both tails are exhausted (weight underflow or a
// non-finite integrand at the endpoint).
struct PairSum {
    long double value = 0.0L;
    bool alive = true;
};

PairSum node_pair(const UnitIntegrand& g, long double t) {
    const long double u = kHalfPi * std::sinh(t);
    const long double q = std::exp(-2.0L * u);
    const long double denom = 1.0L + q;
    const long double weight = kHalfPi * std::cosh(t) * 2.0L * q / (denom * denom);
    if (weight == 0.0L || q == 0.0L) return {0.0L, false};

    const long double big = 1.0L / denom;  // abscissa near 1
    const long double small = q / denom;   // abscissa near 0
    const long double hi = g(big, small);
    const long double lo = g(small, big);
    if (!std::isfinite(hi) || !std::isfinite(lo)) return {0.0L, false};
    return {weight * (hi + lo), true};
}

// Sum over t = t0, t0 + step, ... until the tail no longer contributes.
long double tail_sum(const UnitIntegrand& g, long double t0, long double step, long double scale) {
    long double sum = 0.0L;
    int quiet = 0;
    for (long double t = t0; t <= kMaxT; t += step) {
        const PairSum p = node_pair(g, t);
        if (!p.alive) break;
        sum += p.value;
        const long double ref = std::max(std::fabs(sum), scale);
        if (std::fabs(p.value) < 1e-24L * ref) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return sum;
}

} // namespace

Result tanh_sinh_unit(const UnitIntegrand& g, Options opts) {
    Result r;
    const long double center = kHalfPi * 0.5L * g(0.5L, 0.5L);  // weight at t = 0 is π/4
    long double step = 1.0L;
    long double raw = center + tail_sum(g, 1.0L, 1.0L, std::fabs(center));
    long double estimate = raw * step;

    for (int level = 1; level <= opts.max_levels; ++level) {
        step *= 0.5L;
        raw += tail_sum(g, step, 2.0L * step, std::fabs(raw));
        const long double refined = raw * step;
        const long double scale = std::max(std::fabs(refined), std::numeric_limits<long double>::min());
        r.relative_error = std::fabs(refined - estimate) / scale;
        estimate = refined;
        r.levels = level;
        if (level >= 3 && r.relative_error <= opts.relative_tolerance) {
            r.converged = true;
            break;
        }
    }
    r.value = estimate;
    if (!r.converged && r.relative_error <= opts.relative_tolerance) r.converged = true;
    return r;
}

} // namespace fracls::quad

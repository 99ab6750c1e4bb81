#include "fracls/critpoints.hpp"

#include "fracls/errors.hpp"
#include "fracls/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonzero_x(double x) {
    if (x == 0.0) throw DomainError("critical points need a non-zero input sample");
}

// Roots of the one-tap quadratic scaled by Φ/x, where Φ is the target seen
// from the current terminal. The ± pair is (Φ/2x)((2−α) ± √(α(2−α))); the
// smaller-magnitude root is taken from the product to avoid cancellation.
RootPair scaled_pair(double phi, double x, double alpha) {
    const double scale = phi / (2.0 * x);
    const double big = scale * ((2.0 - alpha) + std::sqrt(alpha * (2.0 - alpha)));
    // product of the roots: (2−α)(1−α)Φ²/(2x²)
    const double product = (2.0 - alpha) * (1.0 - alpha) * phi * phi / (2.0 * x * x);
    const double small = big == 0.0 ? 0.0 : product / big;
    return {big, small};
}

struct GammaConstants {
    double g1; // 1/Γ(1−α), zero at α = 1
    double g2;
    double g3;
    explicit GammaConstants(double alpha)
        : g1(reciprocal_gamma(1.0 - alpha)), g2(1.0 / gamma(2.0 - alpha)), g3(1.0 / gamma(3.0 - alpha)) {}
};

// Left RL derivative of φ(a) + φ′(a)s + A s² with respect to the offset s > 0
// from the terminal a. For s < 0 the reflected form is returned.
double shifted_derivative(double value, double slope, double curvature, double s, double alpha,
                          const GammaConstants& g) {
    const double m = std::fabs(s);
    const double sign = s < 0.0 ? -1.0 : 1.0;
    double d = slope * std::pow(m, 1.0 - alpha) * g.g2 + sign * 2.0 * curvature * std::pow(m, 2.0 - alpha) * g.g3;
    if (g.g1 != 0.0 && value != 0.0) d += sign * value * std::pow(m, -alpha) * g.g1;
    return d;
}

// Principal-branch version; also reports whether any power left the real line.
Complex shifted_derivative_raw(Complex value, Complex slope, double curvature, Complex s, double alpha,
                               const GammaConstants& g, bool& complex_power) {
    const Complex p1 = principal_pow(s, 1.0 - alpha);
    const Complex p2 = principal_pow(s, 2.0 - alpha);
    Complex d = slope * p1 * g.g2 + 2.0 * curvature * p2 * g.g3;
    complex_power = p1.imag() != 0.0 || p2.imag() != 0.0;
    if (g.g1 != 0.0 && value != Complex{0.0, 0.0}) {
        const Complex p0 = principal_pow(s, -alpha);
        complex_power = complex_power || p0.imag() != 0.0;
        d += value * p0 * g.g1;
    }
    return d;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

RootPair flms1_critical_points(double d, double x, FractionalOrder alpha) {
    require_nonzero_x(x);
    return scaled_pair(d, x, alpha.value());
}

RootPair flms1_critical_points_noconst(double d, double x, FractionalOrder alpha) {
    require_nonzero_x(x);
    return {(2.0 - alpha.value()) * d / x, 0.0};
}

RootPair flms2_critical_sequence(double w_prev, double d, double x, FractionalOrder alpha) {
    require_nonzero_x(x);
    const RootPair offset = scaled_pair(d - w_prev * x, x, alpha.value());
    return {w_prev + offset.plus, w_prev + offset.minus};
}

ScalarQuadratic::ScalarQuadratic(double quad, double lin, double constant, double lower)
    : a2(quad), a1(lin), c(constant), lower_limit(lower) {
    if (!(quad > 0.0)) throw DomainError("quadratic coefficient must be positive");
}

CriticalPointReport example_quadratic_critical_points(const ScalarQuadratic& q, FractionalOrder alpha) {
    const double a = q.lower_limit;
    const double t_star = q.minimizer();
    if (!(a >= 0.0 && a < t_star)) {
        throw DomainError("lower terminal must lie in [0, t*) for the critical-point analysis");
    }
    const double al = alpha.value();
    // In the offset s = t − a the derivative times s^α Γ(3−α) is
    // 2A s² + φ′(a)(2−α) s + φ(a)(2−α)(1−α).
    const double value = q(a);
    const double slope = q.derivative(a);
    const double qa = 2.0 * q.a2;
    const double qb = slope * (2.0 - al);
    const double qc = value * (2.0 - al) * (1.0 - al);
    const double disc = (2.0 - al) * ((2.0 - al) * slope * slope - 8.0 * q.a2 * value * (1.0 - al));

    CriticalPointReport report{t_star, {}, {kNaN, kNaN}, disc < 0.0};
    if (report.imaginary) {
        const double re = -qb / (2.0 * qa);
        const double im = std::sqrt(-disc) / (2.0 * qa);
        report.fractional_pair = {Complex{a + re, im}, Complex{a + re, -im}};
        return report;
    }

    const double root = std::sqrt(disc);
    const double big = -0.5 * (qb + (qb >= 0.0 ? root : -root)) / qa;
    const double small = big == 0.0 ? 0.0 : qc / (qa * big);
    const double s_plus = std::max(big, small);
    const double s_minus = std::min(big, small);
    report.fractional_pair = {Complex{a + s_plus, 0.0}, Complex{a + s_minus, 0.0}};

    const auto offset_fn = [&](long double s) {
        return (static_cast<long double>(q.a2) * s + static_cast<long double>(slope)) * s
               + static_cast<long double>(value);
    };
    const std::array<double, 2> offsets{s_plus, s_minus};
    for (std::size_t i = 0; i < 2; ++i) {
        const double s = offsets[i];
        if (s > 0.0) {
            report.residual[i] = std::fabs(rl_deriv_numeric_offset(alpha, offset_fn, RLInterval(a, a + s)).value);
        } else if (s == 0.0 && value == 0.0) {
            // s^(1−α) and s^(2−α) vanish at the terminal
            report.residual[i] = al == 1.0 ? std::fabs(slope) : 0.0;
        }
    }
    return report;
}

double rl_deriv_at_true_minimum(double c, FractionalOrder alpha) {
    const double al = alpha.value();
    return std::pow(4.0, al) * reciprocal_gamma(1.0 - al) * (c - 1.0 / (4.0 * (2.0 - al)));
}

bool check_refai_bound(const RealFunction& f, double t_star, FractionalOrder alpha) {
    if (!(t_star > 0.0 && t_star < 1.0)) throw DomainError("minimizer must lie in (0, 1)");
    const double h = 1e-5;
    const double slope = (f(t_star + h) - f(t_star - h)) / (2.0 * h);
    if (!(std::fabs(slope) < 1e-8)) throw DomainError("t_star is not a critical point of f");
    const double lhs = rl_deriv_numeric(alpha, f, RLInterval(0.0, t_star));
    const double rhs = std::pow(t_star, -alpha.value()) * reciprocal_gamma(1.0 - alpha.value()) * f(t_star);
    return lhs <= rhs + 1e-6;
}

std::vector<double> DescentResult::real_trajectory() const {
    std::vector<double> out;
    out.reserve(iterates.size());
    for (const auto& t : iterates) out.push_back(t.real());
    return out;
}

DescentResult fractional_descent_scalar(const ScalarQuadratic& f, const DescentOptions& options) {
    const double al = options.alpha.value();
    const GammaConstants g(al);
    const bool moving = options.mode == DescentMode::RULE2_STYLE;

    DescentResult result;
    result.iterates.reserve(options.steps + 1);
    Complex t{options.t0, 0.0};
    Complex prev{options.t_prev0, 0.0};
    result.iterates.push_back(t);

    for (std::size_t n = 0; n < options.steps; ++n) {
        const Complex a = moving ? prev : Complex{options.lower_limit, 0.0};
        const Complex s = t - a;
        const Complex value = (f.a2 * a + f.a1) * a + f.c;
        const Complex slope = 2.0 * f.a2 * a + f.a1;
        Complex d;
        if (options.raw_branch) {
            bool fired = false;
            d = shifted_derivative_raw(value, slope, f.a2, s, al, g, fired);
            if (fired && !result.first_complex_at) result.first_complex_at = n;
        } else {
            d = shifted_derivative(value.real(), slope.real(), f.a2, s.real(), al, g);
        }
        const Complex next = t - 0.5 * options.mu_f * d;
        if (!finite(next)) {
            result.non_finite = true;
            break;
        }
        prev = t;
        t = next;
        result.iterates.push_back(t);
    }
    return result;
}

DescentResult fractional_descent_scalar(const RealFunction& f, const DescentOptions& options) {
    if (options.raw_branch) throw std::invalid_argument("raw branch descent needs a quadratic objective");
    const bool moving = options.mode == DescentMode::RULE2_STYLE;

    DescentResult result;
    result.iterates.reserve(options.steps + 1);
    double t = options.t0;
    double prev = options.t_prev0;
    result.iterates.emplace_back(t, 0.0);

    for (std::size_t n = 0; n < options.steps; ++n) {
        const double a = moving ? prev : options.lower_limit;
        double d;
        if (t > a) {
            d = rl_deriv_numeric(options.alpha, f, RLInterval(a, t));
        } else if (t < a) {
            const auto g = [&](long double u) { return static_cast<long double>(f(static_cast<double>(a - u))); };
            d = -rl_deriv_numeric_right(options.alpha, g, t, a).value;
        } else {
            result.non_finite = true;
            break;
        }
        const double next = t - 0.5 * options.mu_f * d;
        if (!std::isfinite(next)) {
            result.non_finite = true;
            break;
        }
        prev = t;
        t = next;
        result.iterates.emplace_back(t, 0.0);
    }
    return result;
}

std::vector<double> ordinary_descent_scalar(const ScalarQuadratic& f, double mu, double t0, std::size_t steps) {
    std::vector<double> out;
    out.reserve(steps + 1);
    double t = t0;
    out.push_back(t);
    for (std::size_t n = 0; n < steps; ++n) {
        t -= 0.5 * mu * f.derivative(t);
        out.push_back(t);
    }
    return out;
}

std::optional<std::size_t> iterations_to_tolerance(const std::vector<double>& trajectory, double target,
                                                   double tol) {
    for (std::size_t n = 0; n < trajectory.size(); ++n) {
        if (std::fabs(trajectory[n] - target) < tol) return n;
    }
    return std::nullopt;
}

} // namespace fracls

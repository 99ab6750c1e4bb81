#include "fracls/fracderiv.hpp"

#include "fracls/errors.hpp"
#include "fracls/quadrature.hpp"
#include "fracls/special.hpp"

#include <cmath>
#include <string>

namespace fracls {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
}

RLInterval::RLInterval(double lower_terminal, double evaluation_point)
    : lower(lower_terminal), upper(evaluation_point) {
    if (!(lower < upper)) {
        throw DomainError("RL interval requires lower < upper, got (" + std::to_string(lower) + ", "
                          + std::to_string(upper) + ")");
    }
}

PowerFunction::PowerFunction(double shift, double beta, double coeff)
    : base_shift(shift), exponent_beta(beta), coefficient(coeff) {
    if (!(beta > 0.0)) {
        throw DomainError("power function exponent β must be positive, got " + std::to_string(beta));
    }
}

namespace {

double power_rule(double alpha, const PowerFunction& p, double distance) {
    const double beta = p.exponent_beta;
    return p.coefficient * gamma(beta) * reciprocal_gamma(beta - alpha)
           * std::pow(distance, beta - alpha - 1.0);
}

// (1/Γ(1−α)) · ∫_0^L g(s) (L−s)^(−α) ds, before differentiation, scaled by
// Γ(1−α). With u = (L−s)^(1−α) and u = U(1−η), U = L^(1−α):
//   ∫ = p·U ∫_0^1 g(L(1 − (1−η)^p)) dη,   p = 1/(1−α).
quad::Result fractional_integral(double alpha, const OffsetFunction& g, long double length) {
    const long double p = 1.0L / (1.0L - static_cast<long double>(alpha));
    const long double scale = p * std::pow(length, 1.0L / p);
    auto integrand = [&](long double eta, long double one_minus_eta) -> long double {
        const long double log_c = eta < 0.5L ? std::log1p(-eta) : std::log(one_minus_eta);
        const long double s = -length * std::expm1(p * log_c);
        return g(s);
    };
    quad::Result r = quad::tanh_sinh_unit(integrand);
    r.value *= scale;
    return r;
}

constexpr long double kIntegralTolerance = 1e-12L;
constexpr double kRelativeStep = 1e-5;

NumericDerivative left_from_offsets(FractionalOrder order, const OffsetFunction& g, double length) {
    const double alpha = order.value();
    const double h = kRelativeStep * length;

    if (order.is_integer()) {
        const long double fp = g(length + h);
        const long double fm = g(length - h);
        return {static_cast<double>((fp - fm) / (2.0L * h)), 1e-10};
    }

    const quad::Result plus = fractional_integral(alpha, g, static_cast<long double>(length) + h);
    const quad::Result minus = fractional_integral(alpha, g, static_cast<long double>(length) - h);
    const long double worst = std::max(plus.relative_error, minus.relative_error);
    if (!std::isfinite(plus.value) || !std::isfinite(minus.value) || worst > kIntegralTolerance) {
        throw NumericalError("rl_deriv_numeric: fractional integral did not converge",
                             static_cast<double>(worst));
    }
    const long double diff = (plus.value - minus.value) / (2.0L * h);
    const long double magnitude = std::max(std::fabs(plus.value), std::fabs(minus.value));
    const long double derivative_error =
        std::fabs(diff) > 0.0L ? worst * magnitude / (h * std::fabs(diff)) : worst * magnitude / h;
    return {static_cast<double>(diff * reciprocal_gamma(1.0 - alpha)),
            static_cast<double>(derivative_error)};
}

} // namespace

double rl_deriv_power_left(FractionalOrder alpha, const PowerFunction& p, double t) {
    if (!(t > p.base_shift)) {
        throw DomainError("left RL derivative evaluated at t = " + std::to_string(t)
                          + " outside its domain (a, ∞), a = " + std::to_string(p.base_shift));
    }
    return power_rule(alpha.value(), p, t - p.base_shift);
}

double rl_deriv_power_right(FractionalOrder alpha, const PowerFunction& p, double t, double b) {
    if (!(t < b)) {
        throw DomainError("right RL derivative evaluated at t = " + std::to_string(t)
                          + " outside its domain (−∞, b), b = " + std::to_string(b));
    }
    return power_rule(alpha.value(), p, b - t);
}

double rl_deriv_numeric(FractionalOrder alpha, const RealFunction& f, const RLInterval& interval) {
    const double a = interval.lower;
    const OffsetFunction g = [&f, a](long double s) {
        return static_cast<long double>(f(a + static_cast<double>(s)));
    };
    return left_from_offsets(alpha, g, interval.length()).value;
}

NumericDerivative rl_deriv_numeric_offset(FractionalOrder alpha, const OffsetFunction& g,
                                          const RLInterval& interval) {
    return left_from_offsets(alpha, g, interval.length());
}

NumericDerivative rl_deriv_numeric_right(FractionalOrder alpha, const OffsetFunction& g, double t,
                                         double b) {
    // Reflection τ ↦ −τ maps the right derivative on (t, b) onto a left
    // derivative on (−b, −t) whose offsets coincide with b − τ.
    const RLInterval reflected(-b, -t);
    return left_from_offsets(alpha, g, reflected.length());
}

} // namespace fracls

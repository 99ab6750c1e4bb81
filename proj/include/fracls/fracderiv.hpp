#pragma once

#include <functional>

namespace fracls {

/// Order α of a Riemann–Liouville derivative, restricted to 0 < α ≤ 1.
/// α = 1 is the ordinary first derivative.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);

    double value() const noexcept { return alpha_; }
    bool is_integer() const noexcept { return alpha_ == 1.0; }

    friend bool operator==(FractionalOrder, FractionalOrder) = default;

private:
    double alpha_;
};

/// Interval (lower, upper) of a left derivative: lower terminal a and
/// evaluation point t, with a < t.
struct RLInterval {
    double lower;
    double upper;

    RLInterval(double lower_terminal, double evaluation_point);
    double length() const noexcept { return upper - lower; }
};

/// coefficient · (t − base_shift)^(β−1), β > 0. For right derivatives the
/// same triple describes coefficient · (b − t)^(β−1) with b = base_shift.
struct PowerFunction {
    double base_shift;
    double exponent_beta;
    double coefficient = 1.0;

    PowerFunction(double shift, double beta, double coeff = 1.0);
};

/// Left RL derivative of a power function by the closed-form power rule:
/// c·Γ(β)/Γ(β−α)·(t−a)^(β−α−1). Throws DomainError unless t > a.
double rl_deriv_power_left(FractionalOrder alpha, const PowerFunction& p, double t);

/// Right RL derivative of c·(b−t)^(β−1) on (t, b): c·Γ(β)/Γ(β−α)·(b−t)^(β−α−1).
/// Throws DomainError unless t < b.
double rl_deriv_power_right(FractionalOrder alpha, const PowerFunction& p, double t, double b);

// ---------------------------------------------------------------------------
// Quadrature oracle. Independent of the power rules: the fractional integral
// ∫ f(τ)(t−τ)^(−α) dτ is computed numerically after the substitution
// (t−τ) = u^(1/(1−α)) and differentiated by a central difference.

using RealFunction = std::function<double(double)>;
/// Function of the offset s = τ − a from the lower terminal, evaluated in
/// extended precision. Lets callers represent integrable singularities at the
/// terminal exactly (e.g. s^(β−1) with β < 1).
using OffsetFunction = std::function<long double(long double)>;

struct NumericDerivative {
    double value;
    double achieved_tolerance; ///< estimated relative error of the result
};

/// Left RL derivative of a smooth f on (interval.lower, interval.upper).
/// Throws NumericalError when the quadrature cannot reach 1e-12 relative
/// accuracy on the fractional integral.
double rl_deriv_numeric(FractionalOrder alpha, const RealFunction& f, const RLInterval& interval);

/// As rl_deriv_numeric, with f given as a function of the offset τ − a.
NumericDerivative rl_deriv_numeric_offset(FractionalOrder alpha, const OffsetFunction& g,
                                          const RLInterval& interval);

/// Right RL derivative on (t, b) with the (−1) sign convention, so that the
/// right derivative of (b−t)^(β−1) is Γ(β)/Γ(β−α)(b−t)^(β−α−1).
/// `g` receives the offset b − τ.
NumericDerivative rl_deriv_numeric_right(FractionalOrder alpha, const OffsetFunction& g, double t,
                                         double b);

} // namespace fracls

#pragma once

#include "fracls/filters.hpp"
#include "fracls/fracderiv.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace fracls {

/// Two critical points; `plus` and `minus` follow the ± of the root formula.
struct RootPair {
    double plus;
    double minus;
};

/// Roots of the one-tap fractional gradient of (d − w x)² with lower terminal 0,
/// constant term kept: (d/2x)((2−α) ± √(α(2−α))). Throws DomainError if x = 0.
RootPair flms1_critical_points(double d, double x, FractionalOrder alpha);

/// Same, with the derivative of the additive constant dropped: {0, (2−α)d/x}.
/// `plus` holds the non-trivial root.
RootPair flms1_critical_points_noconst(double d, double x, FractionalOrder alpha);

/// Short-memory variant with lower terminal w_prev:
/// w_prev + ((d − w_prev x)/2x)((2−α) ± √(α(2−α))).
RootPair flms2_critical_sequence(double w_prev, double d, double x, FractionalOrder alpha);

/// a2 t² + a1 t + c, with lower terminal `lower_limit` for fractional derivatives.
struct ScalarQuadratic {
    double a2;
    double a1;
    double c;
    double lower_limit = 0.0;

    /// Throws DomainError unless a2 > 0.
    ScalarQuadratic(double quad, double lin, double constant, double lower = 0.0);

    double operator()(double t) const noexcept { return (a2 * t + a1) * t + c; }
    double derivative(double t) const noexcept { return 2.0 * a2 * t + a1; }
    double minimizer() const noexcept { return -a1 / (2.0 * a2); }
};

struct CriticalPointReport {
    double ordinary;
    std::array<Complex, 2> fractional_pair; ///< {+, −} roots of the fractional gradient
    /// |left RL derivative| at each root by quadrature. A root at the terminal
    /// gets the one-sided limit when that limit is finite; roots below the
    /// terminal, and complex roots, get NaN.
    std::array<double, 2> residual;
    bool imaginary;
};

/// Critical points of the left RL derivative of q on (q.lower_limit, t).
/// Throws DomainError unless 0 ≤ q.lower_limit < q.minimizer().
CriticalPointReport example_quadratic_critical_points(const ScalarQuadratic& q, FractionalOrder alpha);

/// Left RL derivative (terminal 0) of 2t² − t + c at its minimizer t = 1/4:
/// 4^α/Γ(1−α) · (c − 1/(4(2−α))).
double rl_deriv_at_true_minimum(double c, FractionalOrder alpha);

/// Checks D^α f(t*) ≤ t*^(−α) f(t*)/Γ(1−α) + 1e-6 with the derivative taken by
/// quadrature on (0, t*). Throws DomainError unless t* ∈ (0, 1) and
/// |f′(t*)| < 1e-8.
bool check_refai_bound(const RealFunction& f, double t_star, FractionalOrder alpha);

enum class DescentMode {
    RULE1_STYLE, ///< fixed lower terminal
    RULE2_STYLE, ///< lower terminal t_{n−1}
};

struct DescentOptions {
    DescentMode mode = DescentMode::RULE2_STYLE;
    FractionalOrder alpha{0.9};
    double mu_f = 0.1;
    double t0 = 0.5;
    double t_prev0 = 0.4;
    std::size_t steps = 10000;
    /// Fixed terminal for RULE1_STYLE.
    double lower_limit = 0.0;
    /// Evaluate powers of negative offsets on the principal complex branch
    /// instead of through the modulus. Quadratic objectives only.
    bool raw_branch = false;
};

struct DescentResult {
    std::vector<Complex> iterates; ///< t_0 … t_m
    bool non_finite = false;       ///< stopped early on a non-finite iterate
    std::optional<std::size_t> first_complex_at;

    std::vector<double> real_trajectory() const;
};

/// t_{n+1} = t_n − (μ_f/2)·D^α f(t_n). For t_n below the terminal the
/// reflected form is used: the negated right derivative on (t_n, terminal),
/// which keeps the α = 1 case equal to ordinary gradient descent.
DescentResult fractional_descent_scalar(const ScalarQuadratic& f, const DescentOptions& options);
/// General objective; derivatives by quadrature.
DescentResult fractional_descent_scalar(const RealFunction& f, const DescentOptions& options);

/// t_{n+1} = t_n − (μ/2) f′(t_n).
std::vector<double> ordinary_descent_scalar(const ScalarQuadratic& f, double mu, double t0, std::size_t steps);

/// First n with |t_n − target| < tol.
std::optional<std::size_t> iterations_to_tolerance(const std::vector<double>& trajectory, double target,
                                                   double tol);

} // namespace fracls

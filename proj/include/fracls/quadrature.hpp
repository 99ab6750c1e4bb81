#pragma once

#include <functional>

namespace fracls::quad {

/// Integrand on the unit interval. Receives both the abscissa `eta` and its
/// complement `1 - eta`, each computed without cancellation, so endpoint
/// singularities can be evaluated at distances far below machine epsilon.
using UnitIntegrand = std::function<long double(long double eta, long double one_minus_eta)>;

struct Result {
    long double value = 0.0L;
    long double relative_error = 0.0L; ///< difference between the last two refinement levels
    int levels = 0;
    bool converged = false;
};

struct Options {
    long double relative_tolerance = 1e-18L;
    int max_levels = 12;
};

/// Tanh-sinh (double-exponential) quadrature of ∫₀¹ g(η) dη in extended
/// precision. Integrable algebraic singularities at either endpoint are
/// handled without any knowledge of their exponent.
Result tanh_sinh_unit(const UnitIntegrand& g, Options opts = {});

} // namespace fracls::quad

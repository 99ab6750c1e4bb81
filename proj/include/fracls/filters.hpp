#pragma once

#include "fracls/fracderiv.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fracls {

using Complex = std::complex<double>;

enum class Rule {
    LMS,         ///< w += μ_ℓ e x
    FLMS1_RAW,   ///< rule 1, w^(1−α) on the principal complex branch
    FLMS1_MOD,   ///< rule 1, |w|^(1−α)
    FLMS1_EXACT, ///< rule 1 with the full fractional gradient of e²
    FLMS2_RAW,   ///< rule 2, (w_n − w_{n−1})^(1−α), principal branch
    FLMS2_MOD,   ///< rule 2, |w_n − w_{n−1} + ε|^(1−α)
};

/// How a raw rule forms its output once weights turn complex. Real weights
/// give the same y either way.
enum class OutputForm {
    TRANSPOSE,           ///< y = wᵀx
    CONJUGATE_TRANSPOSE, ///< y = wᴴx
};

std::string_view to_string(Rule rule);
std::string_view to_string(OutputForm form);
/// Throws std::invalid_argument for unknown names.
Rule rule_from_string(std::string_view name);
bool is_fractional(Rule rule);
/// Rules whose weights may leave the real line.
bool is_raw(Rule rule);

/// Immutable description of one adaptive filter. Gamma constants for α are
/// computed once here so the per-step cost stays O(N).
class AlgorithmSpec {
public:
    /// Throws std::invalid_argument when the step sizes or ε violate the
    /// constraints of the rule (see README).
    AlgorithmSpec(Rule rule, FractionalOrder alpha, double mu_l, double mu_f, double epsilon = 0.0,
                  OutputForm output = OutputForm::TRANSPOSE);

    static AlgorithmSpec lms(double mu_l);

    Rule rule() const noexcept { return rule_; }
    FractionalOrder alpha() const noexcept { return alpha_; }
    double mu_l() const noexcept { return mu_l_; }
    double mu_f() const noexcept { return mu_f_; }
    double epsilon() const noexcept { return epsilon_; }
    OutputForm output_form() const noexcept { return output_; }

    double inv_gamma_1() const noexcept { return inv_gamma_1_; } ///< 1/Γ(1−α), zero at α = 1
    double inv_gamma_2() const noexcept { return inv_gamma_2_; } ///< 1/Γ(2−α)
    double inv_gamma_3() const noexcept { return inv_gamma_3_; } ///< 1/Γ(3−α)

private:
    Rule rule_;
    FractionalOrder alpha_;
    double mu_l_;
    double mu_f_;
    double epsilon_;
    OutputForm output_;
    double inv_gamma_1_;
    double inv_gamma_2_;
    double inv_gamma_3_;
};

/// Mutable state of one filter: current and previous weights, the input
/// delay line (newest sample first) and the step counter.
struct FilterState {
    std::vector<Complex> weights;
    std::vector<Complex> prev_weights;
    std::vector<double> regressor;
    std::size_t n = 0;
    std::optional<std::size_t> first_complex_at;

    explicit FilterState(std::size_t taps);
    /// Real initial weights; prev_weights starts equal to them.
    explicit FilterState(std::span<const double> initial_weights);

    std::size_t taps() const noexcept { return weights.size(); }
    bool weights_finite() const noexcept;
    bool weights_real() const noexcept;
    /// Shifts x into the delay line.
    void push_input(double x);
};

struct StepOutcome {
    Complex y;
    Complex e;
    bool complex_flag = false;
    /// max over taps of |u_n(l)|, the fractional part of the increment before
    /// the 1/Γ(2−α) gain (μ_f|e x_{n−l}||P| for rule 1, μ_f|e x_{n−l}||Q| for
    /// rule 2, (μ_f/2)|∂^α e²| for the exact variant, 0 for LMS).
    double fractional_term = 0.0;
};

/// w^p on the principal branch; real non-negative bases stay exactly real.
Complex principal_pow(Complex base, double exponent);

/// True iff any power has a non-zero imaginary part: the fractional
/// derivative was evaluated outside its domain of definition.
bool complex_criterion(std::span<const Complex> powers);

StepOutcome step_lms(FilterState& state, double x, double d, const AlgorithmSpec& spec);
StepOutcome step_flms1(FilterState& state, double x, double d, const AlgorithmSpec& spec, bool use_modulus);
StepOutcome step_flms1_exact(FilterState& state, double x, double d, const AlgorithmSpec& spec);
StepOutcome step_flms2(FilterState& state, double x, double d, const AlgorithmSpec& spec, bool use_modulus);

/// Dispatches on spec.rule().
StepOutcome step(FilterState& state, double x, double d, const AlgorithmSpec& spec);

/// Full fractional derivative of e² with respect to one weight, lower
/// terminal 0, with instantaneous statistics: `residual` is
/// d − Σ_{i≠l} w_i x_{n−i}, `x` is x_{n−l}. Negative weights use the
/// reflected (right-derivative) form so the result tends to ∂e²/∂w as α → 1.
double exact_fractional_gradient(double w, double residual, double x, const AlgorithmSpec& spec);

} // namespace fracls

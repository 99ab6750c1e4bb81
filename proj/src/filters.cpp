#include "fracls/filters.hpp"

#include "fracls/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracls {
namespace {

constexpr std::array<std::pair<Rule, std::string_view>, 6> kRuleNames = {{
    {Rule::LMS, "LMS"},
    {Rule::FLMS1_RAW, "FLMS1_RAW"},
    {Rule::FLMS1_MOD, "FLMS1_MOD"},
    {Rule::FLMS1_EXACT, "FLMS1_EXACT"},
    {Rule::FLMS2_RAW, "FLMS2_RAW"},
    {Rule::FLMS2_MOD, "FLMS2_MOD"},
}};

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_rule(const AlgorithmSpec& spec, std::initializer_list<Rule> allowed, const char* op) {
    if (std::find(allowed.begin(), allowed.end(), spec.rule()) == allowed.end()) {
        throw std::invalid_argument(std::string(op) + " called with rule " + std::string(to_string(spec.rule())));
    }
}

void record_complex(FilterState& state, bool fired) {
    if (fired && !state.first_complex_at) state.first_complex_at = state.n;
}

// y = Σ w_l x_{n−l} over the real parts, accumulated in tap order.
double real_output(const FilterState& s) {
    double y = 0.0;
    for (std::size_t l = 0; l < s.taps(); ++l) y += s.weights[l].real() * s.regressor[l];
    return y;
}

Complex complex_output(const FilterState& s, OutputForm form) {
    Complex y{0.0, 0.0};
    if (form == OutputForm::CONJUGATE_TRANSPOSE) {
        for (std::size_t l = 0; l < s.taps(); ++l) y += std::conj(s.weights[l]) * s.regressor[l];
    } else {
        for (std::size_t l = 0; l < s.taps(); ++l) y += s.weights[l] * s.regressor[l];
    }
    return y;
}

} // namespace

std::string_view to_string(OutputForm form) {
    return form == OutputForm::TRANSPOSE ? "TRANSPOSE" : "CONJUGATE_TRANSPOSE";
}

std::string_view to_string(Rule rule) {
    for (const auto& [r, name] : kRuleNames) {
        if (r == rule) return name;
    }
    return "UNKNOWN";
}

Rule rule_from_string(std::string_view name) {
    for (const auto& [r, n] : kRuleNames) {
        if (n == name) return r;
    }
    throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

bool is_fractional(Rule rule) { return rule != Rule::LMS; }

bool is_raw(Rule rule) { return rule == Rule::FLMS1_RAW || rule == Rule::FLMS2_RAW; }

AlgorithmSpec::AlgorithmSpec(Rule rule, FractionalOrder alpha, double mu_l, double mu_f, double epsilon,
                             OutputForm output)
    : rule_(rule), alpha_(alpha), mu_l_(mu_l), mu_f_(mu_f), epsilon_(epsilon), output_(output) {
    require(mu_l >= 0.0 && mu_f >= 0.0, "step sizes must be non-negative");
    require(epsilon >= 0.0, "bias compensation must be non-negative");
    if (rule == Rule::LMS) require(mu_f == 0.0, "LMS requires mu_f = 0");
    if (rule == Rule::FLMS2_RAW || rule == Rule::FLMS2_MOD) require(mu_l == 0.0, "rule 2 requires mu_l = 0");
    if (rule != Rule::FLMS2_MOD) require(epsilon == 0.0, "epsilon is only defined for FLMS2_MOD");

    const double a = alpha.value();
    inv_gamma_1_ = reciprocal_gamma(1.0 - a);
    inv_gamma_2_ = 1.0 / gamma(2.0 - a);
    inv_gamma_3_ = 1.0 / gamma(3.0 - a);
}

AlgorithmSpec AlgorithmSpec::lms(double mu_l) { return {Rule::LMS, FractionalOrder(1.0), mu_l, 0.0}; }

FilterState::FilterState(std::size_t taps)
    : weights(taps, Complex{0.0, 0.0}), prev_weights(taps, Complex{0.0, 0.0}), regressor(taps, 0.0) {
    if (taps == 0) throw std::invalid_argument("filter needs at least one tap");
}

FilterState::FilterState(std::span<const double> initial_weights) : FilterState(initial_weights.size()) {
    for (std::size_t l = 0; l < initial_weights.size(); ++l) weights[l] = Complex{initial_weights[l], 0.0};
    prev_weights = weights;
}

bool FilterState::weights_finite() const noexcept {
    return std::all_of(weights.begin(), weights.end(),
                       [](Complex w) { return std::isfinite(w.real()) && std::isfinite(w.imag()); });
}

bool FilterState::weights_real() const noexcept {
    return std::all_of(weights.begin(), weights.end(), [](Complex w) { return w.imag() == 0.0; });
}

void FilterState::push_input(double x) {
    std::shift_right(regressor.begin(), regressor.end(), 1);
    regressor.front() = x;
}

Complex principal_pow(Complex base, double exponent) {
    if (base.imag() == 0.0) {
        const double r = base.real();
        if (r >= 0.0 || exponent == 0.0) return {std::pow(r, exponent), 0.0};
        // Negative real axis, approached from above (imag = +0).
        const double mag = std::pow(-r, exponent);
        const double angle = std::numbers::pi * exponent;
        return {mag * std::cos(angle), mag * std::sin(angle)};
    }
    return std::pow(base, exponent);
}

bool complex_criterion(std::span<const Complex> powers) {
    return std::any_of(powers.begin(), powers.end(), [](Complex p) { return std::fabs(p.imag()) > 0.0; });
}

StepOutcome step_lms(FilterState& state, double x, double d, const AlgorithmSpec& spec) {
    require_rule(spec, {Rule::LMS}, "step_lms");
    state.push_input(x);
    const double y = real_output(state);
    const double e = d - y;
    const double gain = spec.mu_l() * e;
    for (std::size_t l = 0; l < state.taps(); ++l) {
        state.weights[l] = Complex{state.weights[l].real() + gain * state.regressor[l], 0.0};
    }
    ++state.n;
    return {y, e, false, 0.0};
}

StepOutcome step_flms1(FilterState& state, double x, double d, const AlgorithmSpec& spec, bool use_modulus) {
    require_rule(spec, {Rule::FLMS1_RAW, Rule::FLMS1_MOD}, "step_flms1");
    state.push_input(x);
    const double exponent = 1.0 - spec.alpha().value();
    const std::size_t taps = state.taps();
    StepOutcome out;

    if (use_modulus) {
        const double y = real_output(state);
        const double e = d - y;
        const double gain = spec.mu_l() * e;
        const double frac_gain = spec.mu_f() * spec.inv_gamma_2() * e;
        for (std::size_t l = 0; l < taps; ++l) {
            const double w = state.weights[l].real();
            const double xl = state.regressor[l];
            const double p = std::pow(std::fabs(w), exponent);
            out.fractional_term = std::max(out.fractional_term, spec.mu_f() * std::fabs(e * xl) * p);
            state.weights[l] = Complex{(w + gain * xl) + frac_gain * xl * p, 0.0};
        }
        out.y = y;
        out.e = e;
    } else {
        const Complex y = complex_output(state, spec.output_form());
        const Complex e = Complex{d, 0.0} - y;
        const Complex gain = spec.mu_l() * e;
        const Complex frac_gain = spec.mu_f() * spec.inv_gamma_2() * e;
        std::vector<Complex> powers(taps);
        for (std::size_t l = 0; l < taps; ++l) powers[l] = principal_pow(state.weights[l], exponent);
        out.complex_flag = complex_criterion(powers);
        for (std::size_t l = 0; l < taps; ++l) {
            const double xl = state.regressor[l];
            out.fractional_term = std::max(out.fractional_term, spec.mu_f() * std::abs(e * xl) * std::abs(powers[l]));
            state.weights[l] = (state.weights[l] + gain * xl) + frac_gain * xl * powers[l];
        }
        out.y = y;
        out.e = e;
    }
    record_complex(state, out.complex_flag);
    ++state.n;
    return out;
}

double exact_fractional_gradient(double w, double residual, double x, const AlgorithmSpec& spec) {
    const double alpha = spec.alpha().value();
    const double mag = std::fabs(w);
    const double sign = w < 0.0 ? -1.0 : 1.0;
    // Ψ = r² (constant in w), linear coefficient −2 r x, quadratic x².
    double grad = -2.0 * x * residual * std::pow(mag, 1.0 - alpha) * spec.inv_gamma_2()
                  + sign * 2.0 * x * x * std::pow(mag, 2.0 - alpha) * spec.inv_gamma_3();
    if (spec.inv_gamma_1() != 0.0) {
        grad += sign * residual * residual * std::pow(mag, -alpha) * spec.inv_gamma_1();
    }
    return grad;
}

StepOutcome step_flms1_exact(FilterState& state, double x, double d, const AlgorithmSpec& spec) {
    require_rule(spec, {Rule::FLMS1_EXACT}, "step_flms1_exact");
    state.push_input(x);
    const std::size_t taps = state.taps();
    const double y = real_output(state);
    const double e = d - y;
    const double gain = spec.mu_l() * e;
    const double half_mu_f = 0.5 * spec.mu_f();

    // All taps see the pre-update weights.
    std::vector<double> next(taps);
    StepOutcome out{y, e, false, 0.0};
    for (std::size_t l = 0; l < taps; ++l) {
        const double w = state.weights[l].real();
        const double xl = state.regressor[l];
        const double residual = e + w * xl; // d − Σ_{i≠l} w_i x_{n−i}
        next[l] = w + gain * xl;
        // The gradient is singular at w = 0 for α < 1; with μ_f = 0 the term is absent.
        if (half_mu_f == 0.0) continue;
        const double grad = exact_fractional_gradient(w, residual, xl, spec);
        out.fractional_term = std::max(out.fractional_term, half_mu_f * std::fabs(grad));
        next[l] -= half_mu_f * grad;
    }
    for (std::size_t l = 0; l < taps; ++l) state.weights[l] = Complex{next[l], 0.0};
    ++state.n;
    return out;
}

StepOutcome step_flms2(FilterState& state, double x, double d, const AlgorithmSpec& spec, bool use_modulus) {
    require_rule(spec, {Rule::FLMS2_RAW, Rule::FLMS2_MOD}, "step_flms2");
    state.push_input(x);
    const double exponent = 1.0 - spec.alpha().value();
    const std::size_t taps = state.taps();
    StepOutcome out;

    if (use_modulus) {
        const double y = real_output(state);
        const double e = d - y;
        const double frac_gain = spec.mu_f() * spec.inv_gamma_2() * e;
        for (std::size_t l = 0; l < taps; ++l) {
            const double w = state.weights[l].real();
            const double xl = state.regressor[l];
            const double q = std::pow(std::fabs(w - state.prev_weights[l].real() + spec.epsilon()), exponent);
            out.fractional_term = std::max(out.fractional_term, spec.mu_f() * std::fabs(e * xl) * q);
            state.prev_weights[l] = state.weights[l];
            state.weights[l] = Complex{w + frac_gain * xl * q, 0.0};
        }
        out.y = y;
        out.e = e;
    } else {
        const Complex y = complex_output(state, spec.output_form());
        const Complex e = Complex{d, 0.0} - y;
        const Complex frac_gain = spec.mu_f() * spec.inv_gamma_2() * e;
        std::vector<Complex> powers(taps);
        for (std::size_t l = 0; l < taps; ++l) {
            powers[l] = principal_pow(state.weights[l] - state.prev_weights[l], exponent);
        }
        out.complex_flag = complex_criterion(powers);
        for (std::size_t l = 0; l < taps; ++l) {
            const double xl = state.regressor[l];
            out.fractional_term = std::max(out.fractional_term, spec.mu_f() * std::abs(e * xl) * std::abs(powers[l]));
            state.prev_weights[l] = state.weights[l];
            state.weights[l] += frac_gain * xl * powers[l];
        }
        out.y = y;
        out.e = e;
    }
    record_complex(state, out.complex_flag);
    ++state.n;
    return out;
}

StepOutcome step(FilterState& state, double x, double d, const AlgorithmSpec& spec) {
    switch (spec.rule()) {
    case Rule::LMS: return step_lms(state, x, d, spec);
    case Rule::FLMS1_RAW: return step_flms1(state, x, d, spec, false);
    case Rule::FLMS1_MOD: return step_flms1(state, x, d, spec, true);
    case Rule::FLMS1_EXACT: return step_flms1_exact(state, x, d, spec);
    case Rule::FLMS2_RAW: return step_flms2(state, x, d, spec, false);
    case Rule::FLMS2_MOD: return step_flms2(state, x, d, spec, true);
    }
    throw std::invalid_argument("unknown rule");
}

} // namespace fracls

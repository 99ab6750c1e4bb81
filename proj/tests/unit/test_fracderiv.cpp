#include <doctest.h>

#include "fracls/errors.hpp"
#include "fracls/fracderiv.hpp"
#include "fracls/special.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fracls;

namespace {
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);
const double kGamma2OverGamma15 = 2.0 * kInvSqrtPi; // Γ(2)/Γ(1.5)

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }
} // namespace

TEST_CASE("FractionalOrder and interval validation") {
    CHECK_NOTHROW(FractionalOrder(1.0));
    CHECK_THROWS_AS(FractionalOrder(0.0), DomainError);
    CHECK_THROWS_AS(FractionalOrder(1.5), DomainError);
    CHECK_THROWS_AS(RLInterval(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(PowerFunction(0.0, 0.0), DomainError);
}

TEST_CASE("left power rule examples") {
    const FractionalOrder half(0.5);
    CHECK(rl_deriv_power_left(half, {0.0, 2.0}, 1.0) == doctest::Approx(kGamma2OverGamma15).epsilon(1e-14));
    CHECK(rl_deriv_power_left(half, {0.0, 1.0}, 1.0) == doctest::Approx(kInvSqrtPi).epsilon(1e-14));
    // f(t) = t², α → 1: derivative 2t = 4 at t = 2.
    CHECK(std::fabs(rl_deriv_power_left(FractionalOrder(0.999999), {0.0, 3.0}, 2.0) - 4.0) < 1e-4);
    CHECK_THROWS_AS(rl_deriv_power_left(half, {0.0, 2.0}, 0.0), DomainError);
    CHECK_THROWS_AS(rl_deriv_power_left(half, {1.0, 2.0}, 0.5), DomainError);
}

TEST_CASE("right power rule examples") {
    const FractionalOrder half(0.5);
    CHECK(rl_deriv_power_right(half, {0.0, 2.0}, -1.0, 0.0) == doctest::Approx(kGamma2OverGamma15).epsilon(1e-14));
    CHECK(rl_deriv_power_right(FractionalOrder(1.0), {0.0, 2.0}, -3.0, 0.0) == 1.0);
    CHECK(rl_deriv_power_right(half, {1.0, 1.0}, 0.0, 1.0) == doctest::Approx(kInvSqrtPi).epsilon(1e-14));
    CHECK_THROWS_AS(rl_deriv_power_right(half, {0.0, 2.0}, 0.0, 0.0), DomainError);
}

TEST_CASE("numeric oracle examples") {
    const FractionalOrder half(0.5);
    CHECK(rel(rl_deriv_numeric(half, [](double t) { return t; }, {0.0, 1.0}), kGamma2OverGamma15) < 1e-6);
    CHECK(rel(rl_deriv_numeric(half, [](double) { return 1.0; }, {0.0, 4.0}), 0.5 * kInvSqrtPi) < 1e-6);
    const double near_one =
        rl_deriv_numeric(FractionalOrder(0.999999), [](double t) { return 2 * t * t - t; }, {0.0, 1.0});
    CHECK(std::fabs(near_one - 3.0) < 1e-3);
    const double exact_one =
        rl_deriv_numeric(FractionalOrder(1.0), [](double t) { return 2 * t * t - t; }, {0.0, 1.0});
    CHECK(std::fabs(exact_one - 3.0) < 1e-8);
}

TEST_CASE("numeric right derivative matches the right power rule") {
    const FractionalOrder half(0.5);
    // f(τ) = b − τ with b = 0: offsets r = b − τ give f = r.
    auto r = rl_deriv_numeric_right(half, [](long double off) { return off; }, -1.0, 0.0);
    CHECK(rel(r.value, kGamma2OverGamma15) < 1e-6);
    auto c = rl_deriv_numeric_right(half, [](long double) { return 1.0L; }, 0.0, 1.0);
    CHECK(rel(c.value, kInvSqrtPi) < 1e-6);
}

TEST_CASE("oracle agrees with the power rule for random parameters") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> a_dist(-3.0, 3.0), beta_dist(0.0, 3.0),
        alpha_dist(0.05, 0.95), len_dist(0.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = a_dist(rng);
        double beta = beta_dist(rng);
        if (beta == 0.0) beta = 3.0;
        const double alpha = alpha_dist(rng);
        const double t = a + std::max(len_dist(rng), 1e-3);
        const FractionalOrder order(alpha);
        const double closed = rl_deriv_power_left(order, {a, beta}, t);
        const auto numeric = rl_deriv_numeric_offset(
            order, [beta](long double s) { return std::pow(s, static_cast<long double>(beta) - 1.0L); },
            {a, t});
        worst = std::max(worst, rel(numeric.value, closed));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("integer-order limit of the power rule") {
    const FractionalOrder order(1.0 - 1e-6);
    for (int k = 1; k <= 3; ++k) {
        for (double t : {0.3, 1.0, 2.7}) {
            const double frac = rl_deriv_power_left(order, {0.0, k + 1.0}, t);
            const double ordinary = k * std::pow(t, k - 1);
            CHECK(rel(frac, ordinary) < 1e-4);
        }
    }
    // α = 1 is exact, not a limit.
    CHECK(rl_deriv_power_left(FractionalOrder(1.0), {0.0, 3.0}, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(rl_deriv_power_left(FractionalOrder(1.0), {0.0, 1.0}, 2.0) == 0.0);
}

TEST_CASE("oracle is linear") {
    const FractionalOrder order(0.37);
    const RLInterval iv(0.2, 1.9);
    auto f = [](double t) { return t * t * t - 2.0 * t; };
    auto g = [](double t) { return std::exp(0.5 * t); };
    const double c1 = 1.7, c2 = -0.4;
    const double combined = rl_deriv_numeric(order, [&](double t) { return c1 * f(t) + c2 * g(t); }, iv);
    const double separate = c1 * rl_deriv_numeric(order, f, iv) + c2 * rl_deriv_numeric(order, g, iv);
    CHECK(rel(combined, separate) < 1e-8);
}

TEST_CASE("derivative of a non-zero constant is non-zero") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha_dist(1e-3, 1.0 - 1e-3), t_dist(1e-3, 10.0);
    for (int i = 0; i < 100; ++i) {
        const FractionalOrder order(alpha_dist(rng));
        const double t = t_dist(rng);
        CHECK(rl_deriv_power_left(order, {0.0, 1.0, 2.5}, t) != 0.0);
        CHECK(rl_deriv_power_right(order, {t + 1.0, 1.0, -0.5}, t, t + 1.0) != 0.0);
    }
}

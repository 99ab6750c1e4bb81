#include "fracls/special.hpp"

#include "fracls/errors.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

namespace fracls {
namespace {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeff = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5,
};

std::atomic<bool> g_fault{false};

// Γ(z) for z >= 1.
double lanczos_gamma(double z) {
    const double x = z - 1.0;
    double sum = kLanczosCoeff[0];
    for (std::size_t k = 1; k < kLanczosCoeff.size(); ++k) {
        double c = kLanczosCoeff[k];
        if (k == 1 && g_fault.load(std::memory_order_relaxed)) c *= 1.0 + 1e-6;
        sum += c / (x + static_cast<double>(k));
    }
    const double t = x + kLanczosG + 0.5;
    // t^(x+0.5) split in two halves keeps the product finite up to z = 171.
    const double half_pow = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * sum;
}

} // namespace

double gamma(double z) {
    if (!(z > 0.0)) {
        throw DomainError("gamma: argument must be positive, got " + std::to_string(z));
    }
    if (z < 1.0) return lanczos_gamma(z + 1.0) / z;
    // Exact factorials for small integers.
    if (z <= 21.0 && z == std::floor(z)) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(z); ++k) f *= k;
        if (!g_fault.load(std::memory_order_relaxed)) return f;
    }
    return lanczos_gamma(z);
}

double reciprocal_gamma(double z) {
    if (!(z > -1.0)) {
        throw DomainError("reciprocal_gamma: argument must exceed -1, got " + std::to_string(z));
    }
    if (z == 0.0) return 0.0;
    if (z < 0.0) return z / gamma(z + 1.0);
    return 1.0 / gamma(z);
}

namespace testing {
void inject_gamma_fault(bool enabled) { g_fault.store(enabled, std::memory_order_relaxed); }
} // namespace testing

} // namespace fracls

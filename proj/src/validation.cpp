#include "fracls/validation.hpp"

#include "fracls/critpoints.hpp"
#include "fracls/filters.hpp"
#include "fracls/fracderiv.hpp"
#include "fracls/harness.hpp"
#include "fracls/results_io.hpp"
#include "fracls/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace fracls {
namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// Runs a check, turning exceptions into failures.
PropertyResult guarded(const std::string& name, const std::function<PropertyResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

PropertyResult gamma_recurrence(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 19.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double z = u(rng);
        const double next = gamma(z + 1.0);
        worst = std::max(worst, std::fabs(next - z * gamma(z)) / next);
    }
    return {"gamma recurrence", worst <= 1e-12, "max relative error " + sci(worst)};
}

PropertyResult power_rule_oracle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.05, 0.95), ub(0.05, 3.0), ushift(-3.0, 3.0), ulen(1e-2, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const FractionalOrder alpha(ua(rng));
        const double beta = ub(rng), a = ushift(rng), len = ulen(rng);
        const PowerFunction p(a, beta);
        const double closed = rl_deriv_power_left(alpha, p, a + len);
        const auto g = [beta](long double s) { return std::pow(s, static_cast<long double>(beta) - 1.0L); };
        const double numeric = rl_deriv_numeric_offset(alpha, g, RLInterval(a, a + len)).value;
        worst = std::max(worst, std::fabs(numeric - closed) / std::max(std::fabs(closed), 1e-300));
    }
    return {"power rule vs quadrature", worst <= 1e-5, "max relative error " + sci(worst)};
}

PropertyResult integer_limit() {
    const FractionalOrder alpha(1.0 - 1e-6);
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const double t = 1.7;
        const double got = rl_deriv_power_left(alpha, PowerFunction(0.0, k + 1.0), t);
        const double want = k * std::pow(t, k - 1);
        worst = std::max(worst, std::fabs(got - want) / want);
    }
    return {"integer-order limit", worst <= 1e-4, "max relative error " + sci(worst)};
}

struct Stream {
    std::vector<double> x;
    std::vector<double> d;
};

Stream identification_stream(std::mt19937_64& rng, std::size_t n, const std::vector<double>& w_true, double noise) {
    std::normal_distribution<double> n01;
    Stream s;
    s.x.resize(n);
    s.d.resize(n);
    for (auto& v : s.x) v = n01(rng);
    for (std::size_t i = 0; i < n; ++i) {
        double d = noise * n01(rng);
        for (std::size_t l = 0; l < w_true.size() && l <= i; ++l) d += w_true[l] * s.x[i - l];
        s.d[i] = d;
    }
    return s;
}

PropertyResult reduction_zero_fractional_step(std::mt19937_64& rng) {
    const auto s = identification_stream(rng, 2000, {1.0, -2.0, 0.5}, 0.1);
    bool same = true;
    for (Rule rule : {Rule::FLMS1_RAW, Rule::FLMS1_MOD, Rule::FLMS1_EXACT}) {
        for (double a : {0.3, 0.7}) {
            FilterState ref(3), frac(3);
            const AlgorithmSpec lms = AlgorithmSpec::lms(0.01);
            const AlgorithmSpec spec(rule, FractionalOrder(a), 0.01, 0.0);
            for (std::size_t i = 0; i < s.x.size() && same; ++i) {
                step(ref, s.x[i], s.d[i], lms);
                step(frac, s.x[i], s.d[i], spec);
                same = ref.weights == frac.weights;
            }
        }
    }
    return {"reduction: mu_f = 0 equals LMS", same, same ? "bit-identical" : "trajectories differ"};
}

PropertyResult reduction_unit_order(std::mt19937_64& rng) {
    const auto s = identification_stream(rng, 2000, {1.0, -2.0, 0.5}, 0.1);
    FilterState ref(3), frac(3);
    const AlgorithmSpec lms = AlgorithmSpec::lms(0.03);
    const AlgorithmSpec spec(Rule::FLMS1_MOD, FractionalOrder(1.0), 0.01, 0.02);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        step(ref, s.x[i], s.d[i], lms);
        step(frac, s.x[i], s.d[i], spec);
        for (std::size_t l = 0; l < 3; ++l) worst = std::max(worst, std::abs(ref.weights[l] - frac.weights[l]));
    }
    return {"reduction: alpha = 1 equals LMS", worst <= 1e-12, "max weight difference " + sci(worst)};
}

PropertyResult modulus_realness(std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    bool real = true;
    for (int trial = 0; trial < 10 && real; ++trial) {
        const FractionalOrder alpha(0.1 + 0.08 * trial);
        for (const AlgorithmSpec& spec : {AlgorithmSpec(Rule::FLMS1_MOD, alpha, 0.05, 0.05),
                                          AlgorithmSpec(Rule::FLMS2_MOD, alpha, 0.0, 0.05, 1e-10)}) {
            std::vector<double> w0(4);
            for (auto& w : w0) w = 3.0 * n01(rng);
            FilterState s(w0);
            for (int i = 0; i < 300; ++i) {
                const double sign = i % 2 == 0 ? 1.0 : -1.0;
                step(s, sign * 4.0 * n01(rng), -sign * 4.0 * n01(rng), spec);
                real = real && s.weights_real();
            }
        }
    }
    return {"modulus rules stay real", real, real ? "all imaginary parts zero" : "complex weight found"};
}

PropertyResult critical_point_residuals(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ud(-3.0, 3.0), ux(0.1, 3.0), ua(0.01, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double d = ud(rng), x = ux(rng), alpha = ua(rng), w_prev = ud(rng);
        const RootPair r = flms2_critical_sequence(w_prev, d, x, FractionalOrder(alpha));
        const double phi = d - w_prev * x;
        for (double w : {r.plus, r.minus}) {
            const double u = w - w_prev;
            const double v = 2 * x * x * u * u - 2 * (2 - alpha) * phi * x * u + (2 - alpha) * (1 - alpha) * phi * phi;
            worst = std::max(worst, std::fabs(v) / (2 * x * x));
        }
    }
    return {"critical-point residuals", worst < 1e-10, "max residual " + sci(worst)};
}

PropertyResult minimum_bound(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> um(0.05, 0.95), ua2(0.1, 10.0), uc(-2.0, 2.0), ua(0.05, 0.95);
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
        const double m = um(rng), a2 = ua2(rng), c = uc(rng);
        const ScalarQuadratic q(a2, -2 * a2 * m, c);
        failures += !check_refai_bound([q](double t) { return q(t); }, m, FractionalOrder(ua(rng)));
    }
    return {"fractional derivative bound at minimizers", failures == 0, std::to_string(failures) + " of 100 violated"};
}

PropertyResult true_minimum_closed_form() {
    const ScalarQuadratic q(2, -1, 0);
    double worst = 0.0;
    for (double alpha : {0.2, 0.5, 0.8}) {
        const double closed = rl_deriv_at_true_minimum(0.0, FractionalOrder(alpha));
        const double numeric =
            rl_deriv_numeric(FractionalOrder(alpha), [q](double t) { return q(t); }, RLInterval(0.0, 0.25));
        worst = std::max(worst, std::fabs(closed - numeric));
    }
    return {"derivative at the true minimizer", worst < 1e-6, "max difference " + sci(worst)};
}

PropertyResult noise_calibration(std::mt19937_64& rng) {
    NoiseSource noise(2.0, 10.0);
    const int n = 1'000'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = noise(rng);
        sum += v;
        sq += v * v;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    const double rel = std::fabs(var / noise.variance() - 1.0);
    return {"noise calibration", rel < 0.01, "relative variance error " + sci(rel)};
}

PropertyResult worker_determinism(std::uint64_t seed) {
    auto cfg = standard_protocol(ProtocolId::III)[0];
    cfg.rounds = 6;
    cfg.iterations = 100;
    cfg.master_seed = seed;
    const std::string reference = results_csv(run_experiment_serial(cfg));
    bool same = true;
    for (int workers : {1, 2, 4}) {
        cfg.workers = workers;
        same = same && results_csv(run_experiment(cfg)) == reference;
    }
    return {"determinism across worker counts", same, same ? "byte-identical" : "outputs differ"};
}

} // namespace

std::vector<PropertyResult> run_validation_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    out.push_back(guarded("gamma recurrence", [&] { return gamma_recurrence(rng); }));
    out.push_back(guarded("power rule vs quadrature", [&] { return power_rule_oracle(rng); }));
    out.push_back(guarded("integer-order limit", [&] { return integer_limit(); }));
    out.push_back(guarded("reduction: mu_f = 0 equals LMS", [&] { return reduction_zero_fractional_step(rng); }));
    out.push_back(guarded("reduction: alpha = 1 equals LMS", [&] { return reduction_unit_order(rng); }));
    out.push_back(guarded("modulus rules stay real", [&] { return modulus_realness(rng); }));
    out.push_back(guarded("critical-point residuals", [&] { return critical_point_residuals(rng); }));
    out.push_back(guarded("fractional derivative bound at minimizers", [&] { return minimum_bound(rng); }));
    out.push_back(guarded("derivative at the true minimizer", [&] { return true_minimum_closed_form(); }));
    out.push_back(guarded("noise calibration", [&] { return noise_calibration(rng); }));
    out.push_back(guarded("determinism across worker counts", [&] { return worker_determinism(seed); }));
    return out;
}

} // namespace fracls

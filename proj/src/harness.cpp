#include "fracls/harness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef FRACLS_HAVE_OPENMP
#include <omp.h>
#endif

namespace fracls {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return std::mt19937_64(seq);
}

struct Environment {
    std::vector<double> weights_true;
    std::vector<double> x;
    std::vector<double> d;
};

Environment make_environment(const ExperimentConfig& config, std::size_t round) {
    auto rng = make_engine(environment_seed(config.master_seed, round));
    std::normal_distribution<double> n01;
    Environment env;
    if (config.system.kind == SystemKind::RANDOM_GAUSSIAN) {
        env.weights_true.resize(config.system.length);
        for (auto& w : env.weights_true) w = n01(rng);
    } else {
        env.weights_true = config.system.weights_true;
    }
    const std::size_t n_taps = env.weights_true.size();
    env.x.resize(config.iterations);
    for (auto& v : env.x) v = n01(rng);

    env.d.assign(config.iterations, 0.0);
    double power = 0.0;
    for (std::size_t n = 0; n < config.iterations; ++n) {
        double d = 0.0;
        for (std::size_t l = 0; l < n_taps && l <= n; ++l) d += env.weights_true[l] * env.x[n - l];
        env.d[n] = d;
        power += d * d;
    }
    power /= static_cast<double>(config.iterations);
    if (config.snr_db && power > 0.0) {
        NoiseSource noise(power, *config.snr_db);
        for (auto& d : env.d) d += noise(rng);
    }
    return env;
}

struct Curve {
    const AlgorithmTemplate* algorithm;
    FractionalOrder alpha;
};

std::vector<Curve> expand_curves(const ExperimentConfig& config) {
    std::vector<Curve> curves;
    for (const auto& a : config.algorithms) {
        if (a.rule == Rule::LMS) {
            curves.push_back({&a, FractionalOrder(1.0)});
        } else {
            for (auto alpha : config.alphas) curves.push_back({&a, alpha});
        }
    }
    return curves;
}

LearningCurve reduce(const ExperimentConfig& config, const Curve& curve, const std::vector<RoundTrace>& traces) {
    LearningCurve out;
    out.protocol = config.label;
    out.rule = curve.algorithm->rule;
    out.alpha = curve.alpha.value();
    out.mu_l = curve.algorithm->mu_l;
    out.mu_f = curve.algorithm->mu_f;
    out.epsilon = curve.algorithm->epsilon;
    out.init = curve.algorithm->init.value_or(config.init);
    out.md.assign(config.iterations, 0.0);
    std::size_t fired = 0;
    std::size_t diverged = 0;
    for (const auto& t : traces) {
        for (std::size_t n = 0; n < config.iterations; ++n) out.md[n] += t.md[n];
        fired += t.complex_fired;
        diverged += t.diverged;
    }
    const double rounds = static_cast<double>(traces.size());
    for (auto& v : out.md) v /= rounds;
    out.complex_fire_rate = static_cast<double>(fired) / rounds;
    out.diverged_rate = static_cast<double>(diverged) / rounds;
    return out;
}

std::vector<LearningCurve> run(const ExperimentConfig& config, bool parallel) {
    config.validate();
    std::vector<LearningCurve> curves;
    for (const auto& curve : expand_curves(config)) {
        std::vector<RoundTrace> traces(config.rounds);
        const auto rounds = static_cast<std::int64_t>(config.rounds);
        if (parallel) {
#ifdef FRACLS_HAVE_OPENMP
            const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
            for (std::int64_t r = 0; r < rounds; ++r) {
                traces[r] = run_round(config, *curve.algorithm, curve.alpha, static_cast<std::size_t>(r));
            }
#else
            for (std::int64_t r = 0; r < rounds; ++r) {
                traces[r] = run_round(config, *curve.algorithm, curve.alpha, static_cast<std::size_t>(r));
            }
#endif
        } else {
            for (std::int64_t r = 0; r < rounds; ++r) {
                traces[r] = run_round(config, *curve.algorithm, curve.alpha, static_cast<std::size_t>(r));
            }
        }
        curves.push_back(reduce(config, curve, traces));
    }
    return curves;
}

std::string normalized(std::string_view name) {
    std::string s;
    for (char c : name) s.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return s;
}

} // namespace

std::string_view to_string(SystemKind kind) {
    switch (kind) {
    case SystemKind::NEGATIVE_RAMP: return "NEGATIVE_RAMP";
    case SystemKind::POSITIVE_RAMP: return "POSITIVE_RAMP";
    case SystemKind::RANDOM_GAUSSIAN: return "RANDOM_GAUSSIAN";
    }
    return "UNKNOWN";
}

std::string_view to_string(InitMode mode) { return mode == InitMode::ZEROS ? "ZEROS" : "GAUSSIAN"; }

std::string_view to_string(PrevInit mode) { return mode == PrevInit::CURRENT ? "CURRENT" : "ZEROS"; }

SystemSpec SystemSpec::negative_ramp() {
    SystemSpec s{SystemKind::NEGATIVE_RAMP, 15, std::vector<double>(15)};
    std::iota(s.weights_true.begin(), s.weights_true.end(), -15.0);
    return s;
}

SystemSpec SystemSpec::positive_ramp() {
    SystemSpec s{SystemKind::POSITIVE_RAMP, 15, std::vector<double>(15)};
    std::iota(s.weights_true.begin(), s.weights_true.end(), 1.0);
    return s;
}

SystemSpec SystemSpec::random_gaussian(std::size_t length) { return {SystemKind::RANDOM_GAUSSIAN, length, {}}; }

AlgorithmSpec AlgorithmTemplate::instantiate(FractionalOrder alpha) const {
    return {rule, rule == Rule::LMS ? FractionalOrder(1.0) : alpha, mu_l, mu_f, epsilon, output};
}

void ExperimentConfig::validate() const {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (algorithms.empty()) throw std::invalid_argument("no algorithms configured");
    if (system.length < 1) throw std::invalid_argument("system needs at least one tap");
    if (system.kind != SystemKind::RANDOM_GAUSSIAN && system.weights_true.size() != system.length) {
        throw std::invalid_argument("system weights do not match its length");
    }
    if (snr_db && !std::isfinite(*snr_db)) throw std::invalid_argument("snr must be finite");
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
            if (algorithms[i].rule == algorithms[j].rule) {
                throw std::invalid_argument("rule " + std::string(to_string(algorithms[i].rule)) + " listed twice");
            }
        }
        const bool fractional = is_fractional(algorithms[i].rule);
        if (fractional && alphas.empty()) throw std::invalid_argument("fractional rule without alphas");
        // constructing each spec runs the step-size checks
        algorithms[i].instantiate(fractional ? alphas.front() : FractionalOrder(1.0));
    }
}

std::string_view to_string(ProtocolId id) {
    switch (id) {
    case ProtocolId::I: return "I";
    case ProtocolId::II: return "II";
    case ProtocolId::III: return "III";
    case ProtocolId::III_EPS: return "III_EPS";
    }
    return "UNKNOWN";
}

ProtocolId protocol_from_string(std::string_view name) {
    const std::string s = normalized(name);
    for (auto id : {ProtocolId::I, ProtocolId::II, ProtocolId::III, ProtocolId::III_EPS}) {
        if (s == to_string(id)) return id;
    }
    throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::vector<ExperimentConfig> standard_protocol(ProtocolId id) {
    ExperimentConfig base;
    for (double a : {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}) base.alphas.emplace_back(a);
    base.iterations = 1000;
    base.rounds = 100;
    const AlgorithmTemplate lms{Rule::LMS, 1e-2, 0.0, 0.0, std::nullopt, OutputForm::TRANSPOSE};

    switch (id) {
    case ProtocolId::I:
    case ProtocolId::II: {
        base.system = id == ProtocolId::I ? SystemSpec::negative_ramp() : SystemSpec::positive_ramp();
        base.algorithms = {lms, {Rule::FLMS1_RAW, 5e-3, 5e-3, 0.0, std::nullopt, OutputForm::TRANSPOSE}};
        ExperimentConfig clean = base;
        clean.label = std::string(to_string(id)) + "_CLEAN";
        ExperimentConfig noisy = base;
        noisy.label = std::string(to_string(id)) + "_SNR10";
        noisy.snr_db = 10.0;
        return {clean, noisy};
    }
    case ProtocolId::III:
    case ProtocolId::III_EPS: {
        base.system = SystemSpec::random_gaussian(30);
        base.snr_db = 10.0;
        base.label = std::string(to_string(id));
        const double eps = id == ProtocolId::III_EPS ? 1e-10 : 0.0;
        const AlgorithmTemplate rule2{Rule::FLMS2_MOD, 0.0, 1e-2, eps, InitMode::GAUSSIAN, OutputForm::TRANSPOSE};
        if (id == ProtocolId::III) {
            base.algorithms = {lms, {Rule::FLMS1_MOD, 5e-3, 5e-3, 0.0, std::nullopt, OutputForm::TRANSPOSE}, rule2};
        } else {
            base.algorithms = {lms, rule2};
        }
        return {base};
    }
    }
    throw std::invalid_argument("unknown protocol");
}

double mean_deviation(std::span<const double> w_true, std::span<const Complex> w_hat) {
    if (w_true.empty() || w_true.size() != w_hat.size()) {
        throw std::invalid_argument("mean deviation needs equal, non-empty lengths");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < w_true.size(); ++l) sum += std::abs(Complex{w_true[l], 0.0} - w_hat[l]);
    return sum / static_cast<double>(w_true.size());
}

double noise_variance(double signal_power, double snr_db) {
    if (!(signal_power > 0.0)) throw std::invalid_argument("signal power must be positive");
    return signal_power * std::pow(10.0, -snr_db / 10.0);
}

NoiseSource::NoiseSource(double signal_power, double snr_db)
    : variance_(noise_variance(signal_power, snr_db)), dist_(0.0, std::sqrt(variance_)) {}

std::uint64_t environment_seed(std::uint64_t master_seed, std::size_t round) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(round + 1));
}

std::uint64_t init_seed(std::uint64_t master_seed, Rule rule, FractionalOrder alpha, std::size_t round) {
    std::uint64_t h = splitmix64(master_seed ^ 0x5bd1e995ULL);
    h = splitmix64(h ^ fnv1a(to_string(rule)));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(alpha.value()));
    return splitmix64(h ^ round);
}

RoundTrace run_round(const ExperimentConfig& config, const AlgorithmTemplate& algorithm, FractionalOrder alpha,
                     std::size_t round_index) {
    const AlgorithmSpec spec = algorithm.instantiate(alpha);
    const Environment env = make_environment(config, round_index);
    const std::size_t taps = env.weights_true.size();

    std::vector<double> w0(taps, 0.0);
    if (algorithm.init.value_or(config.init) == InitMode::GAUSSIAN) {
        auto rng = make_engine(init_seed(config.master_seed, spec.rule(), spec.alpha(), round_index));
        std::normal_distribution<double> n01;
        for (auto& w : w0) w = n01(rng);
    }
    FilterState state(w0);
    if (config.prev_init == PrevInit::ZEROS) std::fill(state.prev_weights.begin(), state.prev_weights.end(), Complex{});

    RoundTrace trace;
    trace.weights_true = env.weights_true;
    trace.md.reserve(config.iterations);
    if (config.record_fractional_term) trace.fractional_term.reserve(config.iterations);
    double last_md = mean_deviation(env.weights_true, state.weights);

    for (std::size_t n = 0; n < config.iterations; ++n) {
        if (!trace.diverged) {
            const StepOutcome out = step(state, env.x[n], env.d[n], spec);
            if (out.complex_flag && !trace.complex_fired) {
                trace.complex_fired = true;
                trace.first_complex_at = n;
            }
            if (config.record_fractional_term) trace.fractional_term.push_back(out.fractional_term);
            const double md = state.weights_finite() ? mean_deviation(env.weights_true, state.weights) : NAN;
            if (std::isfinite(md)) {
                last_md = md;
            } else {
                trace.diverged = true;
                trace.diverged_at = n;
            }
        } else if (config.record_fractional_term) {
            trace.fractional_term.push_back(NAN);
        }
        trace.md.push_back(last_md);
    }
    trace.final_weights = state.weights;
    return trace;
}

std::vector<LearningCurve> run_experiment(const ExperimentConfig& config) { return run(config, true); }

std::vector<LearningCurve> run_experiment_serial(const ExperimentConfig& config) { return run(config, false); }

} // namespace fracls

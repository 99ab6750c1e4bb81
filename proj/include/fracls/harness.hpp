#pragma once

#include "fracls/filters.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fracls {

enum class SystemKind { NEGATIVE_RAMP, POSITIVE_RAMP, RANDOM_GAUSSIAN };

std::string_view to_string(SystemKind kind);

/// The unknown FIR system. Ramps carry their weights; RANDOM_GAUSSIAN draws
/// a fresh N(0,1) vector of `length` taps every round.
struct SystemSpec {
    SystemKind kind;
    std::size_t length;
    std::vector<double> weights_true;

    static SystemSpec negative_ramp(); ///< [−15, …, −1]
    static SystemSpec positive_ramp(); ///< [1, …, 15]
    static SystemSpec random_gaussian(std::size_t length = 30);
};

enum class InitMode { ZEROS, GAUSSIAN };
/// Initial value of w_{−1} for rule 2.
enum class PrevInit {
    CURRENT, ///< w_{−1} = w_0
    ZEROS,   ///< w_{−1} = 0
};

std::string_view to_string(InitMode mode);
std::string_view to_string(PrevInit mode);

/// An algorithm with its step sizes; fractional rules are expanded over the
/// configured α list, LMS runs once.
struct AlgorithmTemplate {
    Rule rule;
    double mu_l = 0.0;
    double mu_f = 0.0;
    double epsilon = 0.0;
    std::optional<InitMode> init; ///< overrides ExperimentConfig::init
    OutputForm output = OutputForm::TRANSPOSE;

    AlgorithmSpec instantiate(FractionalOrder alpha) const;
};

struct ExperimentConfig {
    std::string label;
    SystemSpec system;
    std::vector<AlgorithmTemplate> algorithms;
    std::vector<FractionalOrder> alphas;
    std::optional<double> snr_db; ///< absent: noise-free
    std::size_t iterations = 1000;
    std::size_t rounds = 100;
    std::uint64_t master_seed = 42;
    InitMode init = InitMode::ZEROS;
    PrevInit prev_init = PrevInit::CURRENT;
    /// 0 lets OpenMP choose.
    int workers = 0;
    /// Keep the per-step max_l |u_n(l)| in each round trace.
    bool record_fractional_term = false;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

enum class ProtocolId { I, II, III, III_EPS };

std::string_view to_string(ProtocolId id);
/// Accepts "I", "ii", "III_EPS", "iii-eps", … (case-insensitive, '-' or '_').
ProtocolId protocol_from_string(std::string_view name);

/// The standard configurations at desk scale (rounds = 100). Protocols I
/// and II return a noise-free and an SNR = 10 dB variant.
std::vector<ExperimentConfig> standard_protocol(ProtocolId id);

/// (1/N) Σ |w_true(l) − w_hat(l)|. Throws std::invalid_argument on a length
/// mismatch or empty input.
double mean_deviation(std::span<const double> w_true, std::span<const Complex> w_hat);

/// Zero-mean Gaussian noise with variance signal_power · 10^(−snr_db/10).
class NoiseSource {
public:
    /// Throws std::invalid_argument unless signal_power > 0.
    NoiseSource(double signal_power, double snr_db);
    double variance() const noexcept { return variance_; }
    double operator()(std::mt19937_64& rng) { return dist_(rng); }

private:
    double variance_;
    std::normal_distribution<double> dist_;
};

double noise_variance(double signal_power, double snr_db);

/// Seeds. The environment (w*, x, noise) depends only on (master, round) so
/// every algorithm in a configuration sees the same data; the initial weights
/// depend on (master, rule, α, round).
std::uint64_t environment_seed(std::uint64_t master_seed, std::size_t round);
std::uint64_t init_seed(std::uint64_t master_seed, Rule rule, FractionalOrder alpha, std::size_t round);

struct RoundTrace {
    std::vector<double> md; ///< MD after each step; carried forward after divergence
    bool complex_fired = false;
    bool diverged = false;
    std::optional<std::size_t> first_complex_at;
    std::optional<std::size_t> diverged_at;
    std::vector<double> fractional_term;
    std::vector<double> weights_true;
    std::vector<Complex> final_weights;
};

RoundTrace run_round(const ExperimentConfig& config, const AlgorithmTemplate& algorithm, FractionalOrder alpha,
                     std::size_t round_index);

struct LearningCurve {
    std::string protocol;
    Rule rule;
    double alpha;
    std::vector<double> md;
    double complex_fire_rate = 0.0;
    double diverged_rate = 0.0;
    double mu_l = 0.0;
    double mu_f = 0.0;
    double epsilon = 0.0;
    InitMode init = InitMode::ZEROS;
};

/// All (algorithm, α) curves, rounds run in parallel and averaged in
/// ascending round order.
std::vector<LearningCurve> run_experiment(const ExperimentConfig& config);
/// Single-threaded reference for run_experiment; results are bit-identical.
std::vector<LearningCurve> run_experiment_serial(const ExperimentConfig& config);

} // namespace fracls

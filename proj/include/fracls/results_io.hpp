#pragma once

#include "fracls/critpoints.hpp"
#include "fracls/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fracls {

inline constexpr std::string_view kResultsHeader =
    "protocol,algorithm,alpha,iteration,mean_md,complex_fire_rate,diverged_rate";
inline constexpr std::string_view kCriticalPointsHeader =
    "kind,alpha,root_plus,root_minus,root_imag,residual_plus,residual_minus,imaginary_flag";
inline constexpr std::string_view kDescentHeader = "n,t_n,abs_err";

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

/// One row per (curve, iteration), iterations numbered from 1.
std::string results_csv(const std::vector<LearningCurve>& curves);

struct ResultsRow {
    std::string protocol;
    std::string algorithm;
    double alpha;
    std::size_t iteration;
    double mean_md;
    double complex_fire_rate;
    double diverged_rate;
};

/// Strict reader for results_csv output. Throws std::invalid_argument on a
/// header mismatch, wrong field count or an unparsable number.
std::vector<ResultsRow> parse_results_csv(std::string_view text);

nlohmann::json config_to_json(const ExperimentConfig& config);
/// FNV-1a over the compact dump of config_to_json.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Sidecar document: configurations, seeds, conventions and per-curve
/// summaries. Contains no timestamps so reruns are byte-identical.
nlohmann::json results_metadata(const std::vector<ExperimentConfig>& configs,
                                const std::vector<LearningCurve>& curves);

struct CriticalPointRow {
    std::string kind; ///< "mse", "mse_noconst" or "quadratic"
    double alpha;
    Complex root_plus;
    Complex root_minus;
    double residual_plus;
    double residual_minus;
    bool imaginary;
};

/// root_imag holds |Im| of the pair (the roots are conjugate when complex).
std::string critical_points_csv(const std::vector<CriticalPointRow>& rows);

/// Rows n, Re t_n, |t_n − target|.
std::string descent_csv(const std::vector<Complex>& iterates, double target);

/// Writes to a temporary sibling and renames over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace fracls

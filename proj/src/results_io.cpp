#include "fracls/results_io.hpp"

#include "fracls/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#ifndef FRACLS_VERSION
#define FRACLS_VERSION "unknown"
#endif

namespace fracls {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view field) {
    if (field == "nan") return std::nan("");
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view field) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::invalid_argument("not an iteration index: '" + std::string(field) + "'");
    }
    return v;
}

nlohmann::json optional_number(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string results_csv(const std::vector<LearningCurve>& curves) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& c : curves) {
        const std::string prefix = c.protocol + ',' + std::string(to_string(c.rule)) + ',' + format_double(c.alpha) + ',';
        const std::string suffix = ',' + format_double(c.complex_fire_rate) + ',' + format_double(c.diverged_rate) + '\n';
        for (std::size_t n = 0; n < c.md.size(); ++n) {
            out += prefix;
            out += std::to_string(n + 1);
            out += ',';
            out += format_double(c.md[n]);
            out += suffix;
        }
    }
    return out;
}

std::vector<ResultsRow> parse_results_csv(std::string_view text) {
    std::vector<ResultsRow> rows;
    std::size_t start = 0;
    bool header = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (header) {
            if (line != kResultsHeader) throw std::invalid_argument("unexpected results header: '" + std::string(line) + "'");
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw std::invalid_argument("expected 7 fields in '" + std::string(line) + "'");
        rows.push_back({std::string(f[0]), std::string(f[1]), parse_double(f[2]), parse_count(f[3]), parse_double(f[4]),
                        parse_double(f[5]), parse_double(f[6])});
    }
    if (header) throw std::invalid_argument("empty results file");
    return rows;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json algorithms = nlohmann::json::array();
    for (const auto& a : config.algorithms) {
        algorithms.push_back({{"rule", to_string(a.rule)},
                              {"mu_l", a.mu_l},
                              {"mu_f", a.mu_f},
                              {"epsilon", a.epsilon},
                              {"init", to_string(a.init.value_or(config.init))},
                              {"output", to_string(a.output)}});
    }
    nlohmann::json alphas = nlohmann::json::array();
    for (auto a : config.alphas) alphas.push_back(a.value());
    return {
        {"label", config.label},
        {"system",
         {{"kind", to_string(config.system.kind)},
          {"length", config.system.length},
          {"weights_true", config.system.weights_true}}},
        {"algorithms", algorithms},
        {"alphas", alphas},
        {"snr_db", optional_number(config.snr_db)},
        {"iterations", config.iterations},
        {"rounds", config.rounds},
        {"master_seed", config.master_seed},
        {"init", to_string(config.init)},
        {"prev_init", to_string(config.prev_init)},
    };
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config_to_json(config).dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

nlohmann::json results_metadata(const std::vector<ExperimentConfig>& configs,
                                const std::vector<LearningCurve>& curves) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& c : configs) {
        auto j = config_to_json(c);
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash(c)));
        j["config_hash"] = hex;
        runs.push_back(std::move(j));
    }
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& c : curves) {
        summary.push_back({{"protocol", c.protocol},
                           {"algorithm", to_string(c.rule)},
                           {"alpha", c.alpha},
                           {"final_mean_md", c.md.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.md.back())},
                           {"complex_fire_rate", c.complex_fire_rate},
                           {"diverged_rate", c.diverged_rate}});
    }
    return {
        {"code_version", FRACLS_VERSION},
        {"columns", kResultsHeader},
        {"conventions",
         {{"snr", "noise variance = P * 10^(-snr_db/10), P = per-round mean power of the noise-free desired signal"},
          {"md", "(1/N) sum_l |w_true(l) - w_hat(l)|, complex modulus, recorded after each update"},
          {"divergence", "non-finite weights stop the round; the last finite MD is carried forward"},
          {"aggregation", "arithmetic mean over rounds in ascending round order"},
          {"rng",
           "mt19937_64; environment (w*, x, noise) seeded from (master_seed, round), initial weights from "
           "(master_seed, rule, alpha, round)"},
          {"lms_alpha", "LMS rows report alpha = 1"},
          {"rule2_prev_weights", "w_{-1} per prev_init (CURRENT: equal to w_0)"}}},
        {"runs", runs},
        {"curves", summary},
    };
}

std::string critical_points_csv(const std::vector<CriticalPointRow>& rows) {
    std::string out(kCriticalPointsHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.kind + ',' + format_double(r.alpha) + ',' + format_double(r.root_plus.real()) + ','
               + format_double(r.root_minus.real()) + ',' + format_double(std::fabs(r.root_plus.imag())) + ','
               + format_double(r.residual_plus) + ',' + format_double(r.residual_minus) + ','
               + (r.imaginary ? "true" : "false") + '\n';
    }
    return out;
}

std::string descent_csv(const std::vector<Complex>& iterates, double target) {
    std::string out(kDescentHeader);
    out += '\n';
    for (std::size_t n = 0; n < iterates.size(); ++n) {
        out += std::to_string(n) + ',' + format_double(iterates[n].real()) + ','
               + format_double(std::abs(iterates[n] - target)) + '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move result into " + path.string());
    }
}

} // namespace fracls

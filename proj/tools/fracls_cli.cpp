#include "fracls/critpoints.hpp"
#include "fracls/errors.hpp"
#include "fracls/harness.hpp"
#include "fracls/results_io.hpp"
#include "fracls/special.hpp"
#include "fracls/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#ifdef FRACLS_HAVE_OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace fracls;

namespace {

enum Exit : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw UsageError(what + ": '" + text + "' is not a number");
    return v;
}

// Counts accept scientific notation ("1e3") but must be whole and positive.
std::size_t parse_count(const std::string& text, const std::string& what) {
    const double v = parse_number(text, what);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) throw UsageError(what + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec == std::errc() && ptr == end) return v;
    const double d = parse_number(text, "--seed");
    if (!(d >= 0.0) || d != std::floor(d) || d >= 18446744073709551616.0) {
        throw UsageError("--seed must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(d);
}

FractionalOrder parse_alpha(const std::string& text) {
    try {
        return FractionalOrder(parse_number(text, "alpha"));
    } catch (const DomainError& e) {
        throw UsageError(std::string("alpha: ") + e.what());
    }
}

std::vector<FractionalOrder> parse_alpha_list(const std::string& text) {
    std::vector<FractionalOrder> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        out.push_back(parse_alpha(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

int worker_cap() {
    const char* env = std::getenv("FRACLS_MAX_WORKERS");
    if (env == nullptr || *env == '\0') return 0;
    const double v = parse_number(env, "FRACLS_MAX_WORKERS");
    if (!(v >= 1.0) || v != std::floor(v) || v > 4096) throw UsageError("FRACLS_MAX_WORKERS must be a positive integer");
    return static_cast<int>(v);
}

int effective_workers(int requested) {
    int workers = requested;
#ifdef FRACLS_HAVE_OPENMP
    if (workers <= 0) workers = omp_get_max_threads();
#else
    workers = 1;
#endif
    const int cap = worker_cap();
    if (cap > 0) workers = std::min(workers, cap);
    return workers;
}

void ensure_writable(const std::vector<fs::path>& paths, bool force) {
    if (force) return;
    for (const auto& p : paths) {
        if (fs::exists(p)) throw IoError(p.string() + " exists; pass --force to overwrite");
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct ProtocolArgs {
    std::string id;
    std::string rounds;
    std::string iterations;
    std::string seed = "42";
    std::string alphas;
    std::string snr;
    std::string workers;
    std::string prev_init = "current";
    bool full_scale = false;
    bool conjugate_output = false;
    std::string out = "results";
    bool force = false;
};

int run_protocol(const ProtocolArgs& args) {
    ProtocolId id;
    try {
        id = protocol_from_string(args.id);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto configs = standard_protocol(id);
    const int workers = effective_workers(args.workers.empty() ? 0 : static_cast<int>(parse_count(args.workers, "--workers")));
    const std::string prev = lower(args.prev_init);
    if (prev != "current" && prev != "zeros") throw UsageError("--prev-init must be 'current' or 'zeros'");
    if (args.full_scale && !args.rounds.empty()) throw UsageError("--full-scale and --rounds are exclusive");

    for (auto& cfg : configs) {
        if (args.full_scale) cfg.rounds = 1000;
        if (!args.rounds.empty()) cfg.rounds = parse_count(args.rounds, "--rounds");
        if (!args.iterations.empty()) cfg.iterations = parse_count(args.iterations, "--iterations");
        cfg.master_seed = parse_seed(args.seed);
        if (!args.alphas.empty()) cfg.alphas = parse_alpha_list(args.alphas);
        if (!args.snr.empty() && cfg.snr_db) cfg.snr_db = parse_number(args.snr, "--snr");
        cfg.prev_init = prev == "zeros" ? PrevInit::ZEROS : PrevInit::CURRENT;
        if (args.conjugate_output) {
            for (auto& a : cfg.algorithms) a.output = OutputForm::CONJUGATE_TRANSPOSE;
        }
        cfg.workers = workers;
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    const std::string stem = "protocol_" + lower(std::string(to_string(id)));
    const fs::path csv = fs::path(args.out) / (stem + ".csv");
    const fs::path json = fs::path(args.out) / (stem + ".json");
    ensure_writable({csv, json}, args.force);

    std::vector<LearningCurve> curves;
    for (const auto& cfg : configs) {
        auto part = run_experiment(cfg);
        curves.insert(curves.end(), part.begin(), part.end());
    }
    write_file_atomic(csv, results_csv(curves));
    write_file_atomic(json, results_metadata(configs, curves).dump(2) + "\n");

    for (const auto& c : curves) {
        std::printf("%-10s %-10s alpha=%-4s final_md=%.6g complex_fire_rate=%.3g diverged_rate=%.3g\n",
                    c.protocol.c_str(), std::string(to_string(c.rule)).c_str(), format_double(c.alpha).c_str(),
                    c.md.back(), c.complex_fire_rate, c.diverged_rate);
    }
    std::printf("wrote %s\n", csv.string().c_str());
    return kOk;
}

struct CriticalArgs {
    std::string d = "1";
    std::string x = "1";
    std::string c = "0";
    std::string a = "0";
    std::string alphas = "0.9,0.8,0.7,0.6,0.5,0.4";
    std::string out = "results";
    bool force = false;
};

int critical_points(const CriticalArgs& args) {
    const double d = parse_number(args.d, "--d");
    const double x = parse_number(args.x, "--x");
    const double c = parse_number(args.c, "--c");
    const double a = parse_number(args.a, "--a");
    if (x == 0.0) throw UsageError("--x must be non-zero");
    if (!(a >= 0.0 && a < 0.25)) throw UsageError("--a must lie in [0, 0.25)");
    const auto alphas = parse_alpha_list(args.alphas);

    const fs::path csv = fs::path(args.out) / "critical_points.csv";
    ensure_writable({csv}, args.force);

    std::vector<CriticalPointRow> rows;
    const ScalarQuadratic q(2.0, -1.0, c, a);
    for (auto alpha : alphas) {
        // residuals of the one-tap roots: the fractional gradient of (d − w x)² at the root
        const auto tap_residual = [&](double w) {
            if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            const auto err2 = [d, x](long double s) {
                const long double e = d - s * x;
                return e * e;
            };
            return std::fabs(rl_deriv_numeric_offset(alpha, err2, RLInterval(0.0, w)).value);
        };
        const RootPair mse = flms1_critical_points(d, x, alpha);
        rows.push_back({"mse", alpha.value(), {mse.plus, 0.0}, {mse.minus, 0.0}, tap_residual(mse.plus),
                        tap_residual(mse.minus), false});
        const RootPair noconst = flms1_critical_points_noconst(d, x, alpha);
        rows.push_back({"mse_noconst", alpha.value(), {noconst.plus, 0.0}, {noconst.minus, 0.0},
                        std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), false});
        const auto rep = example_quadratic_critical_points(q, alpha);
        rows.push_back({"quadratic", alpha.value(), rep.fractional_pair[0], rep.fractional_pair[1], rep.residual[0],
                        rep.residual[1], rep.imaginary});
    }
    write_file_atomic(csv, critical_points_csv(rows));
    for (const auto& r : rows) {
        std::printf("%-11s alpha=%-4s roots=(%.8g, %.8g)%s\n", r.kind.c_str(), format_double(r.alpha).c_str(),
                    r.root_plus.real(), r.root_minus.real(), r.imaginary ? " imaginary" : "");
    }
    std::printf("wrote %s\n", csv.string().c_str());
    return kOk;
}

struct DescentArgs {
    std::string objective = "example2";
    std::string mode = "rule2";
    std::string mu_f = "0.1";
    std::string alpha = "0.9";
    std::string t0 = "0.5";
    std::string t_prev0;
    std::string steps = "1e4";
    std::string c = "0";
    std::string lower = "0";
    bool raw = false;
    std::string out = "results";
    bool force = false;
};

int descent(const DescentArgs& args) {
    std::optional<ScalarQuadratic> f;
    const std::string objective = lower(args.objective);
    if (objective == "example1") {
        f.emplace(2.0, -1.0, parse_number(args.c, "--c"));
    } else if (objective == "example2") {
        f.emplace(4.0, -12.0, 9.0);
    } else {
        throw UsageError("unknown objective '" + args.objective + "' (expected example1 or example2)");
    }
    DescentOptions opt;
    const std::string mode = lower(args.mode);
    if (mode == "rule1") {
        opt.mode = DescentMode::RULE1_STYLE;
    } else if (mode == "rule2") {
        opt.mode = DescentMode::RULE2_STYLE;
    } else {
        throw UsageError("--mode must be rule1 or rule2");
    }
    opt.alpha = parse_alpha(args.alpha);
    opt.mu_f = parse_number(args.mu_f, "--mu-f");
    if (!(opt.mu_f >= 0.0)) throw UsageError("--mu-f must be non-negative");
    opt.t0 = parse_number(args.t0, "--t0");
    opt.t_prev0 = args.t_prev0.empty() ? opt.t0 - 0.1 : parse_number(args.t_prev0, "--t-prev0");
    opt.steps = parse_count(args.steps, "--steps");
    opt.lower_limit = parse_number(args.lower, "--lower");
    opt.raw_branch = args.raw;

    const fs::path csv = fs::path(args.out) / ("descent_" + objective + ".csv");
    ensure_writable({csv}, args.force);

    const auto result = fractional_descent_scalar(*f, opt);
    const double target = f->minimizer();
    write_file_atomic(csv, descent_csv(result.iterates, target));

    const auto hit = iterations_to_tolerance(result.real_trajectory(), target, 1e-2);
    const auto ordinary = iterations_to_tolerance(ordinary_descent_scalar(*f, opt.mu_f, opt.t0, opt.steps), target, 1e-2);
    std::printf("final t=%.10g |t - t*|=%.3g steps=%zu\n", result.iterates.back().real(),
                std::abs(result.iterates.back() - target), result.iterates.size() - 1);
    std::printf("iterations to 1e-2: fractional=%s ordinary=%s\n", hit ? std::to_string(*hit).c_str() : "never",
                ordinary ? std::to_string(*ordinary).c_str() : "never");
    if (result.non_finite) std::printf("stopped early: non-finite iterate\n");
    if (result.first_complex_at) std::printf("left the real line at step %zu\n", *result.first_complex_at);
    std::printf("wrote %s\n", csv.string().c_str());
    return kOk;
}

int validate(const std::string& seed, bool inject_fault) {
    if (inject_fault) testing::inject_gamma_fault(true);
    const auto results = run_validation_suite(parse_seed(seed));
    if (inject_fault) testing::inject_gamma_fault(false);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s  %-45s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.passed;
    }
    if (!ok) {
        for (const auto& r : results) {
            if (!r.passed) std::fprintf(stderr, "validation failed: %s\n", r.name.c_str());
        }
    }
    return ok ? kOk : kValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional LMS experiments and fractional-calculus checks"};
    app.require_subcommand(1);

    ProtocolArgs pa;
    auto* rp = app.add_subcommand("run-protocol", "Run a Monte Carlo identification protocol (I, II, III, III_EPS)");
    rp->add_option("id", pa.id, "Protocol id")->required();
    rp->add_option("--rounds", pa.rounds, "Independent rounds (default 100)");
    rp->add_option("--iterations", pa.iterations, "Samples per round (default 1000)");
    rp->add_option("--seed", pa.seed, "Master seed");
    rp->add_option("--alphas", pa.alphas, "Comma-separated fractional orders");
    rp->add_option("--snr", pa.snr, "SNR in dB for the noisy variants");
    rp->add_option("--workers", pa.workers, "Worker threads (capped by FRACLS_MAX_WORKERS)");
    rp->add_option("--prev-init", pa.prev_init, "Rule-2 previous weights: current or zeros");
    rp->add_flag("--full-scale", pa.full_scale, "Use 1000 rounds");
    rp->add_flag("--conjugate-output", pa.conjugate_output, "Raw rules form y = w^H x");
    rp->add_option("--out", pa.out, "Output directory");
    rp->add_flag("--force", pa.force, "Overwrite existing result files");

    CriticalArgs ca;
    auto* cp = app.add_subcommand("critical-points", "Tabulate fractional critical points over alpha");
    cp->add_option("--d", ca.d, "Desired sample d");
    cp->add_option("--x", ca.x, "Input sample x (non-zero)");
    cp->add_option("--c", ca.c, "Constant of 2t^2 - t + c");
    cp->add_option("--a", ca.a, "Lower terminal in [0, 0.25)");
    cp->add_option("--alphas", ca.alphas, "Comma-separated fractional orders");
    cp->add_option("--out", ca.out, "Output directory");
    cp->add_flag("--force", ca.force, "Overwrite existing result files");

    DescentArgs da;
    auto* ds = app.add_subcommand("descent", "Scalar fractional gradient descent");
    ds->add_option("--objective", da.objective, "example1 (2t^2 - t + c) or example2 ((2t - 3)^2)");
    ds->add_option("--mode", da.mode, "rule1 (fixed terminal) or rule2 (terminal t_{n-1})");
    ds->add_option("--mu-f", da.mu_f, "Step size");
    ds->add_option("--alpha", da.alpha, "Fractional order");
    ds->add_option("--t0", da.t0, "Initial iterate");
    ds->add_option("--t-prev0", da.t_prev0, "Initial previous iterate (default t0 - 0.1)");
    ds->add_option("--steps", da.steps, "Number of steps");
    ds->add_option("--c", da.c, "Constant for example1");
    ds->add_option("--lower", da.lower, "Fixed terminal for rule1");
    ds->add_flag("--raw", da.raw, "Principal complex branch instead of the modulus");
    ds->add_option("--out", da.out, "Output directory");
    ds->add_flag("--force", da.force, "Overwrite existing result files");

    std::string vseed = "1";
    bool inject = false;
    auto* va = app.add_subcommand("validate", "Run the fast invariant suite");
    va->add_option("--seed", vseed, "Sampling seed");
    va->add_flag("--inject-gamma-fault", inject)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*rp) return run_protocol(pa);
        if (*cp) return critical_points(ca);
        if (*ds) return descent(da);
        if (*va) return validate(vseed, inject);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    }
    return kUsage;
}

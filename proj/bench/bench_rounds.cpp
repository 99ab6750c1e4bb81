// Times the serial reference against the OpenMP round loop on each protocol
// and checks that both produce the same CSV.

#include "fracls/harness.hpp"
#include "fracls/results_io.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>

#ifdef FRACLS_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double best_of(int reps, F&& body) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP round loop"};
    std::size_t rounds = 100;
    std::size_t iterations = 1000;
    int workers = 0;
    int reps = 3;
    app.add_option("--rounds", rounds)->check(CLI::PositiveNumber);
    app.add_option("--iterations", iterations)->check(CLI::PositiveNumber);
    app.add_option("--workers", workers, "0 lets OpenMP choose")->check(CLI::NonNegativeNumber);
    app.add_option("--reps", reps, "best of this many timings")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

#ifdef FRACLS_HAVE_OPENMP
    std::printf("OpenMP max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    std::printf("%-12s %10s %10s %8s %s\n", "config", "serial_s", "openmp_s", "speedup", "identical");
    bool all_same = true;
    for (auto id : {fracls::ProtocolId::I, fracls::ProtocolId::II, fracls::ProtocolId::III, fracls::ProtocolId::III_EPS}) {
        for (auto cfg : fracls::standard_protocol(id)) {
            cfg.rounds = rounds;
            cfg.iterations = iterations;
            cfg.workers = workers;
            std::string serial_csv, parallel_csv;
            const double ts = best_of(reps, [&] { serial_csv = fracls::results_csv(fracls::run_experiment_serial(cfg)); });
            const double tp = best_of(reps, [&] { parallel_csv = fracls::results_csv(fracls::run_experiment(cfg)); });
            const bool same = serial_csv == parallel_csv;
            all_same = all_same && same;
            std::printf("%-12s %10.3f %10.3f %8.2f %s\n", cfg.label.c_str(), ts, tp, ts / tp, same ? "yes" : "NO");
        }
    }
    return all_same ? 0 : 1;
}

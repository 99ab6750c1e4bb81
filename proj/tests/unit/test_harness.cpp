#include "doctest.h"

#include "fracls/harness.hpp"
#include "fracls/results_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace fracls;

namespace {

ExperimentConfig small(ExperimentConfig cfg, std::size_t rounds, std::size_t iterations) {
    cfg.rounds = rounds;
    cfg.iterations = iterations;
    return cfg;
}

const LearningCurve& find(const std::vector<LearningCurve>& curves, Rule rule, double alpha) {
    for (const auto& c : curves) {
        if (c.rule == rule && c.alpha == alpha) return c;
    }
    throw std::runtime_error("curve not found");
}

} // namespace

TEST_CASE("mean deviation") {
    const std::vector<double> t{1.0, -1.0};
    const std::vector<Complex> same{{1.0, 0.0}, {-1.0, 0.0}};
    const std::vector<Complex> zero(2);
    CHECK(mean_deviation(t, same) == 0.0);
    CHECK(mean_deviation(t, zero) == 1.0);
    const std::vector<double> one{1.0};
    const std::vector<Complex> shifted{{1.0, 1.0}};
    CHECK(mean_deviation(one, shifted) == 1.0);
    CHECK_THROWS_AS(mean_deviation(one, zero), std::invalid_argument);
    CHECK_THROWS_AS(mean_deviation({}, std::span<const Complex>{}), std::invalid_argument);
}

TEST_CASE("noise calibration") {
    CHECK(noise_variance(1.0, 10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(noise_variance(2.5, 0.0) == 2.5);
    CHECK(noise_variance(1.0, 300.0) < 1e-29);
    CHECK_THROWS_AS(NoiseSource(0.0, 10.0), std::invalid_argument);

    for (double snr : {0.0, 10.0, 20.0}) {
        NoiseSource src(3.0, snr);
        std::mt19937_64 rng(8);
        const int n = 1'000'000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = src(rng);
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        CHECK(std::fabs(var / src.variance() - 1.0) < 0.01);
        CHECK(std::fabs(mean) < 5.0 * std::sqrt(src.variance() / n));
    }
}

TEST_CASE("systems and protocols") {
    const auto neg = SystemSpec::negative_ramp();
    CHECK(neg.weights_true.front() == -15.0);
    CHECK(neg.weights_true.back() == -1.0);
    CHECK(neg.length == 15);
    const auto pos = SystemSpec::positive_ramp();
    CHECK(pos.weights_true.front() == 1.0);
    CHECK(pos.weights_true.back() == 15.0);
    CHECK(SystemSpec::random_gaussian().length == 30);

    const auto one = standard_protocol(ProtocolId::I);
    REQUIRE(one.size() == 2);
    CHECK(one[0].system.kind == SystemKind::NEGATIVE_RAMP);
    CHECK_FALSE(one[0].snr_db.has_value());
    CHECK(one[1].snr_db == 10.0);
    CHECK(one[0].algorithms[0].rule == Rule::LMS);
    CHECK(one[0].algorithms[0].mu_l == 1e-2);
    CHECK(one[0].algorithms[1].rule == Rule::FLMS1_RAW);
    CHECK(one[0].alphas.size() == 6);
    CHECK(one[0].iterations == 1000);

    const auto two = standard_protocol(ProtocolId::II);
    CHECK(two[1].system.kind == SystemKind::POSITIVE_RAMP);

    const auto three = standard_protocol(ProtocolId::III)[0];
    CHECK(three.system.kind == SystemKind::RANDOM_GAUSSIAN);
    CHECK(three.algorithms[1].rule == Rule::FLMS1_MOD);
    CHECK(three.algorithms[1].mu_l == 5e-3);
    CHECK(three.algorithms[1].mu_f == 5e-3);
    CHECK(three.algorithms[2].rule == Rule::FLMS2_MOD);
    CHECK(three.algorithms[2].mu_f == 1e-2);
    CHECK(three.algorithms[2].epsilon == 0.0);
    CHECK(three.algorithms[2].init == InitMode::GAUSSIAN);

    const auto eps = standard_protocol(ProtocolId::III_EPS)[0];
    CHECK(eps.algorithms.back().epsilon == 1e-10);

    CHECK(protocol_from_string("iii-eps") == ProtocolId::III_EPS);
    CHECK(protocol_from_string("ii") == ProtocolId::II);
    CHECK_THROWS_AS(protocol_from_string("iv"), std::invalid_argument);
}

TEST_CASE("configuration validation") {
    auto cfg = standard_protocol(ProtocolId::III)[0];
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.rounds = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.alphas.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.algorithms.push_back(bad.algorithms.front());
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.algorithms[0].mu_f = 0.1; // LMS with a fractional step
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("round traces") {
    const auto cfg = small(standard_protocol(ProtocolId::II)[0], 1, 1000);
    const auto& lms = cfg.algorithms[0];

    SUBCASE("LMS converges on the noise-free positive system") {
        const auto t = run_round(cfg, lms, FractionalOrder(1.0), 0);
        CHECK(t.md.size() == 1000);
        CHECK(t.md.back() < t.md.front() / 10.0);
        CHECK_FALSE(t.complex_fired);
    }
    SUBCASE("same seed and round give identical traces") {
        const auto a = run_round(cfg, cfg.algorithms[1], FractionalOrder(0.6), 3);
        const auto b = run_round(cfg, cfg.algorithms[1], FractionalOrder(0.6), 3);
        CHECK(a.md == b.md);
        CHECK(a.final_weights == b.final_weights);
        const auto c = run_round(cfg, cfg.algorithms[1], FractionalOrder(0.6), 4);
        CHECK(a.md != c.md);
    }
    SUBCASE("raw rule on the negative system leaves the real line") {
        const auto neg = small(standard_protocol(ProtocolId::I)[0], 1, 200);
        for (double a : {0.9, 0.4}) {
            const auto t = run_round(neg, neg.algorithms[1], FractionalOrder(a), 0);
            CHECK(t.complex_fired);
            REQUIRE(t.first_complex_at);
        }
    }
    SUBCASE("divergence freezes the curve") {
        auto wild = cfg;
        wild.algorithms[0].mu_l = 5.0;
        const auto t = run_round(wild, wild.algorithms[0], FractionalOrder(1.0), 0);
        REQUIRE(t.diverged);
        REQUIRE(t.diverged_at);
        CHECK(t.md.size() == 1000);
        for (double v : t.md) CHECK(std::isfinite(v));
        const double frozen = t.md[*t.diverged_at];
        for (std::size_t n = *t.diverged_at; n < t.md.size(); ++n) CHECK(t.md[n] == frozen);
    }
    SUBCASE("the environment is shared, initial weights depend on the rule") {
        auto three = small(standard_protocol(ProtocolId::III)[0], 1, 50);
        const auto a = run_round(three, three.algorithms[0], FractionalOrder(1.0), 2);
        const auto b = run_round(three, three.algorithms[2], FractionalOrder(0.5), 2);
        CHECK(a.weights_true == b.weights_true);
        CHECK(a.md.front() != b.md.front());
        CHECK(environment_seed(1, 2) != environment_seed(1, 3));
        CHECK(init_seed(1, Rule::FLMS2_MOD, FractionalOrder(0.5), 0)
              != init_seed(1, Rule::FLMS2_MOD, FractionalOrder(0.6), 0));
    }
    SUBCASE("fractional term recording") {
        auto rec = cfg;
        rec.record_fractional_term = true;
        const auto t = run_round(rec, rec.algorithms[1], FractionalOrder(0.5), 0);
        CHECK(t.fractional_term.size() == 1000);
    }
}

TEST_CASE("rule-2 stagnation depends on the previous-weight convention") {
    auto cfg = small(standard_protocol(ProtocolId::III)[0], 2, 300);
    cfg.algorithms = {cfg.algorithms[2]};
    cfg.alphas = {FractionalOrder(0.7)};
    const auto frozen = run_experiment_serial(cfg)[0];
    CHECK(frozen.md.front() == frozen.md.back());
    cfg.prev_init = PrevInit::ZEROS;
    const auto moving = run_experiment_serial(cfg)[0];
    CHECK(moving.md.front() != moving.md.back());
}

TEST_CASE("experiment aggregation") {
    SUBCASE("one round reproduces its trace") {
        const auto cfg = small(standard_protocol(ProtocolId::I)[1], 1, 300);
        const auto curves = run_experiment(cfg);
        const auto trace = run_round(cfg, cfg.algorithms[1], FractionalOrder(0.7), 0);
        CHECK(find(curves, Rule::FLMS1_RAW, 0.7).md == trace.md);
        CHECK(curves.size() == 7);
        CHECK(find(curves, Rule::LMS, 1.0).md.size() == 300);
    }
    SUBCASE("mean over rounds in round order") {
        const auto cfg = small(standard_protocol(ProtocolId::II)[1], 5, 100);
        const auto curve = find(run_experiment(cfg), Rule::LMS, 1.0);
        std::vector<double> expect(100, 0.0);
        for (std::size_t r = 0; r < 5; ++r) {
            const auto t = run_round(cfg, cfg.algorithms[0], FractionalOrder(1.0), r);
            for (std::size_t n = 0; n < 100; ++n) expect[n] += t.md[n];
        }
        for (auto& v : expect) v /= 5.0;
        CHECK(curve.md == expect);
    }
    SUBCASE("convergent curves decrease over 50-iteration windows") {
        auto cfg = standard_protocol(ProtocolId::II)[0];
        cfg.algorithms.resize(1);
        const auto curve = find(run_experiment(cfg), Rule::LMS, 1.0);
        double prev = INFINITY;
        for (std::size_t w = 0; w + 50 <= curve.md.size(); w += 50) {
            const double m = std::accumulate(curve.md.begin() + w, curve.md.begin() + w + 50, 0.0) / 50.0;
            CHECK(m <= prev);
            prev = m;
        }
        CHECK(curve.md.back() < 1e-3);
    }
}

TEST_CASE("clean rules never fire the complex criterion") {
    for (auto id : {ProtocolId::I, ProtocolId::II, ProtocolId::III, ProtocolId::III_EPS}) {
        for (auto cfg : standard_protocol(id)) {
            cfg = small(cfg, 4, 200);
            cfg.algorithms.erase(std::remove_if(cfg.algorithms.begin(), cfg.algorithms.end(),
                                                [](const AlgorithmTemplate& a) { return is_raw(a.rule); }),
                                 cfg.algorithms.end());
            if (id == ProtocolId::III) cfg.algorithms.push_back({Rule::FLMS1_EXACT, 5e-3, 5e-4, 0.0, {}, {}});
            for (const auto& c : run_experiment(cfg)) {
                CHECK_MESSAGE(c.complex_fire_rate == 0.0, cfg.label, " ", to_string(c.rule));
            }
        }
    }
}

TEST_CASE("determinism across worker counts") {
    for (auto id : {ProtocolId::I, ProtocolId::III}) {
        auto cfg = small(standard_protocol(id).back(), 12, 150);
        const std::string reference = results_csv(run_experiment_serial(cfg));
        for (int workers : {1, 2, 3, 8}) {
            cfg.workers = workers;
            CHECK(results_csv(run_experiment(cfg)) == reference);
        }
        cfg.workers = 0;
        CHECK(results_csv(run_experiment(cfg)) == reference);
    }
}

TEST_CASE("conjugate output form changes only complex runs") {
    auto cfg = small(standard_protocol(ProtocolId::I)[0], 2, 200);
    cfg.alphas = {FractionalOrder(0.8)};
    const auto plain = run_experiment(cfg);
    for (auto& a : cfg.algorithms) a.output = OutputForm::CONJUGATE_TRANSPOSE;
    const auto conj = run_experiment(cfg);
    CHECK(find(plain, Rule::LMS, 1.0).md == find(conj, Rule::LMS, 1.0).md);
    CHECK(find(plain, Rule::FLMS1_RAW, 0.8).md != find(conj, Rule::FLMS1_RAW, 0.8).md);
}

#include "ostat/montecarlo.hpp"

#include "ostat/io.hpp"
#include "ostat/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace ostat;

namespace {

ExperimentConfig uniform_config(std::size_t n, std::size_t trials, std::uint64_t seed) {
    ExperimentConfig config;
    config.model = DistributionModel::uniform01();
    config.n = n;
    config.trials = trials;
    config.seed = SeedSpec{seed, 0};
    return config;
}

} // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("config validation") {
    auto config = uniform_config(10, 10, 1);
    config.n = 0;
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
    config = uniform_config(10, 0, 1);
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
    config = uniform_config(10, 5, 1);
    config.trim = 5;
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
    config.trim = 4;
    CHECK_NOTHROW(run_experiment(config));
    CHECK_THROWS_AS(coverage_experiment(uniform_config(10, 5, 1)), std::invalid_argument);
}

TEST_CASE("an effectively unbounded band covers every trial") {
    auto config = uniform_config(20, 200, 3);
    BandSpec band;
    band.kind = BandKind::Additive;
    band.t = 0.9999;  // clips to infinite endpoints at every index
    config.band = band;
    const auto report = coverage_experiment(config);
    CHECK(report.hits == report.trials);
    CHECK(report.empirical == 1.0);
}

TEST_CASE("additive band coverage meets its nominal bound") {
    auto config = uniform_config(500, 1000, 5);
    BandSpec band;
    band.kind = BandKind::Additive;
    band.t = 0.15;
    config.band = band;
    const auto report = coverage_experiment(config);
    CHECK(report.nominal == doctest::Approx(1.0 - 2.0 * std::exp(-500 * 0.0225 / 5.0)));
    const double half_width = 0.5 * (report.wilson99.second - report.wilson99.first);
    CHECK(report.empirical >= report.nominal - 3.0 * half_width);
}

TEST_CASE("widening a band never loses hits on the same seed") {
    auto config = uniform_config(200, 400, 9);
    BandSpec band;
    band.kind = BandKind::Additive;
    band.t = 0.05;
    config.band = band;
    const auto tight = coverage_experiment(config);
    band.t = 0.1;
    config.band = band;
    const auto loose = coverage_experiment(config);
    CHECK(loose.hits >= tight.hits);

    band.kind = BandKind::Ratio;
    band.T = 2.0;
    config.band = band;
    const auto narrow = coverage_experiment(config);
    band.T = 4.0;
    config.band = band;
    const auto wide = coverage_experiment(config);
    CHECK(wide.hits >= narrow.hits);
}

TEST_CASE("sup deviation of uniform samples never exceeds 1") {
    const auto summary = sup_deviation_experiment(uniform_config(100, 500, 11));
    CHECK(summary.max <= 1.0);
    CHECK(summary.median <= summary.q90);
    CHECK(summary.q90 <= summary.q99);
    CHECK(summary.q99 <= summary.max);
    CHECK(summary.mean > 0.0);
}

TEST_CASE("sup deviation quantile is dual to the additive coverage bound") {
    // nominal coverage 0.963... at n=2000, t=0.1 means the 0.963-quantile of
    // the sup deviation stays below 0.1
    const auto result = run_experiment(uniform_config(2000, 2000, 13));
    std::vector<double> devs;
    for (const auto& rec : result.records) devs.push_back(rec.sup_dev);
    std::sort(devs.begin(), devs.end());
    CHECK(empirical_quantile(devs, 0.9633687222225316) <= 0.1);
}

TEST_CASE("trim window semantics") {
    auto config = uniform_config(50, 100, 17);
    config.trim = 0;
    const auto result = run_experiment(config);
    for (const auto& rec : result.records) CHECK(*rec.trimmed_sup_dev == rec.sup_dev);

    const auto [trimmed, full] =
        trimmed_vs_full_experiment(DistributionModel::exponential(1.0), 2000, 3, 300,
                                   SeedSpec{19, 0});
    CHECK(trimmed.q90 < full.q90);
    CHECK(trimmed.median <= full.median);
    CHECK(trimmed.max <= full.max);
}

TEST_CASE("per-trial trimmed sup never exceeds the full sup") {
    auto config = uniform_config(300, 200, 23);
    config.model = DistributionModel::normal(0, 1);
    config.trim = 5;
    const auto result = run_experiment(config);
    for (const auto& rec : result.records) CHECK(*rec.trimmed_sup_dev <= rec.sup_dev);
}

TEST_CASE("reports are bit-identical across worker counts") {
    auto config = uniform_config(400, 600, 29);
    BandSpec band;
    band.kind = BandKind::Additive;
    band.t = 0.08;
    config.band = band;
    config.trim = 2;
    const auto r1 = run_experiment(config, 1);
    const auto r3 = run_experiment(config, 3);
    const auto r8 = run_experiment(config, 8);
    CHECK(summary_json(config, r1).dump() == summary_json(config, r3).dump());
    CHECK(summary_json(config, r1).dump() == summary_json(config, r8).dump());
    CHECK(trial_records_to_jsonl(r1.records) == trial_records_to_jsonl(r3.records));
}

TEST_CASE("normal sup deviation shrinks with n") {
    ExperimentConfig config;
    config.model = DistributionModel::normal(0, 1);
    config.trials = 100;
    config.seed = SeedSpec{31, 0};
    config.n = 1000;
    const double m1 = sup_deviation_experiment(config).median;
    config.n = 10000;
    const double m2 = sup_deviation_experiment(config).median;
    CHECK(m2 < m1);
}

TEST_CASE("rate scaling rows") {
    const auto rows = rate_scaling_experiment(DistributionModel::normal(0, 1), 2.0,
                                              {1000, 10000}, 60, SeedSpec{37, 0});
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.median_sup_dev > 0.0);
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio == doctest::Approx(row.median_sup_dev / logconcave_rate(row.n, 2.0)));
    }
    CHECK_THROWS_AS(rate_scaling_experiment(DistributionModel::laplace(0, 1), 2.0, {1000}, 60,
                                            SeedSpec{37, 0}),
                    std::invalid_argument);
}

TEST_CASE("wilson interval") {
    for (auto [hits, trials] : {std::pair<std::size_t, std::size_t>{45, 50},
                                {0, 50},
                                {50, 50},
                                {1, 3},
                                {4999, 5000}}) {
        const auto [lo, hi] = wilson_interval(hits, trials);
        const double phat = double(hits) / double(trials);
        CHECK(lo >= 0.0);
        CHECK(hi <= 1.0);
        CHECK(lo <= phat);
        CHECK(phat <= hi);
        // both endpoints are roots of (phat-p)^2 = z^2 p(1-p)/n
        const double z2 = 2.5758293035489004 * 2.5758293035489004;
        for (double p : {lo, hi}) {
            const double lhs = (phat - p) * (phat - p);
            const double rhs = z2 * p * (1.0 - p) / double(trials);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(wilson_interval(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
}

TEST_CASE("empirical quantile is nearest-rank") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(empirical_quantile(v, 0.0) == 1.0);
    CHECK(empirical_quantile(v, 1.0) == 4.0);
    CHECK(empirical_quantile(v, 0.5) == 2.0);
    CHECK(empirical_quantile(v, 0.51) == 3.0);
    CHECK(empirical_quantile(v, 0.25) == 1.0);
    double prev = 0.0;
    for (double level = 0.0; level <= 1.0; level += 0.05) {
        const double q = empirical_quantile(v, level);
        CHECK(q >= prev);
        prev = q;
    }
    CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(empirical_quantile(v, 1.5), std::domain_error);
}

TEST_CASE("two-sample ks statistic") {
    CHECK(ks_two_sample_statistic({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(ks_two_sample_statistic({1.0, 2.0}, {5.0, 6.0}) == 1.0);
    CHECK(ks_two_sample_statistic({1.0, 2.0}, {1.5}) == doctest::Approx(0.5));
    CHECK(ks_two_sample_threshold(10000, 10000, 0.001) ==
          doctest::Approx(1.9494746035204052 * std::sqrt(2.0 / 10000.0)).epsilon(1e-12));
}

} // TEST_SUITE

#pragma once

#include "ostat/distributions.hpp"
#include "ostat/envelopes.hpp"
#include "ostat/random.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace ostat {

// One reproducible experiment: `trials` independent sorted samples of size n
// from `model`, with streams derived from (seed.master_seed,
// seed.trial_index + k) for trial k. Optional band for coverage counting and
// optional symmetric trim omega (sup over indices omega <= i <= n-omega).
struct ExperimentConfig {
    DistributionModel model = DistributionModel::uniform01();
    std::size_t n = 0;
    std::size_t trials = 0;
    SeedSpec seed;
    std::optional<BandSpec> band;
    std::optional<std::size_t> trim;

    void validate() const;
};

struct CoverageReport {
    std::size_t trials = 0;
    std::size_t hits = 0;
    double empirical = 0.0;
    std::pair<double, double> wilson99{0.0, 0.0};
    double nominal = 0.0;
};

struct DeviationSummary {
    std::size_t n = 0;
    std::size_t trials = 0;
    double median = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct TrialRecord {
    std::size_t trial = 0;
    double sup_dev = 0.0;
    std::optional<double> trimmed_sup_dev;
    std::optional<bool> covered;
};

struct ExperimentResult {
    std::optional<CoverageReport> coverage;
    DeviationSummary deviation;                    // untrimmed sup deviations
    std::optional<DeviationSummary> trimmed_deviation;
    std::vector<TrialRecord> records;              // in trial order
};

// Runs the full experiment. Bit-identical output for any worker count
// (workers <= 0 selects the hardware default).
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 0);

// A trial is a hit iff every (possibly trimmed) order statistic lies inside
// its band interval, endpoints included. Requires config.band.
CoverageReport coverage_experiment(const ExperimentConfig& config, int workers = 0);

// Summary of per-trial sup_i |x_(i) - x*_(i)|, over the trimmed index range
// when trim is set.
DeviationSummary sup_deviation_experiment(const ExperimentConfig& config, int workers = 0);

// Trimmed and untrimmed summaries computed from identical samples.
std::pair<DeviationSummary, DeviationSummary> trimmed_vs_full_experiment(
    const DistributionModel& model, std::size_t n, std::size_t omega, std::size_t trials,
    SeedSpec seed, int workers = 0);

struct RateRow {
    std::size_t n = 0;
    double median_sup_dev = 0.0;
    double ratio = 0.0;  // median / logconcave_rate(n, p)
};

// Median sup deviation across scales, normalized by the log-concave rate;
// the ratio column estimates the effective width constant.
std::vector<RateRow> rate_scaling_experiment(const DistributionModel& model, double p,
                                             const std::vector<std::size_t>& n_list,
                                             std::size_t trials, SeedSpec seed,
                                             int workers = 0);

namespace detail {

// Chunked deterministic parallel loop: fn(i) for i in [0, count), each index
// exactly once; writes from distinct indices must not alias.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

DeviationSummary summarize_deviations(std::vector<double> devs, std::size_t n);

} // namespace detail

} // namespace ostat

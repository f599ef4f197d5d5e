#include "ostat/montecarlo.hpp"

#include "ostat/sampler.hpp"
#include "ostat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace ostat {

namespace detail {

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t w = std::min(static_cast<std::size_t>(resolve_workers(workers)),
                                   std::max<std::size_t>(count, 1));
    if (w <= 1 || count == 0) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t worker = 0; worker < w; ++worker) {
        pool.emplace_back([&, worker] {
            try {
                // contiguous chunk per worker
                const std::size_t begin = count * worker / w;
                const std::size_t end = count * (worker + 1) / w;
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

DeviationSummary summarize_deviations(std::vector<double> devs, std::size_t n) {
    DeviationSummary s;
    s.n = n;
    s.trials = devs.size();
    s.mean = std::accumulate(devs.begin(), devs.end(), 0.0) / static_cast<double>(devs.size());
    std::sort(devs.begin(), devs.end());
    s.median = empirical_quantile(devs, 0.5);
    s.q90 = empirical_quantile(devs, 0.9);
    s.q99 = empirical_quantile(devs, 0.99);
    s.max = devs.back();
    return s;
}

} // namespace detail

void ExperimentConfig::validate() const {
    if (n == 0) throw std::invalid_argument("experiment: n must be at least 1");
    if (trials == 0) throw std::invalid_argument("experiment: trials must be at least 1");
    if (trim && 2 * *trim >= n)
        throw std::invalid_argument("experiment: trim must satisfy 2*omega < n");
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
    config.validate();
    const std::size_t n = config.n;
    const std::vector<double> reference = reference_points(config.model, n);
    std::optional<Envelope> band;
    if (config.band) band = make_band(config.model, n, *config.band);

    // Trimmed index window omega <= i <= n-omega, 1-based.
    const std::size_t omega = config.trim.value_or(0);
    const std::size_t trim_lo = std::max<std::size_t>(omega, 1);
    const std::size_t trim_hi = n - omega;

    std::vector<TrialRecord> records(config.trials);
    detail::parallel_for(config.trials, workers, [&](std::size_t k) {
        thread_local std::vector<double> sample;
        RandomStream stream(SeedSpec{config.seed.master_seed, config.seed.trial_index + k});
        detail::sample_order_stats_into(config.model, n, stream, sample);
        double sup = 0.0, trimmed_sup = 0.0;
        bool hit = true;
        for (std::size_t i = 1; i <= n; ++i) {
            const double d = std::abs(sample[i - 1] - reference[i - 1]);
            sup = std::max(sup, d);
            const bool in_window = i >= trim_lo && i <= trim_hi;
            if (in_window) trimmed_sup = std::max(trimmed_sup, d);
            if (band && (!config.trim || in_window))
                hit = hit && sample[i - 1] >= band->lower[i - 1] &&
                      sample[i - 1] <= band->upper[i - 1];
        }
        TrialRecord& rec = records[k];
        rec.trial = k;
        rec.sup_dev = sup;
        if (config.trim) rec.trimmed_sup_dev = trimmed_sup;
        if (band) rec.covered = hit;
    });

    ExperimentResult result;
    result.records = std::move(records);
    std::vector<double> devs(config.trials);
    for (std::size_t k = 0; k < config.trials; ++k) devs[k] = result.records[k].sup_dev;
    result.deviation = detail::summarize_deviations(std::move(devs), n);
    if (config.trim) {
        std::vector<double> tdevs(config.trials);
        for (std::size_t k = 0; k < config.trials; ++k)
            tdevs[k] = *result.records[k].trimmed_sup_dev;
        result.trimmed_deviation = detail::summarize_deviations(std::move(tdevs), n);
    }
    if (band) {
        CoverageReport cov;
        cov.trials = config.trials;
        for (const auto& rec : result.records) cov.hits += *rec.covered ? 1 : 0;
        cov.empirical = static_cast<double>(cov.hits) / static_cast<double>(cov.trials);
        cov.wilson99 = wilson_interval(cov.hits, cov.trials);
        cov.nominal = band->nominal_coverage;
        result.coverage = cov;
    }
    return result;
}

CoverageReport coverage_experiment(const ExperimentConfig& config, int workers) {
    if (!config.band) throw std::invalid_argument("coverage_experiment: config.band required");
    return *run_experiment(config, workers).coverage;
}

DeviationSummary sup_deviation_experiment(const ExperimentConfig& config, int workers) {
    const ExperimentResult result = run_experiment(config, workers);
    return config.trim ? *result.trimmed_deviation : result.deviation;
}

std::pair<DeviationSummary, DeviationSummary> trimmed_vs_full_experiment(
    const DistributionModel& model, std::size_t n, std::size_t omega, std::size_t trials,
    SeedSpec seed, int workers) {
    ExperimentConfig config;
    config.model = model;
    config.n = n;
    config.trials = trials;
    config.seed = seed;
    config.trim = omega;
    const ExperimentResult result = run_experiment(config, workers);
    return {*result.trimmed_deviation, result.deviation};
}

std::vector<RateRow> rate_scaling_experiment(const DistributionModel& model, double p,
                                             const std::vector<std::size_t>& n_list,
                                             std::size_t trials, SeedSpec seed, int workers) {
    if (model.p_index() < p)
        throw std::invalid_argument("rate_scaling_experiment: model is not p-log-concave");
    std::vector<RateRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        ExperimentConfig config;
        config.model = model;
        config.n = n;
        config.trials = trials;
        config.seed = seed;
        const DeviationSummary summary = sup_deviation_experiment(config, workers);
        RateRow row;
        row.n = n;
        row.median_sup_dev = summary.median;
        row.ratio = summary.median / logconcave_rate(n, p);
        rows.push_back(row);
    }
    return rows;
}

} // namespace ostat

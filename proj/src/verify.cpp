#include "ostat/verify.hpp"

#include "ostat/sampler.hpp"
#include "ostat/stats.hpp"
#include "ostat/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ostat {

namespace {

std::string format_obs(double observed, double threshold) {
    std::ostringstream os;
    os << "observed " << observed << " vs threshold " << threshold;
    return os.str();
}

CheckResult make_check(std::string name, bool pass, double observed, double threshold,
                       std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = pass;
    c.observed = observed;
    c.threshold = threshold;
    c.detail = detail.empty() ? format_obs(observed, threshold) : std::move(detail);
    return c;
}

SuiteResult run_lemma2(const SuiteOptions& opts) {
    ExperimentConfig config;
    config.model = DistributionModel::uniform01();
    config.n = opts.n ? opts.n : 2000;
    config.trials = opts.trials ? opts.trials : 5000;
    config.seed = opts.seed;
    BandSpec band;
    band.kind = BandKind::Additive;
    band.t = opts.t > 0.0 ? opts.t : 0.1;
    config.band = band;

    SuiteResult suite;
    suite.suite = "lemma2";
    ExperimentResult result = run_experiment(config, opts.workers);
    const CoverageReport& cov = *result.coverage;
    const double half_width = 0.5 * (cov.wilson99.second - cov.wilson99.first);
    const double threshold = cov.nominal - 3.0 * half_width;
    suite.checks.push_back(make_check("empirical coverage >= nominal - 3*wilson_halfwidth",
                                      cov.empirical >= threshold, cov.empirical, threshold));
    suite.pass = suite.checks.back().pass;
    suite.config = config;
    suite.result = std::move(result);
    return suite;
}

SuiteResult run_lemma1(const SuiteOptions& opts) {
    ExperimentConfig config;
    config.model = DistributionModel::uniform01();
    config.n = opts.n ? opts.n : 100000;
    config.trials = opts.trials ? opts.trials : 1000;
    config.seed = opts.seed;
    BandSpec band;
    band.kind = BandKind::Ratio;
    band.T = opts.T > 0.0 ? opts.T : 1e6;
    config.band = band;

    SuiteResult suite;
    suite.suite = "lemma1";
    ExperimentResult result = run_experiment(config, opts.workers);
    const CoverageReport& cov = *result.coverage;
    suite.checks.push_back(make_check("empirical coverage >= nominal", cov.empirical >= cov.nominal,
                                      cov.empirical, cov.nominal));
    suite.pass = suite.checks.back().pass;
    suite.config = config;
    suite.result = std::move(result);
    return suite;
}

SuiteResult run_theorem2(const SuiteOptions& opts) {
    ExperimentConfig config;
    config.model = DistributionModel::exponential(1.0);
    config.n = opts.n ? opts.n : 10000;
    config.trials = opts.trials ? opts.trials : 500;
    config.seed = opts.seed;
    const auto default_omega = static_cast<std::size_t>(
        std::ceil(std::log(std::log(static_cast<double>(config.n)))));
    config.trim = opts.omega.value_or(default_omega);

    SuiteResult suite;
    suite.suite = "theorem2";
    ExperimentResult result = run_experiment(config, opts.workers);
    std::size_t order_violations = 0;
    for (const auto& rec : result.records)
        if (*rec.trimmed_sup_dev > rec.sup_dev) ++order_violations;
    suite.checks.push_back(make_check("trimmed sup <= full sup in every trial",
                                      order_violations == 0,
                                      static_cast<double>(order_violations), 0.0));
    const double trimmed_q90 = result.trimmed_deviation->q90;
    const double full_q90 = result.deviation.q90;
    std::ostringstream os;
    os << "trimmed q90 " << trimmed_q90 << " vs full q90 " << full_q90 << " (omega "
       << *config.trim << ")";
    suite.checks.push_back(
        make_check("trimmed 0.9-quantile < full 0.9-quantile", trimmed_q90 < full_q90,
                   trimmed_q90, full_q90, os.str()));
    suite.pass = suite.checks[0].pass && suite.checks[1].pass;
    suite.config = config;
    suite.result = std::move(result);
    return suite;
}

SuiteResult run_theorem4(const SuiteOptions& opts) {
    const DistributionModel model = DistributionModel::normal(0.0, 1.0);
    const double p = 2.0;
    std::vector<std::size_t> n_list{1000, 10000, 100000, 1000000};
    const std::size_t trials = opts.trials ? opts.trials : 200;
    const auto rows =
        rate_scaling_experiment(model, p, n_list, trials, opts.seed, opts.workers);

    SuiteResult suite;
    suite.suite = "theorem4";
    bool decreasing = true;
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double step = rows[i - 1].median_sup_dev - rows[i].median_sup_dev;
        min_step = std::min(min_step, step);
        decreasing = decreasing && step > 0.0;
    }
    double rmin = rows.front().ratio, rmax = rows.front().ratio;
    std::ostringstream table;
    for (const auto& row : rows) {
        rmin = std::min(rmin, row.ratio);
        rmax = std::max(rmax, row.ratio);
        table << " (n=" << row.n << " median=" << row.median_sup_dev << " ratio=" << row.ratio
              << ")";
    }
    suite.checks.push_back(make_check("median sup deviation strictly decreasing in n", decreasing,
                                      min_step, 0.0, "smallest decrement " + std::to_string(min_step) + ";" + table.str()));
    suite.checks.push_back(make_check("rate-normalized ratio spread <= 3", rmax / rmin <= 3.0,
                                      rmax / rmin, 3.0));
    suite.pass = suite.checks[0].pass && suite.checks[1].pass;
    return suite;
}

SuiteResult run_metric(const SuiteOptions& opts) {
    const std::size_t triples = opts.trials ? opts.trials : 100000;
    const double rel_tol = 1e-12;
    const std::vector<double> ps{1.0, 1.5, 2.0, 4.0};
    RandomStream stream(opts.seed);
    std::size_t symmetry_bad = 0, identity_bad = 0, positivity_bad = 0, triangle_bad = 0;
    for (std::size_t k = 0; k < triples; ++k) {
        const double x = stream.next_uniform();
        const double y = stream.next_uniform();
        const double z = stream.next_uniform();
        for (double p : ps) {
            const ThetaParams tp{p};
            const double dxy = theta_distance(tp, x, y);
            const double dyz = theta_distance(tp, y, z);
            const double dxz = theta_distance(tp, x, z);
            if (theta_distance(tp, y, x) != dxy) ++symmetry_bad;
            if (theta_distance(tp, x, x) != 0.0) ++identity_bad;
            if (x != y && !(dxy > 0.0)) ++positivity_bad;
            if (dxz > (dxy + dyz) * (1.0 + rel_tol)) ++triangle_bad;
            if (dxy > (dxz + dyz) * (1.0 + rel_tol)) ++triangle_bad;
            if (dyz > (dxy + dxz) * (1.0 + rel_tol)) ++triangle_bad;
        }
    }
    SuiteResult suite;
    suite.suite = "metric";
    suite.checks.push_back(
        make_check("symmetry violations", symmetry_bad == 0, static_cast<double>(symmetry_bad), 0.0));
    suite.checks.push_back(make_check("identity violations", identity_bad == 0,
                                      static_cast<double>(identity_bad), 0.0));
    suite.checks.push_back(make_check("positivity violations", positivity_bad == 0,
                                      static_cast<double>(positivity_bad), 0.0));
    suite.checks.push_back(make_check("triangle violations", triangle_bad == 0,
                                      static_cast<double>(triangle_bad), 0.0));
    suite.pass = std::all_of(suite.checks.begin(), suite.checks.end(),
                             [](const CheckResult& c) { return c.pass; });
    return suite;
}

SuiteResult run_sampler(const SuiteOptions& opts) {
    SuiteResult suite;
    suite.suite = "sampler";

    // Per-index Beta moments of the spacings sampler.
    const std::size_t n = opts.n ? opts.n : 1000;
    const std::size_t trials = opts.trials ? opts.trials : 20000;
    const std::vector<std::size_t> indices{1, n / 10, n / 2, n - n / 10, n};
    std::vector<double> sums(indices.size(), 0.0);
    std::vector<double> sample;
    for (std::size_t k = 0; k < trials; ++k) {
        RandomStream stream(SeedSpec{opts.seed.master_seed, opts.seed.trial_index + k});
        detail::sample_uniform_order_stats_into(n, stream, sample);
        for (std::size_t j = 0; j < indices.size(); ++j) sums[j] += sample[indices[j] - 1];
    }
    const double dn1 = static_cast<double>(n + 1);
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const double i = static_cast<double>(indices[j]);
        const double mean = sums[j] / static_cast<double>(trials);
        const double expect = i / dn1;
        const double var = i * (dn1 - i) / (dn1 * dn1 * (dn1 + 1.0));
        const double se = std::sqrt(var / static_cast<double>(trials));
        std::ostringstream os;
        os << "i=" << indices[j] << ": mean " << mean << ", expected " << expect << ", 4*SE "
           << 4.0 * se;
        suite.checks.push_back(make_check("beta moment at index " + std::to_string(indices[j]),
                                          std::abs(mean - expect) <= 4.0 * se,
                                          std::abs(mean - expect), 4.0 * se, os.str()));
    }

    // Marginal distribution at the midpoint: spacings sampler vs sort oracle.
    const std::size_t ks_n = 100;
    const std::size_t ks_trials = 10000;
    const auto uniform = DistributionModel::uniform01();
    std::vector<double> spacings_mid(ks_trials), oracle_mid(ks_trials);
    for (std::size_t k = 0; k < ks_trials; ++k) {
        RandomStream sa(SeedSpec{opts.seed.master_seed, opts.seed.trial_index + k});
        detail::sample_uniform_order_stats_into(ks_n, sa, sample);
        spacings_mid[k] = sample[ks_n / 2 - 1];
        RandomStream sb(SeedSpec{opts.seed.master_seed, opts.seed.trial_index + ks_trials + k});
        oracle_mid[k] = sort_oracle_sample(uniform, ks_n, sb).values[ks_n / 2 - 1];
    }
    const double d = ks_two_sample_statistic(spacings_mid, oracle_mid);
    const double crit = ks_two_sample_threshold(ks_trials, ks_trials, 0.001);
    suite.checks.push_back(make_check("two-sample KS spacings vs sort oracle at index n/2",
                                      d <= crit, d, crit));

    suite.pass = std::all_of(suite.checks.begin(), suite.checks.end(),
                             [](const CheckResult& c) { return c.pass; });
    return suite;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"lemma1", "lemma2", "theorem2", "theorem4", "metric", "sampler"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
    if (name == "lemma2") return run_lemma2(opts);
    if (name == "lemma1") return run_lemma1(opts);
    if (name == "theorem2") return run_theorem2(opts);
    if (name == "theorem4") return run_theorem4(opts);
    if (name == "metric") return run_metric(opts);
    if (name == "sampler") return run_sampler(opts);
    throw std::invalid_argument("unknown suite '" + name +
                                "' (expected lemma1|lemma2|theorem2|theorem4|metric|sampler)");
}

} // namespace ostat

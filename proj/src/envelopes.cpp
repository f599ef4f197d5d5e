#include "ostat/envelopes.hpp"

#include "ostat/montecarlo.hpp"
#include "ostat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double index_fraction(std::size_t i, std::size_t n) {
    return static_cast<double>(i) / static_cast<double>(n + 1);
}

} // namespace

std::string band_kind_name(BandKind kind) {
    switch (kind) {
        case BandKind::Ratio: return "ratio";
        case BandKind::Additive: return "additive";
        case BandKind::SupLogConcave: return "sup-logconcave";
        case BandKind::SupUniformWidth: return "sup-uniform";
    }
    return "?";
}

std::vector<double> reference_points(const DistributionModel& model, std::size_t n) {
    if (n == 0) throw std::domain_error("reference_points: n must be at least 1");
    std::vector<double> ref(n);
    for (std::size_t i = 1; i <= n; ++i) ref[i - 1] = model.quantile(index_fraction(i, n));
    return ref;
}

Envelope ratio_band(const DistributionModel& model, std::size_t n, double T) {
    if (!(T > 1.0)) throw std::domain_error("ratio_band: T must exceed 1");
    Envelope env;
    env.n = n;
    env.spec.kind = BandKind::Ratio;
    env.spec.T = T;
    env.reference = reference_points(model, n);
    env.lower.resize(n);
    env.upper.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double q = index_fraction(i, n);
        // Intersection of the two multiplicative constraints; always a
        // nonempty interior interval containing q.
        const double lo = std::max(q / T, 1.0 - (1.0 - q) * T);
        const double hi = std::min(q * T, 1.0 - (1.0 - q) / T);
        env.lower[i - 1] = model.quantile(lo);
        env.upper[i - 1] = model.quantile(hi);
    }
    env.nominal_coverage = std::max(0.0, 1.0 - 400.0 / std::sqrt(T));
    return env;
}

Envelope additive_band(const DistributionModel& model, std::size_t n, double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("additive_band: t must lie in (0,1)");
    Envelope env;
    env.n = n;
    env.spec.kind = BandKind::Additive;
    env.spec.t = t;
    env.reference = reference_points(model, n);
    env.lower.resize(n);
    env.upper.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double q = index_fraction(i, n);
        const double lo = q - t;
        const double hi = q + t;
        env.lower[i - 1] = lo > 0.0 ? model.quantile(lo) : -kInf;
        env.upper[i - 1] = hi < 1.0 ? model.quantile(hi) : kInf;
    }
    const double dn = static_cast<double>(n);
    env.nominal_coverage = std::max(0.0, 1.0 - 2.0 * std::exp(-dn * t * t / 5.0));
    return env;
}

double logconcave_rate(std::size_t n, double p) {
    if (n < 16) throw std::domain_error("logconcave_rate: n must be at least 16");
    if (!(p >= 1.0)) throw std::domain_error("logconcave_rate: p must be >= 1");
    const double ln = std::log(static_cast<double>(n));
    return std::log(ln) / std::pow(ln, 1.0 - 1.0 / p);
}

Envelope sup_band(const DistributionModel& model, std::size_t n, const BandSpec& spec) {
    Envelope env;
    env.n = n;
    env.spec = spec;
    env.reference = reference_points(model, n);
    double width = 0.0;
    if (spec.kind == BandKind::SupLogConcave) {
        if (!(spec.c > 0.0)) throw std::invalid_argument("sup_band: width constant c required");
        width = spec.c * logconcave_rate(n, spec.p);
        env.nominal_coverage = 0.0;
        if (spec.c_prob && spec.q_param) {
            const double fail = *spec.c_prob * std::pow(std::log(static_cast<double>(n)), -*spec.q_param);
            env.nominal_coverage = std::min(1.0, std::max(0.0, 1.0 - fail));
        }
    } else if (spec.kind == BandKind::SupUniformWidth) {
        if (!(spec.k > 0.0) || !(spec.T > 1.0))
            throw std::invalid_argument("sup_band: constants k and T > 1 required");
        width = spec.k * spec.T;
        env.nominal_coverage = std::max(0.0, 1.0 - 400.0 / std::sqrt(spec.T));
    } else {
        throw std::invalid_argument("sup_band: spec kind must be a sup band");
    }
    env.lower.resize(n);
    env.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        env.lower[i] = env.reference[i] - width;
        env.upper[i] = env.reference[i] + width;
    }
    return env;
}

Envelope make_band(const DistributionModel& model, std::size_t n, const BandSpec& spec) {
    switch (spec.kind) {
        case BandKind::Ratio: return ratio_band(model, n, spec.T);
        case BandKind::Additive: return additive_band(model, n, spec.t);
        case BandKind::SupLogConcave:
        case BandKind::SupUniformWidth: return sup_band(model, n, spec);
    }
    throw std::logic_error("unreachable");
}

double calibrate_constant(const DistributionModel& model, double p, std::size_t n_cal,
                          std::size_t trials, double target_quantile, SeedSpec seed,
                          int workers) {
    if (trials < 100) throw std::invalid_argument("calibrate_constant: need at least 100 trials");
    if (!(target_quantile >= 0.0 && target_quantile <= 1.0))
        throw std::domain_error("calibrate_constant: target_quantile must lie in [0,1]");
    ExperimentConfig config;
    config.model = model;
    config.n = n_cal;
    config.trials = trials;
    config.seed = seed;
    const ExperimentResult result = run_experiment(config, workers);
    std::vector<double> devs(result.records.size());
    for (std::size_t i = 0; i < devs.size(); ++i) devs[i] = result.records[i].sup_dev;
    std::sort(devs.begin(), devs.end());
    return empirical_quantile(devs, target_quantile) / logconcave_rate(n_cal, p);
}

} // namespace ostat

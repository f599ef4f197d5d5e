#pragma once

#include "ostat/distributions.hpp"
#include "ostat/random.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ostat {

enum class BandKind { Ratio, Additive, SupLogConcave, SupUniformWidth };

// Parameters of one envelope family. Only the fields relevant to `kind` are
// meaningful: Ratio uses T, Additive uses t, SupLogConcave uses p and c (and
// optionally c_prob/q_param for a nominal coverage), SupUniformWidth uses k
// and T.
struct BandSpec {
    BandKind kind = BandKind::Additive;
    double T = 0.0;
    double t = 0.0;
    double p = 0.0;
    double c = 0.0;
    double k = 0.0;
    std::optional<double> c_prob;
    std::optional<double> q_param;
};

std::string band_kind_name(BandKind kind);

// Per-index intervals [lower_i, upper_i] around the reference points
// x*_i = F^-1(i/(n+1)), with a nominal simultaneous coverage lower bound.
// Endpoints may be -inf/+inf where a uniform-space constraint is vacuous.
struct Envelope {
    std::size_t n = 0;
    std::vector<double> reference;
    std::vector<double> lower;
    std::vector<double> upper;
    double nominal_coverage = 0.0;
    BandSpec spec;
};

// x*_i = F^-1(i/(n+1)) for i = 1..n; strictly increasing.
std::vector<double> reference_points(const DistributionModel& model, std::size_t n);

// Multiplicative band: per index, the uniform-space intersection of
// [q/T, qT] and [1-(1-q)T, 1-(1-q)/T] at q = i/(n+1), mapped through the
// quantile. Nominal coverage max(0, 1 - 400/sqrt(T)); positive only for
// T > 160000, and the stated guarantee applies for T > 1e6.
Envelope ratio_band(const DistributionModel& model, std::size_t n, double T);

// Additive band: uniform-space [q-t, q+t] clipped to (0,1); clipped ends map
// to infinite data-space endpoints. Nominal coverage
// max(0, 1 - 2 exp(-n t^2 / 5)).
Envelope additive_band(const DistributionModel& model, std::size_t n, double t);

// log log n / (log n)^(1-1/p), natural logs. Requires n >= 16.
double logconcave_rate(std::size_t n, double p);

// Constant-width band: reference +- c * logconcave_rate(n,p) for
// SupLogConcave, or reference +- k*T for SupUniformWidth.
Envelope sup_band(const DistributionModel& model, std::size_t n, const BandSpec& spec);

// Builds any envelope from its spec.
Envelope make_band(const DistributionModel& model, std::size_t n, const BandSpec& spec);

// Monte Carlo calibration standing in for the existential width constant:
// runs a sup-deviation experiment at n_cal and returns the target_quantile
// empirical quantile divided by logconcave_rate(n_cal, p). Deterministic
// given the seed. Requires trials >= 100.
double calibrate_constant(const DistributionModel& model, double p, std::size_t n_cal,
                          std::size_t trials, double target_quantile, SeedSpec seed,
                          int workers = 0);

} // namespace ostat

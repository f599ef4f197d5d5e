#pragma once

#include "ostat/distributions.hpp"
#include "ostat/random.hpp"

#include <cstddef>
#include <vector>

namespace ostat {

// A nondecreasing sample x_(1) <= ... <= x_(n).
struct SortedSample {
    std::vector<double> values;
    std::size_t size() const { return values.size(); }
};

// Uniform order statistics in one O(n) pass, no sorting: n+1 standard
// exponential spacings z_j, normalized running sums y_i = S_i / S_{n+1}.
// The vector (y_1,...,y_n) has the distribution of sorted i.i.d. uniforms.
// Values are clamped into the open interval (0,1) against the measure-zero
// rounding event where a normalized sum lands exactly on an endpoint.
SortedSample sample_uniform_order_stats(std::size_t n, RandomStream& stream);

// Sorted sample from an arbitrary model: uniform order statistics mapped
// through the (increasing) quantile function.
SortedSample sample_order_stats(const DistributionModel& model, std::size_t n,
                                RandomStream& stream);

// Naive comparison sampler: n independent draws by inversion, then sort.
// Same distribution as sample_order_stats; used as a test oracle.
SortedSample sort_oracle_sample(const DistributionModel& model, std::size_t n,
                                RandomStream& stream);

// Fraction of sample values <= t (binary search; right-continuous in t).
double empirical_cdf_at(const SortedSample& sample, double t);

namespace detail {

// In-place variants used by the Monte Carlo loops to reuse buffers.
void sample_uniform_order_stats_into(std::size_t n, RandomStream& stream,
                                     std::vector<double>& out);
void sample_order_stats_into(const DistributionModel& model, std::size_t n,
                             RandomStream& stream, std::vector<double>& out);

// Clamp a probability to the interior of (0,1).
double clamp_unit_open(double u);

} // namespace detail

} // namespace ostat

#include "ostat/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ostat {

namespace detail {

double clamp_unit_open(double u) {
    constexpr double lo = 0x1p-1074;            // smallest positive double
    constexpr double hi = 1.0 - 0x1p-53;        // largest double below 1
    return std::min(hi, std::max(lo, u));
}

void sample_uniform_order_stats_into(std::size_t n, RandomStream& stream,
                                     std::vector<double>& out) {
    if (n == 0) throw std::domain_error("sample size must be at least 1");
    out.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += stream.next_exponential();
        out[i] = sum;
    }
    sum += stream.next_exponential();
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < n; ++i) out[i] = clamp_unit_open(out[i] * inv);
}

void sample_order_stats_into(const DistributionModel& model, std::size_t n,
                             RandomStream& stream, std::vector<double>& out) {
    sample_uniform_order_stats_into(n, stream, out);
    if (model.family() == Family::Uniform01) return;
    for (double& v : out) v = model.quantile(v);
}

} // namespace detail

SortedSample sample_uniform_order_stats(std::size_t n, RandomStream& stream) {
    SortedSample s;
    detail::sample_uniform_order_stats_into(n, stream, s.values);
    return s;
}

SortedSample sample_order_stats(const DistributionModel& model, std::size_t n,
                                RandomStream& stream) {
    SortedSample s;
    detail::sample_order_stats_into(model, n, stream, s.values);
    return s;
}

SortedSample sort_oracle_sample(const DistributionModel& model, std::size_t n,
                                RandomStream& stream) {
    if (n == 0) throw std::domain_error("sample size must be at least 1");
    SortedSample s;
    s.values.resize(n);
    for (double& v : s.values) v = model.quantile(stream.next_uniform());
    std::sort(s.values.begin(), s.values.end());
    return s;
}

double empirical_cdf_at(const SortedSample& sample, double t) {
    if (sample.values.empty()) throw std::domain_error("empirical_cdf_at: empty sample");
    const auto it = std::upper_bound(sample.values.begin(), sample.values.end(), t);
    return static_cast<double>(it - sample.values.begin()) /
           static_cast<double>(sample.values.size());
}

} // namespace ostat

#include "ostat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ostat {

std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    if (hits > trials) throw std::invalid_argument("wilson_interval: hits > trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double empirical_quantile(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty data");
    if (!(level >= 0.0 && level <= 1.0))
        throw std::domain_error("empirical_quantile: level must lie in [0,1]");
    const double m = static_cast<double>(sorted.size());
    auto rank = static_cast<long long>(std::ceil(level * m)) - 1;
    rank = std::max<long long>(0, std::min<long long>(rank, static_cast<long long>(sorted.size()) - 1));
    return sorted[static_cast<std::size_t>(rank)];
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample_threshold(std::size_t m, std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ks threshold: alpha in (0,1)");
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    return c * std::sqrt((dm + dn) / (dm * dn));
}

} // namespace ostat

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ostat {

// Wilson score interval for a binomial proportion. Stable near 0 and 1,
// unlike the Wald interval. z defaults to the 99% two-sided normal quantile.
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials,
                                          double z = 2.5758293035489004);

// Nearest-rank empirical quantile: the ceil(level*m)-th smallest value,
// clamped to the ends, so level 0 is the minimum and level 1 the maximum.
// `sorted` must be nondecreasing and nonempty.
double empirical_quantile(const std::vector<double>& sorted, double level);

// Two-sample Kolmogorov-Smirnov statistic sup_t |F1n(t) - F2n(t)|.
// Inputs need not be sorted.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample KS rejection threshold at significance alpha:
// c(alpha) * sqrt((m+n)/(m*n)) with c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_two_sample_threshold(std::size_t m, std::size_t n, double alpha);

} // namespace ostat

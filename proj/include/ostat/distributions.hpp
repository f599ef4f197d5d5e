#pragma once

#include <string>

namespace ostat {

enum class Family { Uniform01, Normal, Exponential, Laplace, GenExp };

// Tail regime of a distribution. SuperExponential means the survival ratio
// (1-F(t+eps))/(1-F(t)) vanishes as t grows (and symmetrically on the left);
// ExponentialTail means the lim sup of that ratio stays below 1. The first
// class is contained in the second.
enum class TailClass { SuperExponential, ExponentialTail };

// One member of a fixed set of distribution families, exposing numerically
// reliable cdf / quantile / log-density evaluation. Instances are immutable
// after construction and safe to share across threads; all operations are
// pure.
//
// p_index is the light-tail exponent: the density has the shape
// c * exp(-g(x)^p) with g nonnegative convex. Normal has p = 2,
// Exponential and Laplace have p = 1, GenExp(p) has p, and Uniform01 is
// assigned +infinity (its tails are lighter than any such class).
class DistributionModel {
public:
    static DistributionModel uniform01();
    static DistributionModel normal(double mean, double sd);
    static DistributionModel exponential(double rate);
    static DistributionModel laplace(double loc, double scale);
    // Density proportional to exp(-|x|^p), p >= 1. Normalizer computed once
    // by quadrature at construction.
    static DistributionModel gen_exp(double p);

    Family family() const { return family_; }
    double p_index() const { return p_index_; }

    // First/second family parameter (mean/sd, rate/-, loc/scale, p/-).
    double param1() const { return a_; }
    double param2() const { return b_; }

    // Short printable spec, e.g. "normal(0,1)".
    std::string name() const;

    double cdf(double x) const;

    // Inverse cdf on (0,1). Throws std::domain_error outside (0,1).
    double quantile(double u) const;

    double log_density(double x) const;

    // log(1 - F(x)), evaluated in log space so it stays finite far into the
    // right tail where the survival probability underflows double precision.
    double log_survival(double x) const;

    TailClass tail_class() const;

private:
    DistributionModel(Family f, double a, double b, double p_index)
        : family_(f), a_(a), b_(b), p_index_(p_index) {}

    Family family_;
    double a_ = 0.0;
    double b_ = 0.0;
    double p_index_ = 1.0;
    double log_norm_ = 0.0;      // GenExp: log of the density normalizer
    double half_mass_ = 0.0;     // GenExp: integral of exp(-s^p) over [0,inf)
};

// Tail classification per family (analytic table; see tests for the
// numerical ratio guard).
TailClass classify_tail(const DistributionModel& model);

} // namespace ostat

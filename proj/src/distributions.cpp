#include "ostat/distributions.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ostat {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(what) + " must be finite");
}

// ---- standard normal ----------------------------------------------------

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

// Lower-tail inverse normal cdf for u in (0, 0.5] via the Acklam rational
// approximation (|error| < 1.2e-9 over the full double range), tightened by
// one Halley step against the erfc-based cdf. The step is skipped when the
// intermediate exponential would overflow (u below roughly 1e-305).
double norm_quantile_lower(double u) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (u < p_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    const double f = norm_cdf(x);
    if (f > 0.0 && 0.5 * x * x < 700.0) {
        const double e = f - u;
        const double w = e * std::exp(0.5 * x * x + kLogSqrt2Pi);
        x -= w / (1.0 + 0.5 * x * w);
    }
    return x;
}

// Asymptotic expansion of log(1 - Phi(z)) for large z (Mills ratio series);
// used where erfc underflows.
double norm_log_survival(double z) {
    if (z <= 30.0) return std::log(0.5 * std::erfc(z / kSqrt2));
    const double z2 = z * z;
    const double series = -1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
                          105.0 / (z2 * z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - kLogSqrt2Pi + std::log1p(series);
}

// ---- GenExp tail integrals ----------------------------------------------

// (t+s)^p - t^p without cancellation for t >> s.
double pow_gap(double t, double s, double p) {
    if (t <= 0.0) return std::pow(s, p);
    return std::pow(t, p) * std::expm1(p * std::log1p(s / t));
}

// integral of exp(-s^p) over [t, inf), t >= 0.
double genexp_tail_integral(double t, double p) {
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    const double tp = (t > 0.0) ? std::pow(t, p) : 0.0;
    if (tp > 700.0) return 0.0;  // underflows; callers use the log form instead
    auto f = [&](double s) { return std::exp(-tp - pow_gap(t, s, p)); };
    return integrator.integrate(f, 1e-14);
}

// log of the same integral, stable for arbitrarily deep t.
double genexp_log_tail_integral(double t, double p) {
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    const double tp = (t > 0.0) ? std::pow(t, p) : 0.0;
    auto f = [&](double s) { return std::exp(-pow_gap(t, s, p)); };
    return -tp + std::log(integrator.integrate(f, 1e-14));
}

} // namespace

DistributionModel DistributionModel::uniform01() {
    return DistributionModel(Family::Uniform01, 0.0, 1.0, kInf);
}

DistributionModel DistributionModel::normal(double mean, double sd) {
    require_finite(mean, "mean");
    if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("normal: sd must be positive");
    return DistributionModel(Family::Normal, mean, sd, 2.0);
}

DistributionModel DistributionModel::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential: rate must be positive");
    return DistributionModel(Family::Exponential, rate, 0.0, 1.0);
}

DistributionModel DistributionModel::laplace(double loc, double scale) {
    require_finite(loc, "loc");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("laplace: scale must be positive");
    return DistributionModel(Family::Laplace, loc, scale, 1.0);
}

DistributionModel DistributionModel::gen_exp(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("gen_exp: p must be >= 1");
    DistributionModel m(Family::GenExp, p, 0.0, p);
    m.half_mass_ = genexp_tail_integral(0.0, p);
    m.log_norm_ = -std::log(2.0 * m.half_mass_);
    return m;
}

std::string DistributionModel::name() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Uniform01: os << "uniform01"; break;
        case Family::Normal: os << "normal(" << a_ << "," << b_ << ")"; break;
        case Family::Exponential: os << "exponential(" << a_ << ")"; break;
        case Family::Laplace: os << "laplace(" << a_ << "," << b_ << ")"; break;
        case Family::GenExp: os << "genexp(" << a_ << ")"; break;
    }
    return os.str();
}

double DistributionModel::cdf(double x) const {
    require_finite(x, "cdf argument");
    switch (family_) {
        case Family::Uniform01:
            return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
        case Family::Normal:
            return norm_cdf((x - a_) / b_);
        case Family::Exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
        case Family::Laplace: {
            const double z = (x - a_) / b_;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        }
        case Family::GenExp: {
            const double c = std::exp(log_norm_);
            if (x >= 0.0) return 1.0 - c * genexp_tail_integral(x, a_);
            return c * genexp_tail_integral(-x, a_);
        }
    }
    throw std::logic_error("unreachable");
}

double DistributionModel::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile argument must lie in (0,1)");
    switch (family_) {
        case Family::Uniform01:
            return u;
        case Family::Normal:
            return u <= 0.5 ? a_ + b_ * norm_quantile_lower(u)
                            : a_ - b_ * norm_quantile_lower(1.0 - u);
        case Family::Exponential:
            return -std::log1p(-u) / a_;
        case Family::Laplace:
            return u < 0.5 ? a_ + b_ * std::log(2.0 * u) : a_ - b_ * std::log(2.0 * (1.0 - u));
        case Family::GenExp: {
            const double p = a_;
            const double v = std::min(u, 1.0 - u);
            double t;
            if (v < 1e-14) {
                // Deep tail: invert the one-term tail estimate
                // c * exp(-t^p) / (p t^(p-1)) by fixed-point iteration, so no
                // quadrature is evaluated where it would underflow.
                const double target = -std::log(v) + log_norm_ - std::log(p);
                t = std::pow(-std::log(v), 1.0 / p);
                for (int i = 0; i < 64; ++i) {
                    const double next = std::pow(target - (p - 1.0) * std::log(t), 1.0 / p);
                    if (std::abs(next - t) <= 1e-13 * t) { t = next; break; }
                    t = next;
                }
            } else {
                // Bracketed Newton on the tail mass c * I(t) - v, run to
                // relative accuracy in v or to an x-converged step.
                const double c = std::exp(log_norm_);
                double lo = 0.0, hi = 1.0;
                while (c * genexp_tail_integral(hi, p) > v) hi *= 2.0;
                t = 0.5 * (lo + hi);
                for (int i = 0; i < 200; ++i) {
                    const double err = c * genexp_tail_integral(t, p) - v;
                    if (std::abs(err) <= 1e-12 * v) break;
                    if (err > 0.0) lo = t; else hi = t;
                    const double dens = std::exp(log_norm_ - std::pow(t, p));
                    double next = t + err / dens;
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    if (std::abs(next - t) <= 4e-16 * std::max(t, 1.0)) { t = next; break; }
                    t = next;
                }
            }
            return u < 0.5 ? -t : t;
        }
    }
    throw std::logic_error("unreachable");
}

double DistributionModel::log_density(double x) const {
    require_finite(x, "log_density argument");
    switch (family_) {
        case Family::Uniform01:
            return (x >= 0.0 && x <= 1.0) ? 0.0 : -kInf;
        case Family::Normal: {
            const double z = (x - a_) / b_;
            return -0.5 * z * z - kLogSqrt2Pi - std::log(b_);
        }
        case Family::Exponential:
            return x < 0.0 ? -kInf : std::log(a_) - a_ * x;
        case Family::Laplace:
            return -std::abs(x - a_) / b_ - std::log(2.0 * b_);
        case Family::GenExp:
            return log_norm_ - std::pow(std::abs(x), a_);
    }
    throw std::logic_error("unreachable");
}

double DistributionModel::log_survival(double x) const {
    require_finite(x, "log_survival argument");
    switch (family_) {
        case Family::Uniform01:
            if (x < 0.0) return 0.0;
            if (x >= 1.0) return -kInf;
            return std::log1p(-x);
        case Family::Normal: {
            const double z = (x - a_) / b_;
            if (z <= 8.0) return std::log1p(-norm_cdf(z));
            return norm_log_survival(z);
        }
        case Family::Exponential:
            return x <= 0.0 ? 0.0 : -a_ * x;
        case Family::Laplace: {
            const double z = (x - a_) / b_;
            return z >= 0.0 ? std::log(0.5) - z : std::log1p(-0.5 * std::exp(z));
        }
        case Family::GenExp: {
            if (x <= 0.0) {
                const double c = std::exp(log_norm_);
                return std::log1p(-c * genexp_tail_integral(-x, a_));
            }
            return log_norm_ + genexp_log_tail_integral(x, a_);
        }
    }
    throw std::logic_error("unreachable");
}

TailClass DistributionModel::tail_class() const {
    switch (family_) {
        case Family::Uniform01:
            return TailClass::SuperExponential;  // bounded support
        case Family::Normal:
            return TailClass::SuperExponential;
        case Family::Exponential:
        case Family::Laplace:
            return TailClass::ExponentialTail;
        case Family::GenExp:
            return a_ > 1.0 ? TailClass::SuperExponential : TailClass::ExponentialTail;
    }
    throw std::logic_error("unreachable");
}

TailClass classify_tail(const DistributionModel& model) {
    return model.tail_class();
}

} // namespace ostat

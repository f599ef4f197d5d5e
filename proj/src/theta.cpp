#include "ostat/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ostat {

namespace {

void require_unit_open(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw std::domain_error(std::string(what) + " must lie in (0,1)");
}

void require_p_log_concave(const DistributionModel& model, double p) {
    if (!(p >= 1.0)) throw std::domain_error("theta exponent p must be >= 1");
    if (model.p_index() < p) {
        std::ostringstream os;
        os << model.name() << " is not " << p << "-log-concave (p_index " << model.p_index() << ")";
        throw std::invalid_argument(os.str());
    }
}

std::vector<double> quantiles_at(const DistributionModel& model, const std::vector<double>& pts) {
    std::vector<double> q(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) q[i] = model.quantile(pts[i]);
    return q;
}

} // namespace

double theta_distance(ThetaParams params, double x, double y) {
    if (!(params.p >= 1.0)) throw std::domain_error("theta exponent p must be >= 1");
    require_unit_open(x, "theta argument x");
    require_unit_open(y, "theta argument y");
    if (x > y) std::swap(x, y);
    const double e = 1.0 - 1.0 / params.p;
    const double left = std::log(y / x) / std::pow(-std::log(x), e);
    const double right = std::log((1.0 - x) / (1.0 - y)) / std::pow(-std::log1p(-y), e);
    return std::max(left, right);
}

PointGrid default_point_grid(int tail_count, int central_count, double floor_u) {
    if (tail_count < 2 || central_count < 1) throw std::invalid_argument("grid too small");
    if (!(floor_u > 0.0 && floor_u < 0.25)) throw std::invalid_argument("floor_u must lie in (0, 0.25)");
    PointGrid g;
    const double lo = std::log(floor_u), hi = std::log(0.25);
    for (int k = 0; k < tail_count; ++k) {
        const double u = (k == tail_count - 1)
                             ? 0.25
                             : std::exp(lo + (hi - lo) * k / (tail_count - 1));
        g.points.push_back(u);
    }
    for (int k = 1; k <= central_count; ++k)
        g.points.push_back(0.25 + 0.5 * k / (central_count + 1));
    const std::size_t m = g.points.size();
    for (std::size_t i = 0; i < m; ++i) g.points.push_back(1.0 - g.points[m - 1 - i]);
    std::sort(g.points.begin(), g.points.end());
    // Mirroring can land within an ulp of an existing central point; such
    // twin pairs measure quantile rounding noise, not a ratio, so collapse
    // them.
    g.points.erase(std::unique(g.points.begin(), g.points.end(),
                               [](double a, double b) { return std::abs(b - a) < 1e-13; }),
                   g.points.end());
    std::ostringstream os;
    os << tail_count << " log-spaced per tail down to " << floor_u << " + "
       << central_count << " central";
    g.spec = os.str();
    return g;
}

PairGrid all_pairs(const PointGrid& grid) {
    PairGrid p;
    p.points = grid.points;
    const auto m = static_cast<std::uint32_t>(p.points.size());
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = i + 1; j < m; ++j) p.pairs.emplace_back(i, j);
    p.spec = "all pairs of {" + grid.spec + "}";
    return p;
}

PairGrid same_tail_pairs(int tail_count, double floor_u) {
    if (tail_count < 2) throw std::invalid_argument("grid too small");
    std::vector<double> left;
    const double lo = std::log(floor_u), hi = std::log(0.25);
    for (int k = 0; k < tail_count; ++k) {
        const double u = (k == tail_count - 1)
                             ? 0.25
                             : std::exp(lo + (hi - lo) * k / (tail_count - 1));
        left.push_back(u);
        // Near-diagonal companion just below each point; the local ratio
        // peaks at the 0.25 block boundary, so companions must not spill
        // past it.
        const double companion = u / 1.001;
        if (companion >= floor_u) left.push_back(companion);
    }
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());

    PairGrid g;
    g.points = left;
    for (std::size_t i = 0; i < left.size(); ++i) g.points.push_back(1.0 - left[left.size() - 1 - i]);
    const auto m = static_cast<std::uint32_t>(left.size());
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = i + 1; j < m; ++j) {
            g.pairs.emplace_back(i, j);          // left tail block
            g.pairs.emplace_back(m + i, m + j);  // mirrored right tail block
        }
    std::ostringstream os;
    os << "same-tail pairs, " << tail_count << " log-spaced per tail down to " << floor_u
       << " with x1.001 companions";
    g.spec = os.str();
    return g;
}

ModulusEstimate lipschitz_modulus(const DistributionModel& model, ThetaParams params,
                                  const PairGrid& grid) {
    require_p_log_concave(model, params.p);
    const auto q = quantiles_at(model, grid.points);
    double sup = 0.0;
    for (const auto& [i, j] : grid.pairs) {
        const double th = theta_distance(params, grid.points[i], grid.points[j]);
        if (th == 0.0) continue;
        sup = std::max(sup, std::abs(q[j] - q[i]) / th);
    }
    return {ModulusKind::Lipschitz, sup, grid.spec, {}};
}

ModulusEstimate lipschitz_modulus(const DistributionModel& model, ThetaParams params) {
    return lipschitz_modulus(model, params, all_pairs(default_point_grid()));
}

ModulusEstimate continuity_table(const DistributionModel& model,
                                 const std::vector<double>& deltas, const PairGrid& grid) {
    classify_tail(model);  // every supported family satisfies the tail hypotheses
    const auto q = quantiles_at(model, grid.points);
    std::vector<double> th(grid.pairs.size()), gap(grid.pairs.size());
    double th_max = 0.0;
    for (std::size_t k = 0; k < grid.pairs.size(); ++k) {
        const auto& [i, j] = grid.pairs[k];
        th[k] = theta_distance({1.0}, grid.points[i], grid.points[j]);
        gap[k] = std::abs(q[j] - q[i]);
        th_max = std::max(th_max, th[k]);
    }
    auto admissible = [&](double eps, double delta) {
        for (std::size_t k = 0; k < th.size(); ++k)
            if (th[k] <= eps && gap[k] > delta) return false;
        return true;
    };
    ModulusEstimate est;
    est.kind = ModulusKind::UniformContinuityTable;
    est.grid_spec = grid.spec;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw std::domain_error("continuity_table: delta must be positive");
        double lo = 0.0, hi = th_max + 1.0;
        if (admissible(hi, delta)) {
            lo = hi;
        } else {
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (admissible(mid, delta) ? lo : hi) = mid;
            }
        }
        const double T = std::exp(lo);
        est.table.emplace_back(delta, T);
        if (lo > 0.0) est.constant = std::max(est.constant, delta / lo);
    }
    return est;
}

ModulusEstimate continuity_table(const DistributionModel& model,
                                 const std::vector<double>& deltas) {
    return continuity_table(model, deltas, all_pairs(default_point_grid(512, 257)));
}

namespace {

// Right-hand bracket of the two-sided quantile gap bound, without the
// leading constant.
double gap_bound_bracket(double x, double y, double qx, double qy) {
    const double left = std::abs(qy) * std::log(y / x) / (-std::log(y));
    const double right = std::abs(qx) * std::log((1.0 - x) / (1.0 - y)) / (-std::log1p(-x));
    return std::max(left, right);
}

} // namespace

BoundCheck check_quantile_gap_bound(const DistributionModel& model, const PairGrid& grid) {
    require_p_log_concave(model, 1.0);
    const auto q = quantiles_at(model, grid.points);
    BoundCheck out;
    out.grid_spec = grid.spec;
    out.argmax_y = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [i, j] : grid.pairs) {
        const double x = grid.points[i], y = grid.points[j];
        const double rhs = gap_bound_bracket(x, y, q[i], q[j]);
        if (rhs <= 0.0) continue;
        const double ratio = std::abs(q[j] - q[i]) / rhs;
        if (ratio > out.c) {
            out.c = ratio;
            out.argmax_x = x;
            out.argmax_y = y;
        }
    }
    return out;
}

BoundCheck check_quantile_gap_bound(const DistributionModel& model) {
    return check_quantile_gap_bound(model, same_tail_pairs());
}

std::vector<std::pair<double, double>> gap_bound_violations(const DistributionModel& model,
                                                            const PairGrid& grid, double c) {
    const auto q = quantiles_at(model, grid.points);
    std::vector<std::pair<double, double>> bad;
    for (const auto& [i, j] : grid.pairs) {
        const double rhs = gap_bound_bracket(grid.points[i], grid.points[j], q[i], q[j]);
        if (rhs <= 0.0) continue;
        if (std::abs(q[j] - q[i]) > c * rhs) bad.emplace_back(grid.points[i], grid.points[j]);
    }
    return bad;
}

BoundCheck check_quantile_tail_bound(const DistributionModel& model, double p,
                                     const PointGrid& grid) {
    require_p_log_concave(model, p);
    BoundCheck out;
    out.grid_spec = grid.spec;
    out.argmax_y = std::numeric_limits<double>::quiet_NaN();
    for (double x : grid.points) {
        const double denom = std::max(std::pow(-std::log(x), 1.0 / p),
                                      std::pow(-std::log1p(-x), 1.0 / p));
        const double ratio = std::abs(model.quantile(x)) / denom;
        if (ratio > out.c) {
            out.c = ratio;
            out.argmax_x = x;
        }
    }
    return out;
}

BoundCheck check_quantile_tail_bound(const DistributionModel& model, double p) {
    return check_quantile_tail_bound(model, p, default_point_grid());
}

BoundCheck check_central_lipschitz(const DistributionModel& model, double epsilon,
                                   int intervals) {
    require_p_log_concave(model, 1.0);
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::domain_error("check_central_lipschitz: epsilon must lie in (0, 1/2)");
    if (intervals < 1) throw std::invalid_argument("check_central_lipschitz: intervals < 1");
    const double width = 1.0 - 2.0 * epsilon;
    double prev_u = epsilon, prev_q = model.quantile(epsilon);
    BoundCheck out;
    std::ostringstream os;
    os << "adjacent quotients, " << intervals << " uniform cells on [" << epsilon << ", "
       << 1.0 - epsilon << "]";
    out.grid_spec = os.str();
    double max_slope = 0.0;
    for (int k = 1; k <= intervals; ++k) {
        const double u = (k == intervals) ? 1.0 - epsilon : epsilon + width * k / intervals;
        const double q = model.quantile(u);
        const double slope = (q - prev_q) / (u - prev_u);
        if (slope > max_slope) {
            max_slope = slope;
            out.argmax_x = prev_u;
            out.argmax_y = u;
        }
        prev_u = u;
        prev_q = q;
    }
    out.c = epsilon * max_slope;
    return out;
}

} // namespace ostat

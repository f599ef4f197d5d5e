#pragma once

#include "ostat/distributions.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ostat {

// Exponent of the theta_p tail metric on (0,1), defined for p >= 1.
struct ThetaParams {
    double p = 1.0;
};

// theta_p(x,y) for unordered x, y in (0,1):
//   max{ log(y/x) / (log 1/x)^(1-1/p),
//        log((1-x)/(1-y)) / (log 1/(1-y))^(1-1/p) }   with x <= y.
// Symmetric, zero iff x == y, and a metric (it is decreasing in x and
// increasing in y over {x < y}, which yields the triangle inequality).
double theta_distance(ThetaParams params, double x, double y);

// Evaluation grids. Points live in (0,1); pairs index into `points`.
struct PointGrid {
    std::vector<double> points;
    std::string spec;
};

struct PairGrid {
    std::vector<double> points;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::string spec;
};

// Log-spaced tail points down to floor_u on both sides of (0,1) plus a
// uniform central block. The 1e-12 floor is the verification horizon:
// probabilities much below it are not meaningfully representable in doubles
// without a dedicated tail parametrization.
PointGrid default_point_grid(int tail_count = 64, int central_count = 64,
                             double floor_u = 1e-12);

// All unordered pairs of a point grid.
PairGrid all_pairs(const PointGrid& grid);

// Pairs confined to one tail at a time (both points <= 0.25, or both
// >= 0.75), augmented with near-diagonal companions so the supremum picks up
// the local slope and not only wide gaps.
PairGrid same_tail_pairs(int tail_count = 64, double floor_u = 1e-12);

enum class ModulusKind { Lipschitz, UniformContinuityTable };

struct ModulusEstimate {
    ModulusKind kind = ModulusKind::Lipschitz;
    double constant = 0.0;  // supremum-style estimate; nondecreasing under refinement
    std::string grid_spec;
    // For UniformContinuityTable: rows (delta, T) such that every grid pair
    // with theta_1 <= log T has quantile gap <= delta.
    std::vector<std::pair<double, double>> table;
};

// Grid supremum of |F^-1(x) - F^-1(y)| / theta_p(x,y). Requires
// model.p_index() >= params.p (the Lipschitz property needs that much
// log-concavity).
ModulusEstimate lipschitz_modulus(const DistributionModel& model, ThetaParams params,
                                  const PairGrid& grid);
ModulusEstimate lipschitz_modulus(const DistributionModel& model, ThetaParams params);

// For each delta, bisects for the largest T > 1 such that all grid pairs
// within theta_1 distance log T have quantile gap at most delta. Requires a
// model whose tails are at least ExponentialTail class. The returned
// `constant` is max delta / log T over the rows.
ModulusEstimate continuity_table(const DistributionModel& model,
                                 const std::vector<double>& deltas,
                                 const PairGrid& grid);
ModulusEstimate continuity_table(const DistributionModel& model,
                                 const std::vector<double>& deltas);

// A calibrated constant c together with the grid pair (or point) realizing
// it. `violations` holds grid entries whose ratio exceeds c; by construction
// it is empty for the c returned by the check_* calibrations.
struct BoundCheck {
    double c = 0.0;
    double argmax_x = 0.0;
    double argmax_y = 0.0;  // NaN for point-grid checks
    std::string grid_spec;
    std::vector<std::pair<double, double>> violations;
};

// Smallest c such that for every grid pair x < y,
//   |F^-1(y) - F^-1(x)| <= c * max{ |F^-1(y)| log(y/x) / log(1/y),
//                                   |F^-1(x)| log((1-x)/(1-y)) / log(1/(1-x)) }.
// Pairs where the bracket vanishes are skipped. Requires a log-concave model
// (p_index >= 1). The default grid keeps both points in the same tail; see
// same_tail_pairs.
BoundCheck check_quantile_gap_bound(const DistributionModel& model, const PairGrid& grid);
BoundCheck check_quantile_gap_bound(const DistributionModel& model);

// Smallest c with |F^-1(x)| <= c * max{(log 1/x)^(1/p), (log 1/(1-x))^(1/p)}
// over a point grid. Requires model.p_index() >= p.
BoundCheck check_quantile_tail_bound(const DistributionModel& model, double p,
                                     const PointGrid& grid);
BoundCheck check_quantile_tail_bound(const DistributionModel& model, double p);

// Smallest c = epsilon * sup |F^-1(x)-F^-1(y)|/|x-y| over [epsilon, 1-epsilon],
// estimated from adjacent quotients of a uniform grid with `intervals` cells.
BoundCheck check_central_lipschitz(const DistributionModel& model, double epsilon,
                                   int intervals = 2048);

// Re-evaluates a calibrated bound at level c and returns the offending pairs
// (empty when c is at or above the grid supremum).
std::vector<std::pair<double, double>> gap_bound_violations(const DistributionModel& model,
                                                            const PairGrid& grid, double c);

} // namespace ostat

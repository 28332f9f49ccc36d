#pragma once

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/types.hpp"

#include <limits>
#include <string>
#include <vector>

namespace cocycle {

/// Uniform grid on the box [lo, hi]^n, points_per_axis per coordinate.
struct GridSpec {
    Vec lo;
    Vec hi;
    int points_per_axis = 11;
};

std::vector<Vec> make_grid(const GridSpec& spec);

/// One sampled fiber of the pullback attractor estimate.
struct FiberSet {
    BasePoint y;
    std::vector<Vec> points;  // pairwise distinct beyond merge_tol
    long horizon = 0;         // largest pullback horizon used
    double cauchy_residual = std::numeric_limits<double>::quiet_NaN();
    double merge_tol = 1e-6;

    double diameter() const;
};

struct AttractorEstimate {
    std::vector<FiberSet> fibers;  // fiber j sits over sigma(j, y0)
    std::vector<Vec> union_cloud;
    double radius_bound = std::numeric_limits<double>::quiet_NaN();
};

/// sup over a in A of dist(a, B); asymmetric. Throws DomainError on empty sets.
double hausdorff_semidist(const std::vector<Vec>& A, const std::vector<Vec>& B);

/// Verdict-carrying radius estimate. When the overflow guard trips the probe
/// reports NOT-DISSIPATIVE with the witness state instead of a radius.
struct DissipativityReport {
    bool dissipative = true;
    double radius = std::numeric_limits<double>::quiet_NaN();
    long fail_time = -1;
    Vec fail_u;
    Vec fail_y;
    std::string note;
};

/// Max of |phi(t, u, y)| over burn_in <= t <= horizon, sampled base points and
/// initial states on the boxes [-r, r]^n for each r in init_radii, plus a 10%
/// margin.
DissipativityReport dissipativity_probe(const CocycleDef& c, const BaseFlow& flow,
                                        const std::vector<BasePoint>& fiber_samples,
                                        const std::vector<double>& init_radii,
                                        long horizon, long burn_in);

/// Pullback estimate of the omega-limit of the grid over y: the cloud
/// phi(T, K, sigma(-T, y)) at the largest horizon, merged within merge_tol,
/// with the Cauchy residual between the last two horizons.
FiberSet pullback_omega(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y,
                        const GridSpec& grid, const std::vector<long>& horizons,
                        double merge_tol);

/// Fibers over sigma(j, y0), j = 0..fiber_count-1, assembled in fiber order.
/// An overflow in fiber j surfaces as OverflowError naming the fiber.
AttractorEstimate levinson_center(const CocycleDef& c, const BaseFlow& flow,
                                  const BasePoint& y0, int fiber_count,
                                  const GridSpec& grid, const std::vector<long>& horizons,
                                  double merge_tol);

/// Residuals of phi(1, I_y, y) = I_{sigma(1,y)} for every sampled adjacent
/// fiber pair; both semi-distances are reported.
struct InvarianceReport {
    struct Pair {
        int from_fiber;
        int to_fiber;
        double forward;   // beta(phi(1, fiber_from), fiber_to)
        double backward;  // beta(fiber_to, phi(1, fiber_from))
    };
    std::vector<Pair> pairs;
    double max_residual = 0.0;
};

InvarianceReport check_invariance(const AttractorEstimate& est, const CocycleDef& c,
                                  const BaseFlow& flow);

}  // namespace cocycle

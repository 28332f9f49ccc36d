#include "cocycle/attractor.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

namespace {

/// Greedy merge keeping the first representative of each merge_tol cluster;
/// insertion order makes the result deterministic.
std::vector<Vec> merge_cloud(const std::vector<Vec>& points, double merge_tol) {
    std::vector<Vec> kept;
    for (const auto& p : points) {
        bool covered = false;
        for (const auto& k : kept) {
            if ((p - k).norm() <= merge_tol) {
                covered = true;
                break;
            }
        }
        if (!covered) kept.push_back(p);
    }
    return kept;
}

}  // namespace

std::vector<Vec> make_grid(const GridSpec& spec) {
    const auto n = spec.lo.size();
    if (n == 0 || spec.hi.size() != n) throw DomainError("make_grid: box dimension mismatch");
    if (spec.points_per_axis < 1) throw DomainError("make_grid: need at least one point per axis");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(spec.lo[i] <= spec.hi[i])) throw DomainError("make_grid: lo must not exceed hi");

    const int p = spec.points_per_axis;
    std::vector<Vec> grid;
    std::vector<int> idx(static_cast<size_t>(n), 0);
    while (true) {
        Vec pt(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            pt[i] = (p == 1) ? 0.5 * (spec.lo[i] + spec.hi[i])
                             : spec.lo[i] + idx[static_cast<size_t>(i)] *
                                                (spec.hi[i] - spec.lo[i]) / (p - 1);
        }
        grid.push_back(pt);
        Eigen::Index axis = n - 1;
        while (axis >= 0 && ++idx[static_cast<size_t>(axis)] == p) {
            idx[static_cast<size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return grid;
}

double FiberSet::diameter() const {
    double d = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            d = std::max(d, (points[i] - points[j]).norm());
    return d;
}

double hausdorff_semidist(const std::vector<Vec>& A, const std::vector<Vec>& B) {
    if (A.empty() || B.empty()) throw DomainError("hausdorff_semidist: empty point set");
    if (A.front().size() != B.front().size())
        throw DomainError("hausdorff_semidist: dimension mismatch");
    double sup = 0.0;
    for (const auto& a : A) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : B) best = std::min(best, (a - b).norm());
        sup = std::max(sup, best);
    }
    return sup;
}

DissipativityReport dissipativity_probe(const CocycleDef& c, const BaseFlow& flow,
                                        const std::vector<BasePoint>& fiber_samples,
                                        const std::vector<double>& init_radii,
                                        long horizon, long burn_in) {
    if (fiber_samples.empty()) throw DomainError("dissipativity_probe: no base samples");
    if (init_radii.empty()) throw DomainError("dissipativity_probe: no initial radii");
    if (!(horizon > burn_in) || burn_in < 0)
        throw DomainError("dissipativity_probe: need horizon > burn_in >= 0");

    // per radius r, seed the box extremes and center: every {-r, 0, r}^n combination
    std::vector<Vec> seeds;
    for (double r : init_radii) {
        if (!(r >= 0.0)) throw DomainError("dissipativity_probe: radii must be nonnegative");
        GridSpec box;
        box.lo = Vec::Constant(c.fiber_dim, -r);
        box.hi = Vec::Constant(c.fiber_dim, r);
        box.points_per_axis = 3;
        auto pts = make_grid(box);
        seeds.insert(seeds.end(), pts.begin(), pts.end());
    }

    DissipativityReport report;
    double sup = 0.0;
    for (const auto& y : fiber_samples) {
        for (const auto& u0 : seeds) {
            try {
                Trajectory traj = evolve(c, flow, y, u0, horizon);
                for (long t = burn_in; t <= horizon; ++t)
                    sup = std::max(sup, traj.state_at(t).norm());
            } catch (const OverflowError& e) {
                report.dissipative = false;
                report.fail_time = e.t;
                report.fail_u = e.u;
                report.fail_y = e.y_coords;
                report.note = e.what();
                return report;
            }
        }
    }
    report.radius = 1.1 * sup;
    return report;
}

FiberSet pullback_omega(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y,
                        const GridSpec& grid, const std::vector<long>& horizons,
                        double merge_tol) {
    if (horizons.empty()) throw DomainError("pullback_omega: empty horizon list");
    for (size_t i = 0; i + 1 < horizons.size(); ++i)
        if (horizons[i] >= horizons[i + 1])
            throw DomainError("pullback_omega: horizons must be strictly increasing");
    if (horizons.front() < 0) throw DomainError("pullback_omega: horizons must be nonnegative");
    if (!(merge_tol > 0.0)) throw DomainError("pullback_omega: merge_tol must be positive");

    const std::vector<Vec> seeds = make_grid(grid);
    FiberSet fiber;
    fiber.y = y;
    fiber.merge_tol = merge_tol;
    std::vector<Vec> prev;
    for (long T : horizons) {
        const BasePoint start = advance(flow, y, -static_cast<double>(T));
        std::vector<Vec> cloud;
        cloud.reserve(seeds.size());
        for (const auto& u0 : seeds)
            cloud.push_back(evolve(c, flow, start, u0, T).states.back());
        cloud = merge_cloud(cloud, merge_tol);
        if (!prev.empty()) fiber.cauchy_residual = hausdorff_semidist(cloud, prev);
        prev = std::move(cloud);
        fiber.horizon = T;
    }
    fiber.points = std::move(prev);
    return fiber;
}

AttractorEstimate levinson_center(const CocycleDef& c, const BaseFlow& flow,
                                  const BasePoint& y0, int fiber_count,
                                  const GridSpec& grid, const std::vector<long>& horizons,
                                  double merge_tol) {
    if (fiber_count < 1) throw DomainError("levinson_center: need at least one fiber");
    AttractorEstimate est;
    for (int j = 0; j < fiber_count; ++j) {
        const BasePoint yj = advance(flow, y0, static_cast<double>(j));
        try {
            est.fibers.push_back(pullback_omega(c, flow, yj, grid, horizons, merge_tol));
        } catch (const OverflowError& e) {
            throw OverflowError("fiber " + std::to_string(j) + " is not dissipative: " +
                                    e.what(),
                                e.u, e.y_coords, e.t);
        }
    }
    for (const auto& f : est.fibers)
        est.union_cloud.insert(est.union_cloud.end(), f.points.begin(), f.points.end());
    return est;
}

InvarianceReport check_invariance(const AttractorEstimate& est, const CocycleDef& c,
                                  const BaseFlow& flow) {
    InvarianceReport report;
    for (size_t i = 0; i < est.fibers.size(); ++i) {
        const BasePoint next = advance(flow, est.fibers[i].y, 1.0);
        for (size_t k = 0; k < est.fibers.size(); ++k) {
            if (base_distance(flow, next, est.fibers[k].y) > 1e-9) continue;
            if (est.fibers[i].points.empty() || est.fibers[k].points.empty()) continue;
            std::vector<Vec> pushed;
            pushed.reserve(est.fibers[i].points.size());
            for (const auto& p : est.fibers[i].points)
                pushed.push_back(step(c, est.fibers[i].y, p));
            InvarianceReport::Pair pair;
            pair.from_fiber = static_cast<int>(i);
            pair.to_fiber = static_cast<int>(k);
            pair.forward = hausdorff_semidist(pushed, est.fibers[k].points);
            pair.backward = hausdorff_semidist(est.fibers[k].points, pushed);
            report.max_residual = std::max({report.max_residual, pair.forward, pair.backward});
            report.pairs.push_back(pair);
        }
    }
    if (report.pairs.empty())
        throw DiagnosticError(
            "check_invariance: no adjacent fiber pair (y, sigma(1,y)) among the sampled fibers");
    return report;
}

}  // namespace cocycle

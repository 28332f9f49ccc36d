#include "cocycle/cocycle.hpp"

#include <cmath>

namespace cocycle {

const Vec& Trajectory::state_at(long t) const {
    if (t < t_min() || t > t_max())
        throw WindowError("trajectory index " + std::to_string(t) + " outside window [" +
                          std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
    return states[static_cast<size_t>(t - t0)];
}

const BasePoint& Trajectory::base_at(long t) const {
    if (t < t_min() || t > t_max())
        throw WindowError("trajectory index " + std::to_string(t) + " outside window [" +
                          std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
    return base_orbit[static_cast<size_t>(t - t0)];
}

Vec step(const CocycleDef& c, const BasePoint& y, const Vec& u) {
    if (u.size() != c.fiber_dim) throw DomainError("step: fiber dimension mismatch");
    if (!u.allFinite()) throw DomainError("step: fiber state must be finite");
    Vec out = c.map(y, u);
    if (!out.allFinite())
        throw OverflowError("step: fiber map produced a non-finite state", u, y.coords, 0);
    return out;
}

Trajectory evolve(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y,
                  const Vec& u, long t) {
    if (t < 0) throw DomainError("evolve: time must be nonnegative");
    Trajectory traj;
    traj.t0 = 0;
    traj.meta = c.id;
    traj.states.reserve(static_cast<size_t>(t) + 1);
    traj.base_orbit.reserve(static_cast<size_t>(t) + 1);
    Vec cur = u;
    BasePoint yk = y;
    traj.states.push_back(cur);
    traj.base_orbit.push_back(yk);
    for (long k = 0; k < t; ++k) {
        try {
            cur = step(c, yk, cur);
        } catch (const OverflowError&) {
            throw OverflowError("evolve: non-finite state at step " + std::to_string(k + 1),
                                cur, yk.coords, k + 1);
        }
        if (cur.norm() > c.overflow_guard)
            throw OverflowError("evolve: overflow guard |u| > " +
                                    std::to_string(c.overflow_guard) + " tripped at step " +
                                    std::to_string(k + 1),
                                cur, yk.coords, k + 1);
        yk = advance(flow, yk, 1.0);
        traj.states.push_back(cur);
        traj.base_orbit.push_back(yk);
    }
    return traj;
}

Trajectory evolve_window(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y_anchor,
                         const Vec& u_at_lo, long t_lo, long t_hi) {
    if (t_lo > t_hi) throw DomainError("evolve_window: t_lo must not exceed t_hi");
    BasePoint y_lo = advance(flow, y_anchor, static_cast<double>(t_lo));
    Trajectory traj = evolve(c, flow, y_lo, u_at_lo, t_hi - t_lo);
    traj.t0 = t_lo;
    return traj;
}

FiberedPoint skew_step(const CocycleDef& c, const BaseFlow& flow, const FiberedPoint& x) {
    FiberedPoint out;
    out.u = step(c, x.y, x.u);
    out.y = advance(flow, x.y, 1.0);
    return out;
}

}  // namespace cocycle

#pragma once

#include "cocycle/base_flow.hpp"
#include "cocycle/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cocycle {

/// A unit-time fiber map u(t+1) = f(sigma(t, y), u(t)) over a BaseFlow.
/// For discretized flows the map closure owns the integrator call, so
/// stepping is uniform across kinds. Equal inputs give bitwise-equal outputs.
struct CocycleDef {
    enum class Kind { explicit_map, discretized_flow };
    Kind kind = Kind::explicit_map;
    int fiber_dim = 1;
    std::function<Vec(const BasePoint&, const Vec&)> map;
    std::string id;
    double overflow_guard = 1e8;  // |u| beyond this aborts evolution
};

/// A point of the skew product X = W x Y.
struct FiberedPoint {
    Vec u;
    BasePoint y;
};

/// Discrete trajectory data: states[k] = phi(t0+k, u, y), base_orbit[k] = sigma(t0+k, y).
/// The base orbit is advanced by iterated unit steps, so composed evolutions
/// reproduce one long evolution bitwise.
struct Trajectory {
    long t0 = 0;
    std::vector<Vec> states;
    std::vector<BasePoint> base_orbit;
    std::string meta;

    long t_min() const { return t0; }
    long t_max() const { return t0 + static_cast<long>(states.size()) - 1; }
    const Vec& state_at(long t) const;
    const BasePoint& base_at(long t) const;
};

/// One application of the fiber map, f(y, u). Throws OverflowError when the
/// result is non-finite.
Vec step(const CocycleDef& c, const BasePoint& y, const Vec& u);

/// phi(0..t, u, y) by composition; the overflow guard is enforced on every
/// intermediate state and the error carries the failing time index.
Trajectory evolve(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y,
                  const Vec& u, long t);

/// Trajectory on the index window [t_lo, t_hi], seeded with u at t_lo over
/// sigma(t_lo, y_anchor). Backward indices are reached by pullback only.
Trajectory evolve_window(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y_anchor,
                         const Vec& u_at_lo, long t_lo, long t_hi);

/// One step of the skew product pi = (phi, sigma).
FiberedPoint skew_step(const CocycleDef& c, const BaseFlow& flow, const FiberedPoint& x);

}  // namespace cocycle

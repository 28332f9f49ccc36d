#include "cocycle/base_flow.hpp"

#include <cmath>

namespace cocycle {

double wrap_unit(double x) {
    double w = x - std::floor(x);
    // floor rounding can land exactly on 1.0 for tiny negative x
    return w < 1.0 ? w : 0.0;
}

BaseFlow make_rotation(const Vec& omega, TimeKind kind) {
    if (omega.size() == 0) throw DomainError("rotation flow needs at least one frequency");
    if (!omega.allFinite()) throw DomainError("rotation frequencies must be finite");
    BaseFlow flow;
    flow.dim = static_cast<int>(omega.size());
    flow.omega = omega;
    flow.time_kind = kind;
    return flow;
}

BasePoint make_point(const Vec& coords) {
    if (coords.size() == 0) throw DomainError("base point needs at least one coordinate");
    if (!coords.allFinite()) throw DomainError("base point coordinates must be finite");
    BasePoint y;
    y.coords = coords.unaryExpr([](double c) { return wrap_unit(c); });
    return y;
}

BasePoint advance(const BaseFlow& flow, const BasePoint& y, double t) {
    if (!std::isfinite(t)) throw DomainError("advance: time must be finite");
    if (y.coords.size() != flow.dim) throw DomainError("advance: point/flow dimension mismatch");
    if (!y.coords.allFinite()) throw DomainError("advance: base point must be finite");
    if (flow.time_kind == TimeKind::discrete && t != std::nearbyint(t))
        throw DomainError("advance: discrete flow requires integer time");
    BasePoint out;
    out.coords = (y.coords + t * flow.omega).unaryExpr([](double c) { return wrap_unit(c); });
    return out;
}

std::vector<BasePoint> hull_orbit(const BaseFlow& flow, const BasePoint& y0,
                                  long n_lo, long n_hi) {
    if (n_lo > n_hi) throw DomainError("hull_orbit: n_lo must not exceed n_hi");
    std::vector<BasePoint> orbit;
    orbit.reserve(static_cast<size_t>(n_hi - n_lo + 1));
    for (long n = n_lo; n <= n_hi; ++n)
        orbit.push_back(advance(flow, y0, static_cast<double>(n)));
    return orbit;
}

double base_distance(const BaseFlow& flow, const BasePoint& y1, const BasePoint& y2) {
    if (y1.coords.size() != y2.coords.size() || y1.coords.size() != flow.dim)
        throw DomainError("base_distance: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < flow.dim; ++i) {
        double delta = std::fabs(y1.coords[i] - y2.coords[i]);
        double circ = std::min(delta, 1.0 - delta);
        d = std::max(d, circ);
    }
    return d;
}

}  // namespace cocycle

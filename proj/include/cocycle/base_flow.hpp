#pragma once

#include "cocycle/types.hpp"

#include <vector>

namespace cocycle {

enum class TimeKind { continuous, discrete };

/// Rotation flow on the d-torus: sigma(t, y) = y + t*omega (mod 1 componentwise).
/// Frequencies are revolutions per unit time and are kept unreduced so that
/// sigma stays evaluable at fractional t for continuous-time driving.
struct BaseFlow {
    int dim = 1;
    Vec omega;
    TimeKind time_kind = TimeKind::continuous;
};

/// A point of the torus; every coordinate lies in [0, 1).
struct BasePoint {
    Vec coords;
};

/// Wrap a real into [0, 1); exact on values already in range.
double wrap_unit(double x);

/// Validating constructors; both throw DomainError on non-finite input.
BaseFlow make_rotation(const Vec& omega, TimeKind kind = TimeKind::continuous);
BasePoint make_point(const Vec& coords);

/// sigma(t, y). For discrete flows t must be an integer.
BasePoint advance(const BaseFlow& flow, const BasePoint& y, double t);

/// The orbit sample sigma(n, y0), n = n_lo..n_hi, in order.
std::vector<BasePoint> hull_orbit(const BaseFlow& flow, const BasePoint& y0,
                                  long n_lo, long n_hi);

/// Max over coordinates of the circular distance min(|d|, 1-|d|).
double base_distance(const BaseFlow& flow, const BasePoint& y1, const BasePoint& y2);

}  // namespace cocycle

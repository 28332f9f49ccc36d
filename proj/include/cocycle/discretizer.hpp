#pragma once

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/types.hpp"

#include <functional>
#include <string>

namespace cocycle {

/// Right-hand side of the non-autonomous ODE x' = f(sigma~(tau, y), x),
/// evaluated at the current base point.
struct FlowField {
    int fiber_dim = 1;
    std::function<Vec(const BasePoint&, const Vec&)> rhs;
    std::string id;
};

/// Fixed-step classical 4th-order one-step scheme; no adaptivity by design,
/// so results are bitwise reproducible across runs.
struct IntegratorConfig {
    int steps_per_unit = 64;
    int error_probe_factor = 10;  // step refinement used for error estimates
};

/// RK4 over [0, span] with n_steps fixed steps; stage base points are taken
/// at sigma~(tau, y), sigma~(tau+h/2, y), sigma~(tau+h, y) exactly.
Vec integrate_span(const FlowField& field, const BaseFlow& flow, const BasePoint& y,
                   const Vec& u, double span, int n_steps);

/// The unit-time solution map F(y, u) = u + integral_0^1 f(sigma~(tau,y), x(tau)) dtau.
Vec integrate_unit(const FlowField& field, const BaseFlow& flow, const BasePoint& y,
                   const Vec& u, const IntegratorConfig& cfg);

/// Wrap the unit-time map as a difference cocycle over the same driving flow.
CocycleDef discretize_flow(const FlowField& field, const BaseFlow& flow,
                           const IntegratorConfig& cfg);

/// |F(y,u) at cfg steps - F(y,u) at error_probe_factor * cfg steps|;
/// the per-step integration error estimate reported alongside analyses.
double integrator_error_estimate(const FlowField& field, const BaseFlow& flow,
                                 const BasePoint& y, const Vec& u,
                                 const IntegratorConfig& cfg);

/// Continuous-time reading of a discrete trajectory: the flow applied for the
/// fractional part {t} to gamma([t]); bitwise gamma([t]) at integer t.
Vec interpolate_trajectory(const Trajectory& gamma, const FlowField& field,
                           const BaseFlow& flow, double t, const IntegratorConfig& cfg);

}  // namespace cocycle

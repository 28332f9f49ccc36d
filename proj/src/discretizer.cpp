#include "cocycle/discretizer.hpp"

#include <cmath>

namespace cocycle {

Vec integrate_span(const FlowField& field, const BaseFlow& flow, const BasePoint& y,
                   const Vec& u, double span, int n_steps) {
    if (flow.time_kind != TimeKind::continuous)
        throw DomainError("integrate_span: driving flow must be continuous-time");
    if (n_steps < 1) throw DomainError("integrate_span: need at least one step");
    if (!(span >= 0.0) || !std::isfinite(span))
        throw DomainError("integrate_span: span must be finite and nonnegative");
    if (u.size() != field.fiber_dim) throw DomainError("integrate_span: fiber dimension mismatch");
    if (span == 0.0) return u;

    const double h = span / n_steps;
    Vec x = u;
    for (int i = 0; i < n_steps; ++i) {
        // stage base points advanced exactly; tau accumulates as i*h to avoid drift
        const double tau = i * h;
        const BasePoint y0 = advance(flow, y, tau);
        const BasePoint ym = advance(flow, y, tau + 0.5 * h);
        const BasePoint y1 = advance(flow, y, tau + h);
        const Vec k1 = field.rhs(y0, x);
        const Vec k2 = field.rhs(ym, x + (0.5 * h) * k1);
        const Vec k3 = field.rhs(ym, x + (0.5 * h) * k2);
        const Vec k4 = field.rhs(y1, x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite())
            throw OverflowError("integrate_span: non-finite state at sub-step " +
                                    std::to_string(i + 1) + " of " + std::to_string(n_steps),
                                x, y0.coords, i + 1);
    }
    return x;
}

Vec integrate_unit(const FlowField& field, const BaseFlow& flow, const BasePoint& y,
                   const Vec& u, const IntegratorConfig& cfg) {
    return integrate_span(field, flow, y, u, 1.0, cfg.steps_per_unit);
}

CocycleDef discretize_flow(const FlowField& field, const BaseFlow& flow,
                           const IntegratorConfig& cfg) {
    if (flow.time_kind != TimeKind::continuous)
        throw DomainError("discretize_flow: driving flow must be continuous-time");
    CocycleDef c;
    c.kind = CocycleDef::Kind::discretized_flow;
    c.fiber_dim = field.fiber_dim;
    c.id = field.id + "@rk4x" + std::to_string(cfg.steps_per_unit);
    c.map = [field, flow, cfg](const BasePoint& y, const Vec& u) {
        return integrate_unit(field, flow, y, u, cfg);
    };
    return c;
}

double integrator_error_estimate(const FlowField& field, const BaseFlow& flow,
                                 const BasePoint& y, const Vec& u,
                                 const IntegratorConfig& cfg) {
    const Vec coarse = integrate_unit(field, flow, y, u, cfg);
    IntegratorConfig fine = cfg;
    fine.steps_per_unit = cfg.steps_per_unit * cfg.error_probe_factor;
    const Vec ref = integrate_unit(field, flow, y, u, fine);
    return (coarse - ref).norm();
}

Vec interpolate_trajectory(const Trajectory& gamma, const FlowField& field,
                           const BaseFlow& flow, double t, const IntegratorConfig& cfg) {
    if (!std::isfinite(t)) throw DomainError("interpolate_trajectory: time must be finite");
    const double entire = std::floor(t);
    if (entire < static_cast<double>(gamma.t_min()) ||
        entire > static_cast<double>(gamma.t_max()))
        throw WindowError("interpolate_trajectory: [t] = " + std::to_string(entire) +
                          " outside trajectory window [" + std::to_string(gamma.t_min()) +
                          ", " + std::to_string(gamma.t_max()) + "]");
    const long n = static_cast<long>(entire);
    const double frac = t - entire;
    if (frac == 0.0) return gamma.state_at(n);
    const int sub = static_cast<int>(std::ceil(frac * cfg.steps_per_unit));
    return integrate_span(field, flow, gamma.base_at(n), gamma.state_at(n), frac,
                          std::max(sub, 1));
}

}  // namespace cocycle

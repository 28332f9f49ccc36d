#include "doctest.h"

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/discretizer.hpp"
#include "cocycle/recurrence.hpp"
#include "cocycle/types.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace cocycle;
using testsupport::max_diff;
using testsupport::vec1;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

BaseFlow phase_flow() {
    // one revolution per 2*pi time units, so t is recoverable as 2*pi*y1
    return make_rotation(vec1(1.0 / two_pi), TimeKind::continuous);
}

FlowField decay_cos_field() {
    FlowField f;
    f.fiber_dim = 1;
    f.id = "decay-cos";
    f.rhs = [](const BasePoint& y, const Vec& x) {
        return vec1(-x[0] + std::cos(two_pi * y.coords[0]));
    };
    return f;
}

FlowField pure_decay_field() {
    FlowField f;
    f.fiber_dim = 1;
    f.id = "decay";
    f.rhs = [](const BasePoint&, const Vec& x) { return vec1(-x[0]); };
    return f;
}

FlowField zero_field() {
    FlowField f;
    f.fiber_dim = 1;
    f.id = "zero";
    f.rhs = [](const BasePoint&, const Vec&) { return vec1(0.0); };
    return f;
}

// exact solution of x' = -x + cos(t): x(t0 + s) given x(t0), with the
// particular solution p(t) = (cos t + sin t) / 2
double particular(double t) { return 0.5 * (std::cos(t) + std::sin(t)); }
double closed_form(double t0, double x0, double s) {
    return (x0 - particular(t0)) * std::exp(-s) + particular(t0 + s);
}

}  // namespace

TEST_CASE("zero field gives the identity unit map") {
    const BaseFlow flow = phase_flow();
    const FlowField f = zero_field();
    const IntegratorConfig cfg;

    const Vec u = vec1(0.7331);
    CHECK(integrate_unit(f, flow, make_point(vec1(0.2)), u, cfg)[0] == u[0]);

    const CocycleDef c = discretize_flow(f, flow, cfg);
    CHECK(c.kind == CocycleDef::Kind::discretized_flow);
    const Trajectory traj = evolve(c, flow, make_point(vec1(0.0)), u, 10);
    for (const auto& s : traj.states) CHECK(s[0] == u[0]);
}

TEST_CASE("pure decay reproduces the exponential") {
    const double got = integrate_unit(pure_decay_field(), phase_flow(),
                                      make_point(vec1(0.0)), vec1(1.0), IntegratorConfig{})[0];
    CHECK(std::fabs(got - std::exp(-1.0)) <= 1e-8);
}

TEST_CASE("forced decay matches the variation-of-constants closed form") {
    const BaseFlow flow = phase_flow();
    const FlowField f = decay_cos_field();
    const IntegratorConfig cfg;

    // from x = 0 at phase 0: x(1) = (cos 1 + sin 1)/2 - e^(-1)/2 = 0.50694692...
    const double at_zero = integrate_unit(f, flow, make_point(vec1(0.0)), vec1(0.0), cfg)[0];
    CHECK(std::fabs(at_zero - closed_form(0.0, 0.0, 1.0)) <= 1e-8);

    // the same map half a revolution later flips the forcing sign
    const double at_pi = integrate_unit(f, flow, make_point(vec1(0.5)), vec1(0.0), cfg)[0];
    CHECK(std::fabs(at_pi - closed_form(0.5 * two_pi, 0.0, 1.0)) <= 1e-8);
    CHECK(std::fabs(at_pi + at_zero) <= 1e-8);

    // nonzero initial state
    const double from_two = integrate_unit(f, flow, make_point(vec1(0.0)), vec1(2.0), cfg)[0];
    CHECK(std::fabs(from_two - closed_form(0.0, 2.0, 1.0)) <= 1e-8);
}

TEST_CASE("stage base points carry the fractional phase") {
    // a purely time-dependent field integrates to sin(t0+1) - sin(t0); any
    // mistake in the stage phases would cost O(h), not O(h^4)
    FlowField f;
    f.fiber_dim = 1;
    f.id = "cos-drive";
    f.rhs = [](const BasePoint& y, const Vec&) { return vec1(std::cos(two_pi * y.coords[0])); };
    const double got = integrate_unit(f, phase_flow(), make_point(vec1(0.0)), vec1(0.0),
                                      IntegratorConfig{})[0];
    CHECK(std::fabs(got - std::sin(1.0)) <= 1e-9);
}

TEST_CASE("halving the step shrinks the error fourth-order") {
    const BaseFlow flow = phase_flow();
    const FlowField f = decay_cos_field();
    const double exact = closed_form(0.0, 2.0, 1.0);

    IntegratorConfig coarse;
    coarse.steps_per_unit = 64;
    IntegratorConfig fine;
    fine.steps_per_unit = 128;

    const double e64 =
        std::fabs(integrate_unit(f, flow, make_point(vec1(0.0)), vec1(2.0), coarse)[0] - exact);
    const double e128 =
        std::fabs(integrate_unit(f, flow, make_point(vec1(0.0)), vec1(2.0), fine)[0] - exact);
    CHECK(e64 / e128 >= 8.0);

    // the step-refinement estimate agrees with the true error to the
    // refinement's own accuracy
    const double est = integrator_error_estimate(f, flow, make_point(vec1(0.0)), vec1(2.0), coarse);
    CHECK(est > 0.0);
    CHECK(std::fabs(est - e64) <= 0.01 * e64 + 1e-15);
}

TEST_CASE("integrate_span validates its inputs") {
    const FlowField f = pure_decay_field();
    const BaseFlow flow = phase_flow();
    const BasePoint y = make_point(vec1(0.0));

    const Vec u = vec1(0.25);
    CHECK(integrate_span(f, flow, y, u, 0.0, 64)[0] == u[0]);
    CHECK_THROWS_AS(integrate_span(f, flow, y, u, 1.0, 0), DomainError);
    CHECK_THROWS_AS(integrate_span(f, flow, y, u, -1.0, 64), DomainError);

    const BaseFlow disc = make_rotation(vec1(0.5), TimeKind::discrete);
    CHECK_THROWS_AS(integrate_span(f, disc, y, u, 1.0, 64), DomainError);
    CHECK_THROWS_AS(discretize_flow(f, disc, IntegratorConfig{}), DomainError);

    FlowField blow;
    blow.fiber_dim = 1;
    blow.id = "blow";
    blow.rhs = [](const BasePoint&, const Vec& x) { return vec1(x[0] * x[0] * 1e80); };
    CHECK_THROWS_AS(integrate_span(blow, flow, y, vec1(1.0), 1.0, 4), OverflowError);
}

TEST_CASE("discretized cocycle separates solutions like the flow") {
    const BaseFlow flow = phase_flow();
    const CocycleDef c = discretize_flow(decay_cos_field(), flow, IntegratorConfig{});
    const BasePoint y = make_point(vec1(0.0));

    const Trajectory a = evolve(c, flow, y, vec1(3.0), 10);
    const Trajectory b = evolve(c, flow, y, vec1(-1.0), 10);
    for (long n = 0; n <= 10; ++n) {
        const double sep = std::fabs(a.state_at(n)[0] - b.state_at(n)[0]);
        CHECK(std::fabs(sep - 4.0 * std::exp(-static_cast<double>(n))) <= 1e-7);
    }

    // the cocycle map is exactly the unit integrator
    const Vec via_map = step(c, y, vec1(3.0));
    const Vec via_unit = integrate_unit(decay_cos_field(), flow, y, vec1(3.0), IntegratorConfig{});
    CHECK(max_diff(via_map, via_unit) == 0.0);
    CHECK(c.id == "decay-cos@rk4x64");
}

TEST_CASE("interpolation is exact at integers and accurate between them") {
    const BaseFlow flow = phase_flow();
    const FlowField f = decay_cos_field();
    const IntegratorConfig cfg;
    const CocycleDef c = discretize_flow(f, flow, cfg);
    const Trajectory traj = evolve(c, flow, make_point(vec1(0.0)), vec1(2.0), 8);

    for (long n = 0; n <= 8; ++n)
        CHECK(interpolate_trajectory(traj, f, flow, static_cast<double>(n), cfg)[0] ==
              traj.state_at(n)[0]);

    for (double t : {0.5, 1.25, 2.5, 3.75, 7.125}) {
        const double got = interpolate_trajectory(traj, f, flow, t, cfg)[0];
        CHECK(std::fabs(got - closed_form(0.0, 2.0, t)) <= 1e-7);
    }

    CHECK_THROWS_AS(interpolate_trajectory(traj, f, flow, 9.5, cfg), WindowError);
    CHECK_THROWS_AS(interpolate_trajectory(traj, f, flow, -0.25, cfg), WindowError);
}

TEST_CASE("interpolated trajectory nearly commutes with the flow, carry included") {
    const BaseFlow flow = phase_flow();
    const FlowField f = decay_cos_field();
    const IntegratorConfig cfg;
    const CocycleDef c = discretize_flow(f, flow, cfg);
    const BasePoint y0 = make_point(vec1(0.0));
    const Trajectory traj = evolve(c, flow, y0, vec1(2.0), 8);

    // per-unit error scale measured at the trajectory's own states
    double bound = 0.0;
    for (long n = 0; n < 8; ++n)
        bound = std::max(bound, integrator_error_estimate(f, flow, traj.base_at(n),
                                                          traj.state_at(n), cfg));

    double defect = 0.0;
    for (double tau : {0.25, 0.7, 1.5, 3.3}) {
        for (double t : {0.5, 0.75, 1.25, 2.6}) {  // tau=0.7, t=0.75 exercises the carry
            if (tau + t > 8.0) continue;
            const double direct = interpolate_trajectory(traj, f, flow, tau + t, cfg)[0];
            const Vec at_tau = interpolate_trajectory(traj, f, flow, tau, cfg);
            const BasePoint y_tau = advance(flow, y0, tau);
            const int sub = static_cast<int>(std::ceil(t * cfg.steps_per_unit));
            const double flowed = integrate_span(f, flow, y_tau, at_tau, t, sub)[0];
            defect = std::max(defect, std::fabs(direct - flowed));
        }
    }
    CHECK(defect <= 10.0 * bound + 1e-12);
}

TEST_CASE("discrete almost periods transfer to the interpolated trajectory at 2*eps") {
    const BaseFlow flow = phase_flow();
    const FlowField f = decay_cos_field();
    const IntegratorConfig cfg;
    const CocycleDef c = discretize_flow(f, flow, cfg);

    // seed on the known almost periodic solution p(t) = (cos t + sin t)/2
    const long N = 150;
    const BasePoint anchor = make_point(vec1(0.0));
    const Trajectory traj =
        evolve_window(c, flow, anchor, vec1(particular(-static_cast<double>(N))), -N, N);

    const double eps = 0.35;
    const AlmostPeriodReport report = almost_periods(traj, flow, eps, 60);
    REQUIRE(!report.periods.empty());

    int checked = 0;
    for (long tau : report.periods) {
        if (checked >= 4) break;
        ++checked;
        double sup = 0.0;
        for (double t = -static_cast<double>(N); t <= static_cast<double>(N - tau);
             t += 0.25) {
            const double a = interpolate_trajectory(traj, f, flow, t + tau, cfg)[0];
            const double b = interpolate_trajectory(traj, f, flow, t, cfg)[0];
            const double base_shift = base_distance(
                flow, advance(flow, anchor, t + tau), advance(flow, anchor, t));
            sup = std::max(sup, std::max(std::fabs(a - b), base_shift));
        }
        CHECK(sup < 2.0 * eps);
    }
}

#include "doctest.h"

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/scenarios.hpp"
#include "cocycle/types.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace cocycle;
using testsupport::max_diff;
using testsupport::Rng;
using testsupport::vec1;
using testsupport::vec2;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

}  // namespace

TEST_CASE("registry lists every scenario and rejects unknown names") {
    const auto names = registry_names();
    for (const char* expected :
         {"expanding", "linear-contraction", "linear-ode", "tanh-saturating", "wc2"})
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    CHECK(names.size() == 5);

    try {
        build("no-such-system");
        FAIL("expected RegistryError");
    } catch (const RegistryError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("linear-contraction") != std::string::npos);
        CHECK(msg.find("wc2") != std::string::npos);
    }
}

TEST_CASE("parameters are defaulted, validated, and echoed") {
    const Scenario s = build("linear-contraction");
    CHECK(s.params["alpha"].get<double>() == 0.5);
    CHECK(s.params["forcing"].get<std::string>() == "cos");

    CHECK_THROWS_AS(build("linear-contraction", {{"alhpa", 0.25}}), DomainError);
    CHECK_THROWS_AS(build("linear-contraction", {{"forcing", "saw"}}), DomainError);

    const Scenario one = build("linear-contraction", {{"alpha", 0.25}, {"forcing", "one"}});
    CHECK(one.params["alpha"].get<double>() == 0.25);
    CHECK(step(one.cocycle, make_point(vec1(0.3)), vec1(4.0))[0] == 2.0);
}

TEST_CASE("explicit-map scenarios evaluate their definitions") {
    const Scenario lin = build("linear-contraction");
    CHECK(lin.base.time_kind == TimeKind::discrete);
    CHECK(std::fabs(lin.base.omega[0] - testsupport::golden_mean()) == 0.0);
    CHECK(step(lin.cocycle, make_point(vec1(0.0)), vec1(0.0))[0] == 1.0);
    CHECK(step(lin.cocycle, make_point(vec1(0.5)), vec1(2.0))[0] == 0.0);

    const Scenario th = build("tanh-saturating", {{"gain", 2.0}, {"forcing_amp", 0.5}});
    const double got = step(th.cocycle, make_point(vec1(0.0)), vec1(1.0))[0];
    CHECK(std::fabs(got - (2.0 * std::tanh(1.0) + 0.5)) <= 1e-15);

    const Scenario ex = build("expanding", {{"alpha", 3.0}});
    CHECK(step(ex.cocycle, make_point(vec1(0.9)), vec1(2.0))[0] == 6.0);
}

TEST_CASE("linear-ode wires the forced decay field through the integrator") {
    const Scenario s = build("linear-ode");
    CHECK(s.kind == Scenario::Kind::continuous_flow);
    CHECK(s.base.time_kind == TimeKind::continuous);
    CHECK(s.field.rhs(make_point(vec1(0.0)), vec1(2.0))[0] == -1.0);

    const Vec via_cocycle = step(s.cocycle, make_point(vec1(0.0)), vec1(0.0));
    const Vec via_unit = integrate_unit(s.field, s.base, make_point(vec1(0.0)), vec1(0.0),
                                        s.integrator);
    CHECK(max_diff(via_cocycle, via_unit) == 0.0);

    IntegratorConfig fine;
    fine.steps_per_unit = 128;
    const Scenario hi = build("linear-ode", {}, fine);
    CHECK(hi.cocycle.id == "linear-ode@rk4x128");
}

TEST_CASE("rebuilding a scenario reproduces its map bitwise") {
    Rng rng(99);
    for (const std::string name : {"linear-contraction", "tanh-saturating", "linear-ode"}) {
        const Scenario a = build(name);
        const Scenario b = build(name);
        for (int i = 0; i < 10; ++i) {
            const BasePoint y = make_point(rng.vec(a.base.dim, 0.0, 1.0));
            const Vec u = rng.vec(a.cocycle.fiber_dim, -2.0, 2.0);
            CHECK(max_diff(step(a.cocycle, y, u), step(b.cocycle, y, u)) == 0.0);
        }
    }
}

TEST_CASE("planar field takes its limit value on the distinguished solution") {
    const BasePoint y = make_point(vec2(0.3, 0.7));
    const double t1 = two_pi * 0.3;
    const double t2 = two_pi * 0.7;
    const Vec on_solution = vec2(std::sin(t1), std::sin(t2));
    const Vec f = wc2_field(y, on_solution);
    CHECK(f[0] == std::cos(t1));
    CHECK(f[1] == std::sqrt(2.0) * std::cos(t2));
}

TEST_CASE("planar deviation field has known values and an O(r) bound near zero") {
    CHECK(max_diff(wc2_deviation(vec2(1.0, 1.0)), vec2(0.3, 0.0)) <= 1e-15);
    CHECK(max_diff(wc2_deviation(vec2(1.0, 0.0)), vec2(-0.5, 0.0)) <= 1e-15);
    CHECK(max_diff(wc2_deviation(vec2(0.0, 1.0)), vec2(1.0, 4.0)) <= 1e-15);
    CHECK(wc2_deviation(vec2(0.0, 0.0)).norm() == 0.0);

    // numerator is O(r^3) against an r^2 denominator, so the field vanishes
    // linearly along every ray into the singular point
    for (int k = 0; k < 16; ++k) {
        const double theta = two_pi * k / 16.0;
        for (double r : {1e-10, 1e-6, 1e-3, 0.1, 0.5, 1.0}) {
            const Vec dev = wc2_deviation(vec2(r * std::cos(theta), r * std::sin(theta)));
            CHECK(dev.norm() <= 20.0 * r);
        }
    }
}

TEST_CASE("raw-sign variant differs away from the singular set") {
    const BasePoint y = make_point(vec2(0.1, 0.2));
    const Vec u = vec2(0.5, -0.3);
    const Vec pinned = wc2_field(y, u);
    const Vec raw = wc2_field_raw_signs(y, u);
    CHECK(max_diff(pinned, raw) > 1e-6);

    const Scenario flagged = build("wc2", {{"raw_signs", true}});
    CHECK(flagged.cocycle.id == "wc2-raw-signs@rk4x64");
    const Scenario normal = build("wc2");
    CHECK(normal.cocycle.id == "wc2@rk4x64-dev");
    CHECK(max_diff(step(flagged.cocycle, y, u), step(normal.cocycle, y, u)) > 1e-9);
}

TEST_CASE("planar cocycle reproduces the distinguished solution exactly") {
    const Scenario s = build("wc2");
    Rng rng(2024);
    for (int i = 0; i < 5; ++i) {
        const BasePoint y = make_point(rng.vec(2, 0.0, 1.0));
        const Vec exact = vec2(std::sin(two_pi * y.coords[0]), std::sin(two_pi * y.coords[1]));
        const Vec next = step(s.cocycle, y, exact);
        const BasePoint y1 = advance(s.base, y, 1.0);
        // zero deviation stays on the guard branch, so the step lands on the
        // solution at the advanced phases bitwise
        CHECK(next[0] == std::sin(two_pi * y1.coords[0]));
        CHECK(next[1] == std::sin(two_pi * y1.coords[1]));
    }
}

TEST_CASE("planar cocycle decays onto the distinguished solution") {
    const Scenario s = build("wc2");
    const BasePoint y0 = make_point(vec2(0.12, 0.34));
    const Vec start = vec2(std::sin(two_pi * 0.12) + 0.4, std::sin(two_pi * 0.34) - 0.3);
    const Trajectory traj = evolve(s.cocycle, s.base, y0, start, 700);

    const BasePoint yT = traj.base_at(700);
    const Vec expect = vec2(std::sin(two_pi * yT.coords[0]), std::sin(two_pi * yT.coords[1]));
    CHECK(max_diff(traj.state_at(700), expect) <= 1e-9);

    // forward orbit stays bounded the whole way
    for (const auto& u : traj.states) CHECK(u.norm() <= 10.0);
}

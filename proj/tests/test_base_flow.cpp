#include "doctest.h"

#include "cocycle/base_flow.hpp"
#include "cocycle/types.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace cocycle;
using testsupport::max_diff;
using testsupport::Rng;
using testsupport::vec1;
using testsupport::vec2;

namespace {

double circ_dist(double a, double b) {
    const double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("wrap_unit lands in [0,1) and leaves in-range values alone") {
    CHECK(wrap_unit(0.0) == 0.0);
    CHECK(wrap_unit(0.25) == 0.25);
    CHECK(wrap_unit(1.25) == 0.25);
    CHECK(wrap_unit(-0.25) == 0.75);
    CHECK(wrap_unit(17.0) == 0.0);
    CHECK(wrap_unit(-3.5) == 0.5);

    // -1e-18 - floor(-1e-18) rounds to exactly 1.0; the wrap must still land in range
    CHECK(wrap_unit(-1e-18) == 0.0);

    const double just_below_one = std::nextafter(1.0, 0.0);
    CHECK(wrap_unit(just_below_one) == just_below_one);
}

TEST_CASE("constructors validate and wrap") {
    CHECK_THROWS_AS(make_rotation(Vec{}), DomainError);
    CHECK_THROWS_AS(make_point(Vec{}), DomainError);

    Vec bad(1);
    bad << std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_rotation(bad), DomainError);
    CHECK_THROWS_AS(make_point(bad), DomainError);
    bad << std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(make_point(bad), DomainError);

    const BasePoint p = make_point(vec2(1.25, -0.25));
    CHECK(p.coords[0] == 0.25);
    CHECK(p.coords[1] == 0.75);

    const BaseFlow f = make_rotation(vec2(1.0, std::sqrt(2.0)));
    CHECK(f.dim == 2);
    CHECK(f.omega[1] == std::sqrt(2.0));  // frequencies stay unreduced
}

TEST_CASE("advance is the rotation y + t*omega mod 1") {
    const BaseFlow f = make_rotation(vec2(1.0, std::sqrt(2.0)), TimeKind::continuous);
    const BasePoint y0 = make_point(vec2(0.0, 0.0));

    CHECK(max_diff(advance(f, y0, 0.0).coords, y0.coords) == 0.0);

    const BasePoint y2 = advance(f, y0, 2.0);
    CHECK(y2.coords[0] == 0.0);
    CHECK(std::fabs(y2.coords[1] - 0.8284271247461903) <= 1e-15);

    const BaseFlow half = make_rotation(vec1(0.5), TimeKind::discrete);
    const BasePoint q = advance(half, make_point(vec1(0.25)), 2.0);
    CHECK(q.coords[0] == 0.25);

    // negative time pulls back
    const BasePoint back = advance(half, make_point(vec1(0.25)), -1.0);
    CHECK(back.coords[0] == 0.75);
}

TEST_CASE("advance validates time and dimensions") {
    const BaseFlow disc = make_rotation(vec1(0.5), TimeKind::discrete);
    const BasePoint y = make_point(vec1(0.0));
    CHECK_THROWS_AS(advance(disc, y, 0.5), DomainError);
    CHECK_THROWS_AS(advance(disc, y, std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_NOTHROW(advance(disc, y, -3.0));

    const BaseFlow cont = make_rotation(vec2(1.0, 2.0), TimeKind::continuous);
    CHECK_THROWS_AS(advance(cont, y, 1.0), DomainError);  // dim mismatch
    CHECK_NOTHROW(advance(cont, make_point(vec2(0.1, 0.2)), 0.7));
}

TEST_CASE("group law and isometry on random samples") {
    const BaseFlow f = make_rotation(vec2(testsupport::golden_mean(), std::sqrt(2.0)),
                                     TimeKind::continuous);
    Rng rng(20240401);
    double worst_group = 0.0;
    double worst_iso = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BasePoint y = make_point(rng.vec(2, 0.0, 1.0));
        const BasePoint z = make_point(rng.vec(2, 0.0, 1.0));
        const double s = rng.range(-50.0, 50.0);
        const double t = rng.range(-50.0, 50.0);

        const BasePoint two_hops = advance(f, advance(f, y, s), t);
        const BasePoint one_hop = advance(f, y, s + t);
        worst_group = std::max(worst_group, base_distance(f, two_hops, one_hop));

        const double before = base_distance(f, y, z);
        const double after = base_distance(f, advance(f, y, t), advance(f, z, t));
        worst_iso = std::max(worst_iso, std::fabs(before - after));
    }
    CHECK(worst_group <= 1e-12);
    CHECK(worst_iso <= 1e-12);
}

TEST_CASE("hull_orbit samples sigma(n, y0) in order") {
    const BaseFlow f = make_rotation(vec2(1.0, std::sqrt(2.0)), TimeKind::continuous);
    const BasePoint y0 = make_point(vec2(0.0, 0.0));
    const auto orbit = hull_orbit(f, y0, 0, 2);
    REQUIRE(orbit.size() == 3);
    CHECK(max_diff(orbit[0].coords, y0.coords) == 0.0);
    CHECK(max_diff(orbit[1].coords, advance(f, y0, 1.0).coords) == 0.0);
    CHECK(max_diff(orbit[2].coords, advance(f, y0, 2.0).coords) == 0.0);

    const BaseFlow fixed = make_rotation(vec1(1.0), TimeKind::discrete);
    const auto constant = hull_orbit(fixed, make_point(vec1(0.3)), 0, 3);
    REQUIRE(constant.size() == 4);
    for (const auto& p : constant) CHECK(std::fabs(p.coords[0] - 0.3) <= 1e-15);

    CHECK_THROWS_AS(hull_orbit(f, y0, 3, 2), DomainError);
}

TEST_CASE("base_distance is the max circular coordinate distance") {
    const BaseFlow f1 = make_rotation(vec1(1.0));
    CHECK(base_distance(f1, make_point(vec1(0.1)), make_point(vec1(0.1))) == 0.0);
    CHECK(base_distance(f1, make_point(vec1(0.0)), make_point(vec1(0.9))) ==
          doctest::Approx(0.1).epsilon(1e-12));

    const BaseFlow f2 = make_rotation(vec2(1.0, 1.0));
    CHECK(base_distance(f2, make_point(vec2(0.2, 0.7)), make_point(vec2(0.9, 0.7))) ==
          doctest::Approx(0.3).epsilon(1e-12));

    CHECK_THROWS_AS(base_distance(f2, make_point(vec1(0.0)), make_point(vec2(0.0, 0.0))),
                    DomainError);

    // symmetry and the triangle inequality on random triples
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const BasePoint a = make_point(rng.vec(2, 0.0, 1.0));
        const BasePoint b = make_point(rng.vec(2, 0.0, 1.0));
        const BasePoint c = make_point(rng.vec(2, 0.0, 1.0));
        CHECK(base_distance(f2, a, b) == base_distance(f2, b, a));
        CHECK(base_distance(f2, a, c) <= base_distance(f2, a, b) + base_distance(f2, b, c) + 1e-15);
        CHECK(base_distance(f2, a, b) <= 0.5);
    }
}

TEST_CASE("golden-mean orbit returns at Fibonacci times with geometric accuracy") {
    const double om = testsupport::golden_mean();
    const BaseFlow f = make_rotation(vec1(om), TimeKind::discrete);
    const BasePoint y0 = make_point(vec1(0.0));

    // dist(sigma(F_k, 0), 0) = om^(k+1): the continued-fraction convergents of
    // the golden mean are ratios of consecutive Fibonacci numbers.
    const long fib[] = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
    for (int k = 0; k < 10; ++k) {
        const BasePoint yF = advance(f, y0, static_cast<double>(fib[k]));
        const double dist = circ_dist(yF.coords[0], 0.0);
        CHECK(std::fabs(dist - std::pow(om, k + 2)) <= 1e-12);
    }

    // the large Fibonacci return times come back within 0.05
    for (long F : {13L, 21L, 34L, 55L, 89L}) {
        const BasePoint yF = advance(f, y0, static_cast<double>(F));
        CHECK(circ_dist(yF.coords[0], 0.0) <= 0.05);
    }
}

TEST_CASE("golden-mean orbit is 0.05-dense by N = 500") {
    const double om = testsupport::golden_mean();
    const BaseFlow f = make_rotation(vec1(om), TimeKind::discrete);
    const auto orbit = hull_orbit(f, make_point(vec1(0.0)), 0, 500);

    std::vector<double> xs;
    xs.reserve(orbit.size());
    for (const auto& p : orbit) xs.push_back(p.coords[0]);
    std::sort(xs.begin(), xs.end());

    double max_gap = 1.0 - xs.back() + xs.front();  // the wraparound gap
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        max_gap = std::max(max_gap, xs[i + 1] - xs[i]);
    CHECK(max_gap <= 0.05);
}

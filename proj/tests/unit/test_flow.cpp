#include "doctest.h"

#include <cmath>

#include "filippov/bifurc.hpp"
#include "filippov/flow.hpp"
#include "filippov/sliding.hpp"

using namespace filippov;

namespace {

SwitchingFunction h_y() {
    return SwitchingFunction([](Vec2 p) { return p.y; }, [](Vec2) { return Vec2{0, 1}; }, [](Vec2) { return Mat2{}; });
}

SmoothField constant(Vec2 v) {
    return SmoothField([v](Vec2) { return v; });
}

const Rect kWide{-10, 10, -10, 10};

}  // namespace

TEST_CASE("orbit crosses the switching line") {
    PiecewiseSystem Z{constant({0, -1}), constant({0, -1}), h_y()};
    Orbit o = integrate(Z, {0, 1}, 2.0, kWide);
    REQUIRE(o.segments.size() == 2);
    CHECK(o.segments[0].kind == SegmentKind::smooth_plus);
    CHECK(o.segments[0].exit_event == EventKind::crossing);
    CHECK(o.segments[0].t1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(o.segments[1].kind == SegmentKind::smooth_minus);
    CHECK(o.end().y == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(o.termination == Termination::time_limit);
}

TEST_CASE("sliding along the switching line and leaving at a visible fold") {
    // Xh = x − 1.5 < 0 < Yh = 1 until x = 1.5; Z^s = (1, 0)
    PiecewiseSystem Z{SmoothField([](Vec2 p) { return Vec2{1, p.x - 1.5}; }), constant({1, 1}), h_y()};
    Orbit o = integrate(Z, {0, 1}, 4.0, kWide);
    const OrbitSegment* slide = nullptr;
    for (const auto& s : o.segments)
        if (s.kind == SegmentKind::sliding) slide = &s;
    REQUIRE(slide != nullptr);
    CHECK(slide->samples.back().p.x == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(slide->exit_event == EventKind::tangency_exit);
    CHECK(o.segments.back().kind == SegmentKind::smooth_plus);
    CHECK(o.end().y > 0);
}

TEST_CASE("sliding stops at a pseudo-equilibrium") {
    PiecewiseSystem Z{SmoothField([](Vec2 p) { return Vec2{1 - p.x, -1}; }),
                      SmoothField([](Vec2 p) { return Vec2{-1 - p.x, 1}; }), h_y()};
    Orbit o = integrate(Z, {2, 0.5}, 60.0, kWide);
    CHECK(o.termination == Termination::pseudo_equilibrium);
    CHECK(std::fabs(o.end().x) < 1e-4);
}

TEST_CASE("arrival callback and window exit") {
    PiecewiseSystem Z{constant({0, -1}), constant({0, -1}), h_y()};
    IntegrateOptions io;
    int seen = 0;
    io.on_arrival = [&](const SigmaArrival& a) {
        ++seen;
        CHECK(a.from == Side::plus);
        CHECK(a.index == 1);
        return true;
    };
    Orbit o = integrate(Z, {0, 1}, 5.0, kWide, io);
    CHECK(seen == 1);
    CHECK(o.termination == Termination::stopped);
    CHECK(integrate(Z, {0, 1}, 50.0, kWide).termination == Termination::window_exit);
}

TEST_CASE("linear saddle data") {
    SmoothField X([](Vec2 p) { return Vec2{p.x, -2 * p.y}; });
    SaddleData s = find_saddle(X, {0.1, -0.1});
    CHECK(norm(s.location) < 1e-12);
    CHECK(s.lambda1 == doctest::Approx(1.0));
    CHECK(s.lambda2 == doctest::Approx(-2.0));
    CHECK(s.ratio == doctest::Approx(2.0));
    CHECK(std::fabs(s.v_unstable.y) < 1e-9);
    CHECK(std::fabs(s.v_stable.x) < 1e-9);
}

TEST_CASE("manifolds of a linear saddle meet the line x + y = 1") {
    SmoothField X([](Vec2 p) { return Vec2{p.x, -p.y}; });
    SwitchingFunction h([](Vec2 p) { return 1 - p.x - p.y; }, [](Vec2) { return Vec2{-1, -1}; });
    PiecewiseSystem Z{X, constant({1, 2}), h};
    SigmaChart chart(h, 1);
    SaddleData s = find_saddle(X, {0, 0});
    ManifoldIntersections mi = manifold_intersections(Z, chart, s, {-5, 5, -5, 5});
    bool unstable = false, stable = false;
    for (const auto& hit : mi.hits) {
        if (hit.branch < 2 && std::fabs(hit.chart - 1.0) < 1e-6) unstable = true;
        if (hit.branch >= 2 && std::fabs(hit.chart) < 1e-6) stable = true;
    }
    CHECK(unstable);
    CHECK(stable);
    // det[X, Y] = 2x + y vanishes along y = −2x, which meets Σ at x = −1
    auto pe = pe_curve_point(Z, chart, s.location);
    REQUIRE(pe.has_value());
    CHECK(*pe == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("fold of a parabola-shaped switching curve") {
    // X = (1, 0) is tangent to y = x² − 0.25 where the slope vanishes
    SwitchingFunction h([](Vec2 p) { return p.y - p.x * p.x + 0.25; }, [](Vec2 p) { return Vec2{-2 * p.x, 1}; });
    PiecewiseSystem Z{constant({1, 0}), constant({1, 0}), h};
    SigmaChart chart(h, 1);
    CHECK(std::fabs(fold_point_near(Z, chart, 0.3, 0.5)) < 1e-10);
    CHECK_THROWS_AS(fold_point_near(Z, chart, 2.0, 0.5), NoFold);
}

TEST_CASE("closed orbits are classified") {
    PiecewiseSystem rot{SmoothField([](Vec2 p) { return Vec2{-p.y, p.x}; }),
                        SmoothField([](Vec2 p) { return Vec2{-p.y, p.x}; }), h_y()};
    Orbit o = integrate(rot, {0.5, 0.5}, 2 * M_PI, kWide);
    CHECK(classify_cycle(rot, o) == CycleClass::simple);
    CHECK(classify_cycle(rot, o, true) == CycleClass::limit);
    Orbit half = integrate(rot, {0.5, 0.5}, M_PI, kWide);
    CHECK_THROWS_AS(classify_cycle(rot, half), NotClosed);

    // a sliding cycle drawn by hand
    Orbit s;
    OrbitSegment a{SegmentKind::smooth_plus, 0, 1, {{0, {0, 0}}, {0.5, {0.5, 0.5}}, {1, {1, 0}}}};
    OrbitSegment b{SegmentKind::smooth_minus, 1, 2, {{1, {1, 0}}, {1.5, {0.5, -0.5}}, {2, {0.2, 0}}}};
    OrbitSegment c{SegmentKind::sliding, 2, 3, {{2, {0.2, 0}}, {3, {0, 0}}}};
    s.segments = {a, b, c};
    CHECK(classify_cycle(rot, s) == CycleClass::sliding_cycle);
}

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "filippov/errors.hpp"
#include "filippov/flow.hpp"
#include "filippov/models.hpp"
#include "filippov/oracles.hpp"
#include "filippov/parallel.hpp"

using namespace filippov;

namespace {

const char* kPolyDoc = R"(# polynomial model written out
name = poly-expr
const.r = 3
const.k = -1
const.d = 1.2
const.m = 0
X.x = x
X.y = -r*y - x^3 - k*x
Y.x = -1
Y.y = -x + d
h = y + x/4 - m
saddle = 0, 0
window = -6, 6, -12, 12
)";

}  // namespace

TEST_CASE("expression model reproduces the built-in fields") {
    CycleSystem e = parse_model_document(kPolyDoc);
    CycleSystem b = poly_system({3.0, -1.0, 1.2, 0.0});
    for (Vec2 p : {Vec2{0.3, -0.2}, Vec2{-1.1, 0.7}, Vec2{2.0, 1.0}}) {
        CHECK(norm(e.Z.plus(p) - b.Z.plus(p)) < 1e-14);
        CHECK(norm(e.Z.minus(p) - b.Z.minus(p)) < 1e-14);
        CHECK(e.Z.sw(p) == doctest::Approx(b.Z.sw(p)));
        Mat2 J = e.Z.plus.jacobian(p), K = b.Z.plus.jacobian(p);
        CHECK(J.yx == doctest::Approx(K.yx));
        CHECK(J.yy == doctest::Approx(K.yy));
    }
    CHECK(e.name == "poly-expr");
    CHECK(e.window.ymax == 12.0);
}

TEST_CASE("model overrides") {
    CycleSystem e = parse_model_document(kPolyDoc, "<doc>", {{"m", 0.1}});
    CHECK(e.Z.sw({0, 0}) == doctest::Approx(-0.1));
    CHECK_THROWS_AS(parse_model_document(kPolyDoc, "<doc>", {{"zz", 1}}), ConfigError);
    CycleSystem b = make_builtin("pendulum(-0.1,-0.77,0,0.1)", {{"a3", 0.05}});
    CHECK(b.params[2] == 0.05);
    CycleSystem m = parse_model_document("model = poly(3,-1,1.2,0)\n", "<doc>", {{"d", 1.5}});
    CHECK(m.params[2] == 1.5);
}

TEST_CASE("model documents with errors") {
    CHECK_THROWS_AS(parse_model_document("X.x = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_document("model = poly(3,-1,1.2,0)\nmodel = poly(1,-1,1,0)\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_document("colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_document("just text\n"), ConfigError);
    CHECK_THROWS_AS(make_builtin("poly(1,2)"), ConfigError);
    CHECK_THROWS_AS(make_builtin("torus(1)"), ConfigError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), ConfigError);
}

TEST_CASE("model file on disk") {
    const char* path = "unit_model_tmp.txt";
    {
        std::ofstream f(path);
        f << kPolyDoc;
    }
    CycleSystem e = load_model(path, {{"d", 1.3}});
    CHECK(e.Z.minus({0, 0}).y == doctest::Approx(1.3));
    std::remove(path);
}

TEST_CASE("pendulum saddle ratio") {
    for (double a1 : {-0.2, -0.1, -0.05}) {
        CycleSystem s = pendulum_system({a1, -0.77, 0.0, 0.1});
        SaddleData sd = find_saddle(s.Z.plus, s.saddle_guess);
        CHECK(sd.location.x == doctest::Approx(-M_PI));
        CHECK(sd.ratio == doctest::Approx(pendulum_ratio(a1)).epsilon(1e-8));
    }
}

TEST_CASE("closed-form oracles all agree") {
    for (const auto& c : closed_form_oracles()) {
        INFO(c.name);
        CHECK(c.pass());
    }
}

TEST_CASE("fixtures are exposed by label") {
    CHECK(pendulum_fixture_labels().size() == 8);
    CHECK_THROWS(pendulum_region_fixture("R9"));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    int sum = 0;
    for (int h : hit) sum += h;
    CHECK(sum == 1000);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw DomainError("seven"); }), DomainError);
}

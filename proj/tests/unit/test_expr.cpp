#include "doctest.h"

#include <cmath>

#include "filippov/errors.hpp"
#include "filippov/expr.hpp"
#include "filippov/format.hpp"

using namespace filippov;

TEST_CASE("expression precedence and associativity") {
    CHECK(parse_expression("1 + 2*3").eval(0, 0) == doctest::Approx(7));
    CHECK(parse_expression("2^3^2").eval(0, 0) == doctest::Approx(512));
    CHECK(parse_expression("-2^2").eval(0, 0) == doctest::Approx(-4));
    CHECK(parse_expression("(1 + 2)*3").eval(0, 0) == doctest::Approx(9));
    CHECK(parse_expression("8/4/2").eval(0, 0) == doctest::Approx(1));
    CHECK(parse_expression("x - y - 1").eval(5, 2) == doctest::Approx(2));
}

TEST_CASE("expression names and functions") {
    CHECK(parse_expression("sin(pi/2) + cos(0) + exp(0) + ln(e) + sqrt(9)").eval(0, 0) == doctest::Approx(7));
    CHECK(parse_expression("a*x + b", {{"a", 2}, {"b", -1}}).eval(3, 0) == doctest::Approx(5));
}

TEST_CASE("symbolic derivative matches central differences") {
    Expr f = parse_expression("sin(x)*y^3 + exp(x*y) - ln(1 + x^2)/(2 + y)");
    Expr fx = f.diff('x'), fy = f.diff('y');
    const double h = 1e-6;
    for (double x : {-0.7, 0.3, 1.1})
        for (double y : {-0.4, 0.5}) {
            double nx = (f.eval(x + h, y) - f.eval(x - h, y)) / (2 * h);
            double ny = (f.eval(x, y + h) - f.eval(x, y - h)) / (2 * h);
            CHECK(fx.eval(x, y) == doctest::Approx(nx).epsilon(1e-7));
            CHECK(fy.eval(x, y) == doctest::Approx(ny).epsilon(1e-7));
        }
}

TEST_CASE("malformed expressions are rejected") {
    CHECK_THROWS_AS(parse_expression("1 +"), ParseError);
    CHECK_THROWS_AS(parse_expression("(x"), ParseError);
    CHECK_THROWS_AS(parse_expression("foo + 1"), ParseError);
    CHECK_THROWS_AS(parse_expression("sin x"), ParseError);
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(-3.0) == "-3");
    for (double v : {M_PI, 1e-300, -2.5e17, 1.0 / 3})
        CHECK(std::stod(fmt(v)) == v);
}

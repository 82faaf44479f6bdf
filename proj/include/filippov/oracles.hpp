#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "filippov/models.hpp"
#include "filippov/psys.hpp"

namespace filippov {

/// Saddle normal form X̃ = (−r x, y) with Σ: y = x − k; the minus field only matters for the fold search.
PiecewiseSystem normal_form_system(double k, double r);

/// Integrates X̃ from (x, x − k) to the section y = eps and rescales by eps^r.
double normal_form_numeric(double k, double r, double x, double eps = 1.0);

/// Integrates W = (a y + c2, b x + c1) from (x, 0) to y = eps and returns the first coordinate.
double resonant_numeric(double a, double b, double c1, double c2, double eps, double x);

/// Y arc of the polynomial model from (x0, −x0/4 + m) to its next arrival on Σ.
double poly_Y_return_numeric(const PolyModelParams& p, double x0);

struct OracleCheck {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double tol = 0.0;
    std::string error;
    bool pass() const { return error.empty() && std::abs(expected - computed) <= tol; }
};

/// p_a, q_a and π_a(x02) of one pendulum region fixture through the generic pipeline.
/// A positive pi_tol replaces the fixture's tolerance on π values.
std::vector<OracleCheck> evaluate_fixture(const std::string& label, double pi_tol = 0.0);

/// The closed-form checks run by the fixtures command.
std::vector<OracleCheck> closed_form_oracles();

}  // namespace filippov

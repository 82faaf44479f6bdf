#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "filippov/system.hpp"

namespace filippov {

struct PolyModelParams {
    double r = 1.0;
    double k = -1.0;
    double d = 1.0;
    double m = 0.0;
};

struct PendulumParams {
    double a1 = -0.1;
    double a2 = -0.77;
    double a3 = 0.0;
    double a4 = 0.1;
};

/// X = (x, −r y − x³ − k x), Y = (−1, −x + d), h = y + x/4 − m.
PiecewiseSystem polynomial_model(const PolyModelParams& p);
CycleSystem poly_system(const PolyModelParams& p);

/// Closed-form Y return: 2d − 1/2 − x0.
double poly_Y_return(const PolyModelParams& p, double x0);

struct PolyManifoldX {
    double x1 = 0.0, x3 = 0.0, x4 = 0.0;
};

/// m = 0 closed forms; other m through manifold_intersections.
PolyManifoldX poly_unstable_manifold_x(const PolyModelParams& p);

/// Closed-form first component of the sliding field at chart x (m = 0 display, general m kept).
double poly_sliding_quotient(const PolyModelParams& p, double x);

/// X = (y, a1 y − sin x), Y = X + (0, a2 (x + π/2)), h = y + a4 (x + π) − a3.
PiecewiseSystem pendulum_model(const PendulumParams& p);
CycleSystem pendulum_system(const PendulumParams& p);

/// Hyperbolicity ratio of the pendulum saddle.
double pendulum_ratio(double a1);

struct PendulumFixture {
    std::string label;
    PendulumParams params;
    Vec2 x01;
    double x02 = 0.0;  ///< chart value on Σ
    double p_a = 0.0, q_a = 0.0;
    double pi_x01 = 0.0, pi_x02 = 0.0;
    double tol_pi = 1e-3;
    double tol_root = 1e-4;
};

const std::vector<std::string>& pendulum_fixture_labels();
PendulumFixture pendulum_region_fixture(const std::string& label);

/// "poly(r,k,d,m)" or "pendulum(a1,a2,a3,a4)"; overrides replace named parameters.
CycleSystem make_builtin(const std::string& spec, const std::map<std::string, double>& overrides = {});
bool is_builtin_spec(const std::string& spec);

/// Reads a key = value model document (see README for the grammar). Overrides replace const.NAME values,
/// or the parameters of a `model =` built-in.
CycleSystem parse_model_document(const std::string& text, const std::string& origin = "<model>",
                                 const std::map<std::string, double>& overrides = {});

/// Built-in spec string or a path to a model file.
CycleSystem load_model(const std::string& spec, const std::map<std::string, double>& overrides = {});

}  // namespace filippov

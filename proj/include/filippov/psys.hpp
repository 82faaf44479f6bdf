#pragma once

#include <functional>
#include <string>

#include "filippov/errors.hpp"
#include "filippov/geometry.hpp"

namespace filippov {

using VecFn = std::function<Vec2(Vec2)>;
using MatFn = std::function<Mat2(Vec2)>;
using ScalarFn = std::function<double(Vec2)>;

inline constexpr double kTolTang = 1e-10;     ///< tie tolerance on Lie derivatives
inline constexpr double kTolOnSigma = 1e-9;   ///< |h| accepted as "on Σ"
inline constexpr double kTolFold = 1e-9;      ///< second Lie derivative tie tolerance

/// Smooth planar vector field. The Jacobian falls back to central differences (step 1e-6).
class SmoothField {
public:
    SmoothField() = default;
    explicit SmoothField(VecFn f, MatFn jac = {}) : f_(std::move(f)), jac_(std::move(jac)) {}

    Vec2 operator()(Vec2 p) const { return f_(p); }
    Vec2 eval(Vec2 p) const { return f_(p); }
    Mat2 jacobian(Vec2 p) const { return jac_ ? jac_(p) : jacobian_fd(p); }
    Mat2 jacobian_fd(Vec2 p) const;
    bool has_closed_jacobian() const { return static_cast<bool>(jac_); }
    bool valid() const { return static_cast<bool>(f_); }

    SmoothField scaled(double c) const;
    SmoothField negated() const { return scaled(-1.0); }

private:
    VecFn f_;
    MatFn jac_;
};

/// Scalar switching function h. Gradient falls back to step 1e-6, Hessian to step 1e-5.
class SwitchingFunction {
public:
    SwitchingFunction() = default;
    explicit SwitchingFunction(ScalarFn h, VecFn grad = {}, MatFn hess = {})
        : h_(std::move(h)), grad_(std::move(grad)), hess_(std::move(hess)) {}

    double operator()(Vec2 p) const { return h_(p); }
    double eval(Vec2 p) const { return h_(p); }
    Vec2 gradient(Vec2 p) const;
    Mat2 hessian(Vec2 p) const;

private:
    ScalarFn h_;
    VecFn grad_;
    MatFn hess_;
};

/// Z = (X, Y): X governs h >= 0, Y governs h <= 0.
struct PiecewiseSystem {
    SmoothField plus;
    SmoothField minus;
    SwitchingFunction sw;

    Vec2 field(Vec2 p) const { return sw(p) >= 0.0 ? plus(p) : minus(p); }
    PiecewiseSystem negated() const { return {plus.negated(), minus.negated(), sw}; }
};

enum class SigmaTag { crossing, sliding, escaping, tangency };
enum class Side { plus, minus };
enum class TangencyKind { visible_fold, invisible_fold, higher_order };

struct SigmaPointClass {
    SigmaTag tag = SigmaTag::tangency;
    double lieX = 0.0;
    double lieY = 0.0;
};

/// ⟨F(p), ∇h(p)⟩
double lie_derivative(const SmoothField& F, const SwitchingFunction& h, Vec2 p);

/// F(Fh)(p) = ⟨J_F F, ∇h⟩ + Fᵀ H_h F
double second_lie(const SmoothField& F, const SwitchingFunction& h, Vec2 p);

SigmaPointClass classify_sigma_point(const PiecewiseSystem& Z, Vec2 p);

/// Tag from Lie derivative values alone (no on-Σ check).
SigmaTag sigma_tag(double lieX, double lieY);

TangencyKind classify_tangency(const SmoothField& F, const SwitchingFunction& h, Vec2 p, Side side);

std::string to_string(SigmaTag t);
std::string to_string(TangencyKind k);

}  // namespace filippov

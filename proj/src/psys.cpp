#include "filippov/psys.hpp"

#include <cmath>
#include <sstream>

namespace filippov {

Mat2 SmoothField::jacobian_fd(Vec2 p) const {
    const double e = 1e-6;
    Vec2 dx = (f_({p.x + e, p.y}) - f_({p.x - e, p.y})) / (2 * e);
    Vec2 dy = (f_({p.x, p.y + e}) - f_({p.x, p.y - e})) / (2 * e);
    return {dx.x, dy.x, dx.y, dy.y};
}

SmoothField SmoothField::scaled(double c) const {
    VecFn f = f_;
    MatFn j = jac_;
    VecFn fs = [f, c](Vec2 p) { return c * f(p); };
    MatFn js;
    if (j) js = [j, c](Vec2 p) { return c * j(p); };
    return SmoothField(fs, js);
}

Vec2 SwitchingFunction::gradient(Vec2 p) const {
    if (grad_) return grad_(p);
    const double e = 1e-6;
    return {(h_({p.x + e, p.y}) - h_({p.x - e, p.y})) / (2 * e),
            (h_({p.x, p.y + e}) - h_({p.x, p.y - e})) / (2 * e)};
}

Mat2 SwitchingFunction::hessian(Vec2 p) const {
    if (hess_) return hess_(p);
    const double e = 1e-5;
    const double f0 = h_(p);
    double hxx = (h_({p.x + e, p.y}) - 2 * f0 + h_({p.x - e, p.y})) / (e * e);
    double hyy = (h_({p.x, p.y + e}) - 2 * f0 + h_({p.x, p.y - e})) / (e * e);
    double hxy = (h_({p.x + e, p.y + e}) - h_({p.x + e, p.y - e}) - h_({p.x - e, p.y + e}) +
                  h_({p.x - e, p.y - e})) /
                 (4 * e * e);
    return {hxx, hxy, hxy, hyy};
}

double lie_derivative(const SmoothField& F, const SwitchingFunction& h, Vec2 p) {
    return dot(F(p), h.gradient(p));
}

double second_lie(const SmoothField& F, const SwitchingFunction& h, Vec2 p) {
    Vec2 f = F(p);
    return dot(F.jacobian(p) * f, h.gradient(p)) + dot(f, h.hessian(p) * f);
}

SigmaTag sigma_tag(double lx, double ly) {
    if (std::fabs(lx) <= kTolTang || std::fabs(ly) <= kTolTang) return SigmaTag::tangency;
    if (lx * ly > 0) return SigmaTag::crossing;
    if (lx < 0) return SigmaTag::sliding;
    return SigmaTag::escaping;
}

SigmaPointClass classify_sigma_point(const PiecewiseSystem& Z, Vec2 p) {
    double hv = Z.sw(p);
    if (!(std::fabs(hv) <= kTolOnSigma)) {
        std::ostringstream os;
        os << "|h(p)| = " << std::fabs(hv) << " exceeds 1e-9";
        throw NotOnSigma(os.str());
    }
    SigmaPointClass c;
    c.lieX = lie_derivative(Z.plus, Z.sw, p);
    c.lieY = lie_derivative(Z.minus, Z.sw, p);
    c.tag = sigma_tag(c.lieX, c.lieY);
    return c;
}

TangencyKind classify_tangency(const SmoothField& F, const SwitchingFunction& h, Vec2 p, Side side) {
    double l1 = lie_derivative(F, h, p);
    if (!(std::fabs(l1) <= kTolOnSigma)) {
        std::ostringstream os;
        os << "|Fh(p)| = " << std::fabs(l1) << " exceeds 1e-9";
        throw NotTangent(os.str());
    }
    double l2 = second_lie(F, h, p);
    if (std::fabs(l2) <= kTolFold) return TangencyKind::higher_order;
    bool visible = side == Side::plus ? l2 > 0 : l2 < 0;
    return visible ? TangencyKind::visible_fold : TangencyKind::invisible_fold;
}

std::string to_string(SigmaTag t) {
    switch (t) {
        case SigmaTag::crossing: return "crossing";
        case SigmaTag::sliding: return "sliding";
        case SigmaTag::escaping: return "escaping";
        case SigmaTag::tangency: return "tangency";
    }
    return "?";
}

std::string to_string(TangencyKind k) {
    switch (k) {
        case TangencyKind::visible_fold: return "visible_fold";
        case TangencyKind::invisible_fold: return "invisible_fold";
        case TangencyKind::higher_order: return "higher_order";
    }
    return "?";
}

}  // namespace filippov

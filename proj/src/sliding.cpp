#include "filippov/sliding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace filippov {

Vec2 sliding_field_unchecked(const PiecewiseSystem& Z, Vec2 p) {
    Vec2 g = Z.sw.gradient(p);
    Vec2 X = Z.plus(p), Y = Z.minus(p);
    double xh = dot(X, g), yh = dot(Y, g);
    double den = yh - xh;
    if (std::fabs(den) < 1e-12) throw DegenerateDenominator("|Yh - Xh| < 1e-12");
    return (yh * X - xh * Y) / den;
}

Vec2 sliding_field(const PiecewiseSystem& Z, Vec2 p) {
    SigmaPointClass c = classify_sigma_point(Z, p);
    if (c.tag != SigmaTag::sliding && c.tag != SigmaTag::escaping)
        throw NotSlidingRegion("point is " + to_string(c.tag));
    return sliding_field_unchecked(Z, p);
}

Vec2 normalized_sliding_field(const PiecewiseSystem& Z, Vec2 p) {
    Vec2 g = Z.sw.gradient(p);
    Vec2 X = Z.plus(p), Y = Z.minus(p);
    return dot(Y, g) * X - dot(X, g) * Y;
}

double normalized_chart_component(const PiecewiseSystem& Z, const SigmaChart& chart, double c) {
    return chart.component(normalized_sliding_field(Z, chart.param(c)));
}

std::vector<double> normalized_sliding_roots(const PiecewiseSystem& Z, const SigmaChart& chart, double lo,
                                             double hi, int scan) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    auto f = [&](double c) { return normalized_chart_component(Z, chart, c); };
    double c0 = lo, f0 = f(lo);
    if (f0 == 0.0) roots.push_back(lo);
    for (int i = 1; i < scan; ++i) {
        double c1 = lo + (hi - lo) * i / (scan - 1);
        double f1 = f(c1);
        if (f1 == 0.0) {
            roots.push_back(c1);
        } else if (f0 != 0.0 && (f0 < 0) != (f1 < 0)) {
            double a = c0, b = c1, fa = f0;
            while (b - a > 1e-12 * std::max(1.0, std::fabs(a))) {
                double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                double fm = f(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { b = m; }
            }
            roots.push_back(0.5 * (a + b));
        }
        c0 = c1;
        f0 = f1;
    }
    return roots;
}

std::optional<PseudoEquilibrium> type_pseudo_equilibrium(const PiecewiseSystem& Z, const SigmaChart& chart,
                                                         double c) {
    Vec2 p = chart.param(c);
    SigmaPointClass cls = classify_sigma_point(Z, p);
    if (cls.tag != SigmaTag::sliding && cls.tag != SigmaTag::escaping) return std::nullopt;
    PseudoEquilibrium pe;
    pe.location = p;
    pe.chart = c;
    pe.region = cls.tag == SigmaTag::sliding ? SlidingRegion::sliding : SlidingRegion::escaping;
    const double e = 1e-6;
    auto zs = [&](double cc) { return chart.component(sliding_field_unchecked(Z, chart.param(cc))); };
    pe.slope = (zs(c + e) - zs(c - e)) / (2 * e);
    if (std::fabs(pe.slope) <= 1e-6) {
        pe.kind = PEKind::degenerate;
    } else {
        bool attracting = pe.slope < 0;
        bool node = pe.region == SlidingRegion::sliding ? attracting : !attracting;
        pe.kind = node ? PEKind::pseudonode : PEKind::pseudosaddle;
    }
    return pe;
}

std::vector<PseudoEquilibrium> find_pseudo_equilibria(const PiecewiseSystem& Z, const SigmaChart& chart,
                                                      double lo, double hi) {
    std::vector<PseudoEquilibrium> out;
    for (double c : normalized_sliding_roots(Z, chart, lo, hi)) {
        if (auto pe = type_pseudo_equilibrium(Z, chart, c)) out.push_back(*pe);
    }
    return out;
}

std::vector<PseudoEquilibrium> find_pseudo_equilibria(const PiecewiseSystem& Z, double lo, double hi) {
    return find_pseudo_equilibria(Z, SigmaChart(Z.sw), lo, hi);
}

double mu_coefficient(const PiecewiseSystem& Z, const SigmaChart& chart, Vec2 s) {
    if (std::fabs(Z.sw(s)) > kTolOnSigma) throw NotOnSigma("mu_coefficient needs a point on the switching set");
    const double e = 1e-6;
    double c = chart.inverse(s);
    return (normalized_chart_component(Z, chart, c + e) - normalized_chart_component(Z, chart, c - e)) / (2 * e);
}

double mu_coefficient(const PiecewiseSystem& Z, Vec2 s) { return mu_coefficient(Z, SigmaChart(Z.sw), s); }

namespace {

double det_xy(const PiecewiseSystem& Z, Vec2 q) { return cross(Z.plus(q), Z.minus(q)); }

Vec2 det_grad(const PiecewiseSystem& Z, Vec2 q) {
    Vec2 X = Z.plus(q), Y = Z.minus(q);
    Mat2 JX = Z.plus.jacobian(q), JY = Z.minus.jacobian(q);
    // d/dv (X1 Y2 - X2 Y1)
    return {JX.xx * Y.y + X.x * JY.yx - JX.yx * Y.x - X.y * JY.xx,
            JX.xy * Y.y + X.x * JY.yy - JX.yy * Y.x - X.y * JY.xy};
}

Vec2 correct(const PiecewiseSystem& Z, Vec2 q) {
    for (int i = 0; i < 8; ++i) {
        Vec2 g = det_grad(Z, q);
        double g2 = dot(g, g);
        if (g2 == 0) break;
        double v = det_xy(Z, q);
        q -= (v / g2) * g;
        if (std::fabs(v) < 1e-15) break;
    }
    return q;
}

// Newton on the pair (det = 0, h = 0).
Vec2 polish_meeting(const PiecewiseSystem& Z, Vec2 q) {
    for (int i = 0; i < 30; ++i) {
        double f1 = det_xy(Z, q), f2 = Z.sw(q);
        Vec2 g1 = det_grad(Z, q), g2 = Z.sw.gradient(q);
        double D = g1.x * g2.y - g1.y * g2.x;
        if (D == 0) break;
        Vec2 step{(f1 * g2.y - f2 * g1.y) / D, (g1.x * f2 - g2.x * f1) / D};
        q -= step;
        if (norm(step) < 1e-15 * (1 + norm(q))) break;
    }
    return q;
}

}  // namespace

std::optional<double> pe_curve_point(const PiecewiseSystem& Z, const SigmaChart& chart, Vec2 saddle,
                                     double max_arc) {
    double h0 = Z.sw(saddle);
    if (std::fabs(h0) <= 1e-10) return chart.inverse(saddle);
    Vec2 g0 = det_grad(Z, saddle);
    if (norm(g0) == 0) return std::nullopt;
    Vec2 t0 = perp(g0) / norm(g0);
    std::optional<double> best;
    double best_arc = max_arc + 1;
    for (int dir : {1, -1}) {
        Vec2 t = dir * t0;
        Vec2 q = saddle;
        double arc = 0, ds = 0.01;
        while (arc < std::min(max_arc, best_arc)) {
            Vec2 qn = correct(Z, q + ds * t);
            if (!finite(qn)) break;
            if ((Z.sw(qn) < 0) != (h0 < 0)) {
                Vec2 a = q, b = qn;
                for (int i = 0; i < 50; ++i) {
                    Vec2 m = correct(Z, 0.5 * (a + b));
                    if ((Z.sw(m) < 0) != (h0 < 0)) b = m; else a = m;
                }
                Vec2 hit = polish_meeting(Z, 0.5 * (a + b));
                if (arc < best_arc) {
                    best_arc = arc;
                    best = chart.inverse(chart.project(hit));
                }
                break;
            }
            Vec2 g = det_grad(Z, qn);
            if (norm(g) == 0) break;
            Vec2 tn = perp(g) / norm(g);
            if (dot(tn, t) < 0) tn = -tn;
            arc += norm(qn - q);
            q = qn;
            t = tn;
        }
    }
    return best;
}

std::string to_string(PEKind k) {
    switch (k) {
        case PEKind::pseudonode: return "pseudonode";
        case PEKind::pseudosaddle: return "pseudosaddle";
        case PEKind::degenerate: return "degenerate";
    }
    return "?";
}

std::string to_string(SlidingRegion r) { return r == SlidingRegion::sliding ? "sliding" : "escaping"; }

}  // namespace filippov

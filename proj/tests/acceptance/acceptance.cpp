// One PASS/FAIL line per acceptance criterion; details of failing items follow on "  - " lines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "filippov/bifurc.hpp"
#include "filippov/chart.hpp"
#include "filippov/models.hpp"
#include "filippov/oracles.hpp"
#include "filippov/retmap.hpp"
#include "filippov/sliding.hpp"

using namespace filippov;

namespace {

struct Line {
    int id;
    std::string title;
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
};

std::string f6(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.6f", v);
    return b;
}

std::string g3(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

std::vector<ReturnMap> g_maps;  // every map computed here, for the monotonicity property

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------------------------------------ 1

Line criterion1() {
    Line L{1, "pendulum regression"};
    auto t0 = std::chrono::steady_clock::now();
    int ok = 0, total = 0;
    for (const auto& label : pendulum_fixture_labels()) {
        for (const auto& c : evaluate_fixture(label)) {
            ++total;
            if (c.pass()) {
                ++ok;
            } else {
                L.fail(c.name + ": expected " + f6(c.expected) + ", computed " + f6(c.computed) + ", |diff| " +
                       g3(std::fabs(c.expected - c.computed)) + " > " + g3(c.tol) + (c.error.empty() ? "" : " " + c.error));
            }
        }
    }
    double secs = seconds_since(t0);
    if (secs >= 30) L.fail("runtime " + g3(secs) + " s");
    L.summary = std::to_string(ok) + "/" + std::to_string(total) + " fixture values within tolerance, " + g3(secs) + " s";
    return L;
}

// ------------------------------------------------------------------------------------------ 2

Line criterion2() {
    Line L{2, "limit-cycle brackets"};
    struct Case {
        std::string label;
        double pi_lo, pi_hi;  // reference π(−3.1), π(−2.9)
    };
    const std::vector<Case> cases = {{"R2", -3.00766, -2.9955}, {"alpha_plus", -2.96489, -2.95331}, {"R3", -3.31943, -2.89616}};
    int ok = 0;
    for (const auto& c : cases) {
        PendulumFixture f = pendulum_region_fixture(c.label);
        CycleSystem sys = pendulum_system(f.params);
        bool good = true;

        ReturnResult lo = first_return(sys, -3.1), hi = first_return(sys, -2.9);
        if (std::fabs(lo.value - c.pi_lo) > 1e-3) {
            good = false;
            L.fail(c.label + ": pi(-3.1) = " + f6(lo.value) + " (" + to_string(lo.outcome) + "), reference " + f6(c.pi_lo));
        }
        if (std::fabs(hi.value - c.pi_hi) > 1e-3) {
            good = false;
            L.fail(c.label + ": pi(-2.9) = " + f6(hi.value) + ", reference " + f6(c.pi_hi));
        }
        if (!(lo.outcome == ReturnOutcome::returned && lo.value > -3.1)) {
            good = false;
            L.fail(c.label + ": bracketing inequality pi(-3.1) > -3.1 fails (pi = " + f6(lo.value) + ", " +
                   to_string(lo.outcome) + ")");
        }
        if (!(hi.value < -2.9)) {
            good = false;
            L.fail(c.label + ": bracketing inequality pi(-2.9) < -2.9 fails (pi = " + f6(hi.value) + ")");
        }

        // π on a fine grid of [−3.1, −2.9]; an attracting sign change of π(x) − x
        ReturnMap map = tabulate_map(
            [&](double u) {
                ReturnResult r = first_return(sys, -3.1 + u);
                return r.outcome == ReturnOutcome::no_return ? std::nan("") : r.value;
            },
            -3.1, 0.2, 80, false);
        map.samples.push_back({0.2, -2.9, hi.value, hi.outcome});
        for (auto& s : map.samples) s.outcome = first_return(sys, s.x).outcome;
        g_maps.push_back(map);
        bool found = false;
        for (const auto& fp : find_fixed_points(map))
            if (fp.stability == Stability::attracting && fp.x0 > -3.1 && fp.x0 < -2.9) found = true;
        if (!found) {
            good = false;
            BasePoint bp = base_point(sys);
            ReturnMapOptions mo;
            mo.samples = 128;
            FixedPoint fp = find_fixed_point(sample_return_map(sys, bp, mo));
            L.fail(c.label + ": no attracting fixed point in (-3.1, -2.9)" +
                   (fp.found ? "; nearest one is at " + f6(fp.x0) + " (" + to_string(fp.stability) + ")" : ""));
        }
        if (good) ++ok;
    }
    L.summary = std::to_string(ok) + "/3 cases reproduce the fixed point and bracketing values";
    return L;
}

// ------------------------------------------------------------------------------------------ 3

Line criterion3() {
    Line L{3, "normal-form transition"};
    double worst = 0, worst_fold = 0;
    int points = 0;
    for (double k : {-1.0, 0.0, 1.0})
        for (double r : {std::sqrt(2.0), 1 / std::sqrt(2.0)}) {
            double base = normal_form_base(k, r);
            // ratio 2^{-1/2} keeps base + u representable at the finest point
            for (int n = 0; n < 64; ++n) {
                double x = base + 0.125 * std::pow(2.0, -0.5 * n);
                double e = std::fabs(normal_form_numeric(k, r, x, 1.0) - normal_form_transition(k, r, x));
                worst = std::max(worst, e);
                ++points;
                if (e > 1e-8) L.fail("k=" + g3(k) + " r=" + g3(r) + " x=" + f6(x) + ": |diff| " + g3(e));
            }
            if (k < 0) {
                PiecewiseSystem Z = normal_form_system(k, r);
                SigmaChart chart(Z.sw, 1);
                double fold = fold_point_near(Z, chart, base + 0.05, 0.5);
                double e = std::fabs(fold - k / (1 + r));
                worst_fold = std::max(worst_fold, e);
                if (e > 1e-10) L.fail("fold k=" + g3(k) + " r=" + g3(r) + ": |diff| " + g3(e));
            }
        }
    L.summary = std::to_string(points) + " points, max |diff| " + g3(worst) + "; fold max |diff| " + g3(worst_fold);
    return L;
}

// ------------------------------------------------------------------------------------------ 4

Line criterion4() {
    Line L{4, "resonant transition"};
    const double a = 1.0, b = 2.0;
    struct Case {
        const char* name;
        double ytil;
        double c1, c2;
    };
    const double yt = 0.3;
    const std::vector<Case> cases = {{"ytilde<0", -yt, 0.0, a * yt},
                                     {"ytilde=0", 0.0, 0.0, 0.0},
                                     {"ytilde>0", yt, yt * std::sqrt(a * b), -a * yt}};
    double worst = 0;
    int radicands = 0;
    for (const auto& c : cases) {
        const double eps = std::max(0.0, c.ytil) + 0.25;
        for (double x = 0.2; x <= 1.6 + 1e-12; x += 0.1) {
            double e = std::fabs(resonant_numeric(a, b, c.c1, c.c2, eps, x) - resonant_transition(a, b, c.c1, c.c2, eps, x));
            worst = std::max(worst, e);
            if (e > 1e-8) L.fail(std::string(c.name) + " x=" + f6(x) + ": |diff| " + g3(e));
        }
        for (int i = 1; i <= 200; ++i) {
            double e = std::max(0.0, c.ytil) + 0.01 * i;
            ++radicands;
            if (!(resonant_radicand(a, b, c.c1, c.c2, e) > 0)) L.fail(std::string(c.name) + ": radicand not positive at eps=" + g3(e));
        }
    }
    L.summary = "3 sign cases, max |diff| " + g3(worst) + ", " + std::to_string(radicands) + " radicands positive";
    return L;
}

// ------------------------------------------------------------------------------------------ 5

// Σ_{n>=2} C(r,n) s^n
double binomial_tail(double r, double s) {
    double c = r * (r - 1) / 2, p = s * s, sum = 0;
    for (int n = 2; n < 200; ++n) {
        double term = c * p;
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        c *= (r - n) / (n + 1);
        p *= s;
    }
    return sum;
}

/// Normal-form transition measured from its value at the base, as a function of u = x − base.
double transition_offset(int beta_sign, double r, double u) {
    if (beta_sign == 0) return std::pow(u, r + 1);  // k = 0
    if (beta_sign > 0) return (1 + u) * std::pow(u, r);  // k = 1
    // k = −1, fold base: expand to keep the cancelling linear terms out of floating point
    const double w0 = r / (1 + r), s = u / w0;
    const double tail = binomial_tail(r, s), g = r * s + tail;
    return std::pow(w0, r + 1) * (s * g - tail / r);
}

Line criterion5() {
    Line L{5, "derivative asymptotics"};
    struct Case {
        int beta;
        double r;
        const char* rname;
        int order;
        TrendKind expect;
    };
    const double s2 = std::sqrt(2.0), is2 = 1 / std::sqrt(2.0), e = std::exp(1.0);
    const std::vector<Case> cases = {
        {-1, s2, "sqrt2", 1, TrendKind::limit_zero},        {-1, is2, "1/sqrt2", 1, TrendKind::limit_zero},
        {0, s2, "sqrt2", 1, TrendKind::limit_zero},         {0, s2, "sqrt2", 2, TrendKind::limit_zero},
        {0, s2, "sqrt2", 3, TrendKind::limit_infinite},     {0, e, "e", 3, TrendKind::limit_zero},
        {0, e, "e", 4, TrendKind::limit_infinite},          {-1, is2, "1/sqrt2", 1, TrendKind::limit_infinite},
        {0, is2, "1/sqrt2", 1, TrendKind::limit_infinite},  {1, s2, "sqrt2", 1, TrendKind::limit_zero},
        {1, s2, "sqrt2", 2, TrendKind::limit_infinite},     {1, e, "e", 3, TrendKind::limit_infinite},
    };
    int ok = 0;
    for (const auto& c : cases) {
        // π = Φ ∘ (transition) ∘ ψ with ψ(u) = u(1 + 0.3u), Φ(v) = v + 0.2v²
        auto pi = [&](double u) {
            double v = transition_offset(c.beta, c.r, u * (1 + 0.3 * u));
            return v + 0.2 * v * v;
        };
        ReturnMap map = tabulate_map(pi, 0.0, 0.1, 64, true, c.beta);
        std::string got;
        bool pass = false;
        try {
            DerivativeTrend t = derivative_probe(map, c.order);
            got = to_string(t.kind) + " (slope " + g3(t.slope) + ")";
            pass = t.kind == c.expect;
        } catch (const Error& ex) {
            got = ex.what();
        }
        if (pass) ++ok;
        else
            L.fail(std::string("beta") + (c.beta < 0 ? "<0" : c.beta > 0 ? ">0" : "=0") + " r=" + c.rname +
                   " order " + std::to_string(c.order) + ": expected " + to_string(c.expect) + ", probe says " + got);
    }
    L.summary = std::to_string(ok) + "/" + std::to_string(cases.size()) + " cases classified as stated";
    return L;
}

// ------------------------------------------------------------------------------------------ 6

double alpha_root_in_d(double r, double m) {
    auto al = [&](double d) { return alpha(poly_system({r, -1.0, d, m})); };
    double d1 = 1.0, d2 = 1.2, a1 = al(d1), a2 = al(d2);
    for (int i = 0; i < 30 && a2 != a1 && std::fabs(a2) > 1e-14; ++i) {
        double d3 = d2 - a2 * (d2 - d1) / (a2 - a1);
        d1 = d2;
        a1 = a2;
        d2 = d3;
        a2 = al(d2);
    }
    return d2;
}

Line criterion6() {
    Line L{6, "fixed-point trichotomy"};
    int cells = 0, ok = 0;
    for (double r : {0.5, 1.5})
        for (double m : {-0.1, -0.05, 0.0, 0.05, 0.1}) {
            const double d0 = alpha_root_in_d(r, m);
            for (int j = -2; j <= 2; ++j) {
                if (j == 0) continue;  // α = 0 to working precision
                CycleSystem sys = poly_system({r, -1.0, d0 + j * 1e-5, m});
                BasePoint bp = base_point(sys);
                ReturnMapOptions mo;
                mo.samples = 64;
                mo.domain_len = 2e-4;
                ReturnMap map = sample_return_map(sys, bp, mo);
                g_maps.push_back(map);
                const double a = map.samples.front().pi - map.base;
                const bool repelling_class = r < 1 && bp.beta_sign > 0;
                std::string expect = repelling_class ? (a < 0 ? "repelling" : "none") : (a > 0 ? "attracting" : "none");
                FixedPoint fp = find_fixed_point(map);
                std::string got = fp.found ? to_string(fp.stability) : "none";
                ++cells;
                if (got == expect) ++ok;
                else
                    L.fail("r=" + g3(r) + " m=" + g3(m) + " d=d0" + (j > 0 ? "+" : "") + std::to_string(j) +
                           "e-5: alpha " + g3(a) + ", beta sign " + std::to_string(bp.beta_sign) + ", expected " +
                           expect + ", found " + got);
            }
        }
    L.summary = std::to_string(ok) + "/" + std::to_string(cells) + " non-degenerate cells match the case table";
    return L;
}

// ------------------------------------------------------------------------------------------ 7

Line criterion7() {
    Line L{7, "resonant quadratic expansion"};
    int cases = 0, ok = 0, cycles = 0;
    for (double m : {-0.1, -0.05, 0.0, 0.05, 0.1}) {
        const double d0 = alpha_root_in_d(1.0, m);
        for (double dd : {-0.01, 0.01}) {
            CycleSystem sys = poly_system({1.0, -1.0, d0 + dd, m});
            BasePoint bp = base_point(sys);
            ReturnMapOptions mo;
            mo.samples = 128;
            ReturnMap map = sample_return_map(sys, bp, mo);
            g_maps.push_back(map);
            QuadraticFit q = quadratic_expansion_fit(map);
            const double a = map.samples.front().pi - map.base;
            ++cases;
            bool good = true;
            const std::string where = "m=" + g3(m) + " d=" + f6(d0 + dd);
            if (bp.beta_sign <= 0) {
                if (!(std::fabs(q.k1) < 1e-3 && q.k2 > 0)) {
                    good = false;
                    L.fail(where + " (beta<=0): k1=" + g3(q.k1) + " k2=" + g3(q.k2));
                }
            } else if (!(std::fabs(q.k1) > 0 && std::fabs(q.k1) < 1)) {
                good = false;
                L.fail(where + " (beta>0): k1=" + g3(q.k1));
            }
            if (a > 0) {
                ++cycles;
                FixedPoint fp = find_fixed_point(map);
                if (!(fp.found && fp.stability == Stability::attracting)) {
                    good = false;
                    L.fail(where + ": alpha=" + g3(a) + " > 0 but no attracting cycle");
                }
            }
            if (good) ++ok;
        }
    }
    L.summary = std::to_string(ok) + "/" + std::to_string(cases) + " instances (" + std::to_string(cycles) +
                " with alpha>0 and a cycle check)";
    return L;
}

// ------------------------------------------------------------------------------------------ 8

Line criterion8() {
    Line L{8, "polynomial closed forms"};
    int n = 0;
    auto check = [&](const std::string& what, double expected, double computed, double tol) {
        ++n;
        if (!(std::fabs(expected - computed) <= tol))
            L.fail(what + ": expected " + f6(expected) + ", computed " + f6(computed));
    };
    for (double r : {0.5, 1.5, 3.0}) {
        CycleSystem sys = poly_system({r, -1.0, 1.2, 0.0});
        SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
        check("saddle ratio r=" + g3(r), r, s.ratio, 1e-8);
    }
    for (double r : {0.5, 3.0}) {
        CycleSystem sys = poly_system({r, -1.0, 1.2, 0.0});
        SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
        ManifoldIntersections mi = manifold_intersections(sys.Z, sys.chart, s, sys.window);
        PolyManifoldX cf = poly_unstable_manifold_x({r, -1.0, 1.2, 0.0});
        double x3 = std::nan(""), x4 = std::nan("");
        for (const auto& h : mi.hits) {
            if (h.branch > 1 || h.order != 1) continue;
            if (h.chart > 0.5) x3 = h.chart;
            if (h.chart < -0.5) x4 = h.chart;
        }
        check("x3 r=" + g3(r), cf.x3, x3, 1e-6);
        check("x4 r=" + g3(r), cf.x4, x4, 1e-6);
    }
    for (double d : {1.27, 1.5})
        for (double x0 : {1.1, 1.3, 1.6, 2.0}) {
            PolyModelParams p{3.0, -1.0, d, 0.0};
            if (x0 <= d - 0.25) continue;
            check("Y-return d=" + g3(d) + " x0=" + g3(x0), poly_Y_return(p, x0), poly_Y_return_numeric(p, x0), 1e-8);
        }
    for (double r : {0.5, 3.0})
        for (double m : {0.0, 0.1, -0.1}) {
            PolyModelParams p{r, -1.0, 1.2, m};
            PiecewiseSystem Z = polynomial_model(p);
            SigmaChart chart(Z.sw, 1);
            for (double x = -1.5; x <= 1.5; x += 0.01) {
                Vec2 q = chart.param(x);
                SigmaTag tag = classify_sigma_point(Z, q).tag;
                if (tag != SigmaTag::sliding && tag != SigmaTag::escaping) continue;
                check("sliding quotient r=" + g3(r) + " m=" + g3(m) + " x=" + f6(x), poly_sliding_quotient(p, x),
                      sliding_field(Z, q).x, 1e-10);
            }
        }
    L.summary = std::to_string(n - static_cast<int>(L.notes.size())) + "/" + std::to_string(n) + " checks";
    return L;
}

// ------------------------------------------------------------------------------------------ 9

Line criterion9() {
    Line L{9, "algebraic invariants"};
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int tangency = 0, agree = 0, zero_sets = 0;
    double worst = 0;
    // quadratic vector fields, switching function y − (c0 + c1 x + c2 x²)
    while (tangency < 1000) {
        double cx[6], cy[6], dx[6], dy[6];
        for (int i = 0; i < 6; ++i) cx[i] = U(rng), cy[i] = U(rng), dx[i] = U(rng), dy[i] = U(rng);
        const double h0 = 0.2 * U(rng), h1 = U(rng), h2 = 0.5 * U(rng);
        auto quad = [](const double* c, Vec2 p) {
            return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y;
        };
        PiecewiseSystem Z{SmoothField([=](Vec2 p) { return Vec2{quad(cx, p), quad(cy, p)}; }),
                          SmoothField([=](Vec2 p) { return Vec2{quad(dx, p), quad(dy, p)}; }),
                          SwitchingFunction([=](Vec2 p) { return p.y - (h0 + h1 * p.x + h2 * p.x * p.x); },
                                            [=](Vec2 p) { return Vec2{-(h1 + 2 * h2 * p.x), 1.0}; })};
        SigmaChart chart(Z.sw, 1);
        for (int k = 0; k < 40 && tangency < 1000; ++k) {
            Vec2 p = chart.param(2 * U(rng));
            SigmaPointClass cls = classify_sigma_point(Z, p);
            if (cls.tag != SigmaTag::sliding && cls.tag != SigmaTag::escaping) continue;
            ++tangency;
            Vec2 zs = sliding_field(Z, p), zn = normalized_sliding_field(Z, p);
            Vec2 g = Z.sw.gradient(p);
            double t = std::fabs(dot(zs, g));
            worst = std::max(worst, t);
            if (t > 1e-12) L.fail("tangency defect " + g3(t));
            // Z^s_N = (Yh − Xh) Z^s: parallel, same sense on Σs, opposite on Σe
            double scale = cls.lieY - cls.lieX;
            Vec2 diff = zn - zs * scale;
            bool same = (dot(zs, zn) >= 0) == (cls.tag == SigmaTag::sliding) || norm(zs) < 1e-14;
            if (norm(diff) > 1e-12 * std::max(1.0, norm(zn)) || !same) L.fail("Z^s and Z^s_N disagree");
            else ++agree;
        }
        for (double c : normalized_sliding_roots(Z, chart, -2.0, 2.0)) {
            Vec2 p = chart.param(c);
            SigmaPointClass cls = classify_sigma_point(Z, p);
            if (cls.tag != SigmaTag::sliding && cls.tag != SigmaTag::escaping) continue;
            ++zero_sets;
            if (norm(sliding_field(Z, p)) > 1e-9) L.fail("root of Z^s_N is not a zero of Z^s");
        }
    }
    int mono = 0;
    for (const auto& m : g_maps) {
        if (m.strictly_increasing(1e-11)) ++mono;
        else L.fail("return map at base " + f6(m.base) + " is not monotone");
    }
    L.summary = std::to_string(tangency) + " tangency points (max " + g3(worst) + "), " + std::to_string(agree) +
                " Z^s/Z^s_N agreements, " + std::to_string(zero_sets) + " shared zeros, " + std::to_string(mono) + "/" +
                std::to_string(g_maps.size()) + " maps monotone";
    if (L.notes.size() > 12) L.notes.resize(12);
    return L;
}

// ------------------------------------------------------------------------------------------ diagram

Line diagram_consistency() {
    Line L{10, "region-signature consistency"};
    // polynomial family: each sign change between vertical neighbours must sit on the traced curve
    Family fam = family_of("poly(1.5,-1,1.2,0)");
    GridAxis ax{"m", -0.5, 0.5, 50}, ay{"d", 1.0, 1.5, 50};
    RegionGrid grid = region_grid(fam, ax, ay);
    ConsistencyReport rep = consistency_scan(grid);
    std::vector<double> sweep;
    for (int i = 0; i < ax.n; ++i) sweep.push_back(ax.value(i));

    // α = 0, and π − F, π − P1, π − P_E; the solve interval is each vertical cell pair
    std::vector<Residual> residuals = {
        [](const CycleSystem& s) { return alpha(s); },
        [](const CycleSystem& s) { return curve_residual(s, CurveLabel::gamma_F); },
        [](const CycleSystem& s) { return curve_residual(s, CurveLabel::gamma_PE); },
        [](const CycleSystem& s) { return curve_residual(s, CurveLabel::gamma_P1); },
    };
    const int component[4] = {0, 3, 2, 4};
    const char* names[4] = {"alpha", "gamma_F", "gamma_PE", "gamma_P1"};
    int checked = 0, matched = 0;
    for (int j = 0; j + 1 < ay.n; ++j)
        for (int q = 0; q < 4; ++q) {
            std::vector<double> where;
            for (int i = 0; i < ax.n; ++i) {
                const auto &a = grid.at(i, j), &b = grid.at(i, j + 1);
                if (!a.ok || !b.ok) continue;
                char ca = a.code[component[q]], cb = b.code[component[q]];
                if (ca == cb || ca == 'x' || cb == 'x') continue;
                where.push_back(ax.value(i));
            }
            if (where.empty()) continue;
            CurveTrace tr = trace_residual(fam, residuals[q], "m", where, "d", ay.value(j), ay.value(j + 1), {}, {4, 1e-10});
            for (const auto& p : tr.points) {
                ++checked;
                if (p.status == CurveStatus::ok && std::fabs(p.residual) <= 1e-8) ++matched;
                else
                    L.fail(std::string(names[q]) + " change at m=" + f6(p.sweep) + " between d=" + f6(ay.value(j)) +
                           " and " + f6(ay.value(j + 1)) + " has no traced crossing (" + p.message + ")");
            }
        }

    // pendulum family around the organizing point
    RegionGrid pg = region_grid(family_of("pendulum(-0.15,-0.77,0,0.1)"), {"a1", -0.2, -0.1, 50}, {"a3", -0.1, 0.1, 50});
    ConsistencyReport prep = consistency_scan(pg);

    if (!rep.pass()) L.fail("polynomial grid: " + std::to_string(rep.islands) + " islands, " + std::to_string(rep.unexplained) + " unexplained changes");
    if (!prep.pass()) L.fail("pendulum grid: " + std::to_string(prep.islands) + " islands, " + std::to_string(prep.unexplained) + " unexplained changes");
    if (L.notes.size() > 12) L.notes.resize(12);
    L.summary = "polynomial 50x50: " + std::to_string(rep.changes) + " changes, " + std::to_string(rep.islands) +
                " islands, " + std::to_string(matched) + "/" + std::to_string(checked) + " vertical changes on traced curves, " +
                std::to_string(rep.failed) + " cells without a loop; pendulum 50x50: " + std::to_string(prep.changes) +
                " changes, " + std::to_string(prep.islands) + " islands";
    return L;
}

}  // namespace

int main() {
    std::vector<std::function<Line()>> all = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                              criterion6, criterion7, criterion8, criterion9, diagram_consistency};
    int failed = 0;
    for (auto& run : all) {
        Line L{static_cast<int>(&run - all.data()) + 1, ""};
        try {
            L = run();
        } catch (const std::exception& e) {
            L.notes.clear();
            L.pass = false;
            L.summary = std::string("aborted: ") + e.what();
        }
        if (L.title.empty()) L.title = "?";
        std::string tag = L.id <= 9 ? "criterion " + std::to_string(L.id) : "diagram consistency";
        std::printf("[%s] %s (%s): %s\n", L.pass ? "PASS" : "FAIL", tag.c_str(), L.title.c_str(), L.summary.c_str());
        for (const auto& n : L.notes) std::printf("  - %s\n", n.c_str());
        std::fflush(stdout);
        if (!L.pass) ++failed;
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}

#include "filippov/bifurc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filippov/models.hpp"
#include "filippov/parallel.hpp"
#include "filippov/sliding.hpp"

namespace filippov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

bool strictly_between(double a, double b, double c) { return std::min(a, b) < c && c < std::max(a, b); }

/// The single root of g on (0, π); DegenerateConfiguration otherwise.
double semicircle_root(const std::function<double(double)>& g, const char* what) {
    const int n = 3600;
    std::vector<double> roots;
    double t0 = 1e-9, g0 = g(t0);
    for (int i = 1; i <= n; ++i) {
        double t1 = kPi * i / n;
        if (i == n) t1 = kPi - 1e-9;
        double g1 = g(t1);
        if (g0 == 0.0) {
            roots.push_back(t0);
        } else if ((g0 < 0) != (g1 < 0) && g1 != 0.0) {
            double a = t0, b = t1, ga = g0;
            for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
                double m = 0.5 * (a + b), gm = g(m);
                if ((gm < 0) == (ga < 0)) { a = m; ga = gm; } else { b = m; }
            }
            roots.push_back(0.5 * (a + b));
        }
        t0 = t1;
        g0 = g1;
    }
    if (roots.size() != 1)
        throw DegenerateConfiguration(std::string(what) + ": expected one crossing of the classification circle, found " +
                                      std::to_string(roots.size()));
    return roots.front();
}

double signed_angle(Vec2 v, Vec2 t, Vec2 n) { return std::atan2(dot(v, n), dot(v, t)); }

char sign_char(double v, double band) { return std::fabs(v) <= band ? '0' : (v > 0 ? '+' : '-'); }

}  // namespace

double beta(const CycleSystem& sys) {
    SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
    return sys.Z.sw(s.location);
}

double alpha(const CycleSystem& sys) {
    BasePoint bp = base_point(sys);
    ReturnResult r = base_landing(sys, bp);
    if (r.outcome == ReturnOutcome::no_return || std::isnan(r.value)) throw NoReturn("the loop through a_Z does not land");
    return r.value - bp.a;
}

BSAngles bs_angles(const CycleSystem& sys, double radius) {
    SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
    const Vec2 S = s.location;
    Vec2 g = sys.Z.sw.gradient(S);
    Vec2 n = g * (1.0 / norm(g));
    Vec2 t{n.y, -n.x};
    auto at = [&](double th) { return S + (t * std::cos(th) + n * std::sin(th)) * radius; };

    BSAngles a;
    a.tangency = semicircle_root([&](double th) { return lie_derivative(sys.Z.plus, sys.Z.sw, at(th)); }, "tangency curve");
    a.parallel = semicircle_root(
        [&](double th) {
            Vec2 p = at(th);
            return cross(sys.Z.plus.eval(p), sys.Z.minus.eval(p));
        },
        "parallelism curve");
    Vec2 vu = dot(s.v_unstable, n) >= 0 ? s.v_unstable : s.v_unstable * -1.0;
    Vec2 vs = dot(s.v_stable, n) >= 0 ? s.v_stable : s.v_stable * -1.0;
    a.unstable = signed_angle(vu, t, n);
    a.stable = signed_angle(vs, t, n);
    if (!(a.unstable > 1e-6 && a.unstable < kPi - 1e-6))
        throw DegenerateConfiguration("unstable separatrix is tangent to the switching set");
    return a;
}

BSCase classify_BS(const CycleSystem& sys, double radius) {
    BSAngles a = bs_angles(sys, radius);
    const double T = a.tangency, P = a.parallel, U = a.unstable;
    const double tol = 1e-6;
    if (std::fabs(T - P) < tol || std::fabs(T - U) < tol || std::fabs(P - U) < tol)
        throw DegenerateConfiguration("two curves coincide on the classification circle");
    if (strictly_between(T, P, U)) return BSCase::BS1;
    if (strictly_between(T, U, P)) return BSCase::BS2;
    return BSCase::BS3;
}

DSCCase classify_DSC(const CycleSystem& sys) {
    SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
    if (std::fabs(s.ratio - 1.0) < 1e-6) return DSCCase::not_applicable;
    BSCase bs = classify_BS(sys);
    const bool gt = s.ratio > 1.0;
    switch (bs) {
        case BSCase::BS1: return gt ? DSCCase::DSC11 : DSCCase::DSC12;
        case BSCase::BS2: return gt ? DSCCase::DSC21 : DSCCase::DSC22;
        case BSCase::BS3: return gt ? DSCCase::DSC31 : DSCCase::DSC32;
        default: return DSCCase::not_applicable;
    }
}

LandingOrder landing_order(const CycleSystem& sys, const BasePoint& bp) {
    LandingOrder lo;
    lo.a = bp.a;
    ReturnResult r = base_landing(sys, bp);
    if (r.outcome == ReturnOutcome::no_return || std::isnan(r.value)) throw NoReturn("the loop through a_Z does not land");
    lo.landing = r.value;
    lo.outcome = r.outcome;
    lo.fold = bp.fold;
    if (bp.manifolds.has_P1) lo.p1 = bp.manifolds.P1;
    if (auto q = pe_curve_point(sys.Z, sys.chart, bp.saddle.location)) {
        lo.pe = *q;
        if (auto t = type_pseudo_equilibrium(sys.Z, sys.chart, *q)) lo.pe_kind = t->kind;
    }
    return lo;
}

LandingOrder landing_order(const CycleSystem& sys) { return landing_order(sys, base_point(sys)); }

BifurcationPoint classify_point(const CycleSystem& sys, const ClassifyOptions& opt) {
    BifurcationPoint bp;
    bp.param_names = sys.param_names;
    bp.params = sys.params;
    BasePoint base;
    try {
        base = base_point(sys);
    } catch (const Error& e) {
        bp.alpha = bp.beta = kNaN;
        bp.errors.push_back(std::string("base_point: ") + e.what());
        return bp;
    }
    bp.beta = base.beta;
    bp.ratio = base.saddle.ratio;
    try {
        bp.bs = classify_BS(sys);
        bp.dsc = classify_DSC(sys);
    } catch (const Error& e) {
        bp.errors.push_back(std::string("classify_BS: ") + e.what());
    }
    try {
        bp.landing = landing_order(sys, base);
        bp.alpha = bp.landing->landing - base.a;
    } catch (const Error& e) {
        bp.alpha = kNaN;
        bp.errors.push_back(std::string("landing: ") + e.what());
    }

    const double tol = opt.contact_tol;
    if (bp.landing) {
        const LandingOrder& lo = *bp.landing;
        if (std::fabs(bp.alpha) <= tol) bp.detected.push_back({CycleKind::degenerate_cycle, base.a, std::nullopt});
        bool pe_between = lo.pe && lo.pe_kind && lo.fold && strictly_between(lo.landing, *lo.fold, *lo.pe);
        if (lo.outcome == ReturnOutcome::sliding && !pe_between) {
            if (base.beta_sign < 0)
                bp.detected.push_back({CycleKind::sliding_cycle, lo.landing, std::nullopt});
            else if (base.beta_sign == 0)
                bp.detected.push_back({CycleKind::polycycle, lo.landing, std::nullopt});
        }
        if (lo.pe && lo.pe_kind && std::fabs(lo.landing - *lo.pe) <= tol)
            bp.detected.push_back({CycleKind::polycycle, *lo.pe, std::nullopt});
        if (base.beta_sign > 0 && lo.p1 && std::fabs(lo.landing - *lo.p1) <= tol)
            bp.detected.push_back({CycleKind::pseudo_cycle, *lo.p1, std::nullopt});
    }

    const bool resonant = std::fabs(bp.ratio - 1.0) < 1e-6;
    if ((opt.cycles || resonant) && bp.landing) {
        try {
            ReturnMapOptions mo;
            mo.samples = opt.samples;
            ReturnMap map = sample_return_map(sys, base, mo);
            if (resonant) bp.quadratic = quadratic_expansion_fit(map);
            if (opt.cycles)
                for (const FixedPoint& fp : find_fixed_points(map))
                    if (!fp.boundary) bp.detected.push_back({CycleKind::limit_cycle, fp.x0, fp.stability});
        } catch (const Error& e) {
            bp.errors.push_back(std::string("return map: ") + e.what());
        }
    }
    return bp;
}

Family family_of(const std::string& spec) {
    return [spec](const std::map<std::string, double>& ov) { return load_model(spec, ov); };
}

double curve_residual(const CycleSystem& sys, CurveLabel label) {
    BasePoint bp = base_point(sys);
    LandingOrder lo = landing_order(sys, bp);
    switch (label) {
        case CurveLabel::gamma_F:
            if (!lo.fold) throw BracketFailure("no fold near the saddle");
            return lo.landing - *lo.fold;
        case CurveLabel::gamma_P1:
            if (!lo.p1) throw BracketFailure("P1 is absent");
            return lo.landing - *lo.p1;
        case CurveLabel::gamma_PE:
            if (!lo.pe || !lo.pe_kind) throw BracketFailure("no pseudo-equilibrium on the sliding set");
            return lo.landing - *lo.pe;
        case CurveLabel::gamma_PE_tilde: {
            if (!lo.pe || !lo.pe_kind) throw BracketFailure("no pseudo-equilibrium on the sliding set");
            if (lo.outcome != ReturnOutcome::returned) throw BracketFailure("the loop does not cross a second time");
            ReturnResult second = first_return(sys, lo.landing);
            if (second.outcome == ReturnOutcome::no_return) throw NoReturn("second loop does not land");
            return second.value - *lo.pe;
        }
    }
    return kNaN;
}

CurveTrace trace_curve(const Family& family, CurveLabel label, const std::string& sweep_name,
                       const std::vector<double>& sweep, const std::string& solve_name, double lo, double hi,
                       const std::map<std::string, double>& fixed, const TraceOptions& opt) {
    CurveTrace tr = trace_residual(
        family, [label](const CycleSystem& s) { return curve_residual(s, label); }, sweep_name, sweep, solve_name, lo,
        hi, fixed, opt, label == CurveLabel::gamma_F);
    tr.label = label;
    return tr;
}

CurveTrace trace_residual(const Family& family, const Residual& residual, const std::string& sweep_name,
                          const std::vector<double>& sweep, const std::string& solve_name, double lo, double hi,
                          const std::map<std::string, double>& fixed, const TraceOptions& opt, bool fold_curve) {
    CurveTrace tr;
    tr.sweep_name = sweep_name;
    tr.solve_name = solve_name;
    tr.points.resize(sweep.size());
    parallel_for(sweep.size(), [&](std::size_t k) {
        CurvePoint& pt = tr.points[k];
        pt.sweep = sweep[k];
        auto sys_at = [&](double s) {
            auto ov = fixed;
            ov[sweep_name] = sweep[k];
            ov[solve_name] = s;
            return family(ov);
        };
        auto res = [&](double s) {
            try {
                return residual(sys_at(s));
            } catch (const Error&) {
                return kNaN;
            }
        };
        if (fold_curve) {
            double b = kNaN;
            try {
                b = beta(sys_at(0.5 * (lo + hi)));
            } catch (const Error&) {
            }
            if (b <= 1e-10) {
                pt.status = CurveStatus::degenerate_axis;
                pt.solve = kNaN;
                pt.message = "coincides with the alpha axis";
                return;
            }
        }
        double s0 = lo, r0 = res(lo);
        for (int i = 1; i <= opt.scan; ++i) {
            double s1 = lo + (hi - lo) * i / opt.scan, r1 = res(s1);
            if (std::isfinite(r0) && std::isfinite(r1) && (r0 == 0.0 || (r0 < 0) != (r1 < 0))) {
                double a = s0, b = s1, ra = r0;
                bool broken = false;
                while (b - a > opt.tol && ra != 0.0) {
                    double m = 0.5 * (a + b), rm = res(m);
                    if (!std::isfinite(rm)) { broken = true; break; }
                    if ((rm < 0) == (ra < 0)) { a = m; ra = rm; } else { b = m; }
                }
                if (broken) break;
                pt.solve = ra == 0.0 ? a : 0.5 * (a + b);
                pt.residual = res(pt.solve);
                if (!std::isfinite(pt.residual)) pt.residual = ra;
                pt.status = CurveStatus::ok;
                return;
            }
            s0 = s1;
            r0 = r1;
        }
        pt.status = CurveStatus::bracket_failure;
        pt.solve = kNaN;
        pt.residual = kNaN;
        pt.message = "residual does not change sign in the solve interval";
    });
    return tr;
}

RegionSignature region_signature(const CycleSystem& sys) {
    RegionSignature sig;
    try {
        BasePoint bp = base_point(sys);
        LandingOrder lo = landing_order(sys, bp);
        sig.beta = bp.beta;
        sig.alpha = lo.landing - bp.a;
        if (lo.pe && lo.pe_kind) sig.d_pe = lo.landing - *lo.pe;
        sig.d_fold = lo.minus_fold();
        sig.d_p1 = lo.minus_p1();
        const double band = 1e-8;
        sig.code.push_back(sign_char(sig.alpha, band));
        sig.code.push_back(bp.beta_sign == 0 ? '0' : (bp.beta_sign > 0 ? '+' : '-'));
        for (const auto& d : {sig.d_pe, sig.d_fold, sig.d_p1}) sig.code.push_back(d ? sign_char(*d, band) : 'x');
        sig.ok = true;
    } catch (const Error& e) {
        sig.error = e.what();
    }
    return sig;
}

RegionGrid region_grid(const Family& family, const GridAxis& ax, const GridAxis& ay,
                       const std::map<std::string, double>& fixed) {
    if (ax.n < 1 || ay.n < 1) throw ConfigError("empty grid");
    RegionGrid g;
    g.ax = ax;
    g.ay = ay;
    g.cells.resize(static_cast<size_t>(ax.n) * ay.n);
    parallel_for(g.cells.size(), [&](std::size_t k) {
        int i = static_cast<int>(k % ax.n), j = static_cast<int>(k / ax.n);
        auto ov = fixed;
        ov[ax.name] = ax.value(i);
        ov[ay.name] = ay.value(j);
        try {
            g.cells[k] = region_signature(family(ov));
        } catch (const Error& e) {
            g.cells[k].error = e.what();
        }
    });
    return g;
}

ConsistencyReport consistency_scan(const RegionGrid& g) {
    ConsistencyReport rep;
    rep.cells = static_cast<int>(g.cells.size());
    for (const auto& c : g.cells)
        if (!c.ok) ++rep.failed;
    auto flips = [](std::optional<double> x, std::optional<double> y) {
        if (x.has_value() != y.has_value()) return true;
        if (!x) return false;
        return (*x < 0) != (*y < 0) || std::fabs(*x) <= 1e-8 || std::fabs(*y) <= 1e-8;
    };
    auto explained = [&](const RegionSignature& a, const RegionSignature& b) {
        return flips(a.alpha, b.alpha) || flips(a.beta, b.beta) || flips(a.d_pe, b.d_pe) ||
               flips(a.d_fold, b.d_fold) || flips(a.d_p1, b.d_p1);
    };
    const int nx = g.ax.n, ny = g.ay.n;
    auto ok = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny && g.at(i, j).ok; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!ok(i, j)) continue;
            const auto& c = g.at(i, j);
            if (ok(i + 1, j) && g.at(i + 1, j).code != c.code) {
                ++rep.changes;
                if (!explained(c, g.at(i + 1, j))) ++rep.unexplained;
            }
            if (ok(i, j + 1) && g.at(i, j + 1).code != c.code) {
                ++rep.changes;
                if (!explained(c, g.at(i, j + 1))) ++rep.unexplained;
            }
            // an island: a lone cell unlike all its neighbours, with some sign that flips into it
            // and straight back out along one grid line
            bool lone = true;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int q = 0; q < 4; ++q)
                if (ok(i + di[q], j + dj[q]) && g.at(i + di[q], j + dj[q]).code == c.code) lone = false;
            if (!lone) continue;
            bool island = false;
            for (int axis = 0; axis < 2 && !island; ++axis) {
                int ai = axis == 0 ? i - 1 : i, aj = axis == 0 ? j : j - 1;
                int bi = axis == 0 ? i + 1 : i, bj = axis == 0 ? j : j + 1;
                if (!ok(ai, aj) || !ok(bi, bj)) continue;
                const std::string &a = g.at(ai, aj).code, &b = g.at(bi, bj).code;
                for (size_t k = 0; k < c.code.size() && !island; ++k)
                    island = a[k] == b[k] && a[k] != c.code[k];
            }
            if (island) ++rep.islands;
        }
    return rep;
}

CycleClass classify_cycle(const PiecewiseSystem& Z, const Orbit& orbit, bool is_limit) {
    if (orbit.segments.empty()) throw NotClosed("empty orbit");
    Vec2 start = orbit.segments.front().samples.front().p;
    if (norm(orbit.end() - start) > 1e-6) throw NotClosed("orbit end is farther than 1e-6 from its start");

    bool sliding = false, pseudo = false, singular = orbit.termination == Termination::pseudo_equilibrium;
    for (const auto& seg : orbit.segments) {
        if (seg.kind == SegmentKind::sliding) {
            double len = 0;
            for (size_t i = 1; i < seg.samples.size(); ++i) len += norm(seg.samples[i].p - seg.samples[i - 1].p);
            if (len > 1e-8) sliding = true; else pseudo = true;
        }
        for (const auto& s : seg.samples) {
            const SmoothField& F = seg.kind == SegmentKind::smooth_minus ? Z.minus : Z.plus;
            if (seg.kind != SegmentKind::sliding && norm(F.eval(s.p)) <= 1e-6) singular = true;
        }
    }
    if (sliding) return CycleClass::sliding_cycle;
    if (pseudo) return CycleClass::pseudo_cycle;
    if (singular) return CycleClass::regular_polycycle;
    return is_limit ? CycleClass::limit : CycleClass::simple;
}

std::string to_string(BSCase c) {
    switch (c) {
        case BSCase::BS1: return "BS1";
        case BSCase::BS2: return "BS2";
        case BSCase::BS3: return "BS3";
        default: return "not_applicable";
    }
}

std::string to_string(DSCCase c) {
    switch (c) {
        case DSCCase::DSC11: return "DSC11";
        case DSCCase::DSC12: return "DSC12";
        case DSCCase::DSC21: return "DSC21";
        case DSCCase::DSC22: return "DSC22";
        case DSCCase::DSC31: return "DSC31";
        case DSCCase::DSC32: return "DSC32";
        default: return "not_applicable";
    }
}

std::string to_string(CycleKind k) {
    switch (k) {
        case CycleKind::limit_cycle: return "limit_cycle";
        case CycleKind::degenerate_cycle: return "degenerate_cycle";
        case CycleKind::sliding_cycle: return "sliding_cycle";
        case CycleKind::pseudo_cycle: return "pseudo_cycle";
        case CycleKind::polycycle: return "polycycle";
    }
    return "?";
}

std::string to_string(CurveLabel l) {
    switch (l) {
        case CurveLabel::gamma_F: return "gamma_F";
        case CurveLabel::gamma_P1: return "gamma_P1";
        case CurveLabel::gamma_PE: return "gamma_PE";
        case CurveLabel::gamma_PE_tilde: return "gamma_PE_tilde";
    }
    return "?";
}

std::string to_string(CurveStatus s) {
    switch (s) {
        case CurveStatus::ok: return "ok";
        case CurveStatus::bracket_failure: return "bracket_failure";
        case CurveStatus::degenerate_axis: return "alpha_axis";
    }
    return "?";
}

std::string to_string(CycleClass c) {
    switch (c) {
        case CycleClass::simple: return "simple";
        case CycleClass::limit: return "limit";
        case CycleClass::regular_polycycle: return "regular_polycycle";
        case CycleClass::sliding_cycle: return "sliding_cycle";
        case CycleClass::pseudo_cycle: return "pseudo_cycle";
    }
    return "?";
}

CurveLabel parse_curve_label(const std::string& s) {
    if (s == "F" || s == "gamma_F") return CurveLabel::gamma_F;
    if (s == "P1" || s == "gamma_P1") return CurveLabel::gamma_P1;
    if (s == "PE" || s == "gamma_PE") return CurveLabel::gamma_PE;
    if (s == "PE_tilde" || s == "PEt" || s == "gamma_PE_tilde") return CurveLabel::gamma_PE_tilde;
    throw ConfigError("unknown curve label '" + s + "'");
}

}  // namespace filippov

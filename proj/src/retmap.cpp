#include "filippov/retmap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "filippov/format.hpp"
#include "filippov/parallel.hpp"

namespace filippov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ReturnOutcome landing_outcome(const CycleSystem& sys, const SigmaArrival& a) {
    if (a.cls.lieX > kTolTang) return ReturnOutcome::returned;
    if (a.cls.lieX < -kTolTang) return ReturnOutcome::sliding;
    return second_lie(sys.Z.plus, sys.Z.sw, a.p) > kTolFold ? ReturnOutcome::returned : ReturnOutcome::sliding;
}

}  // namespace

BasePoint base_point(const CycleSystem& sys) {
    BasePoint bp;
    bp.saddle = find_saddle(sys.Z.plus, sys.saddle_guess);
    bp.beta = sys.Z.sw(bp.saddle.location);
    bp.beta_sign = std::fabs(bp.beta) <= 1e-10 ? 0 : (bp.beta > 0 ? 1 : -1);
    bp.manifolds = manifold_intersections(sys.Z, sys.chart, bp.saddle, sys.window);
    const double sc = sys.chart.inverse(bp.saddle.location);
    try {
        bp.fold = fold_point_near(sys.Z, sys.chart, sc, sys.fold_radius);
    } catch (const NoFold&) {
        if (bp.beta_sign < 0) throw;
    }
    if (bp.beta_sign < 0) {
        bp.a = *bp.fold;
    } else if (bp.beta_sign == 0) {
        bp.a = sc;
    } else {
        if (!bp.manifolds.has_P2) throw NoReturn("stable manifold does not meet the switching set");
        bp.a = bp.manifolds.P2;
    }
    return bp;
}

ReturnResult first_return(const CycleSystem& sys, double x) {
    ReturnResult res;
    Vec2 p = sys.chart.param(x);
    IntegrateOptions io;
    io.start = StartMode::plus;
    io.record = false;
    bool done = false;
    io.on_arrival = [&](const SigmaArrival& a) {
        if (a.index == 1) {
            if (a.from != Side::plus || a.t <= 1e-12 || a.cls.lieY >= -kTolTang) {
                done = true;  // left on the wrong side or landed in Σs before crossing
                res.outcome = ReturnOutcome::no_return;
                res.value = sys.chart.inverse(a.p);
                return true;
            }
            res.crossing = sys.chart.inverse(a.p);
            return false;
        }
        done = true;
        res.value = sys.chart.inverse(a.p);
        res.point = a.p;
        res.time = a.t;
        res.outcome = landing_outcome(sys, a);
        if (std::fabs(res.value - x) > 10 * sys.section_halfwidth + 10) res.outcome = ReturnOutcome::no_return;
        return true;
    };
    Orbit o = integrate(sys.Z, p, sys.t_budget, sys.window, io);
    if (!done || o.termination != Termination::stopped) {
        res.outcome = ReturnOutcome::no_return;
        res.value = kNaN;
    }
    return res;
}

ReturnResult base_landing(const CycleSystem& sys, const BasePoint& bp) {
    if (bp.beta_sign < 0) return first_return(sys, bp.a);
    ReturnResult res;
    if (!bp.manifolds.has_P3) {
        res.value = kNaN;
        return res;
    }
    res.crossing = bp.manifolds.P3;
    IntegrateOptions io;
    io.start = StartMode::minus;
    io.record = false;
    bool done = false;
    io.on_arrival = [&](const SigmaArrival& a) {
        done = true;
        res.value = sys.chart.inverse(a.p);
        res.point = a.p;
        res.time = a.t;
        res.outcome = landing_outcome(sys, a);
        return true;
    };
    integrate(sys.Z, sys.chart.param(bp.manifolds.P3), sys.t_budget, sys.window, io);
    if (!done) {
        res.outcome = ReturnOutcome::no_return;
        res.value = kNaN;
    }
    return res;
}

double normal_form_transition(double k, double r, double x) {
    if (!(x > k)) throw DomainError("normal form transition needs x > k");
    if (!(r > 0)) throw DomainError("normal form transition needs r > 0");
    double u = x - k;
    return k * std::pow(u, r) + std::pow(u, r + 1);
}

double normal_form_base(double k, double r) { return k < 0 ? k / (1 + r) : k; }

double resonant_radicand(double a, double b, double c1, double c2, double eps, double x) {
    return x * x + 2 * c1 * x / b + a * eps * eps / b + 2 * c2 * eps / b + c1 * c1 / (b * b);
}

double resonant_transition(double a, double b, double c1, double c2, double eps, double x) {
    if (!(a > 0 && b > 0)) throw DomainError("resonant transition needs a, b > 0");
    double q = resonant_radicand(a, b, c1, c2, eps, x);
    if (!(q > 0)) throw DomainError("resonant transition radicand is not positive");
    return -c1 / b + std::sqrt(q);
}

bool ReturnMap::strictly_increasing(double noise) const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (s.outcome == ReturnOutcome::no_return || std::isnan(s.pi)) continue;
        if (!(s.pi > prev - noise)) return false;
        prev = s.pi;
    }
    return true;
}

double discover_domain(const CycleSystem& sys, const BasePoint& bp, const ReturnResult& base) {
    double prev = std::isnan(base.value) ? -std::numeric_limits<double>::infinity() : base.value;
    double trial = sys.initial_domain;
    double good = 0.0;
    auto acceptable = [&](const ReturnResult& r) {
        return r.outcome != ReturnOutcome::no_return && std::fabs(r.value - bp.a) <= sys.section_halfwidth &&
               r.value > prev;
    };
    // shrink until the first trial returns
    for (;;) {
        ReturnResult r = first_return(sys, bp.a + trial);
        if (acceptable(r)) {
            good = trial;
            prev = r.value;
            break;
        }
        trial *= 0.5;
        if (trial < 1e-9) throw NoReturn("no return near the base point");
    }
    while (2 * good <= sys.max_domain) {
        ReturnResult r = first_return(sys, bp.a + 2 * good);
        if (!acceptable(r)) break;
        good *= 2;
        prev = r.value;
    }
    return good;
}

ReturnMap sample_return_map(const CycleSystem& sys, const BasePoint& bp, const ReturnMapOptions& opt) {
    ReturnMap map;
    map.base = bp.a;
    map.beta_sign = bp.beta_sign;
    ReturnResult base = base_landing(sys, bp);
    map.domain_len = opt.domain_len > 0 ? opt.domain_len : discover_domain(sys, bp, base);
    map.noise = 1e-10;  // event location tolerance of the integrated landings

    std::vector<double> us;
    if (opt.geometric) {
        for (int n = opt.samples - 1; n >= 0; --n) us.push_back(std::ldexp(map.domain_len, -n));
    } else {
        for (int i = 1; i < opt.samples; ++i) us.push_back(map.domain_len * i / opt.samples);
    }
    std::vector<ReturnMapSample> out(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        ReturnResult r = first_return(sys, bp.a + us[i]);
        out[i] = {us[i], bp.a + us[i], r.outcome == ReturnOutcome::no_return ? kNaN : r.value, r.outcome};
    });
    if (opt.include_base)
        map.samples.push_back({0.0, bp.a, base.outcome == ReturnOutcome::no_return ? kNaN : base.value, base.outcome});
    map.samples.insert(map.samples.end(), out.begin(), out.end());

    const double a = bp.a, base_value = base.value;
    CycleSystem copy = sys;
    map.eval_offset = [copy, a, base_value](double u) {
        if (u == 0.0) return base_value;
        ReturnResult r = first_return(copy, a + u);
        return r.outcome == ReturnOutcome::no_return ? kNaN : r.value;
    };
    return map;
}

ReturnMap sample_return_map(const CycleSystem& sys, const ReturnMapOptions& opt) {
    return sample_return_map(sys, base_point(sys), opt);
}

ReturnMap tabulate_map(const std::function<double(double)>& pi_of_u, double base, double delta, int n,
                       bool geometric, int beta_sign) {
    ReturnMap map;
    map.base = base;
    map.domain_len = delta;
    map.beta_sign = beta_sign;
    map.samples.push_back({0.0, base, pi_of_u(0.0), ReturnOutcome::returned});
    if (geometric) {
        for (int k = n - 1; k >= 0; --k) {
            double u = std::ldexp(delta, -k);
            map.samples.push_back({u, base + u, pi_of_u(u), ReturnOutcome::returned});
        }
    } else {
        for (int i = 1; i < n; ++i) {
            double u = delta * i / n;
            map.samples.push_back({u, base + u, pi_of_u(u), ReturnOutcome::returned});
        }
    }
    map.eval_offset = pi_of_u;
    return map;
}

QuadraticFit quadratic_expansion_fit(const ReturnMap& map) {
    const double limit = map.domain_len / 4;
    std::vector<const ReturnMapSample*> pts;
    for (const auto& s : map.samples)
        if (s.u <= limit * (1 + 1e-12) && s.outcome != ReturnOutcome::no_return && std::isfinite(s.pi))
            pts.push_back(&s);
    if (pts.size() < 8) throw InsufficientSamples("quadratic fit needs at least 8 samples in the first quarter");
    const double scale = limit > 0 ? limit : 1.0;
    Eigen::MatrixXd A(pts.size(), 3);
    Eigen::VectorXd b(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        double v = pts[i]->u / scale;
        A(i, 0) = 1.0;
        A(i, 1) = v;
        A(i, 2) = v * v;
        b(i) = pts[i]->pi - map.base;
    }
    Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    return {c(0), c(1) / scale, c(2) / (scale * scale)};
}

DerivativeTrend derivative_probe(const ReturnMap& map, int order) {
    if (order < 1 || order > 4) throw DomainError("derivative order must be in 1..4");
    std::vector<const ReturnMapSample*> pts;
    for (const auto& s : map.samples)
        if (s.u > 0 && s.outcome != ReturnOutcome::no_return && std::isfinite(s.pi)) pts.push_back(&s);
    // coarse to fine
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->u > b->u; });
    const int n = static_cast<int>(pts.size());
    if (n < 64) throw InsufficientSamples("derivative probe needs at least 64 geometric samples");

    double fact = 1;
    for (int i = 2; i <= order; ++i) fact *= i;
    std::vector<double> logu, logd, vals;
    for (int s = 0; s + order < n; ++s) {
        double dd[5];
        double noise = 0;  // worst-case propagation of the per-sample error bound
        for (int j = 0; j <= order; ++j) {
            dd[j] = pts[s + j]->pi;
            double w = 1;
            for (int i = 0; i <= order; ++i)
                if (i != j) w *= pts[s + j]->u - pts[s + i]->u;
            noise += (map.noise + 4 * DBL_EPSILON * std::fabs(dd[j])) / std::fabs(w);
        }
        for (int lvl = 1; lvl <= order; ++lvl)
            for (int j = 0; j + lvl <= order; ++j)
                dd[j] = (dd[j + 1] - dd[j]) / (pts[s + j + lvl]->u - pts[s + j]->u);
        double D = fact * dd[0];
        // finer estimates only get noisier
        if (!(std::fabs(dd[0]) > 1e3 * noise)) break;
        vals.push_back(D);
        logu.push_back(std::log(pts[s]->u));
        logd.push_back(std::log(std::fabs(D)));
    }
    if (logu.size() < 4) throw Inconclusive("fewer than 4 derivative estimates rise above the noise floor");
    const size_t m = std::min<size_t>(8, logu.size());
    const size_t off = logu.size() - m;
    double mx = 0, my = 0;
    for (size_t i = off; i < logu.size(); ++i) { mx += logu[i]; my += logd[i]; }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (size_t i = off; i < logu.size(); ++i) {
        sxx += (logu[i] - mx) * (logu[i] - mx);
        sxy += (logu[i] - mx) * (logd[i] - my);
    }
    DerivativeTrend t;
    t.slope = sxy / sxx;
    t.value = vals.back();
    if (t.slope > 0.2) {
        t.kind = TrendKind::limit_zero;
    } else if (t.slope < -0.2) {
        t.kind = TrendKind::limit_infinite;
    } else {
        double a = vals[vals.size() - 1], b = vals[vals.size() - 2], c = vals[vals.size() - 3];
        double spread = std::max({std::fabs(a - b), std::fabs(b - c)});
        if (spread > 0.05 * std::fabs(a)) throw Inconclusive("derivative estimates do not settle");
        t.kind = TrendKind::finite;
    }
    return t;
}

std::vector<FixedPoint> find_fixed_points(const ReturnMap& map) {
    std::vector<FixedPoint> out;
    std::vector<const ReturnMapSample*> pts;
    for (const auto& s : map.samples)
        if (s.outcome != ReturnOutcome::no_return && std::isfinite(s.pi)) pts.push_back(&s);
    std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->u < b->u; });
    auto defect = [&](const ReturnMapSample* s) { return s->pi - (map.base + s->u); };

    for (size_t i = 0; i < pts.size(); ++i) {
        double di = defect(pts[i]);
        if (i == 0 && pts[i]->u == 0.0 && std::fabs(di) <= 1e-10) {
            FixedPoint fp;
            fp.found = true;
            fp.boundary = true;
            fp.x0 = map.base;
            double next = pts.size() > 1 ? defect(pts[1]) : 0.0;
            fp.stability = next < 0 ? Stability::attracting : Stability::repelling;
            out.push_back(fp);
            continue;
        }
        if (i + 1 >= pts.size()) break;
        double dj = defect(pts[i + 1]);
        if (di == 0.0 || !((di < 0) != (dj < 0)) || dj == 0.0) {
            if (dj == 0.0 && i + 2 < pts.size()) {
                FixedPoint fp;
                fp.found = true;
                fp.x0 = map.base + pts[i + 1]->u;
                fp.stability = di > 0 ? Stability::attracting : Stability::repelling;
                out.push_back(fp);
            }
            continue;
        }
        double lo = pts[i]->u, hi = pts[i + 1]->u, dlo = di;
        if (map.eval_offset) {
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                double dm = map.eval_offset(mid) - (map.base + mid);
                if (std::isnan(dm)) break;
                if ((dm < 0) == (dlo < 0)) { lo = mid; dlo = dm; } else { hi = mid; }
            }
        } else {
            double t = di / (di - dj);
            lo = hi = lo + t * (hi - lo);
        }
        FixedPoint fp;
        fp.found = true;
        fp.x0 = map.base + 0.5 * (lo + hi);
        fp.stability = di > 0 ? Stability::attracting : Stability::repelling;
        out.push_back(fp);
    }
    return out;
}

FixedPoint find_fixed_point(const ReturnMap& map) {
    auto all = find_fixed_points(map);
    return all.empty() ? FixedPoint{} : all.front();
}

std::string return_map_csv(const ReturnMap& map) {
    std::ostringstream os;
    os << "x,pi_x,outcome\n";
    for (const auto& s : map.samples) os << fmt(s.x) << ',' << fmt(s.pi) << ',' << to_string(s.outcome) << '\n';
    return os.str();
}

std::string to_string(ReturnOutcome o) {
    switch (o) {
        case ReturnOutcome::returned: return "return";
        case ReturnOutcome::sliding: return "sliding";
        case ReturnOutcome::no_return: return "no_return";
    }
    return "?";
}

std::string to_string(TrendKind k) {
    switch (k) {
        case TrendKind::limit_zero: return "limit_zero";
        case TrendKind::limit_infinite: return "limit_infinite";
        case TrendKind::finite: return "finite";
    }
    return "?";
}

std::string to_string(Stability s) { return s == Stability::attracting ? "attracting" : "repelling"; }

}  // namespace filippov

#include "filippov/oracles.hpp"

#include <cmath>

#include "filippov/chart.hpp"
#include "filippov/flow.hpp"
#include "filippov/format.hpp"
#include "filippov/ode.hpp"
#include "filippov/retmap.hpp"
#include "filippov/sliding.hpp"

namespace filippov {

namespace {

OdeOptions tight() {
    OdeOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    return o;
}

double arc_to_level(const VecFn& f, Vec2 p0, const ScalarFn& g, double tmax) {
    ArcOptions ao;
    ao.ode = tight();
    ao.record = false;
    ArcResult r = integrate_arc(f, p0, 0.0, tmax, {ArcEvent{g, +1, true}}, ao);
    if (r.stop != ArcStop::event) throw NoReturn("arc did not reach the target level");
    return r.p.x;
}

}  // namespace

PiecewiseSystem normal_form_system(double k, double r) {
    SmoothField X([r](Vec2 p) { return Vec2{-r * p.x, p.y}; }, [r](Vec2) { return Mat2{-r, 0.0, 0.0, 1.0}; });
    SmoothField Y([](Vec2) { return Vec2{1.0, -1.0}; }, [](Vec2) { return Mat2{}; });
    SwitchingFunction h([k](Vec2 p) { return p.y - p.x + k; }, [](Vec2) { return Vec2{-1.0, 1.0}; },
                        [](Vec2) { return Mat2{}; });
    return {X, Y, h};
}

double normal_form_numeric(double k, double r, double x, double eps) {
    double y0 = x - k;
    if (!(y0 > 0 && y0 < eps)) throw DomainError("start must lie between the saddle and the section");
    VecFn f = [r](Vec2 p) { return Vec2{-r * p.x, p.y}; };
    double tmax = std::log(eps / y0) + 10.0;
    return arc_to_level(f, {x, y0}, [eps](Vec2 p) { return p.y - eps; }, tmax) * std::pow(eps, -r);
}

double resonant_numeric(double a, double b, double c1, double c2, double eps, double x) {
    VecFn f = [=](Vec2 p) { return Vec2{a * p.y + c2, b * p.x + c1}; };
    return arc_to_level(f, {x, 0.0}, [eps](Vec2 p) { return p.y - eps; }, 200.0);
}

double poly_Y_return_numeric(const PolyModelParams& p, double x0) {
    PiecewiseSystem Z = polynomial_model(p);
    SigmaChart chart(Z.sw, 1);
    IntegrateOptions io;
    io.ode = tight();
    io.start = StartMode::minus;
    io.record = false;
    double out = std::nan("");
    io.on_arrival = [&](const SigmaArrival& a) {
        out = chart.inverse(a.p);
        return true;
    };
    integrate(Z, chart.param(x0), 100.0, Rect{}, io);
    if (std::isnan(out)) throw NoReturn("Y arc does not return");
    return out;
}

std::vector<OracleCheck> evaluate_fixture(const std::string& label, double pi_tol) {
    PendulumFixture f = pendulum_region_fixture(label);
    std::vector<OracleCheck> out = {{label + " p_a", f.p_a, std::nan(""), f.tol_root},
                                    {label + " q_a", f.q_a, std::nan(""), f.tol_root},
                                    {label + " pi(x02)", f.pi_x02, std::nan(""), pi_tol > 0 ? pi_tol : f.tol_pi}};
    try {
        CycleSystem sys = pendulum_system(f.params);
        BasePoint bp = base_point(sys);
        out[0].computed = bp.fold.value_or(bp.a);
        if (auto q = pe_curve_point(sys.Z, sys.chart, bp.saddle.location)) out[1].computed = *q;
        else out[1].error = "no pseudo-equilibrium curve point";
        ReturnResult r = first_return(sys, f.x02);
        if (r.outcome == ReturnOutcome::no_return) out[2].error = "no return";
        out[2].computed = r.value;
    } catch (const Error& e) {
        for (auto& c : out)
            if (c.error.empty() && std::isnan(c.computed)) c.error = e.what();
    }
    return out;
}

std::vector<OracleCheck> closed_form_oracles() {
    std::vector<OracleCheck> out;

    for (double r : {3.0, 0.5}) {
        CycleSystem sys = poly_system({r, -1.0, 1.2, 0.0});
        SaddleData s = find_saddle(sys.Z.plus, sys.saddle_guess);
        out.push_back({"poly saddle ratio r=" + fmt(r), r, s.ratio, 1e-8});
        PolyManifoldX closed = poly_unstable_manifold_x({r, -1.0, 1.2, 0.0});
        ManifoldIntersections mi = manifold_intersections(sys.Z, sys.chart, s, sys.window);
        double x3 = std::nan(""), x4 = std::nan("");
        for (const auto& h : mi.hits) {
            if (h.branch > 1 || h.order != 1) continue;
            if (h.chart > 0.5) x3 = h.chart;
            if (h.chart < -0.5) x4 = h.chart;
        }
        out.push_back({"poly x3 r=" + fmt(r), closed.x3, x3, 1e-6});
        out.push_back({"poly x4 r=" + fmt(r), closed.x4, x4, 1e-6});
    }

    PolyModelParams yp{3.0, -1.0, 1.27, 0.0};
    out.push_back({"poly Y-return d=1.27 x0=1.04", poly_Y_return(yp, 1.04), poly_Y_return_numeric(yp, 1.04), 1e-8});

    {
        PolyModelParams sp{3.0, -1.0, 1.2, 0.0};
        PiecewiseSystem Z = polynomial_model(sp);
        SigmaChart chart(Z.sw, 1);
        double worst = 0.0;
        for (double x = -0.9; x < -0.05; x += 0.05) {
            Vec2 p = chart.param(x);
            if (classify_sigma_point(Z, p).tag != SigmaTag::sliding) continue;
            worst = std::max(worst, std::fabs(sliding_field(Z, p).x - poly_sliding_quotient(sp, x)));
        }
        out.push_back({"poly sliding quotient", 0.0, worst, 1e-10});
    }

    {
        PendulumParams pp{-0.1, -0.77, 0.0, 0.1};
        SaddleData s = find_saddle(pendulum_model(pp).plus, {-3.14159, 0.0});
        out.push_back({"pendulum ratio a1=-0.1", pendulum_ratio(-0.1), s.ratio, 1e-8});
    }

    out.push_back({"normal form k=-1 r=sqrt2", normal_form_transition(-1, std::sqrt(2.0), -0.3),
                   normal_form_numeric(-1, std::sqrt(2.0), -0.3), 1e-8});
    out.push_back({"resonant a=1 b=2 origin", resonant_transition(1, 2, 0, 0, 0.5, 0.7),
                   resonant_numeric(1, 2, 0, 0, 0.5, 0.7), 1e-8});
    return out;
}

}  // namespace filippov

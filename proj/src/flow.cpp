#include "filippov/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "filippov/format.hpp"
#include "filippov/sliding.hpp"

namespace filippov {

namespace {

enum class Mode { plus, minus, sliding };

SigmaPointClass lie_pair(const PiecewiseSystem& Z, Vec2 p) {
    SigmaPointClass c;
    c.lieX = lie_derivative(Z.plus, Z.sw, p);
    c.lieY = lie_derivative(Z.minus, Z.sw, p);
    c.tag = sigma_tag(c.lieX, c.lieY);
    return c;
}

Mode start_mode(const PiecewiseSystem& Z, Vec2 p0) {
    double h0 = Z.sw(p0);
    if (std::fabs(h0) > kTolOnSigma) return h0 > 0 ? Mode::plus : Mode::minus;
    SigmaPointClass c = lie_pair(Z, p0);
    const double tol = kTolTang;
    if (c.lieX > tol && c.lieY > tol) return Mode::plus;
    if (c.lieX < -tol && c.lieY < -tol) return Mode::minus;
    if (c.lieX < -tol && c.lieY > tol) return Mode::sliding;
    if (c.lieX > tol && c.lieY < -tol) return Mode::plus;  // escaping: leave on the plus side
    if (std::fabs(c.lieX) <= tol) {
        if (second_lie(Z.plus, Z.sw, p0) > kTolFold) return Mode::plus;
        if (c.lieY < -tol) return Mode::minus;
        return Mode::sliding;
    }
    // |Yh| small
    if (second_lie(Z.minus, Z.sw, p0) < -kTolFold) return Mode::minus;
    if (c.lieX > tol) return Mode::plus;
    return Mode::sliding;
}

SegmentKind kind_of(Mode m) {
    switch (m) {
        case Mode::plus: return SegmentKind::smooth_plus;
        case Mode::minus: return SegmentKind::smooth_minus;
        case Mode::sliding: return SegmentKind::sliding;
    }
    return SegmentKind::smooth_plus;
}

}  // namespace

Orbit integrate(const PiecewiseSystem& Z, Vec2 p0, double tmax, const Rect& window, const IntegrateOptions& opt) {
    Orbit orbit;
    Mode mode;
    switch (opt.start) {
        case StartMode::plus: mode = Mode::plus; break;
        case StartMode::minus: mode = Mode::minus; break;
        case StartMode::sliding: mode = Mode::sliding; break;
        default: mode = start_mode(Z, p0);
    }
    SigmaChart chart(Z.sw);
    if (mode == Mode::sliding) p0 = chart.project(p0);

    double t = 0.0;
    Vec2 p = p0;
    EventKind entry = EventKind::none;
    int arrivals = 0;
    int zero_len = 0;

    ScalarFn hfun = [&Z](Vec2 q) { return Z.sw(q); };
    ScalarFn xh = [&Z](Vec2 q) { return lie_derivative(Z.plus, Z.sw, q); };
    ScalarFn yh = [&Z](Vec2 q) { return lie_derivative(Z.minus, Z.sw, q); };

    for (int seg = 0; seg < opt.max_segments; ++seg) {
        ArcOptions ao;
        ao.ode = opt.ode;
        ao.window = window;
        ao.record = opt.record;
        std::vector<ArcEvent> evs;
        VecFn rhs;
        bool escaping = false;
        if (mode == Mode::plus) {
            rhs = [&Z](Vec2 q) { return Z.plus(q); };
            evs.push_back({hfun, -1, true});
        } else if (mode == Mode::minus) {
            rhs = [&Z](Vec2 q) { return Z.minus(q); };
            evs.push_back({hfun, +1, true});
        } else {
            rhs = [&Z](Vec2 q) { return sliding_field_unchecked(Z, q); };
            escaping = xh(p) > 0;
            if (!escaping) {
                evs.push_back({xh, +1, true});
                evs.push_back({yh, -1, true});
            } else {
                evs.push_back({xh, -1, true});
                evs.push_back({yh, +1, true});
            }
            ao.project = [&chart](Vec2 q) { return chart.project(q); };
            ao.stall_speed = opt.stall_speed;
        }

        ArcResult arc = integrate_arc(rhs, p, t, tmax, evs, ao);

        OrbitSegment s;
        s.kind = kind_of(mode);
        s.t0 = t;
        s.t1 = arc.t;
        s.entry_event = entry;
        if (opt.record) s.samples = std::move(arc.samples);
        else s.samples = {{t, p}, {arc.t, arc.p}};
        if (s.samples.empty() || s.samples.back().t != arc.t) s.samples.push_back({arc.t, arc.p});

        auto finish = [&](EventKind exit_ev, Termination term) {
            s.exit_event = exit_ev;
            orbit.segments.push_back(std::move(s));
            orbit.termination = term;
            return orbit;
        };

        if (arc.stop == ArcStop::time_limit) return finish(EventKind::time_limit, Termination::time_limit);
        if (arc.stop == ArcStop::window_exit) return finish(EventKind::window_exit, Termination::window_exit);
        if (arc.stop == ArcStop::stalled) return finish(EventKind::none, Termination::pseudo_equilibrium);

        Vec2 q = arc.p;
        Mode next;
        EventKind ev;
        if (mode == Mode::sliding) {
            bool to_plus = (arc.event_index == 0) != escaping;
            next = to_plus ? Mode::plus : Mode::minus;
            ev = EventKind::tangency_exit;
        } else {
            SigmaPointClass c = lie_pair(Z, q);
            const double tol = kTolTang;
            if (mode == Mode::plus) {
                if (c.lieY < -tol) {
                    next = Mode::minus;
                    ev = EventKind::crossing;
                } else {
                    next = Mode::sliding;
                    ev = EventKind::sliding_entry;
                }
            } else {
                if (c.lieX > tol) {
                    next = Mode::plus;
                    ev = EventKind::crossing;
                } else if (c.lieX < -tol) {
                    next = Mode::sliding;
                    ev = EventKind::sliding_entry;
                } else if (second_lie(Z.plus, Z.sw, q) > kTolFold) {
                    next = Mode::plus;
                    ev = EventKind::tangency_exit;
                } else {
                    next = Mode::sliding;
                    ev = EventKind::sliding_entry;
                }
            }
            ++arrivals;
            if (opt.on_arrival) {
                SigmaArrival a;
                a.t = arc.t;
                a.p = q;
                a.from = mode == Mode::plus ? Side::plus : Side::minus;
                a.cls = c;
                a.index = arrivals;
                if (opt.on_arrival(a)) return finish(ev, Termination::stopped);
            }
        }
        if (next == Mode::sliding) q = chart.project(q);

        if (arc.t - t <= 0.0) {
            if (++zero_len > 4) throw NumericalError("orbit is stuck switching modes at a point of the switching set");
        } else {
            zero_len = 0;
            s.exit_event = ev;
            orbit.segments.push_back(std::move(s));
        }
        entry = ev;
        mode = next;
        t = arc.t;
        p = q;
    }
    orbit.termination = Termination::max_segments;
    return orbit;
}

SaddleData find_saddle(const SmoothField& F, Vec2 guess) {
    Vec2 p = guess;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        Vec2 f = F(p);
        Mat2 J = F.jacobian(p);
        double D = J.det();
        if (D == 0.0 || !std::isfinite(D)) break;
        Vec2 step{(J.yy * f.x - J.xy * f.y) / D, (-J.yx * f.x + J.xx * f.y) / D};
        p -= step;
        if (!finite(p)) break;
        if (norm(step) <= 1e-12 * (1.0 + norm(p))) {
            converged = true;
            break;
        }
    }
    if (!converged || norm(F(p)) > 1e-9) throw NoConvergence("Newton iteration for the saddle did not converge");
    Mat2 J = F.jacobian(p);
    double D = J.det();
    if (!(D < 0)) throw NotASaddle("det J >= 0 at the equilibrium");
    double T = J.trace();
    double disc = std::sqrt(T * T / 4 - D);
    SaddleData s;
    s.location = p;
    s.lambda1 = T / 2 + disc;
    s.lambda2 = T / 2 - disc;
    auto eigvec = [&](double lam) {
        Vec2 a{J.xy, lam - J.xx};
        Vec2 b{lam - J.yy, J.yx};
        Vec2 v = norm(a) >= norm(b) ? a : b;
        v = v / norm(v);
        if (v.x < 0 || (v.x == 0 && v.y < 0)) v = -v;
        return v;
    };
    s.v_unstable = eigvec(s.lambda1);
    s.v_stable = eigvec(s.lambda2);
    s.ratio = -s.lambda2 / s.lambda1;
    return s;
}

ManifoldIntersections manifold_intersections(const PiecewiseSystem& Z, const SigmaChart& chart,
                                             const SaddleData& s, const Rect& window, const ManifoldOptions& opt) {
    ManifoldIntersections out;
    ScalarFn hfun = [&Z](Vec2 q) { return Z.sw(q); };
    for (int b = 0; b < 4; ++b) {
        bool unstable = b < 2;
        double sign = (b % 2 == 0) ? 1.0 : -1.0;
        Vec2 v = unstable ? s.v_unstable : s.v_stable;
        Vec2 seed = s.location + (sign * opt.seed) * v;
        VecFn rhs = unstable ? VecFn([&Z](Vec2 q) { return Z.plus(q); })
                             : VecFn([&Z](Vec2 q) { return -Z.plus(q); });
        ArcOptions ao;
        ao.ode = opt.ode;
        ao.window = window;
        ao.record = false;
        ao.max_hits = opt.max_hits;
        ArcResult r = integrate_arc(rhs, seed, 0.0, opt.t_budget, {{hfun, 0, false}}, ao);
        int order = 0;
        for (const ArcHit& h : r.hits) {
            ManifoldHit m;
            m.branch = b;
            m.order = ++order;
            m.t = h.t;
            m.p = h.p;
            m.chart = chart.inverse(h.p);
            m.direction = h.direction;
            out.hits.push_back(m);
        }
    }

    const double beta = Z.sw(s.location);
    const double sc = chart.inverse(s.location);
    auto nearest_first_hit = [&](int b0, int b1) -> const ManifoldHit* {
        const ManifoldHit* best = nullptr;
        for (const auto& m : out.hits) {
            if (m.order != 1 || m.branch < b0 || m.branch > b1) continue;
            if (!best || std::fabs(m.chart - sc) < std::fabs(best->chart - sc)) best = &m;
        }
        return best;
    };

    const ManifoldHit* p1 = nullptr;
    const ManifoldHit* p2 = nullptr;
    if (std::fabs(beta) <= 1e-10) {
        out.P1 = out.P2 = sc;
        out.has_P1 = out.has_P2 = true;
    } else {
        p1 = nearest_first_hit(0, 1);
        if (p1) { out.P1 = p1->chart; out.has_P1 = true; }
        p2 = nearest_first_hit(2, 3);
        if (p2) { out.P2 = p2->chart; out.has_P2 = true; }
    }

    const ManifoldHit* p3 = nullptr;
    if (beta > 1e-10 && p2) {
        // Orbits starting just above P2 pass S on one side of W^s and leave along the
        // unstable branch on that same side.
        Vec2 w = (p2->branch == 2 ? 1.0 : -1.0) * s.v_stable;
        double side = cross(Z.plus(p2->p), chart.tangent(p2->chart));
        int b = (cross(-1.0 * w, s.v_unstable) > 0) == (side > 0) ? 0 : 1;
        for (const auto& m : out.hits)
            if (m.branch == b && m.order == 1 && m.direction < 0) p3 = &m;
        if (p3) { out.P3 = p3->chart; out.has_P3 = true; }
        return out;
    }
    for (const auto& m : out.hits) {
        if (m.branch > 1 || m.direction >= 0 || &m == p1) continue;
        if (std::fabs(beta) <= 1e-10) {
            // only the branch that leaves into Σ+
            Vec2 v = (m.branch == 0 ? 1.0 : -1.0) * s.v_unstable;
            if (dot(v, Z.sw.gradient(s.location)) <= 0) continue;
        }
        // first downward exit on its branch
        bool earlier_down = false;
        for (const auto& o : out.hits)
            if (o.branch == m.branch && o.order < m.order && o.direction < 0 && &o != p1) earlier_down = true;
        if (earlier_down) continue;
        if (!p3 || m.t < p3->t) p3 = &m;
    }
    if (p3) { out.P3 = p3->chart; out.has_P3 = true; }
    return out;
}

double fold_point_near(const PiecewiseSystem& Z, const SigmaChart& chart, double guess, double radius) {
    auto f = [&](double c) { return lie_derivative(Z.plus, Z.sw, chart.param(c)); };
    const int n = 400;
    const double dc = radius / n;
    double f0 = f(guess);
    if (f0 == 0.0) return guess;
    double lo = 0, hi = 0;
    bool found = false;
    double fr_prev = f0, fl_prev = f0;
    for (int k = 1; k <= n && !found; ++k) {
        double cr = guess + k * dc, fr = f(cr);
        if (fr == 0.0) return cr;
        if ((fr < 0) != (fr_prev < 0)) { lo = cr - dc; hi = cr; found = true; break; }
        fr_prev = fr;
        double cl = guess - k * dc, fl = f(cl);
        if (fl == 0.0) return cl;
        if ((fl < 0) != (fl_prev < 0)) { lo = cl; hi = cl + dc; found = true; break; }
        fl_prev = fl;
    }
    if (!found) throw NoFold("no sign change of Xh within the scan radius");
    double flo = f(lo);
    while (hi - lo > 1e-13 * std::max(1.0, std::fabs(lo))) {
        double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (flo < 0)) { lo = m; flo = fm; } else { hi = m; }
    }
    double c = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double e = 1e-7;
        double d = (f(c + e) - f(c - e)) / (2 * e);
        if (d == 0) break;
        double cn = c - f(c) / d;
        if (std::fabs(cn - c) > 1e-10) break;
        c = cn;
    }
    return c;
}

std::string orbit_csv(const Orbit& orbit) {
    std::ostringstream os;
    os << "t,x,y,segment_kind,event\n";
    for (const auto& s : orbit.segments) {
        for (size_t i = 0; i < s.samples.size(); ++i) {
            const Sample& q = s.samples[i];
            std::string ev;
            if (i == 0 && s.entry_event != EventKind::none) ev = to_string(s.entry_event);
            if (i + 1 == s.samples.size() && s.exit_event != EventKind::none) ev = to_string(s.exit_event);
            os << fmt(q.t) << ',' << fmt(q.p.x) << ',' << fmt(q.p.y) << ',' << to_string(s.kind) << ',' << ev
               << '\n';
        }
    }
    return os.str();
}

std::string to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::smooth_plus: return "smooth_plus";
        case SegmentKind::smooth_minus: return "smooth_minus";
        case SegmentKind::sliding: return "sliding";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::none: return "none";
        case EventKind::crossing: return "crossing";
        case EventKind::sliding_entry: return "sliding_entry";
        case EventKind::tangency_exit: return "tangency_exit";
        case EventKind::window_exit: return "window_exit";
        case EventKind::time_limit: return "time_limit";
    }
    return "?";
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::time_limit: return "time_limit";
        case Termination::window_exit: return "window_exit";
        case Termination::pseudo_equilibrium: return "pseudo_equilibrium";
        case Termination::stopped: return "stopped";
        case Termination::max_segments: return "max_segments";
    }
    return "?";
}

}  // namespace filippov

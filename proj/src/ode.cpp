#include "filippov/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filippov/errors.hpp"

namespace filippov {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Hairer's dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stages {
    Vec2 k2, k3, k4, k5, k6, y1, k7;
};

Stages stages(const VecFn& f, Vec2 y, Vec2 k1, double h) {
    Stages s;
    s.k2 = f(y + h * (a21 * k1));
    s.k3 = f(y + h * (a31 * k1 + a32 * s.k2));
    s.k4 = f(y + h * (a41 * k1 + a42 * s.k2 + a43 * s.k3));
    s.k5 = f(y + h * (a51 * k1 + a52 * s.k2 + a53 * s.k3 + a54 * s.k4));
    s.k6 = f(y + h * (a61 * k1 + a62 * s.k2 + a63 * s.k3 + a64 * s.k4 + a65 * s.k5));
    s.y1 = y + h * (a71 * k1 + a73 * s.k3 + a74 * s.k4 + a75 * s.k5 + a76 * s.k6);
    s.k7 = f(s.y1);
    return s;
}

}  // namespace

Vec2 DenseStep::at(double t) const {
    if (h == 0.0) return y0;
    double th = (t - t0) / h;
    double th1 = 1.0 - th;
    return y0 + th * (rc2 + th1 * (rc3 + th * (rc4 + th1 * rc5)));
}

DopriStepper::DopriStepper(VecFn f, double t, Vec2 y, const OdeOptions& opt)
    : f_(std::move(f)), opt_(opt), t_(t), y_(y) {
    k1_ = f_(y_);
    h_ = opt_.h_init > 0 ? opt_.h_init : initial_step();
}

void DopriStepper::reset(double t, Vec2 y) {
    t_ = t;
    y_ = y;
    k1_ = f_(y_);
}

double DopriStepper::initial_step() const {
    auto rms = [&](Vec2 v, Vec2 y) {
        double sx = opt_.atol + opt_.rtol * std::fabs(y.x);
        double sy = opt_.atol + opt_.rtol * std::fabs(y.y);
        return std::sqrt(0.5 * ((v.x / sx) * (v.x / sx) + (v.y / sy) * (v.y / sy)));
    };
    double dn0 = rms(y_, y_), dn1 = rms(k1_, y_);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, opt_.h_max);
    Vec2 f1 = f_(y_ + h0 * k1_);
    double dn2 = rms(f1 - k1_, y_) / h0;
    double m = std::max(dn1, dn2);
    double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return std::min({100 * h0, h1, opt_.h_max});
}

Vec2 DopriStepper::single_step(Vec2 y, double h) const {
    if (h == 0.0) return y;
    return stages(f_, y, f_(y), h).y1;
}

DenseStep DopriStepper::step(double t_end) {
    for (;;) {
        double remaining = t_end - t_;
        double h = std::min({h_, opt_.h_max, remaining});
        bool last = h >= remaining;
        if (h < opt_.h_min && !last) throw StepSizeUnderflow(t_, y_);
        if (!(h > 0)) throw StepSizeUnderflow(t_, y_);
        if (++nsteps_ > opt_.max_steps) throw StepSizeUnderflow(t_, y_);

        Stages s = stages(f_, y_, k1_, h);
        Vec2 err = h * (e1 * k1_ + e3 * s.k3 + e4 * s.k4 + e5 * s.k5 + e6 * s.k6 + e7 * s.k7);
        double sx = opt_.atol + opt_.rtol * std::max(std::fabs(y_.x), std::fabs(s.y1.x));
        double sy = opt_.atol + opt_.rtol * std::max(std::fabs(y_.y), std::fabs(s.y1.y));
        double en = std::sqrt(0.5 * ((err.x / sx) * (err.x / sx) + (err.y / sy) * (err.y / sy)));
        if (!std::isfinite(en)) {
            h_ = 0.1 * h;
            rejected_last_ = true;
            continue;
        }
        double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
        if (en <= 1.0) {
            DenseStep d;
            d.t0 = t_;
            d.h = h;
            d.y0 = y_;
            d.y1 = s.y1;
            d.rc2 = s.y1 - y_;
            d.rc3 = h * k1_ - d.rc2;
            d.rc4 = d.rc2 - h * s.k7 - d.rc3;
            d.rc5 = h * (d1 * k1_ + d3 * s.k3 + d4 * s.k4 + d5 * s.k5 + d6 * s.k6 + d7 * s.k7);
            t_ = last ? t_end : t_ + h;
            y_ = s.y1;
            k1_ = s.k7;
            if (rejected_last_) fac = std::min(fac, 1.0);
            rejected_last_ = false;
            // keep the controller's proposal when the step was shortened by t_end
            if (!last || h == h_) h_ = h * fac;
            return d;
        }
        h_ = h * std::min(fac, 1.0);
        rejected_last_ = true;
    }
}

namespace {

bool pre_side(int dir, double g) {
    if (dir < 0) return g > 0;
    if (dir > 0) return g < 0;
    return g != 0;
}

bool triggers(int dir, double last, double cur) {
    bool down = last > 0 && cur <= 0;
    bool up = last < 0 && cur >= 0;
    if (dir < 0) return down;
    if (dir > 0) return up;
    return down || up;
}

struct EventState {
    bool armed = false;
    bool on_zero = false;  ///< the arc starts on the zero set
    double last = 0.0;
};

// Root of g along the step inside [ta, tb], polished with fresh RK sub-steps from the step start.
double locate(const DopriStepper& st, const DenseStep& S, const ScalarFn& g, double ta, double tb, double ga,
              double gb, Vec2& p_out) {
    // regula falsi (Illinois) on the interpolant
    int side = 0;
    for (int it = 0; it < 200 && tb - ta > 1e-15 * std::max(1.0, std::fabs(tb)); ++it) {
        double tm = (ga * tb - gb * ta) / (ga - gb);
        if (!(tm > ta && tm < tb)) tm = 0.5 * (ta + tb);
        double gm = g(S.at(tm));
        if (gm == 0.0) { ta = tb = tm; break; }
        if ((gm < 0) == (gb < 0)) {
            tb = tm; gb = gm;
            if (side == -1) ga *= 0.5;
            side = -1;
        } else {
            ta = tm; ga = gm;
            if (side == 1) gb *= 0.5;
            side = 1;
        }
    }
    double tau = std::fabs(ga) < std::fabs(gb) ? ta : tb;
    // polish against the true RK solution (secant on τ)
    auto G = [&](double t) { return g(st.single_step(S.y0, t - S.t0)); };
    double t0 = tau, g0 = G(t0);
    Vec2 best_p = st.single_step(S.y0, t0 - S.t0);
    double best_g = g0;
    double t1 = tau + 1e-9 * std::max(S.h, 1e-12), g1 = G(t1);
    for (int it = 0; it < 30 && std::fabs(best_g) > 1e-14; ++it) {
        if (g1 == g0) break;
        double t2 = t1 - g1 * (t1 - t0) / (g1 - g0);
        if (!std::isfinite(t2) || t2 < S.t0 - 1e-3 * S.h || t2 > S.t1() + 1e-3 * S.h) break;
        double g2 = G(t2);
        if (std::fabs(g2) < std::fabs(best_g)) {
            best_g = g2;
            tau = t2;
            best_p = st.single_step(S.y0, t2 - S.t0);
        }
        if (std::fabs(t2 - t1) <= 1e-16 * std::max(1.0, std::fabs(t2))) break;
        t0 = t1; g0 = g1;
        t1 = t2; g1 = g2;
    }
    p_out = best_p;
    return tau;
}

}  // namespace

ArcResult integrate_arc(const VecFn& f, Vec2 p0, double t0, double t_end, const std::vector<ArcEvent>& events,
                        const ArcOptions& opt) {
    ArcResult res;
    DopriStepper st(f, t0, p0, opt.ode);
    if (opt.record) res.samples.push_back({t0, p0});

    std::vector<ArcEvent> evs = events;
    const int window_index = static_cast<int>(evs.size());
    const bool finite_window = std::isfinite(opt.window.margin({0.0, 0.0})) ||
                               std::isfinite(opt.window.xmin) || std::isfinite(opt.window.xmax) ||
                               std::isfinite(opt.window.ymin) || std::isfinite(opt.window.ymax);
    if (finite_window) {
        Rect w = opt.window;
        evs.push_back({[w](Vec2 p) { return w.margin(p); }, -1, true});
    }
    std::vector<EventState> es(evs.size());
    for (size_t i = 0; i < evs.size(); ++i) {
        double g0 = evs[i].g(p0);
        es[i].last = g0;
        es[i].armed = std::fabs(g0) > 1e-13 && pre_side(evs[i].direction, g0);
        es[i].on_zero = std::fabs(g0) <= 1e-9;
    }

    if (!(t_end > t0)) {
        res.stop = ArcStop::time_limit;
        res.t = t0;
        res.p = p0;
        return res;
    }

    bool first_step = true;
    for (;;) {
        DenseStep S = st.step(t_end);
        const double probes[5] = {S.t0, S.t0 + 0.25 * S.h, S.t0 + 0.5 * S.h, S.t0 + 0.75 * S.h, S.t1()};

        // earliest terminal root and all non-terminal roots in this step
        double t_term = std::numeric_limits<double>::infinity();
        int i_term = -1;
        Vec2 p_term;
        double t_second = std::numeric_limits<double>::infinity();
        int i_second = -1;
        std::vector<ArcHit> step_hits;

        for (size_t i = 0; i < evs.size(); ++i) {
            const ArcEvent& ev = evs[i];
            EventState& s = es[i];
            double gprev = s.last;
            double tprev = probes[0];
            for (int k = 1; k < 5; ++k) {
                double gk = k == 4 ? ev.g(S.y1) : ev.g(S.at(probes[k]));
                if (!s.armed) {
                    if (std::fabs(gk) > 1e-13 && pre_side(ev.direction, gk)) {
                        s.armed = true;
                    } else if (first_step && s.on_zero && ev.direction != 0 && std::fabs(gk) > 1e-9 &&
                               !pre_side(ev.direction, gk) && ev.terminal) {
                        // started on the zero set and left on the wrong side: zero-length arc
                        if (S.t0 < t_term) {
                            t_second = t_term; i_second = i_term;
                            t_term = S.t0; i_term = static_cast<int>(i); p_term = S.y0;
                        }
                        break;
                    }
                    gprev = gk;
                    tprev = probes[k];
                    continue;
                }
                if (triggers(ev.direction, gprev, gk)) {
                    Vec2 p;
                    double tr = locate(st, S, ev.g, tprev, probes[k], gprev, gk, p);
                    int obs = gk > gprev ? 1 : -1;
                    if (ev.terminal) {
                        if (tr < t_term) {
                            t_second = t_term; i_second = i_term;
                            t_term = tr; i_term = static_cast<int>(i); p_term = p;
                        } else if (tr < t_second) {
                            t_second = tr; i_second = static_cast<int>(i);
                        }
                        break;
                    }
                    step_hits.push_back({static_cast<int>(i), tr, p, obs});
                }
                gprev = gk;
                tprev = probes[k];
            }
            s.last = gprev;
        }
        first_step = false;

        if (i_term >= 0 && i_second >= 0 && i_second != i_term && t_second - t_term < 1e-12 &&
            i_second != window_index && i_term != window_index)
            throw EventAmbiguity("two event roots closer than 1e-12 in time");

        std::sort(step_hits.begin(), step_hits.end(), [](const ArcHit& a, const ArcHit& b) { return a.t < b.t; });
        for (const ArcHit& hit : step_hits) {
            if (hit.t > t_term) break;
            res.hits.push_back(hit);
            if (opt.max_hits > 0 && static_cast<int>(res.hits.size()) >= opt.max_hits) {
                res.stop = ArcStop::max_hits;
                res.t = hit.t;
                res.p = hit.p;
                res.event_index = hit.index;
                if (opt.record) res.samples.push_back({hit.t, hit.p});
                return res;
            }
        }

        if (i_term >= 0) {
            res.t = t_term;
            res.p = p_term;
            if (i_term == window_index && finite_window) {
                res.stop = ArcStop::window_exit;
            } else {
                res.stop = ArcStop::event;
                res.event_index = i_term;
            }
            if (opt.record && t_term > S.t0) res.samples.push_back({t_term, p_term});
            return res;
        }

        Vec2 y = st.y();
        if (opt.project) {
            y = opt.project(y);
            st.reset(st.t(), y);
        }
        if (opt.record) res.samples.push_back({st.t(), y});
        if (st.t() >= t_end) {
            res.stop = ArcStop::time_limit;
            res.t = st.t();
            res.p = y;
            return res;
        }
        if (opt.stall_speed > 0 && norm(f(y)) < opt.stall_speed) {
            res.stop = ArcStop::stalled;
            res.t = st.t();
            res.p = y;
            return res;
        }
    }
}

}  // namespace filippov

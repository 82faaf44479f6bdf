#pragma once

#include <functional>
#include <vector>

#include "filippov/geometry.hpp"
#include "filippov/psys.hpp"

namespace filippov {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.05;
    double h_min = 1e-14;
    double h_init = 0.0;  ///< 0 selects an automatic first step
    long max_steps = 2000000;
};

struct Sample {
    double t = 0.0;
    Vec2 p;
};

/// One accepted Dormand–Prince step with its fourth-order continuous extension.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    Vec2 y0, y1;
    Vec2 rc2, rc3, rc4, rc5;

    double t1() const { return t0 + h; }
    Vec2 at(double t) const;
};

/// Dormand–Prince 5(4) with FSAL and step-size control.
class DopriStepper {
public:
    DopriStepper(VecFn f, double t, Vec2 y, const OdeOptions& opt);

    /// Takes one accepted step that does not pass t_end. Throws StepSizeUnderflow.
    DenseStep step(double t_end);
    /// Restarts from (t, y), e.g. after re-projection onto Σ.
    void reset(double t, Vec2 y);
    /// One fixed RK step of size h from y, no error control. Used to polish event roots.
    Vec2 single_step(Vec2 y, double h) const;

    double t() const { return t_; }
    Vec2 y() const { return y_; }
    double h() const { return h_; }
    long steps() const { return nsteps_; }

private:
    VecFn f_;
    OdeOptions opt_;
    double t_;
    Vec2 y_;
    Vec2 k1_;
    double h_ = 0.0;
    bool rejected_last_ = false;
    long nsteps_ = 0;

    double initial_step() const;
};

struct ArcEvent {
    ScalarFn g;
    int direction = 0;  ///< −1: positive to nonpositive, +1: negative to nonnegative, 0: either
    bool terminal = true;
};

struct ArcHit {
    int index = -1;
    double t = 0.0;
    Vec2 p;
    int direction = 0;  ///< observed sign of the crossing
};

enum class ArcStop { event, time_limit, window_exit, stalled, max_hits };

struct ArcOptions {
    OdeOptions ode;
    Rect window;
    bool record = true;
    std::function<Vec2(Vec2)> project;  ///< applied after every accepted step
    double stall_speed = 0.0;           ///< stop when |f| drops below this (0 disables)
    int max_hits = 0;                   ///< stop after this many non-terminal hits (0 = unlimited)
};

struct ArcResult {
    ArcStop stop = ArcStop::time_limit;
    double t = 0.0;
    Vec2 p;
    int event_index = -1;
    std::vector<Sample> samples;
    std::vector<ArcHit> hits;  ///< non-terminal event crossings in time order
};

/// Integrates a smooth field from (t0, p0) toward t_end, stopping at the first terminal event root.
/// Roots are bracketed on the dense output (including interior probes for double roots),
/// then polished with fresh RK sub-steps until |g| <= 1e-10 or the time bracket collapses.
ArcResult integrate_arc(const VecFn& f, Vec2 p0, double t0, double t_end, const std::vector<ArcEvent>& events,
                        const ArcOptions& opt = {});

}  // namespace filippov

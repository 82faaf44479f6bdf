#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filippov/chart.hpp"
#include "filippov/ode.hpp"
#include "filippov/psys.hpp"

namespace filippov {

enum class SegmentKind { smooth_plus, smooth_minus, sliding };
enum class EventKind { none, crossing, sliding_entry, tangency_exit, window_exit, time_limit };
enum class Termination { time_limit, window_exit, pseudo_equilibrium, stopped, max_segments };

struct OrbitSegment {
    SegmentKind kind = SegmentKind::smooth_plus;
    double t0 = 0.0, t1 = 0.0;
    std::vector<Sample> samples;
    EventKind entry_event = EventKind::none;
    EventKind exit_event = EventKind::none;
};

struct Orbit {
    std::vector<OrbitSegment> segments;
    Termination termination = Termination::time_limit;

    Vec2 end() const { return segments.empty() ? Vec2{} : segments.back().samples.back().p; }
    double t_end() const { return segments.empty() ? 0.0 : segments.back().t1; }
};

/// A smooth arc reaching Σ.
struct SigmaArrival {
    double t = 0.0;
    Vec2 p;
    Side from = Side::plus;
    SigmaPointClass cls;
    int index = 0;  ///< 1-based count of arrivals on this orbit
};

enum class StartMode { automatic, plus, minus, sliding };

struct IntegrateOptions {
    OdeOptions ode;
    StartMode start = StartMode::automatic;
    /// Called at every arrival on Σ from a smooth arc; return true to stop there.
    std::function<bool(const SigmaArrival&)> on_arrival;
    int max_segments = 2000;
    bool record = true;
    double stall_speed = 1e-11;  ///< sliding speed treated as a pseudo-equilibrium
};

/// Filippov orbit from p0 over [0, tmax]. Backward time: integrate Z.negated().
Orbit integrate(const PiecewiseSystem& Z, Vec2 p0, double tmax, const Rect& window,
                const IntegrateOptions& opt = {});

struct SaddleData {
    Vec2 location;
    double lambda1 = 0.0;  ///< unstable, > 0
    double lambda2 = 0.0;  ///< stable, < 0
    Vec2 v_unstable;
    Vec2 v_stable;
    double ratio = 0.0;  ///< −λ2/λ1
};

SaddleData find_saddle(const SmoothField& F, Vec2 guess);

struct ManifoldHit {
    int branch = 0;  ///< 0,1 unstable (±v_u); 2,3 stable (±v_s)
    int order = 0;   ///< 1-based hit count along the branch
    double t = 0.0;
    Vec2 p;
    double chart = 0.0;
    int direction = 0;  ///< +1 when h goes from negative to positive along the branch's own time
};

struct ManifoldIntersections {
    double P1 = 0.0, P2 = 0.0, P3 = 0.0;
    bool has_P1 = false, has_P2 = false, has_P3 = false;
    std::vector<ManifoldHit> hits;
};

struct ManifoldOptions {
    double seed = 1e-6;
    double t_budget = 60.0;
    int max_hits = 3;
    OdeOptions ode;
};

ManifoldIntersections manifold_intersections(const PiecewiseSystem& Z, const SigmaChart& chart,
                                             const SaddleData& s, const Rect& window,
                                             const ManifoldOptions& opt = {});

/// Root of the chart-restricted Xh near guess_chart (scan radius, then bisection and Newton to 1e-12).
double fold_point_near(const PiecewiseSystem& Z, const SigmaChart& chart, double guess_chart,
                       double scan_radius = 0.5);

/// Orbit export: t,x,y,segment_kind,event.
std::string orbit_csv(const Orbit& orbit);

std::string to_string(SegmentKind k);
std::string to_string(EventKind k);
std::string to_string(Termination t);

}  // namespace filippov

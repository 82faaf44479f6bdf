#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/chart.hpp"
#include "filippov/psys.hpp"

namespace filippov {

enum class PEKind { pseudonode, pseudosaddle, degenerate };
enum class SlidingRegion { sliding, escaping };

struct PseudoEquilibrium {
    Vec2 location;
    double chart = 0.0;
    PEKind kind = PEKind::degenerate;
    SlidingRegion region = SlidingRegion::sliding;
    double slope = 0.0;  ///< d/dc of the chart component of Z^s
};

/// Z^s = (Yh X − Xh Y) / (Yh − Xh), defined on Σs ∪ Σe.
Vec2 sliding_field(const PiecewiseSystem& Z, Vec2 p);

/// Same formula without the region check; used inside the integrator near region boundaries.
Vec2 sliding_field_unchecked(const PiecewiseSystem& Z, Vec2 p);

/// Z^s_N = Yh X − Xh Y, defined on all of Σ.
Vec2 normalized_sliding_field(const PiecewiseSystem& Z, Vec2 p);

/// Chart component of Z^s_N at chart value c.
double normalized_chart_component(const PiecewiseSystem& Z, const SigmaChart& chart, double c);

/// Every root of the chart component of Z^s_N in [lo, hi], whatever region it lies in.
std::vector<double> normalized_sliding_roots(const PiecewiseSystem& Z, const SigmaChart& chart, double lo,
                                             double hi, int scan = 1024);

/// Roots lying in Σs or Σe, typed per the sliding-field slope.
std::vector<PseudoEquilibrium> find_pseudo_equilibria(const PiecewiseSystem& Z, const SigmaChart& chart,
                                                      double lo, double hi);
std::vector<PseudoEquilibrium> find_pseudo_equilibria(const PiecewiseSystem& Z, double lo, double hi);

/// Types a root at chart value c; nullopt when c is not in Σs ∪ Σe.
std::optional<PseudoEquilibrium> type_pseudo_equilibrium(const PiecewiseSystem& Z, const SigmaChart& chart,
                                                         double c);

/// d/dc of the chart component of Z^s_N at s (central difference, step 1e-6).
double mu_coefficient(const PiecewiseSystem& Z, const SigmaChart& chart, Vec2 s);
double mu_coefficient(const PiecewiseSystem& Z, Vec2 s);

/// Follows the zero set of det[X|Y] from a plus-field equilibrium until it meets Σ.
/// Returns the chart value of the first meeting point, nullopt if none within max_arc.
std::optional<double> pe_curve_point(const PiecewiseSystem& Z, const SigmaChart& chart, Vec2 saddle,
                                     double max_arc = 12.0);

std::string to_string(PEKind k);
std::string to_string(SlidingRegion r);

}  // namespace filippov

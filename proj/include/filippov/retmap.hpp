#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filippov/flow.hpp"
#include "filippov/system.hpp"

namespace filippov {

enum class ReturnOutcome { returned, sliding, no_return };

struct ReturnResult {
    ReturnOutcome outcome = ReturnOutcome::no_return;
    double value = 0.0;        ///< chart value of the landing point
    Vec2 point;
    double crossing = 0.0;     ///< chart value of the downward crossing near P3
    double time = 0.0;
};

/// Everything about the organizing configuration that the return map depends on.
struct BasePoint {
    double a = 0.0;  ///< a_Z in chart units
    double beta = 0.0;
    int beta_sign = 0;
    SaddleData saddle;
    ManifoldIntersections manifolds;
    std::optional<double> fold;
};

BasePoint base_point(const CycleSystem& sys);

/// Orbit from chart value x: plus arc to the downward crossing, minus arc to the next arrival on Σ.
ReturnResult first_return(const CycleSystem& sys, double x);

/// π(a_Z): from the fold (β<0) or from P3 along the minus field (β>=0).
ReturnResult base_landing(const CycleSystem& sys, const BasePoint& bp);

/// k(x−k)^r + (x−k)^{r+1}
double normal_form_transition(double k, double r, double x);

/// Fold base point of the normal form for k<0, k itself otherwise.
double normal_form_base(double k, double r);

/// −c1/b + sqrt(x² + 2c1x/b + aε²/b + 2c2ε/b + c1²/b²)
double resonant_transition(double a, double b, double c1, double c2, double eps, double x);

/// Radicand of resonant_transition at x = 0, the Q(ε) of the level-set argument.
double resonant_radicand(double a, double b, double c1, double c2, double eps, double x = 0.0);

struct ReturnMapSample {
    double u = 0.0;  ///< x − base, kept separately to avoid cancellation
    double x = 0.0;
    double pi = 0.0;
    ReturnOutcome outcome = ReturnOutcome::returned;
};

struct ReturnMap {
    double base = 0.0;
    double domain_len = 0.0;
    int beta_sign = 0;
    double noise = 0.0;  ///< absolute error bound on each π sample, on top of rounding
    std::vector<ReturnMapSample> samples;  ///< ascending in x
    /// Evaluates π at an offset u from the base; empty for tabulated maps.
    std::function<double(double)> eval_offset;

    /// Successive returns increase; `noise` admits decrements at the integration noise floor.
    bool strictly_increasing(double noise = 0.0) const;
};

struct ReturnMapOptions {
    int samples = 256;
    bool geometric = false;    ///< offsets δ·2^{−n}, n = 0..samples−1
    double domain_len = 0.0;   ///< 0 selects the adaptive search
    bool include_base = true;  ///< add the u = 0 sample (π(a_Z))
};

/// Samples π_Z on [a_Z, a_Z + δ_Z). Parallel over samples.
ReturnMap sample_return_map(const CycleSystem& sys, const BasePoint& bp, const ReturnMapOptions& opt = {});
ReturnMap sample_return_map(const CycleSystem& sys, const ReturnMapOptions& opt = {});

/// Adaptive δ_Z: doubles from the system's initial trial while the loop keeps returning,
/// stays monotone and lands inside the section interval.
double discover_domain(const CycleSystem& sys, const BasePoint& bp, const ReturnResult& base);

/// Tabulates an analytic map given as a function of the offset u.
ReturnMap tabulate_map(const std::function<double(double)>& pi_of_u, double base, double delta, int n,
                       bool geometric, int beta_sign = 0);

struct QuadraticFit {
    double alpha = 0.0, k1 = 0.0, k2 = 0.0;
};

/// Least-squares fit of π(base + u) − base ≈ α + k1 u + k2 u² over the first quarter of the domain.
QuadraticFit quadratic_expansion_fit(const ReturnMap& map);

enum class TrendKind { limit_zero, limit_infinite, finite };

struct DerivativeTrend {
    TrendKind kind = TrendKind::finite;
    double value = 0.0;  ///< finest estimate
    double slope = 0.0;  ///< log-log slope of |D_k| against u
};

/// Classifies the one-sided trend of the order-th derivative toward the base from
/// divided differences k!·f[x_n..x_{n+k}] on the geometric samples. Estimates whose propagated
/// sample noise exceeds 1e-3 of their size are dropped, along with every finer one.
DerivativeTrend derivative_probe(const ReturnMap& map, int order);

enum class Stability { attracting, repelling };

struct FixedPoint {
    bool found = false;
    double x0 = 0.0;
    Stability stability = Stability::attracting;
    bool boundary = false;  ///< the base itself is fixed (α = 0)
};

/// First fixed point of π above the base: sign change of π(x) − x, bisection to 1e-10.
FixedPoint find_fixed_point(const ReturnMap& map);
/// All sign changes in the sampled range, in ascending order.
std::vector<FixedPoint> find_fixed_points(const ReturnMap& map);

/// return-map CSV: x, pi_x, outcome
std::string return_map_csv(const ReturnMap& map);

std::string to_string(ReturnOutcome o);
std::string to_string(TrendKind k);
std::string to_string(Stability s);

}  // namespace filippov

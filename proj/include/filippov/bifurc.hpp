#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "filippov/flow.hpp"
#include "filippov/retmap.hpp"
#include "filippov/sliding.hpp"
#include "filippov/system.hpp"

namespace filippov {

enum class BSCase { BS1, BS2, BS3, not_applicable };
enum class DSCCase { DSC11, DSC12, DSC21, DSC22, DSC31, DSC32, not_applicable };

/// h(S_X) at the continued plus-field saddle.
double beta(const CycleSystem& sys);

/// Landing chart value of the loop through a_Z minus a_Z.
double alpha(const CycleSystem& sys);

/// Angular positions (radians, measured from the Σ tangent into Σ+) on the classification circle.
struct BSAngles {
    double tangency = 0.0;
    double parallel = 0.0;
    double unstable = 0.0;
    double stable = 0.0;
};

BSAngles bs_angles(const CycleSystem& sys, double radius = 1e-3);
BSCase classify_BS(const CycleSystem& sys, double radius = 1e-3);
DSCCase classify_DSC(const CycleSystem& sys);

struct LandingOrder {
    double a = 0.0;
    double landing = 0.0;
    ReturnOutcome outcome = ReturnOutcome::no_return;
    std::optional<double> pe, fold, p1;
    std::optional<PEKind> pe_kind;  ///< set when P_E lies in Σs or Σe
    std::optional<double> minus_pe() const { return pe ? std::optional(landing - *pe) : std::nullopt; }
    std::optional<double> minus_fold() const { return fold ? std::optional(landing - *fold) : std::nullopt; }
    std::optional<double> minus_p1() const { return p1 ? std::optional(landing - *p1) : std::nullopt; }
};

LandingOrder landing_order(const CycleSystem& sys);
LandingOrder landing_order(const CycleSystem& sys, const BasePoint& bp);

enum class CycleKind { limit_cycle, degenerate_cycle, sliding_cycle, pseudo_cycle, polycycle };

struct CycleTag {
    CycleKind kind = CycleKind::limit_cycle;
    double x0 = 0.0;
    std::optional<Stability> stability;
};

struct BifurcationPoint {
    std::vector<std::string> param_names;
    std::vector<double> params;
    double alpha = 0.0, beta = 0.0;
    BSCase bs = BSCase::not_applicable;
    DSCCase dsc = DSCCase::not_applicable;
    double ratio = 0.0;
    std::optional<LandingOrder> landing;
    std::optional<QuadraticFit> quadratic;  ///< resonant ratio only
    std::vector<CycleTag> detected;
    std::vector<std::string> errors;  ///< component failures; the record stays partial
};

struct ClassifyOptions {
    bool cycles = true;       ///< sample the return map for limit cycles
    int samples = 64;
    double contact_tol = 1e-8;
};

BifurcationPoint classify_point(const CycleSystem& sys, const ClassifyOptions& opt = {});

/// Model family: parameter overrides to a system.
using Family = std::function<CycleSystem(const std::map<std::string, double>&)>;
Family family_of(const std::string& spec);

enum class CurveLabel { gamma_F, gamma_P1, gamma_PE, gamma_PE_tilde };
enum class CurveStatus { ok, bracket_failure, degenerate_axis };

struct CurvePoint {
    double sweep = 0.0;
    double solve = 0.0;
    double residual = 0.0;
    CurveStatus status = CurveStatus::ok;
    std::string message;
};

struct CurveTrace {
    CurveLabel label = CurveLabel::gamma_F;
    std::string sweep_name, solve_name;
    std::vector<CurvePoint> points;
};

/// Defining residual of a curve at one system: landing minus the target.
/// Throws BracketFailure when the target is absent.
double curve_residual(const CycleSystem& sys, CurveLabel label);

struct TraceOptions {
    int scan = 24;          ///< subdivisions of the solve interval when looking for a sign change
    double tol = 1e-10;
};

/// For each sweep value, bisection in the solve parameter on the curve residual.
CurveTrace trace_curve(const Family& family, CurveLabel label, const std::string& sweep_name,
                       const std::vector<double>& sweep, const std::string& solve_name, double lo, double hi,
                       const std::map<std::string, double>& fixed = {}, const TraceOptions& opt = {});

using Residual = std::function<double(const CycleSystem&)>;

/// The same root solve for an arbitrary residual. With fold_curve set, sweep points whose β is not
/// positive are reported as the degenerate α-axis answer instead of being solved.
CurveTrace trace_residual(const Family& family, const Residual& residual, const std::string& sweep_name,
                          const std::vector<double>& sweep, const std::string& solve_name, double lo, double hi,
                          const std::map<std::string, double>& fixed = {}, const TraceOptions& opt = {},
                          bool fold_curve = false);

/// Sign pattern of (α, β, π−P_E, π−F, π−P1); '0' inside the contact band, 'x' for an absent target.
struct RegionSignature {
    std::string code;
    double alpha = 0.0, beta = 0.0;
    std::optional<double> d_pe, d_fold, d_p1;
    bool ok = false;
    std::string error;
};

RegionSignature region_signature(const CycleSystem& sys);

struct GridAxis {
    std::string name;
    double lo = 0.0, hi = 0.0;
    int n = 0;
    double value(int i) const { return n <= 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct RegionGrid {
    GridAxis ax, ay;
    std::vector<RegionSignature> cells;  ///< row-major, x fastest
    const RegionSignature& at(int i, int j) const { return cells[static_cast<size_t>(j) * ax.n + i]; }
};

RegionGrid region_grid(const Family& family, const GridAxis& ax, const GridAxis& ay,
                       const std::map<std::string, double>& fixed = {});

struct ConsistencyReport {
    int cells = 0, failed = 0;
    int changes = 0;      ///< adjacent pairs with different signatures
    int unexplained = 0;  ///< changes without a residual sign change or target appearance
    int islands = 0;      ///< cells where a sign flips in and straight back out along a grid line
    bool pass() const { return unexplained == 0 && islands == 0; }
};

ConsistencyReport consistency_scan(const RegionGrid& grid);

/// Definition-level taxonomy of a closed orbit.
enum class CycleClass { simple, limit, regular_polycycle, sliding_cycle, pseudo_cycle };
CycleClass classify_cycle(const PiecewiseSystem& Z, const Orbit& orbit, bool is_limit = false);

std::string to_string(BSCase c);
std::string to_string(DSCCase c);
std::string to_string(CycleKind k);
std::string to_string(CurveLabel l);
std::string to_string(CurveStatus s);
std::string to_string(CycleClass c);
CurveLabel parse_curve_label(const std::string& s);

}  // namespace filippov

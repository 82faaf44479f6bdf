#pragma once

#include <string>
#include <vector>

#include "filippov/chart.hpp"
#include "filippov/psys.hpp"

namespace filippov {

/// A piecewise system together with what the loop machinery needs to find its way around:
/// the chart on Σ, a Newton guess for the plus-field saddle, the working window and time budget.
struct CycleSystem {
    std::string name;
    PiecewiseSystem Z;
    SigmaChart chart;
    Vec2 saddle_guess;
    Rect window;
    double t_budget = 60.0;
    double fold_radius = 0.5;         ///< scan radius for the fold search around the saddle chart value
    double pe_halfwidth = 2.5;        ///< chart half-width scanned for pseudo-equilibria
    double section_halfwidth = 2.0;   ///< returns farther than this from the base leave the section
    double initial_domain = 0.01;     ///< first trial δ of the adaptive domain search
    double max_domain = 1.0;
    std::vector<std::string> param_names;
    std::vector<double> params;
};

}  // namespace filippov

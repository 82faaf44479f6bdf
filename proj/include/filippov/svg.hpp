#pragma once

#include <string>

#include "filippov/flow.hpp"
#include "filippov/retmap.hpp"
#include "filippov/system.hpp"

namespace filippov {

/// Phase portrait: Σ as a grey curve, smooth arcs in blue (plus) and red (minus), sliding arcs thick green.
std::string phase_portrait_svg(const CycleSystem& sys, const Orbit& orbit);

/// Return-map graph with the identity line.
std::string return_map_svg(const ReturnMap& map);

}  // namespace filippov

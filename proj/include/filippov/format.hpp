#pragma once

#include <string>

namespace filippov {

/// Shortest decimal that round-trips to the same double.
std::string fmt(double v);

}  // namespace filippov

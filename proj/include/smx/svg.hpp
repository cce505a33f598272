#pragma once

#include <string>

#include "smx/bench.hpp"

namespace smx {

// 800x800 axis-equal scatter plot: solid markers for exclusive queries,
// hollow for non-exclusive (Hilbert predicate; hyperbolic-exclusive points
// get a distinct stroke), pivot crosses and a threshold-radius legend.
std::string scatter_svg(const ScatterResult& r);

} // namespace smx

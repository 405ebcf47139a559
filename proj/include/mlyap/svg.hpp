#pragma once

#include "mlyap/types.hpp"

#include <string>
#include <vector>

namespace mlyap {

/// Minimal line-plot emitter: axes, tick labels and one polyline per series.
void svg_line_plot(const std::string& path, const std::string& title, const Vector& x,
                   const std::vector<Vector>& series, const std::vector<std::string>& labels);

}  // namespace mlyap

#pragma once

#include <string>
#include <vector>

#include "redtide/analytics.hpp"

namespace redtide {

/// Correlation heatmap: levels down the side, frequencies across the
/// top, diverging blue-white-red fill with the r value printed in each
/// cell. Presentation-only; byte stability is not promised.
std::string heatmap_svg(const CorrelationGrid& grid, const std::vector<GeoLevel>& levels,
                        const std::vector<Frequency>& freqs, const std::string& title);

}  // namespace redtide

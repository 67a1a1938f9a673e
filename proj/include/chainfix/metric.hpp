#pragma once

#include <vector>

#include "chainfix/rational.hpp"

namespace chainfix {

// Weighted l1 metric on the truncated cube: coordinate i (0-indexed)
// carries weight 2^-(i+1). Missing coordinates are treated as 0.
inline Rat coord_weight(int i) { return pow2(-(i + 1)); }

Rat l1w_dist(const std::vector<Rat>& x, const std::vector<Rat>& y);
Rat l1w_diam(const std::vector<std::vector<Rat>>& pts);

// Sup of the omitted tail over the unit cube when truncating at d coordinates.
inline Rat tail_bound(int d) { return pow2(-d); }

}  // namespace chainfix

#pragma once

#include <cstdint>
#include <vector>

#include "gnncolor/graph.hpp"

namespace gnncolor {

struct TabuConfig {
  long max_moves = 100000;
  int tenure_base = 10;
  double tenure_frac = 0.6;  // tenure grows with the current conflict count
  std::uint64_t seed = 0;
};

// Greedy coloring by maximum saturation degree; ties broken by higher degree,
// then lower index. Always returns a proper coloring, using as many colors as
// it needs.
Assignment dsatur(const Graph& g);

struct TabuResult {
  Assignment assignment;
  long moves = 0;
};

// Tabu search over (node, color) moves with a fixed color budget k. Each move
// recolors a conflicted node to the color minimizing the resulting conflict
// count; the color it left is tabu for tenure_base + tenure_frac*conflicts +
// U[0,9] moves unless the move beats the best seen. Returns the best
// assignment found within max_moves or on reaching zero conflicts.
TabuResult tabucol(const Graph& g, int k, const TabuConfig& cfg);
TabuResult tabucol(const Graph& g, int k, const TabuConfig& cfg,
                   std::vector<int> initial_colors);

}  // namespace gnncolor

#include "gnncolor/baselines.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "gnncolor/errors.hpp"
#include "gnncolor/rng.hpp"

namespace gnncolor {

Assignment dsatur(const Graph& g) {
  std::vector<int> color(g.n, -1);
  std::vector<std::set<int>> neighbor_colors(g.n);
  int max_color = -1;

  for (int step = 0; step < g.n; ++step) {
    int pick = -1, pick_sat = -1, pick_deg = -1;
    for (int v = 0; v < g.n; ++v) {
      if (color[v] != -1) continue;
      const int sat = static_cast<int>(neighbor_colors[v].size());
      if (sat > pick_sat || (sat == pick_sat && g.degrees[v] > pick_deg)) {
        pick = v;
        pick_sat = sat;
        pick_deg = g.degrees[v];
      }
    }

    int c = 0;
    for (int used : neighbor_colors[pick]) {
      if (used != c) break;
      ++c;
    }
    color[pick] = c;
    max_color = std::max(max_color, c);
    for (int u : g.adjacency[pick])
      if (color[u] == -1) neighbor_colors[u].insert(c);
  }

  return make_assignment(g, std::move(color), max_color + 1);
}

TabuResult tabucol(const Graph& g, int k, const TabuConfig& cfg) {
  if (k < 1) throw std::invalid_argument("tabucol: k must be >= 1");
  Rng rng(cfg.seed);
  std::vector<int> colors(g.n);
  for (int v = 0; v < g.n; ++v) colors[v] = rng.uniform_int(0, k - 1);
  return tabucol(g, k, cfg, std::move(colors));
}

TabuResult tabucol(const Graph& g, int k, const TabuConfig& cfg,
                   std::vector<int> initial_colors) {
  if (k < 1) throw std::invalid_argument("tabucol: k must be >= 1");
  if (cfg.max_moves < 1) throw std::invalid_argument("tabucol: max_moves must be >= 1");
  if (static_cast<int>(initial_colors.size()) != g.n)
    throw ShapeError("tabucol: initial coloring length != node count");
  for (int c : initial_colors)
    if (c < 0 || c >= k) throw std::invalid_argument("tabucol: initial color out of range");

  // rng state must not depend on whether the caller supplied the coloring,
  // so the jitter stream is drawn fresh here either way
  Rng rng(cfg.seed + 0x9e3779b97f4a7c15ull);

  std::vector<int> colors = std::move(initial_colors);
  // count[v*k + c] = neighbors of v currently colored c
  std::vector<int> count(static_cast<std::size_t>(g.n) * k, 0);
  for (auto [u, v] : g.edges) {
    ++count[static_cast<std::size_t>(u) * k + colors[v]];
    ++count[static_cast<std::size_t>(v) * k + colors[u]];
  }
  int conflicts = count_conflicts(g, colors);

  std::vector<int> best = colors;
  int best_conflicts = conflicts;
  std::vector<long> tabu_until(static_cast<std::size_t>(g.n) * k, -1);

  long move = 0;
  while (best_conflicts > 0 && move < cfg.max_moves) {
    ++move;

    int chosen_v = -1, chosen_c = -1;
    int chosen_result = std::numeric_limits<int>::max();
    int ties = 0;
    bool found_allowed = false;

    for (int v = 0; v < g.n; ++v) {
      const int cur = colors[v];
      const int* row = &count[static_cast<std::size_t>(v) * k];
      if (row[cur] == 0) continue;  // conflict-free node, leave it be
      for (int c = 0; c < k; ++c) {
        if (c == cur) continue;
        const int result = conflicts + row[c] - row[cur];
        const bool tabu = tabu_until[static_cast<std::size_t>(v) * k + c] >= move;
        const bool allowed = !tabu || result < best_conflicts;  // aspiration
        if (!allowed) continue;
        found_allowed = true;
        if (result < chosen_result) {
          chosen_result = result;
          chosen_v = v;
          chosen_c = c;
          ties = 1;
        } else if (result == chosen_result) {
          // reservoir sampling keeps uniform tie-breaking in one pass
          ++ties;
          if (rng.uniform_int(1, ties) == 1) {
            chosen_v = v;
            chosen_c = c;
          }
        }
      }
    }

    if (!found_allowed) {
      // everything tabu: kick a random conflicted node to a random color
      std::vector<int> conflicted;
      for (int v = 0; v < g.n; ++v)
        if (count[static_cast<std::size_t>(v) * k + colors[v]] > 0) conflicted.push_back(v);
      if (conflicted.empty()) break;
      chosen_v = conflicted[rng.uniform_int(0, static_cast<int>(conflicted.size()) - 1)];
      chosen_c = (colors[chosen_v] + rng.uniform_int(1, k - 1)) % k;
      chosen_result = conflicts + count[static_cast<std::size_t>(chosen_v) * k + chosen_c] -
                      count[static_cast<std::size_t>(chosen_v) * k + colors[chosen_v]];
    }

    const int old_color = colors[chosen_v];
    colors[chosen_v] = chosen_c;
    conflicts = chosen_result;
    for (int u : g.adjacency[chosen_v]) {
      --count[static_cast<std::size_t>(u) * k + old_color];
      ++count[static_cast<std::size_t>(u) * k + chosen_c];
    }

    const long tenure = cfg.tenure_base + static_cast<long>(cfg.tenure_frac * conflicts) +
                        rng.uniform_int(0, 9);
    tabu_until[static_cast<std::size_t>(chosen_v) * k + old_color] = move + tenure;

    if (conflicts < best_conflicts) {
      best_conflicts = conflicts;
      best = colors;
    }
  }

  TabuResult result;
  result.assignment = make_assignment(g, std::move(best), k);
  result.moves = move;
  return result;
}

}  // namespace gnncolor

// Generates the stock benchmark instances as DIMACS .col files.
//
//   datagen queen R C > queenR-C.col    R x C chessboard; squares are nodes,
//                                       edges join same row, column, or diagonal
//   datagen myciel T > mycielT.col      (T-1)-fold Mycielski construction
//                                       starting from a single edge
//
// The checked-in files under data/color/ were produced by this tool.

#include <iostream>
#include <string>
#include <vector>

#include "gnncolor/graph.hpp"

namespace {

gnncolor::Graph queen_graph(int rows, int cols) {
  const int n = rows * cols;
  std::vector<std::pair<int, int>> edges;
  auto idx = [cols](int r, int c) { return r * cols + c; };
  for (int r1 = 0; r1 < rows; ++r1)
    for (int c1 = 0; c1 < cols; ++c1)
      for (int r2 = r1; r2 < rows; ++r2)
        for (int c2 = 0; c2 < cols; ++c2) {
          if (r2 == r1 && c2 <= c1) continue;
          const bool same_row = r1 == r2;
          const bool same_col = c1 == c2;
          const bool same_diag = (r1 - c1 == r2 - c2) || (r1 + c1 == r2 + c2);
          if (same_row || same_col || same_diag)
            edges.emplace_back(idx(r1, c1), idx(r2, c2));
        }
  return gnncolor::Graph::from_edges(n, std::move(edges));
}

// M(G): keep G, add a shadow node u_i per v_i adjacent to N(v_i), plus one
// hub adjacent to every shadow. Raises the chromatic number by one while
// keeping the graph triangle-free.
gnncolor::Graph mycielski(const gnncolor::Graph& g) {
  const int n = g.n;
  std::vector<std::pair<int, int>> edges = g.edges;
  for (auto [u, v] : g.edges) {
    edges.emplace_back(n + u, v);
    edges.emplace_back(u, n + v);
  }
  const int hub = 2 * n;
  for (int i = 0; i < n; ++i) edges.emplace_back(n + i, hub);
  return gnncolor::Graph::from_edges(2 * n + 1, std::move(edges));
}

gnncolor::Graph myciel_graph(int t) {
  // t=2 is the 5-cycle; each further step applies the construction once
  gnncolor::Graph g = gnncolor::Graph::from_edges(2, {{0, 1}});
  for (int step = 1; step < t; ++step) g = mycielski(g);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string usage = "usage: datagen queen R C | datagen myciel T\n";
  if (argc < 2) {
    std::cerr << usage;
    return 2;
  }
  const std::string kind = argv[1];
  try {
    if (kind == "queen" && argc == 4) {
      const int r = std::stoi(argv[2]);
      const int c = std::stoi(argv[3]);
      if (r < 1 || c < 1) throw std::invalid_argument("board sides must be >= 1");
      std::cout << "c queen graph on a " << r << "x" << c << " board\n"
                << gnncolor::to_dimacs(queen_graph(r, c));
      return 0;
    }
    if (kind == "myciel" && argc == 3) {
      const int t = std::stoi(argv[2]);
      if (t < 2) throw std::invalid_argument("myciel index must be >= 2");
      std::cout << "c myciel" << t << " via the Mycielski construction\n"
                << gnncolor::to_dimacs(myciel_graph(t));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << usage;
  return 2;
}

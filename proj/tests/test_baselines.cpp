#include <random>
#include <string>

#include "doctest.h"

#include "gnncolor/baselines.hpp"
#include "gnncolor/errors.hpp"
#include "gnncolor/graph.hpp"
#include "oracles.hpp"

using namespace gnncolor;

namespace {
const std::string kDataDir = GNNCOLOR_DATA_DIR;
}

TEST_CASE("dsatur on tiny graphs") {
  const Graph triangle = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  const Assignment a = dsatur(triangle);
  CHECK(a.conflicts == 0);
  CHECK(a.k == 3);

  const Graph path3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const Assignment b = dsatur(path3);
  CHECK(b.conflicts == 0);
  CHECK(b.k == 2);

  const Graph empty4 = Graph::from_edges(4, {});
  const Assignment c = dsatur(empty4);
  CHECK(c.conflicts == 0);
  CHECK(c.k == 1);
}

TEST_CASE("dsatur is always proper on random graphs") {
  std::mt19937_64 eng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(eng() % 30);
    const double p = 0.1 + 0.8 * (static_cast<double>(eng() % 100) / 100.0);
    const Graph g = oracles::random_graph(n, p, eng);
    const Assignment a = dsatur(g);
    CHECK(count_conflicts(g, a.colors) == 0);
    CHECK(colors_used(a) == a.k);
    // never worse than max degree + 1
    int max_deg = 0;
    for (int d : g.degrees) max_deg = std::max(max_deg, d);
    CHECK(a.k <= max_deg + 1);
  }
}

TEST_CASE("tabucol: proper start returns immediately") {
  const Graph empty = Graph::from_edges(5, {});
  TabuConfig cfg;
  cfg.seed = 3;
  const TabuResult r = tabucol(empty, 2, cfg);
  CHECK(r.assignment.conflicts == 0);
  CHECK(r.moves == 0);
}

TEST_CASE("tabucol: fixes a path in at most two moves") {
  const Graph path3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  TabuConfig cfg;
  cfg.seed = 5;
  const TabuResult r = tabucol(path3, 2, cfg, {0, 0, 1});
  CHECK(r.assignment.conflicts == 0);
  CHECK(r.moves <= 2);
}

TEST_CASE("tabucol: improves on the initial coloring and respects the budget") {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(eng() % 16);
    const int k = 2 + static_cast<int>(eng() % 3);
    const Graph g = oracles::random_graph(n, 0.5, eng);

    std::vector<int> initial(n);
    for (int& c : initial) c = static_cast<int>(eng() % k);
    const int initial_conflicts = count_conflicts(g, initial);

    TabuConfig cfg;
    cfg.max_moves = 500;
    cfg.seed = eng();
    const TabuResult r = tabucol(g, k, cfg, initial);

    CHECK(r.assignment.conflicts <= initial_conflicts);
    CHECK(r.assignment.conflicts == count_conflicts(g, r.assignment.colors));
    CHECK(r.moves <= cfg.max_moves);
    for (int c : r.assignment.colors) {
      CHECK(c >= 0);
      CHECK(c < k);
    }
  }
}

TEST_CASE("tabucol solves queen5-5 with seven colors") {
  const auto parsed = parse_dimacs_file(kDataDir + "/color/queen5-5.col");
  TabuConfig cfg;
  cfg.seed = 1;
  const TabuResult r = tabucol(parsed.graph, 7, cfg);
  CHECK(r.assignment.conflicts == 0);
}

TEST_CASE("tabucol rejects bad arguments") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  TabuConfig cfg;
  CHECK_THROWS_AS(tabucol(g, 0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(tabucol(g, 2, cfg, {0}), ShapeError);
  CHECK_THROWS_AS(tabucol(g, 2, cfg, {0, 5}), std::invalid_argument);
}

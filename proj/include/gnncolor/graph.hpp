#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gnncolor {

// Immutable undirected simple graph. Edges are stored once with u < v, sorted;
// adjacency lists are sorted and consistent with the edge set.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;
  std::vector<int> degrees;

  // Normalizes (orders endpoints, deduplicates) and validates the edge list.
  // Rejects self-loops and out-of-range endpoints.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
};

// A k-coloring together with its conflict count.
struct Assignment {
  std::vector<int> colors;
  int k = 0;
  int conflicts = 0;
};

// Number of edges whose endpoints share a color.
int count_conflicts(const Graph& g, const std::vector<int>& colors);

Assignment make_assignment(const Graph& g, std::vector<int> colors, int k);

int colors_used(const Assignment& a);

struct ParsedDimacs {
  Graph graph;
  int declared_edges = 0;
  // Header edge count vs. edges actually parsed; files in the wild disagree,
  // so a mismatch is reported rather than rejected.
  bool edge_count_mismatch = false;
};

// DIMACS .col: "c" comments, one "p edge N M" line, "e u v" with 1-based nodes.
ParsedDimacs parse_dimacs(std::istream& in);
ParsedDimacs parse_dimacs(const std::string& text);
ParsedDimacs parse_dimacs_file(const std::string& path);

std::string to_dimacs(const Graph& g);

// DOT text with nodes labeled by color index; conflicting edges drawn red,
// clean ones gray.
std::string export_dot(const Graph& g, const Assignment& a);

}  // namespace gnncolor

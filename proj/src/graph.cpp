#include "gnncolor/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gnncolor/errors.hpp"

namespace gnncolor {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
  if (n < 0) throw ParseError("node count must be non-negative");
  for (auto& [u, v] : edge_list) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ParseError("edge endpoint out of range: (" + std::to_string(u) + "," +
                       std::to_string(v) + ") with n=" + std::to_string(n));
    if (u == v)
      throw ParseError("self-loop on node " + std::to_string(u) +
                       " makes every coloring conflicted");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

  Graph g;
  g.n = n;
  g.edges = std::move(edge_list);
  g.adjacency.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  g.degrees.resize(n);
  for (int v = 0; v < n; ++v) g.degrees[v] = static_cast<int>(g.adjacency[v].size());
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

int count_conflicts(const Graph& g, const std::vector<int>& colors) {
  if (static_cast<int>(colors.size()) != g.n)
    throw ShapeError("count_conflicts: color vector length " +
                     std::to_string(colors.size()) + " != node count " +
                     std::to_string(g.n));
  int clashes = 0;
  for (auto [u, v] : g.edges)
    if (colors[u] == colors[v]) ++clashes;
  return clashes;
}

Assignment make_assignment(const Graph& g, std::vector<int> colors, int k) {
  Assignment a;
  a.conflicts = count_conflicts(g, colors);
  a.colors = std::move(colors);
  a.k = k;
  return a;
}

int colors_used(const Assignment& a) {
  std::vector<int> seen(a.colors);
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return static_cast<int>(seen.size());
}

ParsedDimacs parse_dimacs(std::istream& in) {
  int n = 0;
  long declared = 0;
  bool have_problem = false;
  std::vector<std::pair<int, int>> edges;

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      if (have_problem) fail("duplicate problem line");
      std::string fmt;
      if (!(ls >> fmt >> n >> declared) || (fmt != "edge" && fmt != "edges"))
        fail("malformed problem line, expected 'p edge N M'");
      if (n < 0 || declared < 0) fail("negative counts in problem line");
      have_problem = true;
    } else if (tag == "e") {
      if (!have_problem) fail("edge line before problem line");
      long u = 0, v = 0;
      std::string extra;
      if (!(ls >> u >> v) || (ls >> extra)) fail("malformed edge line, expected 'e u v'");
      if (u < 1 || u > n || v < 1 || v > n)
        fail("node index out of [1," + std::to_string(n) + "]");
      if (u == v) fail("self-loop on node " + std::to_string(u));
      edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    } else {
      fail("unrecognized line type '" + tag + "'");
    }
  }
  if (!have_problem) throw ParseError("missing problem line 'p edge N M'");

  ParsedDimacs result;
  result.graph = Graph::from_edges(n, std::move(edges));
  result.declared_edges = static_cast<int>(declared);
  result.edge_count_mismatch = result.graph.edge_count() != result.declared_edges;
  return result;
}

ParsedDimacs parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

ParsedDimacs parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return parse_dimacs(in);
}

std::string to_dimacs(const Graph& g) {
  std::ostringstream out;
  out << "p edge " << g.n << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

std::string export_dot(const Graph& g, const Assignment& a) {
  if (static_cast<int>(a.colors.size()) != g.n)
    throw ShapeError("export_dot: assignment length != node count");
  std::ostringstream out;
  out << "graph coloring {\n";
  out << "  node [shape=circle];\n";
  for (int v = 0; v < g.n; ++v)
    out << "  " << v << " [label=\"" << a.colors[v] << "\"];\n";
  for (auto [u, v] : g.edges) {
    const bool clash = a.colors[u] == a.colors[v];
    out << "  " << u << " -- " << v << " [color=" << (clash ? "red" : "gray") << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gnncolor

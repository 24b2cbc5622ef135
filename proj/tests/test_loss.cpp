#include <cmath>
#include <random>

#include "doctest.h"

#include "gnncolor/loss.hpp"
#include "gnncolor/rng.hpp"
#include "oracles.hpp"

using namespace gnncolor;

namespace {

Tensor one_hot_probs(const std::vector<int>& colors, int k) {
  Tensor p(static_cast<int>(colors.size()), k);
  for (int v = 0; v < p.rows; ++v) p.at(v, colors[v]) = 1.0;
  return p;
}

double eval_utility(const Graph& g, const Tensor& p) {
  Tape tape;
  return tape.value(f_utility(tape, g, tape.leaf(p))).scalar_value();
}

double eval_conv(const Tensor& p, const LossConfig& cfg) {
  Tape tape;
  return tape.value(f_conv(tape, tape.leaf(p), cfg)).scalar_value();
}

double eval_total(const Graph& g, const Tensor& p, const LossConfig& cfg) {
  Tape tape;
  return tape.value(total_loss(tape, g, tape.leaf(p), cfg)).scalar_value();
}

}  // namespace

TEST_CASE("f_utility on a single edge") {
  const Graph g = Graph::from_edges(2, {{0, 1}});

  CHECK(eval_utility(g, one_hot_probs({1, 1}, 3)) == doctest::Approx(1.0));
  CHECK(eval_utility(g, one_hot_probs({0, 2}, 3)) == doctest::Approx(0.0));

  Tensor p(2, 2);
  p.at(0, 0) = 0.5;
  p.at(0, 1) = 0.5;
  p.at(1, 0) = 0.2;
  p.at(1, 1) = 0.8;
  CHECK(eval_utility(g, p) == doctest::Approx(0.5));
}

TEST_CASE("f_conv: one-hot is confident, uniform is not") {
  LossConfig cfg;

  CHECK(eval_conv(one_hot_probs({0, 2}, 3), cfg) == doctest::Approx(0.0).epsilon(1e-9));

  Tensor uniform(1, 4, 0.25);
  CHECK(eval_conv(uniform, cfg) == doctest::Approx(std::log(4.0)).epsilon(1e-9));

  // literal mode is the exact negation
  Rng rng(3);
  Tensor p(5, 3);
  for (int i = 0; i < 5; ++i) {
    double total = 0.0;
    for (int j = 0; j < 3; ++j) total += (p.at(i, j) = rng.uniform(0.01, 1.0));
    for (int j = 0; j < 3; ++j) p.at(i, j) /= total;
  }
  LossConfig literal = cfg;
  literal.conv_sign = ConvSign::kLiteral;
  CHECK(eval_conv(p, literal) == doctest::Approx(-eval_conv(p, cfg)).epsilon(1e-12));
}

TEST_CASE("total_loss: lambda 0 equals the utility term bitwise") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  Rng rng(9);
  Tensor logits(3, 3);
  for (double& v : logits.data) v = rng.uniform(-2.0, 2.0);
  Tensor p;
  softmax_rows_into(logits, p);

  LossConfig cfg;
  cfg.lambda = 0.0;
  CHECK(eval_total(g, p, cfg) == eval_utility(g, p));
}

TEST_CASE("total_loss: proper one-hot coloring scores zero") {
  const Graph triangle = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  LossConfig cfg;  // intent mode
  CHECK(eval_total(triangle, one_hot_probs({0, 1, 2}, 3), cfg) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("total_loss: lambda 0.25 fixture recomputed by hand") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  Tensor p = Tensor::from_rows({{0.7, 0.2, 0.1},
                                {0.1, 0.8, 0.1},
                                {0.25, 0.25, 0.5},
                                {0.3, 0.3, 0.4}});
  LossConfig cfg;
  cfg.lambda = 0.25;

  // independent scalar recomputation, term by term
  double utility = 0.0;
  for (auto [u, v] : g.edges)
    for (int j = 0; j < 3; ++j) utility += p.at(u, j) * p.at(v, j);
  double entropy = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) entropy -= p.at(i, j) * std::log(p.at(i, j) + cfg.eps);

  CHECK(eval_total(g, p, cfg) == doctest::Approx(utility + 0.25 * entropy).epsilon(1e-12));
  CHECK(eval_utility(g, p) == doctest::Approx(utility).epsilon(1e-12));
  CHECK(eval_conv(p, cfg) == doctest::Approx(entropy).epsilon(1e-12));
}

TEST_CASE("f_utility equals count_conflicts on every one-hot coloring, n <= 5, k <= 3") {
  for (int n = 1; n <= 5; ++n) {
    const auto graphs = oracles::all_graphs(n);
    for (const Graph& g : graphs) {
      for (int k = 1; k <= 3; ++k) {
        std::vector<int> colors(n, 0);
        while (true) {
          const double u = eval_utility(g, one_hot_probs(colors, k));
          CHECK(u == doctest::Approx(count_conflicts(g, colors)).epsilon(1e-12));
          int i = 0;
          while (i < n && ++colors[i] == k) colors[i++] = 0;
          if (i == n) break;
        }
      }
    }
  }
}

TEST_CASE("loss bounds and color-relabeling invariance") {
  std::mt19937_64 eng(77);
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(eng() % 6);
    const int k = 2 + static_cast<int>(eng() % 3);
    const Graph g = oracles::random_graph(n, 0.5, eng);

    Tensor logits(n, k);
    for (double& v : logits.data) v = rng.uniform(-2.0, 2.0);
    Tensor p;
    softmax_rows_into(logits, p);

    const double u = eval_utility(g, p);
    CHECK(u >= 0.0);

    LossConfig cfg;
    const double h = eval_conv(p, cfg);
    CHECK(h >= -1e-9);
    CHECK(h <= n * std::log(double(k)) + 1e-9);

    // permute columns identically in every row
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), eng);
    Tensor q(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) q.at(i, perm[j]) = p.at(i, j);
    CHECK(eval_utility(g, q) == doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("total_loss rejects negative lambda") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  Tape tape;
  const NodeId p = tape.leaf(one_hot_probs({0, 1}, 2));
  LossConfig cfg;
  cfg.lambda = -0.1;
  CHECK_THROWS_AS(total_loss(tape, g, p, cfg), std::invalid_argument);
}

#include <random>

#include "doctest.h"

#include "gnncolor/model.hpp"
#include "oracles.hpp"

using namespace gnncolor;

namespace {

// the three-node fixture: node 0 adjacent to 1 and 2
Graph star3() { return Graph::from_edges(3, {{0, 1}, {0, 2}}); }

ModelConfig tiny_cfg(int d0, int d1, int k) {
  ModelConfig cfg;
  cfg.d0 = d0;
  cfg.d1 = d1;
  cfg.k = k;
  cfg.dropout_p = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("init_params: documented ranges and determinism") {
  const Graph g = star3();
  ModelConfig cfg = tiny_cfg(6, 5, 4);
  cfg.seed = 31;

  const ModelParams p = init_params(g, cfg);
  CHECK(p.alpha == 0.5);  // exact

  for (double v : p.w1_self.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  for (double v : p.w1_neigh.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  for (double v : p.h0.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  const double s = std::sqrt(6.0 / (cfg.d1 + cfg.k));
  for (double v : p.w2_self.data) CHECK(std::abs(v) <= s);
  for (double v : p.w2_neigh.data) CHECK(std::abs(v) <= s);

  const ModelParams q = init_params(g, cfg);
  CHECK(q.w1_self.data == p.w1_self.data);
  CHECK(q.w1_neigh.data == p.w1_neigh.data);
  CHECK(q.w2_self.data == p.w2_self.data);
  CHECK(q.w2_neigh.data == p.w2_neigh.data);
  CHECK(q.h0.data == p.h0.data);
}

TEST_CASE("layer 1 subtracts half the neighbor mean in the canonical example") {
  const Graph g = star3();
  const AggregationPlan plan(g);

  ModelConfig cfg = tiny_cfg(3, 3, 3);
  cfg.activation = Activation::kIdentity;

  ModelParams p;
  p.w1_self = Tensor::identity(3);
  p.w1_neigh = Tensor::identity(3);
  p.alpha = 0.5;
  p.w2_self = Tensor::identity(3);
  p.w2_neigh = Tensor(3, 3);
  p.h0 = Tensor::from_rows({{0.8, 0.6, 0.1},   // node of interest
                            {0.7, 0.1, 0.1},   // neighbor 1
                            {0.5, 0.1, 0.7}}); // neighbor 2

  Tape tape;
  Rng rng(0);
  const ForwardNodes f = forward(tape, plan, p, cfg, /*training=*/false, rng);
  const Tensor& h1 = tape.value(f.h1);

  CHECK(h1.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h1.at(0, 1) == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(h1.at(0, 2) == doctest::Approx(-0.1).epsilon(1e-12));

  // before the combine the node and neighbor 1 both lean to color 0; after it
  // the node's strongest coordinate moves to index 1
  const Tensor& h0 = tape.value(f.h0);
  auto argmax_row = [](const Tensor& t, int row) {
    int best = 0;
    for (int j = 1; j < t.cols; ++j)
      if (t.at(row, j) > t.at(row, best)) best = j;
    return best;
  };
  CHECK(argmax_row(h0, 0) == 0);
  CHECK(argmax_row(h0, 1) == 0);
  CHECK(argmax_row(h1, 0) == 1);
}

TEST_CASE("forward on an edgeless graph ignores alpha") {
  const Graph g = Graph::from_edges(4, {});
  const AggregationPlan plan(g);
  ModelConfig cfg = tiny_cfg(5, 4, 3);
  cfg.seed = 8;

  ModelParams p = init_params(g, cfg);
  const Tensor base = eval_probabilities(plan, p, cfg);
  p.alpha = 99.0;
  const Tensor scaled = eval_probabilities(plan, p, cfg);
  CHECK(base.data == scaled.data);
}

TEST_CASE("probability rows are positive and sum to one") {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(eng() % 10);
    const Graph g = oracles::random_graph(n, 0.4, eng);
    ModelConfig cfg = tiny_cfg(7, 6, 4);
    cfg.seed = eng();
    const ModelParams p = init_params(g, cfg);
    const Tensor probs = eval_probabilities(AggregationPlan(g), p, cfg);
    REQUIRE(probs.rows == n);
    for (int i = 0; i < n; ++i) {
      double total = 0.0;
      for (int j = 0; j < probs.cols; ++j) {
        CHECK(probs.at(i, j) > 0.0);
        total += probs.at(i, j);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha 0 with a zero neighbor head makes outputs edge-independent") {
  std::mt19937_64 eng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(eng() % 6);
    const Graph sparse = oracles::random_graph(n, 0.3, eng);
    const Graph dense = oracles::random_graph(n, 0.8, eng);

    ModelConfig cfg = tiny_cfg(5, 4, 3);
    cfg.seed = 1000 + trial;
    ModelParams p = init_params(sparse, cfg);
    p.alpha = 0.0;
    p.w2_neigh = Tensor(cfg.d1, cfg.k);  // cut the layer-2 neighbor path

    const Tensor a = eval_probabilities(AggregationPlan(sparse), p, cfg);
    const Tensor b = eval_probabilities(AggregationPlan(dense), p, cfg);
    CHECK(a.data == b.data);
  }
}

TEST_CASE("inference is deterministic and matches the tape in eval mode") {
  std::mt19937_64 eng(41);
  const Graph g = oracles::random_graph(8, 0.5, eng);
  ModelConfig cfg = tiny_cfg(6, 6, 3);
  cfg.seed = 4;
  const AggregationPlan plan(g);
  const ModelParams p = init_params(g, cfg);

  const Tensor once = eval_probabilities(plan, p, cfg);
  const Tensor twice = eval_probabilities(plan, p, cfg);
  CHECK(once.data == twice.data);

  Tape tape;
  Rng rng(0);
  const ForwardNodes f = forward(tape, plan, p, cfg, /*training=*/false, rng);
  const Tensor& taped = tape.value(f.probabilities);
  REQUIRE(taped.size() == once.size());
  for (long i = 0; i < once.size(); ++i)
    CHECK(taped.data[i] == doctest::Approx(once.data[i]).epsilon(1e-14));
}

TEST_CASE("extract_assignment: argmax with low-index ties") {
  const Graph g = Graph::from_edges(3, {{0, 1}});
  Tensor p = Tensor::from_rows({{0.1, 0.7, 0.2},
                                {0.5, 0.5, 0.0},
                                {0.2, 0.2, 0.6}});
  const Assignment a = extract_assignment(g, p);
  CHECK(a.colors == std::vector<int>{1, 0, 2});
  CHECK(a.k == 3);
  CHECK(a.conflicts == 0);

  // one-hot rows reproduce count_conflicts exactly
  Tensor onehot(3, 3);
  onehot.at(0, 2) = 1.0;
  onehot.at(1, 2) = 1.0;
  onehot.at(2, 0) = 1.0;
  const Assignment b = extract_assignment(g, onehot);
  CHECK(b.conflicts == count_conflicts(g, b.colors));
  CHECK(b.conflicts == 1);
}

TEST_CASE("checkpoint json round-trips parameters bit for bit") {
  const Graph g = star3();
  ModelConfig cfg = tiny_cfg(5, 4, 3);
  cfg.seed = 77;
  cfg.dropout_p = 0.15;
  cfg.train_embeddings = true;
  const ModelParams p = init_params(g, cfg);

  const std::string blob = params_to_json(p, cfg);
  const auto [q, cfg2] = params_from_json(blob);

  CHECK(cfg2.d0 == cfg.d0);
  CHECK(cfg2.d1 == cfg.d1);
  CHECK(cfg2.k == cfg.k);
  CHECK(cfg2.dropout_p == cfg.dropout_p);
  CHECK(cfg2.train_embeddings == cfg.train_embeddings);
  CHECK(to_string(cfg2.activation) == to_string(cfg.activation));

  CHECK(q.alpha == p.alpha);
  CHECK(q.w1_self.data == p.w1_self.data);
  CHECK(q.w1_neigh.data == p.w1_neigh.data);
  CHECK(q.w2_self.data == p.w2_self.data);
  CHECK(q.w2_neigh.data == p.w2_neigh.data);
  CHECK(q.h0.data == p.h0.data);
}

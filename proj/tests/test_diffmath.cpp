#include <cmath>
#include <random>

#include "doctest.h"

#include "gnncolor/errors.hpp"
#include "gnncolor/gradcheck.hpp"
#include "gnncolor/rng.hpp"
#include "gnncolor/tape.hpp"
#include "oracles.hpp"

using namespace gnncolor;

namespace {

Tensor random_tensor(int r, int c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(r, c);
  for (double& v : t.data) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace

TEST_CASE("matmul values") {
  Tape tape;
  const NodeId i2 = tape.leaf(Tensor::identity(2));
  const NodeId a = tape.leaf(Tensor::from_rows({{1, 2}, {3, 4}}));
  const Tensor& out = tape.value(tape.matmul(i2, a));
  CHECK(out.at(0, 0) == 1);
  CHECK(out.at(0, 1) == 2);
  CHECK(out.at(1, 0) == 3);
  CHECK(out.at(1, 1) == 4);

  const NodeId row = tape.leaf(Tensor::from_rows({{1, 2}}));
  const NodeId col = tape.leaf(Tensor::from_rows({{3}, {4}}));
  CHECK(tape.value(tape.matmul(row, col)).scalar_value() == 11);

  CHECK_THROWS_AS(tape.matmul(row, row), ShapeError);
}

TEST_CASE("matmul gradient matches finite differences to 1e-6") {
  Rng rng(101);
  Tensor a = random_tensor(3, 4, rng);
  Tensor b = random_tensor(4, 2, rng);

  auto eval = [&]() {
    Tape tape;
    const NodeId out = tape.matmul(tape.leaf(a), tape.leaf(b));
    return tape.value(tape.sum(out)).scalar_value();
  };

  Tape tape;
  const NodeId la = tape.leaf(a, true);
  const NodeId lb = tape.leaf(b, true);
  tape.backward(tape.sum(tape.matmul(la, lb)));

  const double err =
      max_fd_error(eval, {&a, &b}, {tape.grad(la), tape.grad(lb)});
  CHECK(err <= 1e-6);
}

TEST_CASE("neighbor_mean: averaging, isolated nodes, single neighbor") {
  // node 0 adjacent to 1 and 2, node 3 isolated, node 4 adjacent to 1
  const Graph g = Graph::from_edges(5, {{0, 1}, {0, 2}, {1, 4}});
  const AggregationPlan plan(g);
  Tape tape;
  const NodeId h = tape.leaf(Tensor::from_rows({{0.8, 0.6, 0.1},
                                                {0.7, 0.1, 0.1},
                                                {0.5, 0.1, 0.7},
                                                {9.0, 9.0, 9.0},
                                                {1.0, 2.0, 3.0}}));
  const Tensor& m = tape.value(tape.neighbor_mean(plan, h));

  CHECK(m.at(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(m.at(0, 1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(m.at(0, 2) == doctest::Approx(0.4).epsilon(1e-12));

  // isolated node gets the zero row
  CHECK(m.at(3, 0) == 0.0);
  CHECK(m.at(3, 1) == 0.0);
  CHECK(m.at(3, 2) == 0.0);

  // a single neighbor is copied through
  CHECK(m.at(4, 0) == doctest::Approx(0.7));
  CHECK(m.at(4, 1) == doctest::Approx(0.1));
  CHECK(m.at(4, 2) == doctest::Approx(0.1));
}

TEST_CASE("neighbor_mean equals dense D^-1 A H on small graphs") {
  std::mt19937_64 eng(5);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(eng() % 20);
    const Graph g = oracles::random_graph(n, 0.3, eng);
    const AggregationPlan plan(g);
    const Tensor h = random_tensor(n, 3, rng);

    Tensor dense(n, 3);
    for (int v = 0; v < n; ++v) {
      for (int u = 0; u < n; ++u) {
        if (!g.has_edge(u, v)) continue;
        for (int j = 0; j < 3; ++j) dense.at(v, j) += h.at(u, j);
      }
      if (g.degrees[v] > 0)
        for (int j = 0; j < 3; ++j) dense.at(v, j) /= g.degrees[v];
    }

    Tensor fast;
    neighbor_mean_into(plan, h, fast);
    for (long i = 0; i < fast.size(); ++i)
      CHECK(fast.data[i] == doctest::Approx(dense.data[i]).epsilon(1e-12));
  }
}

TEST_CASE("leaky_relu values") {
  Tape tape;
  const NodeId x = tape.leaf(Tensor::from_rows({{-1, 2}}));
  const Tensor& zero_slope = tape.value(tape.leaky_relu(x, 0.0));
  CHECK(zero_slope.at(0, 0) == 0);
  CHECK(zero_slope.at(0, 1) == 2);

  const Tensor& one_slope = tape.value(tape.leaky_relu(x, 1.0));
  CHECK(one_slope.at(0, 0) == -1);
  CHECK(one_slope.at(0, 1) == 2);

  const NodeId y = tape.leaf(Tensor::from_rows({{-3}}));
  CHECK(tape.value(tape.leaky_relu(y, 0.01)).scalar_value() == doctest::Approx(-0.03));

  CHECK_THROWS_AS(tape.leaky_relu(x, 1.5), std::invalid_argument);
}

TEST_CASE("row_softmax values and invariants") {
  Tape tape;
  const NodeId zeros = tape.leaf(Tensor(1, 3));
  const Tensor& uniform = tape.value(tape.row_softmax(zeros));
  for (int j = 0; j < 3; ++j)
    CHECK(uniform.at(0, j) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // shift invariance
  Rng rng(42);
  const Tensor x = random_tensor(4, 5, rng, -3.0, 3.0);
  Tensor shifted = x;
  for (double& v : shifted.data) v += 17.5;
  Tensor sx, ss;
  softmax_rows_into(x, sx);
  softmax_rows_into(shifted, ss);
  for (long i = 0; i < sx.size(); ++i)
    CHECK(sx.data[i] == doctest::Approx(ss.data[i]).epsilon(1e-12));

  const NodeId logs = tape.leaf(
      Tensor::from_rows({{std::log(1.0), std::log(2.0), std::log(3.0)}}));
  const Tensor& p = tape.value(tape.row_softmax(logs));
  CHECK(p.at(0, 0) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(p.at(0, 1) == doctest::Approx(2.0 / 6).epsilon(1e-12));
  CHECK(p.at(0, 2) == doctest::Approx(3.0 / 6).epsilon(1e-12));

  // every row strictly positive and summing to 1
  for (int i = 0; i < sx.rows; ++i) {
    double total = 0.0;
    for (int j = 0; j < sx.cols; ++j) {
      CHECK(sx.at(i, j) > 0.0);
      total += sx.at(i, j);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dropout: identity paths and rejection") {
  Rng rng(1);
  Tape tape;
  const NodeId x = tape.leaf(Tensor::from_rows({{1, 2, 3}}));
  CHECK(tape.dropout(x, 0.0, rng, true) == x);
  CHECK(tape.dropout(x, 0.5, rng, false) == x);
  CHECK_THROWS_AS(tape.dropout(x, 1.0, rng, true), std::invalid_argument);
  CHECK_THROWS_AS(tape.dropout(x, -0.1, rng, true), std::invalid_argument);
}

TEST_CASE("dropout: empirical mean stays near the input") {
  Rng rng(12345);
  const Tensor x = Tensor::from_rows({{0.5, 1.0, 2.0}});
  Tensor acc(1, 3);
  const int trials = 100000;
  for (int trial = 0; trial < trials; ++trial) {
    Tape tape;
    const NodeId d = tape.dropout(tape.leaf(x), 0.5, rng, true);
    const Tensor& out = tape.value(d);
    for (long i = 0; i < out.size(); ++i) acc.data[i] += out.data[i];
  }
  for (long i = 0; i < acc.size(); ++i) {
    const double mean = acc.data[i] / trials;
    CHECK(std::abs(mean - x.data[i]) / x.data[i] < 0.01);
  }
}

TEST_CASE("dropout: survivors scaled by 1/(1-p), bitwise repeatable by seed") {
  const Tensor x = Tensor::from_rows({{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}});
  Rng rng_a(99), rng_b(99);
  Tape tape_a, tape_b;
  const Tensor& out_a = tape_a.value(tape_a.dropout(tape_a.leaf(x), 0.25, rng_a, true));
  const Tensor& out_b = tape_b.value(tape_b.dropout(tape_b.leaf(x), 0.25, rng_b, true));
  CHECK(out_a.data == out_b.data);
  for (long i = 0; i < out_a.size(); ++i) {
    const bool dropped = out_a.data[i] == 0.0;
    if (!dropped) CHECK(out_a.data[i] == doctest::Approx(x.data[i] / 0.75).epsilon(1e-12));
  }
}

TEST_CASE("backward: sum of a parameter gives all-ones gradient") {
  Tape tape;
  const NodeId w = tape.leaf(Tensor::from_rows({{1, 2}, {3, 4}}), true);
  tape.backward(tape.sum(w));
  const Tensor& g = tape.grad(w);
  for (double v : g.data) CHECK(v == 1.0);
}

TEST_CASE("backward: rejects non-scalar loss") {
  Tape tape;
  const NodeId w = tape.leaf(Tensor::from_rows({{1, 2}}), true);
  CHECK_THROWS_AS(tape.backward(w), ShapeError);
}

TEST_CASE("non-finite values are caught at op boundaries") {
  Tape tape;
  Tensor bad(1, 2);
  bad.data[0] = std::nan("");
  CHECK_THROWS_AS(tape.leaf(bad), NumericError);

  Tensor inf(1, 1);
  inf.data[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(tape.leaf(inf), NumericError);
}

TEST_CASE("sub_scaled uses |alpha| and routes its gradient") {
  Tape tape;
  const NodeId a = tape.leaf(Tensor::from_rows({{1.0, 1.0}}), true);
  const NodeId b = tape.leaf(Tensor::from_rows({{2.0, 4.0}}), true);
  const NodeId alpha = tape.leaf(Tensor::scalar(-0.5), true);  // negative on purpose
  const NodeId out = tape.sub_scaled(a, b, alpha);
  CHECK(tape.value(out).at(0, 0) == doctest::Approx(0.0));
  CHECK(tape.value(out).at(0, 1) == doctest::Approx(-1.0));

  tape.backward(tape.sum(out));
  // d/dalpha of sum(a - |alpha| b) = -sign(alpha) * sum(b) = +6
  CHECK(tape.grad(alpha).scalar_value() == doctest::Approx(6.0));
}

TEST_CASE("every differentiable op passes the finite-difference suite") {
  const GradCheckReport report = run_gradient_checks(2024);
  for (const auto& c : report.cases) {
    CAPTURE(c.name);
    CHECK(c.passed());
  }
  CHECK(report.all_passed());

  // fixed seed reproduces identical error values
  const GradCheckReport again = run_gradient_checks(2024);
  REQUIRE(again.cases.size() == report.cases.size());
  for (std::size_t i = 0; i < report.cases.size(); ++i)
    CHECK(again.cases[i].max_error == report.cases[i].max_error);
}

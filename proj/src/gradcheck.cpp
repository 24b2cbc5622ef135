#include "gnncolor/gradcheck.hpp"

#include <cmath>

#include "gnncolor/loss.hpp"
#include "gnncolor/model.hpp"
#include "gnncolor/rng.hpp"
#include "gnncolor/tape.hpp"

namespace gnncolor {

bool GradCheckReport::all_passed() const {
  for (const auto& c : cases)
    if (!c.passed()) return false;
  return true;
}

namespace {

// per-coordinate error on a relative scale; max(|a|,|n|) below tol*... falls
// back to the absolute bound
double coord_error(double analytic, double numeric) {
  const double denom = std::max(std::abs(analytic), std::abs(numeric));
  return std::abs(analytic - numeric) / std::max(denom, 1e-3);
}

Tensor random_tensor(int r, int c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(r, c);
  for (double& v : t.data) v = rng.uniform(lo, hi);
  return t;
}

Graph random_graph(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace

double max_fd_error(const std::function<double()>& eval, std::vector<Tensor*> params,
                    const std::vector<Tensor>& analytic, double step) {
  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& t = *params[pi];
    for (long i = 0; i < t.size(); ++i) {
      const double saved = t.data[i];
      t.data[i] = saved + step;
      const double f_plus = eval();
      t.data[i] = saved - step;
      const double f_minus = eval();
      t.data[i] = saved;
      const double numeric = (f_plus - f_minus) / (2.0 * step);
      worst = std::max(worst, coord_error(analytic[pi].data[i], numeric));
    }
  }
  return worst;
}

namespace {

// Scalarizes an op with fixed random weights, runs one backward pass for the
// analytic gradients, then compares against central differences that rebuild
// the whole forward computation from the perturbed inputs.
struct OpCheck {
  std::vector<Tensor> inputs;
  Tensor sum_weights;
  // builds the op output node given leaves for each input
  std::function<NodeId(Tape&, const std::vector<NodeId>&)> build;

  GradCheckCase run(const std::string& name) {
    auto eval = [&]() {
      Tape tape;
      std::vector<NodeId> leaves;
      leaves.reserve(inputs.size());
      for (const Tensor& t : inputs) leaves.push_back(tape.leaf(t));
      const NodeId out = build(tape, leaves);
      const NodeId loss = tape.weighted_sum(out, sum_weights);
      return tape.value(loss).scalar_value();
    };

    Tape tape;
    std::vector<NodeId> leaves;
    for (const Tensor& t : inputs) leaves.push_back(tape.leaf(t, true));
    const NodeId out = build(tape, leaves);
    const NodeId loss = tape.weighted_sum(out, sum_weights);
    tape.backward(loss);
    std::vector<Tensor> analytic;
    analytic.reserve(inputs.size());
    for (NodeId id : leaves) analytic.push_back(tape.grad(id));

    std::vector<Tensor*> param_ptrs;
    for (Tensor& t : inputs) param_ptrs.push_back(&t);

    GradCheckCase c;
    c.name = name;
    c.max_error = max_fd_error(eval, param_ptrs, analytic);
    return c;
  }
};

GradCheckCase check_model_loss(const Graph& g, Rng& rng) {
  ModelConfig mcfg;
  mcfg.d0 = 8;
  mcfg.d1 = 8;
  mcfg.k = 3;
  mcfg.dropout_p = 0.1;
  mcfg.train_embeddings = true;
  LossConfig lcfg;
  const std::uint64_t mask_seed = rng.raw();

  const AggregationPlan plan(g);
  ModelParams params = init_params(g, mcfg, rng);
  // spread the start away from the uniform-(0,1) corner so signs vary
  for (double& v : params.w1_self.data) v = v * 2.0 - 1.0;
  for (double& v : params.w1_neigh.data) v = v * 2.0 - 1.0;

  auto run_forward = [&](Tape& tape) {
    Rng mask_rng(mask_seed);  // identical dropout mask on every rebuild
    const ForwardNodes f = forward(tape, plan, params, mcfg, /*training=*/true, mask_rng);
    const NodeId loss = total_loss(tape, g, f.probabilities, lcfg);
    return std::make_pair(f, loss);
  };

  auto eval = [&]() {
    Tape tape;
    return tape.value(run_forward(tape).second).scalar_value();
  };

  Tape tape;
  const auto [f, loss] = run_forward(tape);
  tape.backward(loss);

  std::vector<Tensor*> param_ptrs = {&params.w1_self, &params.w1_neigh, &params.w2_self,
                                     &params.w2_neigh, &params.h0};
  std::vector<Tensor> analytic = {tape.grad(f.w1_self), tape.grad(f.w1_neigh),
                                  tape.grad(f.w2_self), tape.grad(f.w2_neigh),
                                  tape.grad(f.h0)};

  GradCheckCase c;
  c.name = "model_loss";
  c.max_error = max_fd_error(eval, param_ptrs, analytic);

  // alpha is a plain double, handled by hand
  const double saved = params.alpha;
  const double analytic_alpha = tape.grad(f.alpha).scalar_value();
  params.alpha = saved + kGradCheckStep;
  const double f_plus = eval();
  params.alpha = saved - kGradCheckStep;
  const double f_minus = eval();
  params.alpha = saved;
  const double numeric_alpha = (f_plus - f_minus) / (2.0 * kGradCheckStep);
  c.max_error = std::max(c.max_error, coord_error(analytic_alpha, numeric_alpha));
  return c;
}

}  // namespace

GradCheckReport run_gradient_checks(std::uint64_t seed) {
  Rng rng(seed);
  GradCheckReport report;

  {
    OpCheck c;
    c.inputs = {random_tensor(3, 4, rng), random_tensor(4, 5, rng)};
    c.sum_weights = random_tensor(3, 5, rng);
    c.build = [](Tape& t, const std::vector<NodeId>& in) { return t.matmul(in[0], in[1]); };
    report.cases.push_back(c.run("matmul"));
  }
  {
    OpCheck c;
    c.inputs = {random_tensor(4, 3, rng), random_tensor(4, 3, rng)};
    c.sum_weights = random_tensor(4, 3, rng);
    c.build = [](Tape& t, const std::vector<NodeId>& in) {
      return t.add_weighted(in[0], in[1], 0.7);
    };
    report.cases.push_back(c.run("add_weighted"));
  }
  {
    OpCheck c;
    c.inputs = {random_tensor(4, 3, rng), random_tensor(4, 3, rng),
                Tensor::scalar(rng.uniform(0.2, 0.9))};
    c.sum_weights = random_tensor(4, 3, rng);
    c.build = [](Tape& t, const std::vector<NodeId>& in) {
      return t.sub_scaled(in[0], in[1], in[2]);
    };
    report.cases.push_back(c.run("sub_scaled"));
  }
  {
    OpCheck c;
    c.inputs = {random_tensor(5, 4, rng)};
    c.sum_weights = random_tensor(5, 4, rng);
    c.build = [](Tape& t, const std::vector<NodeId>& in) {
      return t.leaky_relu(in[0], 0.01);
    };
    report.cases.push_back(c.run("leaky_relu"));
  }
  {
    OpCheck c;
    c.inputs = {random_tensor(5, 4, rng, -2.0, 2.0)};
    c.sum_weights = random_tensor(5, 4, rng);
    c.build = [](Tape& t, const std::vector<NodeId>& in) { return t.row_softmax(in[0]); };
    report.cases.push_back(c.run("row_softmax"));
  }
  {
    OpCheck c;
    c.inputs = {random_tensor(5, 4, rng)};
    c.sum_weights = random_tensor(5, 4, rng);
    const std::uint64_t mask_seed = rng.raw();
    c.build = [mask_seed](Tape& t, const std::vector<NodeId>& in) {
      Rng mask_rng(mask_seed);
      return t.dropout(in[0], 0.5, mask_rng, true);
    };
    report.cases.push_back(c.run("dropout"));
  }
  {
    // probabilities-like input: strictly positive rows
    OpCheck c;
    c.inputs = {random_tensor(5, 3, rng, 0.05, 1.0)};
    c.sum_weights = Tensor::scalar(1.0);
    c.build = [](Tape& t, const std::vector<NodeId>& in) {
      return t.self_information_sum(in[0], 1e-12, true);
    };
    report.cases.push_back(c.run("self_information"));
  }

  const Graph g = random_graph(6, 0.5, rng);
  if (g.edge_count() == 0) {
    GradCheckCase skip;
    skip.name = "neighbor_mean";
    skip.skipped = true;
    skip.note = "random graph has no edges; aggregation check skipped";
    report.cases.push_back(skip);
    skip.name = "edge_inner_product";
    report.cases.push_back(skip);
  } else {
    const AggregationPlan plan(g);
    {
      OpCheck c;
      c.inputs = {random_tensor(g.n, 4, rng)};
      c.sum_weights = random_tensor(g.n, 4, rng);
      c.build = [&plan](Tape& t, const std::vector<NodeId>& in) {
        return t.neighbor_mean(plan, in[0]);
      };
      report.cases.push_back(c.run("neighbor_mean"));
    }
    {
      OpCheck c;
      c.inputs = {random_tensor(g.n, 3, rng, 0.05, 1.0)};
      c.sum_weights = Tensor::scalar(1.0);
      c.build = [&g](Tape& t, const std::vector<NodeId>& in) {
        return t.edge_inner_product_sum(g, in[0]);
      };
      report.cases.push_back(c.run("edge_inner_product"));
    }
  }

  report.cases.push_back(check_model_loss(g, rng));
  return report;
}

}  // namespace gnncolor

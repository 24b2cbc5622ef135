#include "gnncolor/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gnncolor/errors.hpp"

namespace gnncolor {

namespace {

void check_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) throw NumericError(std::string(what) + ": non-finite value");
}

}  // namespace

AggregationPlan::AggregationPlan(const Graph& g)
    : n(g.n), neighbors(g.adjacency), inv_degree(g.n, 0.0) {
  for (int v = 0; v < n; ++v)
    if (g.degrees[v] > 0) inv_degree[v] = 1.0 / g.degrees[v];
}

void neighbor_mean_into(const AggregationPlan& plan, const Tensor& h, Tensor& out) {
  if (h.rows != plan.n) throw ShapeError("neighbor_mean: row count != plan node count");
  out = Tensor(plan.n, h.cols);
  for (int v = 0; v < plan.n; ++v) {
    double* orow = out.row(v);
    for (int u : plan.neighbors[v]) {
      const double* hrow = h.row(u);
      for (int j = 0; j < h.cols; ++j) orow[j] += hrow[j];
    }
    const double s = plan.inv_degree[v];
    for (int j = 0; j < h.cols; ++j) orow[j] *= s;
  }
}

NodeId Tape::push(Tensor value, bool requires_grad, std::function<void(Tape&)> backprop) {
  check_finite(value, "op output");
  Node nd;
  nd.value = std::move(value);
  nd.requires_grad = requires_grad;
  nd.backprop = std::move(backprop);
  nodes_.push_back(std::move(nd));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

Tensor& Tape::grad_buffer(NodeId id) {
  Node& nd = nodes_[id];
  if (!nd.grad_ready) {
    nd.grad = Tensor(nd.value.rows, nd.value.cols);
    nd.grad_ready = true;
  }
  return nd.grad;
}

const Tensor& Tape::grad(NodeId id) { return grad_buffer(id); }

NodeId Tape::leaf(Tensor value, bool requires_grad) {
  NodeId id = push(std::move(value), requires_grad, nullptr);
  nodes_[id].is_param = requires_grad;
  return id;
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  Tensor out;
  matmul_into(value(a), value(b), out);
  const bool rg = requires_grad(a) || requires_grad(b);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [a, b, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      if (t.requires_grad(a)) matmul_nt_accum(g, t.value(b), t.grad_buffer(a));
      if (t.requires_grad(b)) matmul_tn_accum(t.value(a), g, t.grad_buffer(b));
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::add(NodeId a, NodeId b) { return add_weighted(a, b, 1.0); }

NodeId Tape::add_weighted(NodeId a, NodeId b, double w) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (!A.same_shape(B)) throw ShapeError("add: shapes differ");
  Tensor out(A.rows, A.cols);
  for (long i = 0; i < out.size(); ++i) out.data[i] = A.data[i] + w * B.data[i];
  const bool rg = requires_grad(a) || requires_grad(b);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [a, b, w, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      if (t.requires_grad(a)) {
        Tensor& ga = t.grad_buffer(a);
        for (long i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
      }
      if (t.requires_grad(b)) {
        Tensor& gb = t.grad_buffer(b);
        for (long i = 0; i < g.size(); ++i) gb.data[i] += w * g.data[i];
      }
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::sub_scaled(NodeId a, NodeId b, NodeId alpha) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const double al = value(alpha).scalar_value();
  if (!A.same_shape(B)) throw ShapeError("sub_scaled: shapes differ");
  const double mag = std::abs(al);
  Tensor out(A.rows, A.cols);
  for (long i = 0; i < out.size(); ++i) out.data[i] = A.data[i] - mag * B.data[i];
  const bool rg = requires_grad(a) || requires_grad(b) || requires_grad(alpha);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [a, b, alpha, mag, al, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      if (t.requires_grad(a)) {
        Tensor& ga = t.grad_buffer(a);
        for (long i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
      }
      if (t.requires_grad(b)) {
        Tensor& gb = t.grad_buffer(b);
        for (long i = 0; i < g.size(); ++i) gb.data[i] -= mag * g.data[i];
      }
      if (t.requires_grad(alpha)) {
        const Tensor& B2 = t.value(b);
        double acc = 0.0;
        for (long i = 0; i < g.size(); ++i) acc += g.data[i] * B2.data[i];
        const double sign = al > 0.0 ? 1.0 : (al < 0.0 ? -1.0 : 0.0);
        t.grad_buffer(alpha).data[0] -= sign * acc;
      }
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::neighbor_mean(const AggregationPlan& plan, NodeId h) {
  Tensor out;
  neighbor_mean_into(plan, value(h), out);
  const bool rg = requires_grad(h);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [&plan, h, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      Tensor& gh = t.grad_buffer(h);
      for (int v = 0; v < plan.n; ++v) {
        const double s = plan.inv_degree[v];
        if (s == 0.0) continue;
        const double* grow = g.row(v);
        for (int u : plan.neighbors[v]) {
          double* grow_u = gh.row(u);
          for (int j = 0; j < g.cols; ++j) grow_u[j] += s * grow[j];
        }
      }
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::leaky_relu(NodeId x, double slope) {
  if (slope < 0.0 || slope > 1.0)
    throw std::invalid_argument("leaky_relu: slope must be in [0,1]");
  const Tensor& X = value(x);
  Tensor out(X.rows, X.cols);
  for (long i = 0; i < out.size(); ++i) {
    const double v = X.data[i];
    out.data[i] = v >= 0.0 ? v : slope * v;
  }
  const bool rg = requires_grad(x);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [x, slope, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      const Tensor& X2 = t.value(x);
      Tensor& gx = t.grad_buffer(x);
      for (long i = 0; i < g.size(); ++i)
        gx.data[i] += g.data[i] * (X2.data[i] >= 0.0 ? 1.0 : slope);
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::row_softmax(NodeId x) {
  Tensor out;
  softmax_rows_into(value(x), out);
  const bool rg = requires_grad(x);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [x, self](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      const Tensor& y = t.nodes_[self].value;
      Tensor& gx = t.grad_buffer(x);
      for (int i = 0; i < y.rows; ++i) {
        const double* yr = y.row(i);
        const double* gr = g.row(i);
        double dot = 0.0;
        for (int j = 0; j < y.cols; ++j) dot += gr[j] * yr[j];
        double* gxr = gx.row(i);
        for (int j = 0; j < y.cols; ++j) gxr[j] += yr[j] * (gr[j] - dot);
      }
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::dropout(NodeId x, double p, Rng& rng, bool training) {
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("dropout: probability must be in [0,1)");
  if (!training || p == 0.0) return x;
  const Tensor& X = value(x);
  Tensor mask(X.rows, X.cols);
  const double keep_scale = 1.0 / (1.0 - p);
  for (long i = 0; i < mask.size(); ++i)
    mask.data[i] = rng.uniform() < p ? 0.0 : keep_scale;
  Tensor out(X.rows, X.cols);
  for (long i = 0; i < out.size(); ++i) out.data[i] = X.data[i] * mask.data[i];
  const bool rg = requires_grad(x);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [x, self, mask = std::move(mask)](Tape& t) {
      const Tensor& g = t.nodes_[self].grad;
      Tensor& gx = t.grad_buffer(x);
      for (long i = 0; i < g.size(); ++i) gx.data[i] += g.data[i] * mask.data[i];
    };
  return push(std::move(out), rg, std::move(fn));
}

NodeId Tape::sum(NodeId x) {
  const Tensor& X = value(x);
  double acc = 0.0;
  for (double v : X.data) acc += v;
  const bool rg = requires_grad(x);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [x, self](Tape& t) {
      const double g = t.nodes_[self].grad.data[0];
      Tensor& gx = t.grad_buffer(x);
      for (long i = 0; i < gx.size(); ++i) gx.data[i] += g;
    };
  return push(Tensor::scalar(acc), rg, std::move(fn));
}

NodeId Tape::weighted_sum(NodeId x, Tensor weights) {
  const Tensor& X = value(x);
  if (!X.same_shape(weights)) throw ShapeError("weighted_sum: shapes differ");
  double acc = 0.0;
  for (long i = 0; i < X.size(); ++i) acc += X.data[i] * weights.data[i];
  const bool rg = requires_grad(x);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [x, self, w = std::move(weights)](Tape& t) {
      const double g = t.nodes_[self].grad.data[0];
      Tensor& gx = t.grad_buffer(x);
      for (long i = 0; i < gx.size(); ++i) gx.data[i] += g * w.data[i];
    };
  return push(Tensor::scalar(acc), rg, std::move(fn));
}

NodeId Tape::edge_inner_product_sum(const Graph& g, NodeId p) {
  const Tensor& P = value(p);
  if (P.rows != g.n) throw ShapeError("edge_inner_product_sum: rows != node count");
  double acc = 0.0;
  for (auto [u, v] : g.edges) {
    const double* pu = P.row(u);
    const double* pv = P.row(v);
    double dot = 0.0;
    for (int j = 0; j < P.cols; ++j) dot += pu[j] * pv[j];
    acc += dot;
  }
  const bool rg = requires_grad(p);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [gr = &g, p, self](Tape& t) {
      const double gout = t.nodes_[self].grad.data[0];
      const Tensor& P2 = t.value(p);
      Tensor& gp = t.grad_buffer(p);
      for (auto [u, v] : gr->edges) {
        const double* pu = P2.row(u);
        const double* pv = P2.row(v);
        double* gu = gp.row(u);
        double* gv = gp.row(v);
        for (int j = 0; j < P2.cols; ++j) {
          gu[j] += gout * pv[j];
          gv[j] += gout * pu[j];
        }
      }
    };
  return push(Tensor::scalar(acc), rg, std::move(fn));
}

NodeId Tape::self_information_sum(NodeId p, double eps, bool negate) {
  if (eps <= 0.0) throw std::invalid_argument("self_information_sum: eps must be > 0");
  const Tensor& P = value(p);
  const double sign = negate ? -1.0 : 1.0;
  double acc = 0.0;
  for (double v : P.data) acc += v * std::log(v + eps);
  acc *= sign;
  const bool rg = requires_grad(p);
  const NodeId self = size();
  std::function<void(Tape&)> fn;
  if (rg)
    fn = [p, eps, sign, self](Tape& t) {
      const double gout = sign * t.nodes_[self].grad.data[0];
      const Tensor& P2 = t.value(p);
      Tensor& gp = t.grad_buffer(p);
      for (long i = 0; i < gp.size(); ++i) {
        const double v = P2.data[i];
        gp.data[i] += gout * (std::log(v + eps) + v / (v + eps));
      }
    };
  return push(Tensor::scalar(acc), rg, std::move(fn));
}

void Tape::backward(NodeId loss) {
  if (loss < 0 || loss >= size()) throw std::out_of_range("backward: bad node id");
  Node& ln = nodes_[loss];
  if (ln.value.rows != 1 || ln.value.cols != 1)
    throw ShapeError("backward: loss must be a 1x1 tensor");
  grad_buffer(loss).data[0] = 1.0;
  for (NodeId id = loss; id >= 0; --id) {
    Node& nd = nodes_[id];
    if (!nd.requires_grad || !nd.grad_ready || !nd.backprop) continue;
    nd.backprop(*this);
  }
  for (NodeId id = 0; id <= loss; ++id) {
    Node& nd = nodes_[id];
    if (nd.is_param && nd.grad_ready) check_finite(nd.grad, "gradient");
  }
}

}  // namespace gnncolor

#pragma once

#include <functional>
#include <vector>

#include "gnncolor/graph.hpp"
#include "gnncolor/rng.hpp"
#include "gnncolor/tensor.hpp"

namespace gnncolor {

using NodeId = int;

// Neighbor index lists plus 1/|N(v)| factors precomputed from a graph.
// Isolated nodes get a factor of 0: their neighborhood mean is the zero row.
struct AggregationPlan {
  int n = 0;
  std::vector<std::vector<int>> neighbors;
  std::vector<double> inv_degree;

  explicit AggregationPlan(const Graph& g);
};

// out = per-row neighborhood mean of h under the plan (no tape involved)
void neighbor_mean_into(const AggregationPlan& plan, const Tensor& h, Tensor& out);

// Reverse-mode record of one forward pass. Nodes are appended in topological
// order; backward() replays their stored rules in reverse. Every op output is
// checked for NaN/Inf on creation. A tape is confined to one training run;
// clear() readies it for the next iteration.
class Tape {
 public:
  // requires_grad leaves are the trainable parameters
  NodeId leaf(Tensor value, bool requires_grad = false);

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  // a + w*b, same shapes
  NodeId add_weighted(NodeId a, NodeId b, double w);
  // a - |alpha|*b with alpha a 1x1 node; |.| keeps the subtraction direction
  // stable no matter how alpha moves during training
  NodeId sub_scaled(NodeId a, NodeId b, NodeId alpha);
  NodeId neighbor_mean(const AggregationPlan& plan, NodeId h);
  // elementwise max(x, slope*x), slope in [0, 1]
  NodeId leaky_relu(NodeId x, double slope);
  NodeId row_softmax(NodeId x);
  // Inverted dropout: zero entries with probability p and scale survivors by
  // 1/(1-p) while training; identity in evaluation mode or when p == 0.
  NodeId dropout(NodeId x, double p, Rng& rng, bool training);
  // sum of all entries -> 1x1
  NodeId sum(NodeId x);
  // sum of weights ⊙ x -> 1x1
  NodeId weighted_sum(NodeId x, Tensor weights);
  // sum over edges (u,v) of <p_u, p_v> -> 1x1. The graph must outlive the tape.
  NodeId edge_inner_product_sum(const Graph& g, NodeId p);
  // sign * sum_i p_i * log(p_i + eps) with sign = -1 when negate is set
  NodeId self_information_sum(NodeId p, double eps, bool negate);

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  // Gradient of the last backward() target w.r.t. node id. Returns zeros for
  // nodes the loss does not depend on.
  const Tensor& grad(NodeId id);

  // Reverse sweep from a scalar loss node. Accumulates gradients into every
  // node that requires them and verifies parameter gradients are finite.
  void backward(NodeId loss);

  void clear() { nodes_.clear(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool requires_grad(NodeId id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool grad_ready = false;
    bool is_param = false;
    std::function<void(Tape&)> backprop;
  };

  NodeId push(Tensor value, bool requires_grad, std::function<void(Tape&)> backprop);
  Tensor& grad_buffer(NodeId id);

  std::vector<Node> nodes_;
};

}  // namespace gnncolor

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "gnncolor/graph.hpp"
#include "gnncolor/rng.hpp"
#include "gnncolor/tape.hpp"

namespace gnncolor {

enum class Activation { kIdentity, kRelu, kLeakyRelu };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

struct ModelConfig {
  int d0 = 64;  // input embedding width
  int d1 = 64;  // hidden width
  int k = 0;    // colors; fixed per run
  double dropout_p = 0.1;
  // Plain relu would zero out exactly the negative values the first layer is
  // built to produce, so the default keeps a small negative slope.
  Activation activation = Activation::kLeakyRelu;
  double leaky_slope = 0.01;
  bool train_embeddings = false;
  std::uint64_t seed = 0;
};

// Two-layer message-passing weights. Layer 1 subtracts the scaled neighbor
// mean (alpha is applied through |alpha|); layer 2 adds it back in the
// conventional way and maps to k color logits.
struct ModelParams {
  Tensor w1_self;   // d0 x d1
  Tensor w1_neigh;  // d0 x d1
  double alpha = 0.5;
  Tensor w2_self;   // d1 x k
  Tensor w2_neigh;  // d1 x k
  Tensor h0;        // n x d0, random node embeddings
};

// Draw order is fixed (w1_self, w1_neigh, w2_self, w2_neigh, h0) so a seed
// reproduces parameters bit for bit. Layer-1 weights and embeddings are
// uniform in (0,1); layer-2 weights are uniform in ±sqrt(6/(d1+k)).
ModelParams init_params(const Graph& g, const ModelConfig& cfg, Rng& rng);
ModelParams init_params(const Graph& g, const ModelConfig& cfg);

struct ForwardNodes {
  NodeId w1_self, w1_neigh, alpha, w2_self, w2_neigh, h0;  // parameter leaves
  NodeId h1_pre;         // layer-1 combine before activation
  NodeId h1;             // after activation
  NodeId probabilities;  // n x k, each row a distribution over colors
};

ForwardNodes forward(Tape& tape, const AggregationPlan& plan, const ModelParams& params,
                     const ModelConfig& cfg, bool training, Rng& rng);

// Inference-path probabilities: same math, dropout off, no tape.
Tensor eval_probabilities(const AggregationPlan& plan, const ModelParams& params,
                          const ModelConfig& cfg);

// Per-row argmax, ties to the lowest color index; conflicts recomputed from
// the graph.
Assignment extract_assignment(const Graph& g, const Tensor& probabilities);

// JSON checkpoint: config header plus named tensors in row-major order.
std::string params_to_json(const ModelParams& params, const ModelConfig& cfg);
std::pair<ModelParams, ModelConfig> params_from_json(const std::string& text);

}  // namespace gnncolor

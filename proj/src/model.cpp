#include "gnncolor/model.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "gnncolor/errors.hpp"

namespace gnncolor {

using nlohmann::json;

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::kIdentity;
  if (s == "relu") return Activation::kRelu;
  if (s == "leaky_relu") return Activation::kLeakyRelu;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kLeakyRelu: return "leaky_relu";
  }
  return "identity";
}

namespace {

void validate_config(const ModelConfig& cfg) {
  if (cfg.d0 < 1 || cfg.d1 < 1) throw std::invalid_argument("embedding dims must be >= 1");
  if (cfg.k < 1) throw std::invalid_argument("color count must be >= 1");
  if (cfg.dropout_p < 0.0 || cfg.dropout_p >= 1.0)
    throw std::invalid_argument("dropout probability must be in [0,1)");
  if (cfg.leaky_slope < 0.0 || cfg.leaky_slope > 1.0)
    throw std::invalid_argument("leaky slope must be in [0,1]");
}

// strictly inside (0,1); a raw 0 would violate the all-positive contract
double uniform_open(Rng& rng) {
  double u = rng.uniform();
  while (u == 0.0) u = rng.uniform();
  return u;
}

void fill_uniform_open(Tensor& t, Rng& rng) {
  for (double& v : t.data) v = uniform_open(rng);
}

void fill_uniform_symmetric(Tensor& t, double s, Rng& rng) {
  for (double& v : t.data) v = rng.uniform(-s, s);
}

}  // namespace

ModelParams init_params(const Graph& g, const ModelConfig& cfg, Rng& rng) {
  validate_config(cfg);
  ModelParams p;
  p.w1_self = Tensor(cfg.d0, cfg.d1);
  p.w1_neigh = Tensor(cfg.d0, cfg.d1);
  p.w2_self = Tensor(cfg.d1, cfg.k);
  p.w2_neigh = Tensor(cfg.d1, cfg.k);
  p.h0 = Tensor(g.n, cfg.d0);

  fill_uniform_open(p.w1_self, rng);
  fill_uniform_open(p.w1_neigh, rng);
  p.alpha = 0.5;
  const double s = std::sqrt(6.0 / (cfg.d1 + cfg.k));
  fill_uniform_symmetric(p.w2_self, s, rng);
  fill_uniform_symmetric(p.w2_neigh, s, rng);
  fill_uniform_open(p.h0, rng);
  return p;
}

ModelParams init_params(const Graph& g, const ModelConfig& cfg) {
  Rng rng(cfg.seed);
  return init_params(g, cfg, rng);
}

namespace {

NodeId apply_activation(Tape& tape, NodeId x, const ModelConfig& cfg) {
  switch (cfg.activation) {
    case Activation::kIdentity: return x;
    case Activation::kRelu: return tape.leaky_relu(x, 0.0);
    case Activation::kLeakyRelu: return tape.leaky_relu(x, cfg.leaky_slope);
  }
  return x;
}

void check_shapes(const AggregationPlan& plan, const ModelParams& p, const ModelConfig& cfg) {
  if (p.h0.rows != plan.n || p.h0.cols != cfg.d0)
    throw ShapeError("model: h0 shape does not match graph/config");
  if (p.w1_self.rows != cfg.d0 || p.w1_self.cols != cfg.d1 ||
      !p.w1_self.same_shape(p.w1_neigh))
    throw ShapeError("model: layer-1 weight shapes do not match config");
  if (p.w2_self.rows != cfg.d1 || p.w2_self.cols != cfg.k ||
      !p.w2_self.same_shape(p.w2_neigh))
    throw ShapeError("model: layer-2 weight shapes do not match config");
}

}  // namespace

ForwardNodes forward(Tape& tape, const AggregationPlan& plan, const ModelParams& params,
                     const ModelConfig& cfg, bool training, Rng& rng) {
  validate_config(cfg);
  check_shapes(plan, params, cfg);

  ForwardNodes f;
  f.h0 = tape.leaf(params.h0, cfg.train_embeddings);
  f.w1_self = tape.leaf(params.w1_self, true);
  f.w1_neigh = tape.leaf(params.w1_neigh, true);
  f.alpha = tape.leaf(Tensor::scalar(params.alpha), true);
  f.w2_self = tape.leaf(params.w2_self, true);
  f.w2_neigh = tape.leaf(params.w2_neigh, true);

  // layer 1: own transform minus the scaled neighbor-mean transform
  const NodeId m0 = tape.neighbor_mean(plan, f.h0);
  const NodeId self1 = tape.matmul(f.h0, f.w1_self);
  const NodeId neigh1 = tape.matmul(m0, f.w1_neigh);
  f.h1_pre = tape.sub_scaled(self1, neigh1, f.alpha);
  f.h1 = apply_activation(tape, f.h1_pre, cfg);

  const NodeId h1d = tape.dropout(f.h1, cfg.dropout_p, rng, training);

  // layer 2: conventional mean aggregation into k color logits
  const NodeId m1 = tape.neighbor_mean(plan, h1d);
  const NodeId self2 = tape.matmul(h1d, f.w2_self);
  const NodeId neigh2 = tape.matmul(m1, f.w2_neigh);
  const NodeId h2 = tape.add(self2, neigh2);
  f.probabilities = tape.row_softmax(h2);
  return f;
}

Tensor eval_probabilities(const AggregationPlan& plan, const ModelParams& params,
                          const ModelConfig& cfg) {
  validate_config(cfg);
  check_shapes(plan, params, cfg);

  Tensor m0;
  neighbor_mean_into(plan, params.h0, m0);
  Tensor h1, neigh1;
  matmul_into(params.h0, params.w1_self, h1);
  matmul_into(m0, params.w1_neigh, neigh1);
  const double mag = std::abs(params.alpha);
  for (long i = 0; i < h1.size(); ++i) h1.data[i] -= mag * neigh1.data[i];

  if (cfg.activation != Activation::kIdentity) {
    const double slope = cfg.activation == Activation::kRelu ? 0.0 : cfg.leaky_slope;
    for (double& v : h1.data)
      if (v < 0.0) v *= slope;
  }

  Tensor m1;
  neighbor_mean_into(plan, h1, m1);
  Tensor h2, neigh2;
  matmul_into(h1, params.w2_self, h2);
  matmul_into(m1, params.w2_neigh, neigh2);
  for (long i = 0; i < h2.size(); ++i) h2.data[i] += neigh2.data[i];

  Tensor p;
  softmax_rows_into(h2, p);
  if (!p.all_finite()) throw NumericError("eval_probabilities: non-finite output");
  return p;
}

Assignment extract_assignment(const Graph& g, const Tensor& probabilities) {
  if (probabilities.rows != g.n)
    throw ShapeError("extract_assignment: probability rows != node count");
  std::vector<int> colors(g.n, 0);
  for (int v = 0; v < g.n; ++v) {
    const double* row = probabilities.row(v);
    int best = 0;
    for (int j = 1; j < probabilities.cols; ++j)
      if (row[j] > row[best]) best = j;
    colors[v] = best;
  }
  return make_assignment(g, std::move(colors), probabilities.cols);
}

namespace {

json tensor_to_json(const Tensor& t) {
  return json{{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
}

Tensor tensor_from_json(const json& j) {
  Tensor t(j.at("rows").get<int>(), j.at("cols").get<int>());
  const auto& data = j.at("data");
  if (static_cast<long>(data.size()) != t.size())
    throw ParseError("checkpoint tensor size mismatch");
  t.data = data.get<std::vector<double>>();
  return t;
}

}  // namespace

std::string params_to_json(const ModelParams& params, const ModelConfig& cfg) {
  json j;
  j["config"] = {{"d0", cfg.d0},
                 {"d1", cfg.d1},
                 {"k", cfg.k},
                 {"dropout_p", cfg.dropout_p},
                 {"activation", to_string(cfg.activation)},
                 {"leaky_slope", cfg.leaky_slope},
                 {"train_embeddings", cfg.train_embeddings},
                 {"seed", cfg.seed}};
  j["alpha"] = params.alpha;
  j["tensors"] = {{"w1_self", tensor_to_json(params.w1_self)},
                  {"w1_neigh", tensor_to_json(params.w1_neigh)},
                  {"w2_self", tensor_to_json(params.w2_self)},
                  {"w2_neigh", tensor_to_json(params.w2_neigh)},
                  {"h0", tensor_to_json(params.h0)}};
  return j.dump(2);
}

std::pair<ModelParams, ModelConfig> params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  ModelConfig cfg;
  const auto& c = j.at("config");
  cfg.d0 = c.at("d0").get<int>();
  cfg.d1 = c.at("d1").get<int>();
  cfg.k = c.at("k").get<int>();
  cfg.dropout_p = c.at("dropout_p").get<double>();
  cfg.activation = activation_from_string(c.at("activation").get<std::string>());
  cfg.leaky_slope = c.at("leaky_slope").get<double>();
  cfg.train_embeddings = c.at("train_embeddings").get<bool>();
  cfg.seed = c.at("seed").get<std::uint64_t>();

  ModelParams p;
  p.alpha = j.at("alpha").get<double>();
  const auto& t = j.at("tensors");
  p.w1_self = tensor_from_json(t.at("w1_self"));
  p.w1_neigh = tensor_from_json(t.at("w1_neigh"));
  p.w2_self = tensor_from_json(t.at("w2_self"));
  p.w2_neigh = tensor_from_json(t.at("w2_neigh"));
  p.h0 = tensor_from_json(t.at("h0"));
  return {std::move(p), cfg};
}

}  // namespace gnncolor

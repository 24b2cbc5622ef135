#pragma once

#include <string>

#include "gnncolor/graph.hpp"
#include "gnncolor/tape.hpp"

namespace gnncolor {

// Sign convention of the confidence term. Intent mode adds total entropy, so
// minimizing the loss drives rows toward one-hot; literal mode flips the sign
// and is kept only for experiments.
enum class ConvSign { kIntent, kLiteral };

ConvSign conv_sign_from_string(const std::string& s);
std::string to_string(ConvSign s);

struct LossConfig {
  double lambda = 0.25;
  ConvSign conv_sign = ConvSign::kIntent;
  double eps = 1e-12;  // log guard
};

// Sum over edges of the inner product of endpoint color distributions. Equals
// the conflict count exactly when rows are one-hot.
NodeId f_utility(Tape& tape, const Graph& g, NodeId probabilities);

// Self-information confidence term over the per-node color distributions.
NodeId f_conv(Tape& tape, NodeId probabilities, const LossConfig& cfg);

// f_utility + lambda * f_conv
NodeId total_loss(Tape& tape, const Graph& g, NodeId probabilities, const LossConfig& cfg);

}  // namespace gnncolor

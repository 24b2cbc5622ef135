#include "gnncolor/loss.hpp"

#include <stdexcept>

namespace gnncolor {

ConvSign conv_sign_from_string(const std::string& s) {
  if (s == "intent") return ConvSign::kIntent;
  if (s == "literal") return ConvSign::kLiteral;
  throw std::invalid_argument("unknown conv sign '" + s + "'");
}

std::string to_string(ConvSign s) {
  return s == ConvSign::kIntent ? "intent" : "literal";
}

NodeId f_utility(Tape& tape, const Graph& g, NodeId probabilities) {
  return tape.edge_inner_product_sum(g, probabilities);
}

NodeId f_conv(Tape& tape, NodeId probabilities, const LossConfig& cfg) {
  // intent mode is total entropy: -sum p log(p+eps)
  return tape.self_information_sum(probabilities, cfg.eps,
                                   cfg.conv_sign == ConvSign::kIntent);
}

NodeId total_loss(Tape& tape, const Graph& g, NodeId probabilities, const LossConfig& cfg) {
  if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const NodeId fu = f_utility(tape, g, probabilities);
  const NodeId fc = f_conv(tape, probabilities, cfg);
  return tape.add_weighted(fu, fc, cfg.lambda);
}

}  // namespace gnncolor

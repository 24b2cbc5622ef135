#pragma once

#include <stdexcept>
#include <string>

namespace gnncolor {

// Input text or file violates a format contract.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/graph dimensions do not line up.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN or Inf surfaced in a numeric kernel, gradient, or optimizer step.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gnncolor

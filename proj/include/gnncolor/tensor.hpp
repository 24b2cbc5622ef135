#pragma once

#include <initializer_list>
#include <vector>

namespace gnncolor {

// Dense row-major matrix of 64-bit floats. Small enough deliberately: this
// project only ever needs 2-D tensors.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c, double fill = 0.0);

  static Tensor scalar(double v);
  static Tensor identity(int n);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  long size() const { return static_cast<long>(rows) * cols; }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  bool all_finite() const;

  // value of a 1x1 tensor
  double scalar_value() const;
};

// Kernels shared by the tape ops and the inference path.
void matmul_into(const Tensor& a, const Tensor& b, Tensor& out);      // out  = a * b
void matmul_nt_accum(const Tensor& a, const Tensor& b, Tensor& out);  // out += a * b^T
void matmul_tn_accum(const Tensor& a, const Tensor& b, Tensor& out);  // out += a^T * b
void softmax_rows_into(const Tensor& x, Tensor& out);

}  // namespace gnncolor

#include "gnncolor/tensor.hpp"

#include <cmath>

#include "gnncolor/errors.hpp"

namespace gnncolor {

Tensor::Tensor(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
  if (r < 0 || c < 0) throw ShapeError("tensor dimensions must be non-negative");
}

Tensor Tensor::scalar(double v) {
  Tensor t(1, 1);
  t.data[0] = v;
  return t;
}

Tensor Tensor::identity(int n) {
  Tensor t(n, n);
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Tensor t(static_cast<int>(rows.size()),
           rows.size() ? static_cast<int>(rows.begin()->size()) : 0);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != t.cols)
      throw ShapeError("from_rows: ragged row lengths");
    int c = 0;
    for (double v : row) t.at(r, c++) = v;
    ++r;
  }
  return t;
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

double Tensor::scalar_value() const {
  if (rows != 1 || cols != 1) throw ShapeError("scalar_value: tensor is not 1x1");
  return data[0];
}

void matmul_into(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  out = Tensor(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
  }
}

void matmul_nt_accum(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.cols != b.cols || out.rows != a.rows || out.cols != b.rows)
    throw ShapeError("matmul_nt: dimensions differ");
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      orow[j] += acc;
    }
  }
}

void matmul_tn_accum(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.rows != b.rows || out.rows != a.cols || out.cols != b.cols)
    throw ShapeError("matmul_tn: dimensions differ");
  for (int k = 0; k < a.rows; ++k) {
    const double* arow = a.row(k);
    const double* brow = b.row(k);
    for (int i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      double* orow = out.row(i);
      for (int j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
    }
  }
}

void softmax_rows_into(const Tensor& x, Tensor& out) {
  if (x.cols < 1) throw ShapeError("softmax: need at least one column");
  out = Tensor(x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i) {
    const double* xr = x.row(i);
    double* yr = out.row(i);
    double mx = xr[0];
    for (int j = 1; j < x.cols; ++j) mx = std::max(mx, xr[j]);
    double total = 0.0;
    for (int j = 0; j < x.cols; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      total += yr[j];
    }
    for (int j = 0; j < x.cols; ++j) yr[j] /= total;
  }
}

}  // namespace gnncolor

#include "rqrcp/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "rqrcp/errors.hpp"

namespace rqrcp {

DenseMatrix::DenseMatrix(ConstMatrixView v) : DenseMatrix(v.rows(), v.cols()) {
  copy(v, view());
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  DenseMatrix out(m, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("from_rows: ragged row literal");
    std::size_t j = 0;
    for (double x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) { return identity(n, n); }

DenseMatrix DenseMatrix::identity(std::size_t rows, std::size_t cols) {
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix out(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
  return out;
}

void DenseMatrix::swap_columns(std::size_t a, std::size_t b) { rqrcp::swap_columns(view(), a, b); }

double norm2(std::span<const double> x) {
  // Two-pass scaled sum; the scale keeps squares in range.
  double scale = 0.0;
  for (double v : x) {
    if (std::isnan(v)) return v;
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double ssq = 0.0;
  for (double v : x) {
    const double t = v / scale;
    ssq += t * t;
  }
  return scale * std::sqrt(ssq);
}

double frobenius_norm(ConstMatrixView a) {
  double scale = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (double v : a.col(j)) {
      if (std::isnan(v)) return v;
      scale = std::max(scale, std::abs(v));
    }
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double ssq = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (double v : a.col(j)) {
      const double t = v / scale;
      ssq += t * t;
    }
  }
  return scale * std::sqrt(ssq);
}

bool all_finite(ConstMatrixView a) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (double v : a.col(j))
      if (!std::isfinite(v)) return false;
  return true;
}

DenseMatrix transpose(ConstMatrixView a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = a(i, j);
  return out;
}

void copy(ConstMatrixView src, MatrixView dst) {
  if (src.rows() != dst.rows() || src.cols() != dst.cols())
    throw DimensionError("copy: shape mismatch");
  for (std::size_t j = 0; j < src.cols(); ++j) std::ranges::copy(src.col(j), dst.col(j).begin());
}

void fill(MatrixView a, double value) {
  for (std::size_t j = 0; j < a.cols(); ++j) std::ranges::fill(a.col(j), value);
}

void swap_columns(MatrixView a, std::size_t i, std::size_t j) {
  if (i == j) return;
  std::swap_ranges(a.col(i).begin(), a.col(i).end(), a.col(j).begin());
}

void swap_rows(MatrixView a, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}

DenseMatrix multiply(ConstMatrixView a, ConstMatrixView b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double blj = b(l, j);
      if (blj == 0.0) continue;
      for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, l) * blj;
    }
  return c;
}

DenseMatrix multiply_transposed_left(ConstMatrixView a, ConstMatrixView b) {
  if (a.rows() != b.rows()) throw DimensionError("multiply_transposed_left: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.rows(); ++l) s += a(l, i) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

DenseMatrix subtract(ConstMatrixView a, ConstMatrixView b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("subtract: shape mismatch");
  DenseMatrix c(a);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) -= b(i, j);
  return c;
}

double orthogonality_error(ConstMatrixView q) {
  DenseMatrix g = multiply_transposed_left(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius_norm(g);
}

}  // namespace rqrcp

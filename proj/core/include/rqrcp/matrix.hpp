#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <vector>

namespace rqrcp {

// Non-owning column-major view into a strided block of reals.
template <typename T>
class BasicMatrixView {
 public:
  using value_type = std::remove_const_t<T>;

  BasicMatrixView() = default;
  BasicMatrixView(T* data, std::size_t rows, std::size_t cols, std::size_t ld)
      : data_(data), rows_(rows), cols_(cols), ld_(ld) {
    assert(ld_ >= rows_ || cols_ == 0);
  }

  // mutable -> const
  template <typename U, typename = std::enable_if_t<std::is_same_v<T, const U>>>
  BasicMatrixView(const BasicMatrixView<U>& other)  // NOLINT(google-explicit-constructor)
      : data_(other.data()), rows_(other.rows()), cols_(other.cols()), ld_(other.ld()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t ld() const { return ld_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  T* data() const { return data_; }

  T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i + j * ld_];
  }

  std::span<T> col(std::size_t j) const {
    assert(j < cols_);
    return {data_ + j * ld_, rows_};
  }

  BasicMatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    assert(r0 + nr <= rows_ && c0 + nc <= cols_);
    if (nr == 0 || nc == 0) return {data_, nr, nc, ld_ == 0 ? 1 : ld_};
    return {data_ + r0 + c0 * ld_, nr, nc, ld_};
  }
  BasicMatrixView columns(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }
  BasicMatrixView rows_range(std::size_t r0, std::size_t nr) const { return block(r0, 0, nr, cols_); }

 private:
  T* data_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t ld_ = 1;
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

// Owning column-major real matrix; leading dimension equals the row count.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  explicit DenseMatrix(ConstMatrixView v);

  // Row-wise literal, e.g. {{1, 2}, {3, 4}}.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix identity(std::size_t rows, std::size_t cols);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t ld() const { return rows_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i + j * rows_];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i + j * rows_];
  }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  MatrixView view() { return {data_.data(), rows_, cols_, rows_ == 0 ? 1 : rows_}; }
  ConstMatrixView view() const { return {data_.data(), rows_, cols_, rows_ == 0 ? 1 : rows_}; }
  MatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
    return view().block(r0, c0, nr, nc);
  }
  ConstMatrixView block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    return view().block(r0, c0, nr, nc);
  }

  operator MatrixView() { return view(); }             // NOLINT(google-explicit-constructor)
  operator ConstMatrixView() const { return view(); }  // NOLINT(google-explicit-constructor)

  void swap_columns(std::size_t a, std::size_t b);

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double frobenius_norm(ConstMatrixView a);
// Scaled 2-norm, safe against overflow and underflow.
double norm2(std::span<const double> x);
bool all_finite(ConstMatrixView a);

DenseMatrix transpose(ConstMatrixView a);
void copy(ConstMatrixView src, MatrixView dst);
void fill(MatrixView a, double value);
void swap_columns(MatrixView a, std::size_t i, std::size_t j);
void swap_rows(MatrixView a, std::size_t i, std::size_t j);

// Plain products without flop accounting; convenience for oracles and reports.
DenseMatrix multiply(ConstMatrixView a, ConstMatrixView b);
DenseMatrix multiply_transposed_left(ConstMatrixView a, ConstMatrixView b);  // a^T b
DenseMatrix subtract(ConstMatrixView a, ConstMatrixView b);

// ||A^T A - I||_F for a matrix with (nominally) orthonormal columns.
double orthogonality_error(ConstMatrixView q);

}  // namespace rqrcp

#include "rqrcp/householder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rqrcp/errors.hpp"
#include "rqrcp/kernels.hpp"

namespace rqrcp {

double form_reflector_in_place(std::span<double> x, OpCounters* counters) {
  if (x.empty()) throw PreconditionError("form_reflector: empty vector");
  const double alpha = x[0];
  const double xnorm = norm2(x.subspan(1));
  if (counters != nullptr) counters->level2_flops += 3 * x.size();
  if (xnorm == 0.0 && alpha == 0.0) return 0.0;
  double a0 = alpha;
  double beta = (alpha >= 0.0 ? -1.0 : 1.0) * std::hypot(alpha, xnorm);
  // Rescale tiny vectors so that 1 / (alpha - beta) cannot overflow.
  constexpr double kSafeMin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int rescaled = 0;
  if (std::abs(beta) < kSafeMin) {
    while (std::abs(beta) < kSafeMin && rescaled < 20) {
      for (std::size_t i = 1; i < x.size(); ++i) x[i] /= kSafeMin;
      a0 /= kSafeMin;
      beta /= kSafeMin;
      ++rescaled;
    }
    beta = (a0 >= 0.0 ? -1.0 : 1.0) * std::hypot(a0, norm2(x.subspan(1)));
  }
  const double tau = (beta - a0) / beta;
  const double scale = 1.0 / (a0 - beta);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] *= scale;
  for (int r = 0; r < rescaled; ++r) beta *= kSafeMin;
  x[0] = beta;
  return tau;
}

Reflector form_reflector(std::span<const double> x) {
  Reflector h;
  h.v.assign(x.begin(), x.end());
  h.tau = form_reflector_in_place(h.v);
  h.beta = h.v.empty() ? 0.0 : h.v[0];
  if (!h.v.empty()) h.v[0] = 1.0;
  return h;
}

void apply_reflector(std::span<const double> v, double tau, MatrixView a, std::span<double> work,
                     OpCounters* counters) {
  if (v.size() != a.rows() || work.size() < a.cols())
    throw DimensionError("apply_reflector: shape mismatch");
  if (tau == 0.0 || a.empty()) return;
  auto w = work.first(a.cols());
  gemv(Trans::kYes, 1.0, a, v, 0.0, w, counters);
  ger(-tau, v, w, a, counters);
}

DenseMatrix build_t_matrix(ConstMatrixView y, std::span<const double> tau, OpCounters* counters) {
  const std::size_t b = tau.size();
  if (y.cols() != b) throw DimensionError("build_t_matrix: width mismatch");
  DenseMatrix t(b, b);
  std::vector<double> z(b);
  for (std::size_t i = 0; i < b; ++i) {
    t(i, i) = tau[i];
    if (i == 0) continue;
    // t(0:i, i) = -tau_i * T(0:i, 0:i) * Y(:, 0:i)^T y_i
    auto zi = std::span<double>(z).first(i);
    gemv(Trans::kYes, -tau[i], y.columns(0, i), y.col(i), 0.0, zi, counters);
    for (std::size_t r = 0; r < i; ++r) {
      double s = 0.0;
      for (std::size_t c = r; c < i; ++c) s += t(r, c) * zi[c];
      t(r, i) = s;
    }
    if (counters != nullptr) counters->level2_flops += 1ULL * i * i;
  }
  return t;
}

WyPair compose_blocks(ConstMatrixView y1, ConstMatrixView t1, ConstMatrixView y2,
                      ConstMatrixView t2, OpCounters* counters) {
  if (y1.rows() != y2.rows() || t1.rows() != y1.cols() || t2.rows() != y2.cols())
    throw DimensionError("compose_blocks: shape mismatch");
  const std::size_t m = y1.rows();
  const std::size_t b1 = y1.cols();
  const std::size_t b2 = y2.cols();
  WyPair out{DenseMatrix(m, b1 + b2), DenseMatrix(b1 + b2, b1 + b2)};
  copy(y1, out.Y.block(0, 0, m, b1));
  copy(y2, out.Y.block(0, b1, m, b2));
  copy(t1, out.T.block(0, 0, b1, b1));
  copy(t2, out.T.block(b1, b1, b2, b2));
  if (b1 == 0 || b2 == 0) return out;
  DenseMatrix g(b1, b2);
  gemm(Trans::kYes, Trans::kNo, 1.0, y1, y2, 0.0, g, counters);  // Y1^T Y2
  trmm_upper_left(Trans::kNo, t1, g, counters);                  // T1 (Y1^T Y2)
  gemm(Trans::kNo, Trans::kNo, -1.0, g, t2, 0.0, out.T.block(0, b1, b1, b2), counters);
  return out;
}

void apply_block_reflection(MatrixView a, ConstMatrixView y, ConstMatrixView t, Side side,
                            OpCounters* counters) {
  const std::size_t b = y.cols();
  if (y.rows() != a.rows() || t.rows() != b || t.cols() != b)
    throw DimensionError("apply_block_reflection: shape mismatch");
  if (b == 0 || a.cols() == 0) return;
  DenseMatrix w(b, a.cols());
  gemm(Trans::kYes, Trans::kNo, 1.0, y, a, 0.0, w, counters);
  trmm_upper_left(side == Side::kLeft ? Trans::kNo : Trans::kYes, t, w, counters);
  gemm(Trans::kNo, Trans::kNo, -1.0, y, w, 1.0, a, counters);
}

void block_reflection_leading_rows(ConstMatrixView a, ConstMatrixView y, ConstMatrixView t,
                                   MatrixView out, OpCounters* counters) {
  const std::size_t b = y.cols();
  const std::size_t r = out.rows();
  if (y.rows() != a.rows() || t.rows() != b || out.cols() != a.cols() || r > a.rows())
    throw DimensionError("block_reflection_leading_rows: shape mismatch");
  copy(a.rows_range(0, r), out);
  if (b == 0 || a.cols() == 0) return;
  DenseMatrix w(b, a.cols());
  gemm(Trans::kYes, Trans::kNo, 1.0, y, a, 0.0, w, counters);
  trmm_upper_left(Trans::kYes, t, w, counters);
  gemm(Trans::kNo, Trans::kNo, -1.0, y.rows_range(0, r), w, 1.0, out, counters);
}

void panel_qr(MatrixView a, std::span<double> tau, OpCounters* counters) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t k = std::min(m, n);
  if (tau.size() != k) throw DimensionError("panel_qr: tau size must be min(rows, cols)");
  std::vector<double> work(n);
  for (std::size_t j = 0; j < k; ++j) {
    auto x = a.block(j, j, m - j, 1).col(0);
    tau[j] = form_reflector_in_place(x, counters);
    if (j + 1 < n) {
      const double beta = x[0];
      x[0] = 1.0;
      apply_reflector(x, tau[j], a.block(j, j + 1, m - j, n - j - 1), work, counters);
      x[0] = beta;
    }
  }
}

DenseMatrix unpack_reflectors(ConstMatrixView packed, std::size_t k) {
  const std::size_t m = packed.rows();
  if (k > std::min(m, packed.cols())) throw DimensionError("unpack_reflectors: k too large");
  DenseMatrix y(m, k);
  for (std::size_t j = 0; j < k; ++j) {
    y(j, j) = 1.0;
    for (std::size_t i = j + 1; i < m; ++i) y(i, j) = packed(i, j);
  }
  return y;
}

DenseMatrix unpack_r(ConstMatrixView packed, std::size_t k) {
  if (k > packed.rows()) throw DimensionError("unpack_r: k too large");
  DenseMatrix r(k, packed.cols());
  for (std::size_t j = 0; j < packed.cols(); ++j)
    for (std::size_t i = 0; i < std::min(k, j + 1); ++i) r(i, j) = packed(i, j);
  return r;
}

DenseMatrix form_q(ConstMatrixView y, std::span<const double> tau, std::size_t cols) {
  const std::size_t m = y.rows();
  const std::size_t k = y.cols();
  if (tau.size() != k || cols > m) throw DimensionError("form_q: shape mismatch");
  DenseMatrix q = DenseMatrix::identity(m, cols);
  std::vector<double> work(cols);
  for (std::size_t j = k; j-- > 0;) {
    auto v = y.block(j, j, m - j, 1).col(0);
    apply_reflector(v, tau[j], q.block(j, 0, m - j, cols), work);
  }
  return q;
}

}  // namespace rqrcp

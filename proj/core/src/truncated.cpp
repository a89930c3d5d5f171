#include "rqrcp/truncated.hpp"

#include <algorithm>

#include "rqrcp/errors.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/svd.hpp"

namespace rqrcp {

Factorization TruncatedFactorization::as_factorization() const {
  Factorization f;
  f.reflectors = reflectors.Y;
  f.tau = reflectors.tau;
  f.r = r;
  f.perm = perm;
  f.rank = rank;
  f.counters = counters;
  return f;
}

TruncatedFactorization trqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config) {
  config.validate();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t ell = config.sample_rank();
  if (rank > std::min(m, n)) throw PreconditionError("rank exceeds min(rows, cols)");
  if (ell > m) throw PreconditionError("sample rank exceeds the row count");
  const double scale = frobenius_norm(a);

  OpCounters counters;
  RngState rng(config.seed);
  SampleState sample = make_sample(a, ell, rng, &counters);
  const double reference = sample.reference_norm;

  DenseMatrix ap(a);  // A * P, columns permuted but never updated
  Permutation perm(n);
  DenseMatrix y(m, rank);
  DenseMatrix t(rank, rank);
  DenseMatrix w(n, rank);
  DenseMatrix r(rank, n);
  std::vector<double> tau(rank);

  std::size_t d = 0;
  while (d < rank) {
    const PivotSelection sel = select_pivots(sample, std::min(config.block, rank - d), &counters);
    const std::size_t nb = sel.count;
    if (nb == 0) break;
    for (const auto& [pos, piv] : sel.local.swaps()) {
      const std::size_t i = d + pos;
      const std::size_t j = d + piv;
      ap.swap_columns(i, j);
      swap_rows(w.block(0, 0, n, d), i, j);
      swap_columns(r.block(0, 0, d, n), i, j);
      perm.swap(i, j);
    }

    // Selected columns of the implicitly updated matrix, rows d..m: A P - Y1 W1^T.
    DenseMatrix panel(ap.block(d, d, m - d, nb));
    if (d > 0) {
      gemm(Trans::kNo, Trans::kYes, -1.0, y.block(d, 0, m - d, d), w.block(d, 0, nb, d), 1.0,
           panel, &counters);
    }
    std::span<double> tau2 = std::span<double>(tau).subspan(d, nb);
    panel_qr(panel, tau2, &counters);
    const DenseMatrix y2 = unpack_reflectors(panel, nb);
    const DenseMatrix t2 = build_t_matrix(y2, tau2, &counters);
    copy(y2, y.block(d, d, m - d, nb));
    copy(unpack_r(panel, nb).block(0, 0, nb, nb), r.block(d, d, nb, nb));

    // W2^T = T2^T (Y2^T A P - (Y2^T Y1) W1^T) over every column.
    DenseMatrix w2t(nb, n);
    gemm(Trans::kYes, Trans::kNo, 1.0, y2, ap.block(d, 0, m - d, n), 0.0, w2t, &counters);
    if (d > 0) {
      DenseMatrix g(nb, d);
      gemm(Trans::kYes, Trans::kNo, 1.0, y2, y.block(d, 0, m - d, d), 0.0, g, &counters);
      gemm(Trans::kNo, Trans::kYes, -1.0, g, w.block(0, 0, n, d), 1.0, w2t, &counters);
      // T12 = -T1 (Y1^T Y2) T2 = -T1 G^T T2
      const WyPair composed =
          compose_blocks(y.block(d, 0, m - d, d), t.block(0, 0, d, d), y2, t2, &counters);
      copy(composed.T.block(0, d, d, nb), t.block(0, d, d, nb));
    }
    trmm_upper_left(Trans::kYes, t2, w2t, &counters);
    copy(t2, t.block(d, d, nb, nb));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < nb; ++i) w(j, d + i) = w2t(i, j);

    const std::size_t e = d + nb;
    if (e < n) {
      // New rows of R: rows d..e of A P - Y W^T, trailing columns.
      MatrixView rows = r.block(d, e, nb, n - e);
      copy(ap.block(d, e, nb, n - e), rows);
      gemm(Trans::kNo, Trans::kYes, -1.0, y.block(d, 0, nb, e), w.block(e, 0, n - e, e), 1.0, rows,
           &counters);
    }
    d = e;
    if (d >= rank) break;

    const DenseMatrix r11(r.block(d - nb, d - nb, nb, nb));
    const UpdateStatus status =
        sample_update(sample, r11, r.block(d - nb, d, nb, n - d), scale, &counters);
    if (status == UpdateStatus::kDegenerate) {
      // Fresh sample of the trailing matrix, formed as Omega A P - (Omega Y) W^T.
      ++counters.resample_count;
      const std::size_t rows_left = m - d;
      const std::size_t ell2 = std::min(ell, rows_left);
      const DenseMatrix omega = gaussian_matrix(rng, ell2, rows_left);
      SampleState fresh;
      fresh.ell = ell2;
      fresh.b = DenseMatrix(ell2, n - d);
      gemm(Trans::kNo, Trans::kNo, 1.0, omega, ap.block(d, d, rows_left, n - d), 0.0, fresh.b,
           &counters);
      DenseMatrix oy(ell2, d);
      gemm(Trans::kNo, Trans::kNo, 1.0, omega, y.block(d, 0, rows_left, d), 0.0, oy, &counters);
      gemm(Trans::kNo, Trans::kYes, -1.0, oy, w.block(d, 0, n - d, d), 1.0, fresh.b, &counters);
      fresh.reference_norm = reference;
      fresh.block_index = sample.block_index + 1;
      sample = std::move(fresh);
    }
  }

  TruncatedFactorization out;
  out.reflectors.Y = DenseMatrix(y.block(0, 0, m, d));
  out.reflectors.tau.assign(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(d));
  out.reflectors.T = DenseMatrix(t.block(0, 0, d, d));
  out.reflectors.W = DenseMatrix(w.block(0, 0, n, d));
  out.r = DenseMatrix(r.block(0, 0, d, n));
  out.perm = std::move(perm);
  out.rank = d;
  out.counters = counters;
  return out;
}

LqFactorization lq_factor(ConstMatrixView z, OpCounters* counters) {
  if (z.empty()) throw PreconditionError("lq_factor: empty input");
  DenseMatrix zt = transpose(z);
  const std::size_t p = std::min(z.rows(), z.cols());
  std::vector<double> tau(p);
  panel_qr(zt, tau, counters);
  LqFactorization out;
  out.l = transpose(unpack_r(zt, p));
  out.v = form_q(unpack_reflectors(zt, p), tau, p);
  return out;
}

namespace {

// Thin QR of z: returns (Q, R) with Q m x p.
std::pair<DenseMatrix, DenseMatrix> thin_qr(ConstMatrixView z, OpCounters* counters) {
  DenseMatrix packed(z);
  const std::size_t p = std::min(z.rows(), z.cols());
  std::vector<double> tau(p);
  panel_qr(packed, tau, counters);
  return {form_q(unpack_reflectors(packed, p), tau, p), unpack_r(packed, p)};
}

}  // namespace

DenseMatrix TuxvFactorization::reconstruct() const {
  return multiply(multiply(u, x), transpose(v));
}

TuxvFactorization tuxv(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config,
                       const TuxvOptions& options) {
  if (options.iterations < 1) throw PreconditionError("tuxv: at least one iteration required");
  TruncatedFactorization f = trqrcp(a, rank, config);
  TuxvFactorization out;
  out.counters = f.counters;
  const std::size_t k = f.rank;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (k == 0) {
    out.u = DenseMatrix(m, 0);
    out.v = DenseMatrix(n, 0);
    out.x = DenseMatrix(0, 0);
    return out;
  }

  // Z0 = R P^T, then V from the LQ factorization of Z0.
  LqFactorization lq = lq_factor(unpermute_columns(f.r, f.perm), &out.counters);
  DenseMatrix v = std::move(lq.v);
  DenseMatrix u;
  DenseMatrix x = std::move(lq.l);
  for (std::size_t j = 1; j <= options.iterations; ++j) {
    if (j % 2 == 1) {
      DenseMatrix z(m, k);
      gemm(Trans::kNo, Trans::kNo, 1.0, a, v, 0.0, z, &out.counters);
      auto [q, rr] = thin_qr(z, &out.counters);
      u = std::move(q);
      x = std::move(rr);
    } else {
      DenseMatrix z(k, n);
      gemm(Trans::kYes, Trans::kNo, 1.0, u, a, 0.0, z, &out.counters);
      LqFactorization next = lq_factor(z, &out.counters);
      v = std::move(next.v);
      x = std::move(next.l);
    }
  }
  out.iterations = options.iterations;

  if (options.diagonalize) {
    const SvdResult s = jacobi_svd(x);
    u = multiply(u, s.u);
    v = multiply(v, s.v);
    x = DenseMatrix::diagonal(s.sigma);
  }
  out.u = std::move(u);
  out.x = std::move(x);
  out.v = std::move(v);
  return out;
}

}  // namespace rqrcp

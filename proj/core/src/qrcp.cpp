#include "rqrcp/qrcp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "rqrcp/errors.hpp"
#include "rqrcp/householder.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/norms.hpp"

namespace rqrcp {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::size_t target_rank(ConstMatrixView a, std::optional<std::size_t> rank) {
  const std::size_t kmax = std::min(a.rows(), a.cols());
  if (rank && *rank > kmax) throw PreconditionError("rank exceeds min(rows, cols)");
  return rank.value_or(kmax);
}

Factorization finish(const DenseMatrix& packed, std::vector<double> tau, std::size_t rank,
                     Permutation perm, const OpCounters& counters) {
  Factorization f;
  f.reflectors = unpack_reflectors(packed, rank);
  tau.resize(rank);
  f.tau = std::move(tau);
  f.r = unpack_r(packed, rank);
  f.perm = std::move(perm);
  f.rank = rank;
  f.counters = counters;
  return f;
}

}  // namespace

Factorization qrcp_level2(ConstMatrixView a, std::optional<std::size_t> rank) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t target = target_rank(a, rank);
  const double threshold = kEps * frobenius_norm(a);

  DenseMatrix w(a);
  ColumnNorms norms(w);
  Permutation perm(n);
  std::vector<double> tau(target);
  std::vector<double> work(n);
  OpCounters counters;

  std::size_t j = 0;
  for (; j < target; ++j) {
    const std::size_t p = norms.argmax(j);
    if (!rank && norms.norm(p) <= threshold) break;
    w.swap_columns(j, p);
    norms.swap(j, p);
    perm.swap(j, p);

    auto x = w.block(j, j, m - j, 1).col(0);
    tau[j] = form_reflector_in_place(x, &counters);
    if (j + 1 < n) {
      const double beta = x[0];
      x[0] = 1.0;
      apply_reflector(x, tau[j], w.block(j, j + 1, m - j, n - j - 1), work, &counters);
      x[0] = beta;
      std::vector<double> row(n - j - 1);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = w(j, j + 1 + c);
      downdate_norms(norms, j + 1, row, w.block(j + 1, j + 1, m - j - 1, n - j - 1));
    }
  }
  return finish(w, std::move(tau), j, std::move(perm), counters);
}

Factorization qrcp_blocked(ConstMatrixView a, std::optional<std::size_t> rank, std::size_t block) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t target = target_rank(a, rank);
  if (block == 0) throw PreconditionError("qrcp_blocked: block size must be positive");
  const double threshold = kEps * frobenius_norm(a);

  DenseMatrix w(a);
  ColumnNorms norms(w);
  Permutation perm(n);
  std::vector<double> tau(target);
  OpCounters counters;

  std::size_t j = 0;
  bool halted = false;
  while (j < target && !halted) {
    const std::size_t j0 = j;
    const std::size_t nb = std::min(block, target - j0);
    // F holds W = A^T Y T for the block, one row per column of A (rows < j0 unused).
    DenseMatrix f(n, nb);
    std::vector<double> tmp(std::max(m, n));
    std::size_t done = 0;
    for (; done < nb; ++done) {
      const std::size_t col = j0 + done;
      const std::size_t p = norms.argmax(col);
      if (!rank && norms.norm(p) <= threshold) {
        halted = true;
        break;
      }
      w.swap_columns(col, p);
      swap_rows(f.view(), col, p);
      norms.swap(col, p);
      perm.swap(col, p);

      // Bring the pivot column up to date: a(col:m, col) -= Y(col:m, :) F(col, :)^T.
      auto x = w.block(col, col, m - col, 1).col(0);
      if (done > 0) {
        std::vector<double> frow(done);
        for (std::size_t l = 0; l < done; ++l) frow[l] = f(col, l);
        gemv(Trans::kNo, -1.0, w.block(col, j0, m - col, done), frow, 1.0, x, &counters);
      }
      tau[col] = form_reflector_in_place(x, &counters);
      const double beta = x[0];
      x[0] = 1.0;

      const std::size_t rest = n - col - 1;
      if (rest > 0) {
        // F(col+1:n, done) = tau * (A(col:m, col+1:n)^T y - F(col+1:n, 0:done) Y(col:m, 0:done)^T y)
        auto fcol = f.block(col + 1, done, rest, 1).col(0);
        gemv(Trans::kYes, tau[col], w.block(col, col + 1, m - col, rest), x, 0.0, fcol, &counters);
        if (done > 0) {
          std::vector<double> aux(done);
          gemv(Trans::kYes, -tau[col], w.block(col, j0, m - col, done), x, 0.0, aux, &counters);
          gemv(Trans::kNo, 1.0, f.block(col + 1, 0, rest, done), aux, 1.0, fcol, &counters);
        }
        // Finish row col: A(col, col+1:n) -= Y(col, 0:done+1) F(col+1:n, 0:done+1)^T.
        std::vector<double> yrow(done + 1);
        for (std::size_t l = 0; l <= done; ++l) yrow[l] = w(col, j0 + l);
        auto row = std::span<double>(tmp).first(rest);
        gemv(Trans::kNo, 1.0, f.block(col + 1, 0, rest, done + 1), yrow, 0.0, row, &counters);
        for (std::size_t c = 0; c < rest; ++c) w(col, col + 1 + c) -= row[c];
      }
      x[0] = beta;

      // Downdate; cancelled columns are rebuilt from A - Y F^T below row col.
      for (std::size_t c = col + 1; c < n; ++c) {
        if (norms.downdate(c, w(col, c))) continue;
        const std::size_t len = m - col - 1;
        auto fresh = std::span<double>(tmp).first(len);
        std::copy_n(w.block(col + 1, c, len, 1).col(0).begin(), len, fresh.begin());
        std::vector<double> fr(done + 1);
        for (std::size_t l = 0; l <= done; ++l) fr[l] = f(c, l);
        gemv(Trans::kNo, -1.0, w.block(col + 1, j0, len, done + 1), fr, 1.0, fresh, &counters);
        norms.refresh(c, norm2(fresh));
      }
    }
    j = j0 + done;
    if (done > 0 && j < m && j < n) {
      gemm(Trans::kNo, Trans::kYes, -1.0, w.block(j, j0, m - j, done), f.block(j, 0, n - j, done),
           1.0, w.block(j, j, m - j, n - j), &counters);
    }
  }
  return finish(w, std::move(tau), j, std::move(perm), counters);
}

Factorization qr_blocked(ConstMatrixView a, std::optional<std::size_t> rank, std::size_t block) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t target = target_rank(a, rank);
  if (block == 0) throw PreconditionError("qr_blocked: block size must be positive");

  DenseMatrix w(a);
  std::vector<double> tau(target);
  OpCounters counters;
  for (std::size_t j0 = 0; j0 < target; j0 += block) {
    const std::size_t nb = std::min(block, target - j0);
    MatrixView panel = w.block(j0, j0, m - j0, nb);
    panel_qr(panel, std::span<double>(tau).subspan(j0, nb), &counters);
    if (j0 + nb < n) {
      DenseMatrix y = unpack_reflectors(panel, nb);
      DenseMatrix t = build_t_matrix(y, std::span<const double>(tau).subspan(j0, nb), &counters);
      apply_block_reflection(w.block(j0, j0 + nb, m - j0, n - j0 - nb), y, t,
                             Side::kLeftTranspose, &counters);
    }
  }
  return finish(w, std::move(tau), target, Permutation(n), counters);
}

Factorization qr_presorted(ConstMatrixView a, std::optional<std::size_t> rank, std::size_t block) {
  const std::vector<double> norms = column_norms(a);
  std::vector<std::size_t> order(a.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });
  Permutation perm = Permutation::from_forward(order);
  Factorization f = qr_blocked(permute_columns(a, perm), rank, block);
  f.perm = std::move(perm);
  f.counters.level2_flops += 2ULL * a.rows() * a.cols();
  return f;
}

}  // namespace rqrcp

#pragma once

// Test-only reference computations. Everything here goes through Eigen or plain loops so the
// library's own kernels are never used to check themselves.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "rqrcp/matrix.hpp"
#include "rqrcp/permutation.hpp"
#include "rqrcp/random.hpp"
#include "rqrcp/randomized.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline MatrixXd to_eigen(rqrcp::ConstMatrixView a) {
  MatrixXd out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
  return out;
}

inline rqrcp::DenseMatrix from_eigen(const MatrixXd& a) {
  rqrcp::DenseMatrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
  return out;
}

// Gaussian matrix from the standard library generator (independent of rqrcp::RngState).
inline rqrcp::DenseMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  rqrcp::DenseMatrix out(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) out(i, j) = dist(gen);
  return out;
}

inline MatrixXd householder(const VectorXd& v, double tau) {
  return MatrixXd::Identity(v.size(), v.size()) - tau * v * v.transpose();
}

// H_1 H_2 ... H_k from explicit columns of Y.
inline MatrixXd reflector_product(const MatrixXd& y, const std::vector<double>& tau) {
  MatrixXd q = MatrixXd::Identity(y.rows(), y.rows());
  for (Eigen::Index j = 0; j < y.cols(); ++j) q = q * householder(y.col(j), tau[j]);
  return q;
}

inline MatrixXd permute(const MatrixXd& a, const std::vector<std::size_t>& forward) {
  MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < forward.size(); ++i) out.col(i) = a.col(forward[i]);
  return out;
}

inline std::vector<std::size_t> forward_of(const auto& perm) {
  return {perm.forward().begin(), perm.forward().end()};
}

// Residual of the columns of a after projecting out span(basis) (two Gram-Schmidt passes).
inline MatrixXd project_out(const MatrixXd& a, const MatrixXd& basis) {
  if (basis.cols() == 0) return a;
  Eigen::HouseholderQR<MatrixXd> qr(basis);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(basis.rows(), basis.cols());
  MatrixXd r = a - q * (q.transpose() * a);
  return r - q * (q.transpose() * r);
}

struct GreedyStep {
  std::size_t pivot;
  double norm;       // trailing norm of the pivot
  double runner_up;  // next largest trailing norm (for tie detection)
};

// Brute-force greedy QRCP: at each step recompute every trailing column explicitly and take
// the largest (lowest index on ties).
inline std::vector<GreedyStep> greedy_pivots(const MatrixXd& a, std::size_t steps) {
  std::vector<GreedyStep> out;
  std::vector<std::size_t> order(a.cols());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  for (std::size_t s = 0; s < steps; ++s) {
    MatrixXd chosen(a.rows(), static_cast<Eigen::Index>(s));
    for (std::size_t i = 0; i < s; ++i) chosen.col(i) = a.col(out[i].pivot);
    const MatrixXd trailing = project_out(a, chosen);
    GreedyStep best{0, -1.0, -1.0};
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (std::any_of(out.begin(), out.end(), [&](const GreedyStep& g) { return g.pivot == j; }))
        continue;
      const double nrm = trailing.col(j).norm();
      if (nrm > best.norm) {
        best.runner_up = best.norm;
        best.norm = nrm;
        best.pivot = j;
      } else if (nrm > best.runner_up) {
        best.runner_up = nrm;
      }
    }
    out.push_back(best);
  }
  return out;
}

inline double orth_error(const MatrixXd& q) {
  return (q.transpose() * q - MatrixXd::Identity(q.cols(), q.cols())).norm();
}

// Everything the explicit-compression oracle needs about one sample block.
struct CompressionCheck {
  std::size_t selected = 0;  // pivots taken from the sample
  bool updated = false;      // sample_update did not report a degenerate block
  double update_error = 0;   // ||B_updated - Omega' A^(J)||_F / ||B_updated||_F
  double w21 = 0;            // ||W21||_F / ||Omega||_F
};

// Selects b pivots from a fresh sample of a random m x n matrix, applies sample_update and compares
// against Omega' A^(J) formed densely: Omega is replayed from a copy of the RNG, Q_b comes from the
// sample reflectors and Q from an independent QR of the chosen columns.
inline CompressionCheck compression_check(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t b,
                                          std::size_t p) {
  const std::size_t ell = b + p;
  rqrcp::DenseMatrix a = random_matrix(m, n, seed);
  rqrcp::RngState rng(seed);
  rqrcp::RngState replay = rng;
  const MatrixXd omega = to_eigen(rqrcp::gaussian_matrix(replay, ell, m));

  rqrcp::SampleState sample = rqrcp::make_sample(a, ell, rng);
  const rqrcp::PivotSelection sel = rqrcp::select_pivots(sample, b);

  const MatrixXd qb = reflector_product(to_eigen(sample.reflectors), sample.tau);
  const MatrixXd ap = permute(to_eigen(a), forward_of(sel.local));
  Eigen::HouseholderQR<MatrixXd> qr(ap.leftCols(b));
  const MatrixXd q = qr.householderQ();
  const MatrixXd qtap = q.transpose() * ap;

  const MatrixXd compressed = qb.transpose() * omega * q;
  const MatrixXd expected = compressed.rightCols(m - b) * qtap.bottomRightCorner(m - b, n - b);

  CompressionCheck out;
  out.selected = sel.count;
  out.updated = rqrcp::sample_update(sample, from_eigen(qtap.topLeftCorner(b, b)),
                                     from_eigen(qtap.topRightCorner(b, n - b)),
                                     rqrcp::frobenius_norm(a)) == rqrcp::UpdateStatus::kUpdated;
  const MatrixXd live = to_eigen(sample.live());
  out.update_error = (live - expected).norm() / live.norm();
  out.w21 = compressed.bottomLeftCorner(ell - b, b).norm() / omega.norm();
  return out;
}

// Truncated QLP built from a complete rqrcp run: LQ of R P^T, keep k columns of L, then a QR
// to extract the column basis. Returns U X V^T.
inline MatrixXd qlp_truncation(rqrcp::ConstMatrixView a, std::size_t k, const rqrcp::RandomizedConfig& cfg) {
  const std::size_t full = std::min(a.rows(), a.cols());
  rqrcp::Factorization f = rqrcp::rqrcp(a, full, cfg);
  const MatrixXd z = to_eigen(rqrcp::unpermute_columns(f.r, f.perm));  // full x n
  Eigen::HouseholderQR<MatrixXd> lq(z.transpose());
  const MatrixXd v = lq.householderQ() * MatrixXd::Identity(z.cols(), static_cast<Eigen::Index>(full));
  const MatrixXd l = lq.matrixQR().topRows(full).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  const MatrixXd ql = to_eigen(f.thin_q()) * l.leftCols(k);
  Eigen::HouseholderQR<MatrixXd> qr(ql);
  const MatrixXd u = qr.householderQ() * MatrixXd::Identity(ql.rows(), static_cast<Eigen::Index>(k));
  const MatrixXd x = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return u * x * v.leftCols(k).transpose();
}

}  // namespace oracle

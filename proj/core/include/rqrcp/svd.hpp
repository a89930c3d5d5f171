#pragma once

#include <cstddef>
#include <vector>

#include "rqrcp/matrix.hpp"

namespace rqrcp {

// One-sided (Hestenes) Jacobi SVD, A = U * diag(sigma) * V^T with sigma nonincreasing.
// Intended as a desk-scale oracle, not a production SVD. U is m x p and V is n x p with
// p = min(m, n); columns of U belonging to zero singular values are completed to an
// orthonormal set.
struct SvdResult {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
  std::size_t sweeps = 0;
};

inline constexpr std::size_t kJacobiMaxDimension = 512;
inline constexpr std::size_t kJacobiMaxSweeps = 80;

// Throws PreconditionError when min(m, n) exceeds kJacobiMaxDimension and NumericalError when
// the sweep cap is reached without convergence.
SvdResult jacobi_svd(ConstMatrixView a, std::size_t max_sweeps = kJacobiMaxSweeps);

// ||A - A_k||_F for the best rank-k approximation, from singular values.
double svd_truncation_error(const std::vector<double>& sigma, std::size_t k);

}  // namespace rqrcp

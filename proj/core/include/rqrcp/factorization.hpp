#pragma once

#include <cstddef>
#include <vector>

#include "rqrcp/counters.hpp"
#include "rqrcp/matrix.hpp"
#include "rqrcp/permutation.hpp"

namespace rqrcp {

// Result of a (possibly truncated) pivoted QR:  A * P ~= Q(:, 1:rank) * R.
//
// `reflectors` is m x rank, unit lower trapezoidal with explicit ones and zeros, so that
// Q = H_1 ... H_rank with H_j = I - tau[j] y_j y_j^T. `r` is rank x n upper trapezoidal and its
// columns are in the permuted frame (column j of R belongs to original column perm[j]).
struct Factorization {
  DenseMatrix reflectors;
  std::vector<double> tau;
  DenseMatrix r;
  Permutation perm;
  std::size_t rank = 0;
  OpCounters counters;

  std::size_t rows() const { return reflectors.rows(); }
  std::size_t cols() const { return r.cols(); }

  // Q(:, 1:cols) as a dense matrix; cols defaults to rank.
  DenseMatrix thin_q() const;
  DenseMatrix thin_q(std::size_t cols) const;
  // Q(:, 1:rank) * R in the permuted frame.
  DenseMatrix reconstruct_permuted() const;
  // Q(:, 1:rank) * R * P^T, i.e. the rank-`rank` approximation of A itself.
  DenseMatrix reconstruct() const;
  // |R(i, i)| for i < rank.
  std::vector<double> diagonal_magnitudes() const;
};

// ||A*P - Q(:,1:rank)*R||_F.
double reconstruction_error(ConstMatrixView a, const Factorization& f);

}  // namespace rqrcp

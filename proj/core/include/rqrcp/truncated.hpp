#pragma once

#include <cstddef>

#include "rqrcp/counters.hpp"
#include "rqrcp/factorization.hpp"
#include "rqrcp/householder.hpp"
#include "rqrcp/matrix.hpp"
#include "rqrcp/permutation.hpp"
#include "rqrcp/randomized.hpp"

namespace rqrcp {

// Truncated randomized QRCP that never updates the trailing matrix.
//
// reflectors.Y is m x k, reflectors.T the k x k composed connection matrix and reflectors.W the
// n x k inner-product panel with W^T = T^T Y^T A P (rows in the permuted column frame).
// A * P ~= Q(:, 1:k) * R, the residual being the never-formed trailing matrix A - Y W^T.
struct TruncatedFactorization {
  BlockReflectors reflectors;
  DenseMatrix r;
  Permutation perm;
  std::size_t rank = 0;
  OpCounters counters;

  Factorization as_factorization() const;
};

TruncatedFactorization trqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config);

// Z = L * V^T through a QR factorization of Z^T. For a k x n input, L is k x p lower
// trapezoidal and V is n x p with orthonormal columns, p = min(k, n).
struct LqFactorization {
  DenseMatrix l;
  DenseMatrix v;
};

LqFactorization lq_factor(ConstMatrixView z, OpCounters* counters = nullptr);

struct TuxvOptions {
  std::size_t iterations = 1;  // j_max
  bool diagonalize = false;    // replace X by its singular values, rotating U and V
};

// A ~= U * X * V^T with U (m x k) and V (n x k) orthonormal and X k x k triangular (upper after
// an odd number of iterations, lower after an even number), or diagonal when diagonalized.
struct TuxvFactorization {
  DenseMatrix u;
  DenseMatrix x;
  DenseMatrix v;
  std::size_t iterations = 0;
  OpCounters counters;

  DenseMatrix reconstruct() const;
};

TuxvFactorization tuxv(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config,
                       const TuxvOptions& options = {});

}  // namespace rqrcp

#include "rqrcp/factorization.hpp"

#include <cmath>

#include "rqrcp/householder.hpp"

namespace rqrcp {

DenseMatrix Factorization::thin_q() const { return thin_q(rank); }

DenseMatrix Factorization::thin_q(std::size_t cols) const {
  return form_q(reflectors, tau, cols);
}

DenseMatrix Factorization::reconstruct_permuted() const {
  return multiply(thin_q(), r.block(0, 0, rank, r.cols()));
}

DenseMatrix Factorization::reconstruct() const {
  return unpermute_columns(reconstruct_permuted(), perm);
}

std::vector<double> Factorization::diagonal_magnitudes() const {
  std::vector<double> d(rank);
  for (std::size_t i = 0; i < rank; ++i) d[i] = std::abs(r(i, i));
  return d;
}

double reconstruction_error(ConstMatrixView a, const Factorization& f) {
  return frobenius_norm(subtract(permute_columns(a, f.perm), f.reconstruct_permuted()));
}

}  // namespace rqrcp

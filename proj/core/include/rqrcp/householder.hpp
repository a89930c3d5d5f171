#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rqrcp/counters.hpp"
#include "rqrcp/matrix.hpp"

namespace rqrcp {

// Elementary reflector H = I - tau * v * v^T with v[0] == 1 and H * x = beta * e_1.
struct Reflector {
  std::vector<double> v;
  double tau = 0.0;
  double beta = 0.0;
};

// beta = -sign(x[0]) * ||x||_2 with sign(0) = +1. x == 0 gives the identity (tau = beta = 0).
// A nonzero x with a zero tail is still reflected (tau = 2), matching the sign convention above.
Reflector form_reflector(std::span<const double> x);

// In-place form: x[0] becomes beta, x[1:] becomes the tail of v. Returns tau.
double form_reflector_in_place(std::span<double> x, OpCounters* counters = nullptr);

// A <- (I - tau * v * v^T) * A, where v is stored explicitly (v[0] == 1 included).
// work must hold at least a.cols() entries.
void apply_reflector(std::span<const double> v, double tau, MatrixView a, std::span<double> work,
                     OpCounters* counters = nullptr);

// Accumulated reflectors in WY form, Q = I - Y * T * Y^T. W holds the inner-product panel
// W^T = T^T * Y^T * A * P when a trailing update is deferred (empty otherwise).
struct BlockReflectors {
  DenseMatrix Y;
  std::vector<double> tau;
  DenseMatrix T;
  DenseMatrix W;

  std::size_t width() const { return tau.size(); }
};

// Forward, column-wise connection matrix: I - Y*T*Y^T == H_1 * H_2 * ... * H_b.
DenseMatrix build_t_matrix(ConstMatrixView y, std::span<const double> tau,
                           OpCounters* counters = nullptr);

struct WyPair {
  DenseMatrix Y;
  DenseMatrix T;
};

// (I - Y1 T1 Y1^T)(I - Y2 T2 Y2^T) = I - Y T Y^T with Y = [Y1 Y2] and
// T = [T1, -T1 (Y1^T Y2) T2; 0, T2].
WyPair compose_blocks(ConstMatrixView y1, ConstMatrixView t1, ConstMatrixView y2,
                      ConstMatrixView t2, OpCounters* counters = nullptr);

enum class Side { kLeft, kLeftTranspose };

// A <- Q * A (kLeft) or A <- Q^T * A (kLeftTranspose) with Q = I - Y T Y^T, computed as
// W = Y^T A, W = op(T) W, A -= Y W. Accounts exactly 4*m*b*n + b^2*n gemm flops.
void apply_block_reflection(MatrixView a, ConstMatrixView y, ConstMatrixView t, Side side,
                            OpCounters* counters = nullptr);

// Leading `out.rows()` rows of Q^T * A, written to out, with A left untouched.
// Same arithmetic as those rows of apply_block_reflection(.., kLeftTranspose).
void block_reflection_leading_rows(ConstMatrixView a, ConstMatrixView y, ConstMatrixView t,
                                   MatrixView out, OpCounters* counters = nullptr);

// Unpivoted level-2 Householder QR of a panel in place (LAPACK geqr2 layout): R on and above
// the diagonal, reflector tails below. tau.size() must be min(rows, cols).
void panel_qr(MatrixView a, std::span<double> tau, OpCounters* counters = nullptr);

// Explicit unit-lower-trapezoidal Y (rows x k) from a packed panel.
DenseMatrix unpack_reflectors(ConstMatrixView packed, std::size_t k);
// Upper-trapezoidal R (k x cols) from a packed panel.
DenseMatrix unpack_r(ConstMatrixView packed, std::size_t k);

// First `cols` columns of H_1 H_2 ... H_k as a dense matrix (Y is m x k).
DenseMatrix form_q(ConstMatrixView y, std::span<const double> tau, std::size_t cols);

}  // namespace rqrcp

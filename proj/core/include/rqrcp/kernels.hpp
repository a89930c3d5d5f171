#pragma once

#include <span>

#include "rqrcp/counters.hpp"
#include "rqrcp/matrix.hpp"

namespace rqrcp {

enum class Trans { kNo, kYes };

// C <- alpha * op(A) * op(B) + beta * C. Counted as 2*m*n*k gemm flops.
void gemm(Trans ta, Trans tb, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, OpCounters* counters = nullptr);

// y <- alpha * op(A) * x + beta * y. Counted as 2*m*n level-2 flops.
void gemv(Trans ta, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, OpCounters* counters = nullptr);

// A <- A + alpha * x * y^T. Counted as 2*m*n level-2 flops.
void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         OpCounters* counters = nullptr);

// B <- op(U) * B for an upper-triangular square U. Counted as b^2 * n gemm flops.
void trmm_upper_left(Trans tu, ConstMatrixView u, MatrixView b, OpCounters* counters = nullptr);

// B <- U^{-1} * B for an upper-triangular square U (back substitution, no inverse formed).
// Counted as b^2 * n gemm flops.
void trsm_upper_left(ConstMatrixView u, MatrixView b, OpCounters* counters = nullptr);

// Worker threads for the data-parallel gemm path. 1 (the default) is the serial deterministic
// mode. Results do not depend on the thread count since every output entry keeps its summation
// order, but the serial mode is what the tests pin.
void set_kernel_threads(unsigned threads);
unsigned kernel_threads();

}  // namespace rqrcp

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rqrcp/counters.hpp"
#include "rqrcp/factorization.hpp"
#include "rqrcp/matrix.hpp"
#include "rqrcp/permutation.hpp"
#include "rqrcp/random.hpp"

namespace rqrcp {

struct RandomizedConfig {
  std::size_t block = 32;
  std::size_t padding = 8;
  std::uint64_t seed = 0;

  std::size_t sample_rank() const { return block + padding; }
  // Throws PreconditionError unless block >= 1 and padding >= 1.
  void validate() const;
};

// The l x n sample B = Omega * A together with the state left by the last pivot selection.
//
// Only columns [offset, n) of `b` are live; they correspond one-to-one, in order, with the
// trailing columns of the matrix being factored. After select_pivots has run for r steps the
// live block is partitioned as [S11 S12; 0 S22] with S11 the leading r x r upper triangle.
struct SampleState {
  DenseMatrix b;
  std::size_t ell = 0;
  std::size_t offset = 0;
  std::size_t block_index = 0;  // completed block iterations
  std::size_t factored = 0;     // r, pivots taken by the last select_pivots
  double reference_norm = 0.0;  // ||B||_F of the first sample; scale for rank detection
  DenseMatrix reflectors;       // ell x r sample reflectors (Q_b), kept for inspection
  std::vector<double> tau;

  std::size_t live_cols() const { return b.cols() - offset; }
  ConstMatrixView live() const { return b.block(0, offset, ell, live_cols()); }
  ConstMatrixView s11() const { return b.block(0, offset, factored, factored); }
  ConstMatrixView s12() const {
    return b.block(0, offset + factored, factored, live_cols() - factored);
  }
  ConstMatrixView s22() const {
    return b.block(factored, offset + factored, ell - factored, live_cols() - factored);
  }
};

// B = Omega * A with Omega a fresh ell x m Gaussian matrix that is not retained.
// Accounts 2 * ell * m * n gemm flops. Requires 1 <= ell <= m.
SampleState make_sample(ConstMatrixView a, std::size_t ell, RngState& rng,
                        OpCounters* counters = nullptr);

struct PivotSelection {
  Permutation local;       // over the live sample columns
  std::size_t count = 0;   // pivots actually taken (< requested when the sample runs out)
};

// Partial level-2 QRCP of the live sample for `block` steps; the sample is left in its
// triangularized state. Halts early, reporting the detected sample rank, once the largest
// remaining sample column norm falls to eps * reference_norm or below.
PivotSelection select_pivots(SampleState& sample, std::size_t block,
                             OpCounters* counters = nullptr);

enum class UpdateStatus { kUpdated, kDegenerate };

// Sample update after a block of r pivots has been processed on A:
//   B1 = S12 - S11 * R11^{-1} * R12,   B2 = S22,
// formed with a triangular solve. The first r live columns are retired. If any |R11(i,i)| is
// below eps^(3/4) * scale the state is left unchanged and kDegenerate is returned.
UpdateStatus sample_update(SampleState& sample, ConstMatrixView r11, ConstMatrixView r12,
                           double scale, OpCounters* counters = nullptr);

// Single-sample randomized QRCP: all `rank` pivots from one sample of rank rank + padding
// (config.block is not used), then one QR of the chosen columns and one multiply for R12.
Factorization ssrqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config);

// Randomized QRCP with sample updates, blocks of config.block pivots.
Factorization rqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config);

// Randomized QRCP that draws a fresh compression of the trailing matrix for every block.
Factorization rsrqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config);

}  // namespace rqrcp

#pragma once

#include <cstdint>

namespace rqrcp {

// Operation counts accumulated by the kernels. A multiply-add pair counts as two flops.
// Work is classified by kernel entry point: matrix-matrix kernels (gemm, trmm, trsm) add to
// gemm_flops, matrix-vector kernels (gemv, ger, reflector application) add to level2_flops.
struct OpCounters {
  std::uint64_t gemm_flops = 0;
  std::uint64_t level2_flops = 0;
  std::uint64_t bytes_touched = 0;
  std::uint64_t resample_count = 0;

  OpCounters& operator+=(const OpCounters& o) {
    gemm_flops += o.gemm_flops;
    level2_flops += o.level2_flops;
    bytes_touched += o.bytes_touched;
    resample_count += o.resample_count;
    return *this;
  }
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace rqrcp

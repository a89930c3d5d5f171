#pragma once

#include <cstddef>
#include <optional>

#include "rqrcp/factorization.hpp"
#include "rqrcp/matrix.hpp"

namespace rqrcp {

inline constexpr std::size_t kDefaultBlockSize = 32;

// Level-2 QR with column pivoting. At every step the trailing column of largest 2-norm is
// pivoted to the front (ties to the lowest index), one reflector is applied to the whole
// trailing matrix and trailing norms are downdated.
//
// rank == nullopt asks for the full factorization; it halts early at the detected rank once all
// trailing norms fall to eps * ||A||_F or below. An explicit rank always performs that many
// steps.
Factorization qrcp_level2(ConstMatrixView a, std::optional<std::size_t> rank = std::nullopt);

// Level-3 QRCP: pivots are chosen exactly as in qrcp_level2, but reflectors are gathered into
// blocks of `block` columns. Inside a block only the pivot column and the finished row are
// updated, using the deferred inner products W^T = T^T Y^T A P; the trailing matrix is touched
// once per block by a single A -= Y W^T multiply.
Factorization qrcp_blocked(ConstMatrixView a, std::optional<std::size_t> rank = std::nullopt,
                           std::size_t block = kDefaultBlockSize);

// Unpivoted blocked Householder QR (level-2 panels, block reflection of the trailing matrix).
Factorization qr_blocked(ConstMatrixView a, std::optional<std::size_t> rank = std::nullopt,
                         std::size_t block = kDefaultBlockSize);

// Columns stably presorted by descending initial 2-norm, then qr_blocked.
Factorization qr_presorted(ConstMatrixView a, std::optional<std::size_t> rank = std::nullopt,
                           std::size_t block = kDefaultBlockSize);

}  // namespace rqrcp

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rqrcp/matrix.hpp"

namespace rqrcp {

// Column permutation P of an n-column matrix, stored as the forward index map
// (column i of A*P is column forward()[i] of A) together with the ordered swap history
// P = S_1 S_2 ... S_k that produced it.
class Permutation {
 public:
  using Swap = std::pair<std::size_t, std::size_t>;  // (position, pivot index)

  Permutation() = default;
  explicit Permutation(std::size_t n);
  // Builds from an explicit index map; the swap history is synthesized.
  static Permutation from_forward(std::vector<std::size_t> forward);

  std::size_t size() const { return forward_.size(); }
  std::size_t operator[](std::size_t i) const { return forward_[i]; }
  std::span<const std::size_t> forward() const { return forward_; }
  std::span<const Swap> swaps() const { return swaps_; }

  // Exchanges positions i and j and records the swap.
  void swap(std::size_t position, std::size_t pivot);
  // Replays the swaps of a permutation over a trailing range [offset, offset + local.size()).
  void append(const Permutation& local, std::size_t offset);

  std::vector<std::size_t> inverse() const;
  bool is_bijection() const;
  // True when replaying the swap history from the identity reproduces forward().
  bool history_consistent() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.forward_ == b.forward_;
  }

 private:
  std::vector<std::size_t> forward_;
  std::vector<Swap> swaps_;
};

// A * P.
DenseMatrix permute_columns(ConstMatrixView a, const Permutation& p);
// Z * P^T, i.e. restores the original column order of a matrix given in the permuted frame.
DenseMatrix unpermute_columns(ConstMatrixView z, const Permutation& p);

}  // namespace rqrcp

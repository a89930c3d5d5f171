#include "rqrcp/permutation.hpp"

#include <numeric>

#include "rqrcp/errors.hpp"

namespace rqrcp {

Permutation::Permutation(std::size_t n) : forward_(n) {
  std::iota(forward_.begin(), forward_.end(), std::size_t{0});
}

Permutation Permutation::from_forward(std::vector<std::size_t> forward) {
  const std::size_t n = forward.size();
  Permutation p(n);
  // where[c] = current position of original column c
  std::vector<std::size_t> where(n);
  std::iota(where.begin(), where.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    if (forward[i] >= n) throw PreconditionError("Permutation: index out of range");
    const std::size_t pos = where[forward[i]];
    if (pos < i) throw PreconditionError("Permutation: repeated index");
    if (pos != i) {
      where[p.forward_[i]] = pos;
      where[forward[i]] = i;
      p.swap(i, pos);
    }
  }
  return p;
}

void Permutation::swap(std::size_t position, std::size_t pivot) {
  if (position >= size() || pivot >= size()) throw PreconditionError("Permutation: swap out of range");
  std::swap(forward_[position], forward_[pivot]);
  swaps_.emplace_back(position, pivot);
}

void Permutation::append(const Permutation& local, std::size_t offset) {
  if (offset + local.size() > size()) throw DimensionError("Permutation: append out of range");
  for (const auto& [pos, piv] : local.swaps()) swap(pos + offset, piv + offset);
}

std::vector<std::size_t> Permutation::inverse() const {
  std::vector<std::size_t> inv(size());
  for (std::size_t i = 0; i < size(); ++i) inv[forward_[i]] = i;
  return inv;
}

bool Permutation::is_bijection() const {
  std::vector<bool> seen(size(), false);
  for (std::size_t c : forward_) {
    if (c >= size() || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

bool Permutation::history_consistent() const {
  std::vector<std::size_t> replay(size());
  std::iota(replay.begin(), replay.end(), std::size_t{0});
  for (const auto& [pos, piv] : swaps_) {
    if (pos >= size() || piv >= size()) return false;
    std::swap(replay[pos], replay[piv]);
  }
  return replay == forward_;
}

DenseMatrix permute_columns(ConstMatrixView a, const Permutation& p) {
  if (a.cols() != p.size()) throw DimensionError("permute_columns: size mismatch");
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < p.size(); ++i) copy(a.columns(p[i], 1), out.block(0, i, a.rows(), 1));
  return out;
}

DenseMatrix unpermute_columns(ConstMatrixView z, const Permutation& p) {
  if (z.cols() != p.size()) throw DimensionError("unpermute_columns: size mismatch");
  DenseMatrix out(z.rows(), z.cols());
  for (std::size_t i = 0; i < p.size(); ++i) copy(z.columns(i, 1), out.block(0, p[i], z.rows(), 1));
  return out;
}

}  // namespace rqrcp

#pragma once

#include <cstddef>
#include <cstdint>

#include "rqrcp/matrix.hpp"

namespace rqrcp {

// Counter-based Gaussian stream. Draw number i of a seed is a pure function of (seed, i):
// uniforms come from the SplitMix64 mixer applied to a seed-derived key plus the counter, and
// pairs of uniforms become pairs of normals via Box-Muller (even draw: cosine branch, odd draw:
// sine branch). No platform-specific distribution objects are involved.
class RngState {
 public:
  explicit RngState(std::uint64_t seed = 0, std::uint64_t position = 0)
      : seed_(seed), position_(position) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  double next_gaussian();
  // Uniform on (0, 1]; consumes one counter slot.
  double next_uniform();
  void skip(std::uint64_t draws) { position_ += draws; }

  // Independent stream derived from this seed, for per-trial Monte Carlo seeding.
  static RngState derive(std::uint64_t seed, std::uint64_t stream);

  friend bool operator==(const RngState&, const RngState&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t position_;
};

// i.i.d. N(0,1) entries filled column by column; advances rng by rows*cols draws.
DenseMatrix gaussian_matrix(RngState& rng, std::size_t rows, std::size_t cols);
void fill_gaussian(RngState& rng, MatrixView a);

}  // namespace rqrcp

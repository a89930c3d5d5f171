#include "rqrcp/random.hpp"

#include <cmath>
#include <numbers>

namespace rqrcp {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
// Domain separators so uniform and Gaussian streams of one seed never share keys.
constexpr std::uint64_t kGaussianDomain = 0x6a09e667f3bcc908ULL;
constexpr std::uint64_t kUniformDomain = 0xbb67ae8584caa73bULL;
constexpr std::uint64_t kDeriveDomain = 0x3c6ef372fe94f82bULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1] from 53 random bits.
double to_unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double uniform_at(std::uint64_t key, std::uint64_t counter) {
  return to_unit(splitmix64(key + counter * kGolden));
}

}  // namespace

double RngState::next_gaussian() {
  const std::uint64_t key = splitmix64(seed_ ^ kGaussianDomain);
  const std::uint64_t pair = position_ / 2;
  const double u1 = uniform_at(key, 2 * pair);
  const double u2 = uniform_at(key, 2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  const double g = (position_ % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
  ++position_;
  return g;
}

double RngState::next_uniform() {
  const std::uint64_t key = splitmix64(seed_ ^ kUniformDomain);
  return uniform_at(key, position_++);
}

RngState RngState::derive(std::uint64_t seed, std::uint64_t stream) {
  return RngState(splitmix64(seed ^ splitmix64(stream ^ kDeriveDomain)), 0);
}

DenseMatrix gaussian_matrix(RngState& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix out(rows, cols);
  fill_gaussian(rng, out);
  return out;
}

void fill_gaussian(RngState& rng, MatrixView a) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (double& v : a.col(j)) v = rng.next_gaussian();
}

}  // namespace rqrcp

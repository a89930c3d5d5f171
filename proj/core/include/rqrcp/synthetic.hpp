#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rqrcp/matrix.hpp"
#include "rqrcp/random.hpp"

namespace rqrcp {

// Test spectra:
//   geometric: sigma_j = 0.9^j
//   stepped:   plateaus of 32 values, each 10^3 below the previous (1, 1e-3, 1e-6, then 1e-9)
//   cliff:     flat plateau of 64 ones, then a 10^-6 cliff followed by a gentle 0.98^j tail
enum class Spectrum { kGeometric, kStepped, kCliff };

std::optional<Spectrum> parse_spectrum(std::string_view name);
std::string_view spectrum_name(Spectrum s);

std::vector<double> spectrum_values(Spectrum s, std::size_t count);

// m x n matrix with orthonormal columns (m >= n), from a QR of a Gaussian matrix.
DenseMatrix random_orthonormal(std::size_t m, std::size_t n, RngState& rng);

// U * diag(sigma) * V^T with Haar-like random U and V; sigma.size() <= min(m, n).
DenseMatrix matrix_with_spectrum(std::size_t m, std::size_t n, std::span<const double> sigma,
                                 RngState& rng);

// Product of Gaussian m x r and r x n factors.
DenseMatrix exact_rank_matrix(std::size_t m, std::size_t n, std::size_t r, RngState& rng);

// Deterministic grayscale test picture in [0, 1]: a toothed wheel with a hub on a shaded
// background.
DenseMatrix synthetic_image(std::size_t height, std::size_t width);

}  // namespace rqrcp

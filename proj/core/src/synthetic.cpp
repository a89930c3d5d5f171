#include "rqrcp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rqrcp/errors.hpp"
#include "rqrcp/householder.hpp"
#include "rqrcp/kernels.hpp"

namespace rqrcp {

std::optional<Spectrum> parse_spectrum(std::string_view name) {
  if (name == "geometric") return Spectrum::kGeometric;
  if (name == "stepped") return Spectrum::kStepped;
  if (name == "cliff") return Spectrum::kCliff;
  return std::nullopt;
}

std::string_view spectrum_name(Spectrum s) {
  switch (s) {
    case Spectrum::kGeometric: return "geometric";
    case Spectrum::kStepped: return "stepped";
    case Spectrum::kCliff: return "cliff";
  }
  return "unknown";
}

std::vector<double> spectrum_values(Spectrum s, std::size_t count) {
  std::vector<double> sigma(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = static_cast<double>(j);
    switch (s) {
      case Spectrum::kGeometric:
        sigma[j] = std::pow(0.9, x);
        break;
      case Spectrum::kStepped:
        sigma[j] = std::pow(1e-3, static_cast<double>(std::min<std::size_t>(j / 32, 3)));
        break;
      case Spectrum::kCliff:
        sigma[j] = j < 64 ? 1.0 : 1e-6 * std::pow(0.98, x - 64.0);
        break;
    }
  }
  return sigma;
}

DenseMatrix random_orthonormal(std::size_t m, std::size_t n, RngState& rng) {
  if (n > m) throw PreconditionError("random_orthonormal: need rows >= cols");
  DenseMatrix g = gaussian_matrix(rng, m, n);
  std::vector<double> tau(n);
  panel_qr(g, tau);
  DenseMatrix q = form_q(unpack_reflectors(g, n), tau, n);
  // Sign fix so the distribution does not depend on the reflector convention.
  for (std::size_t j = 0; j < n; ++j)
    if (g(j, j) < 0.0)
      for (double& v : q.col(j)) v = -v;
  return q;
}

DenseMatrix matrix_with_spectrum(std::size_t m, std::size_t n, std::span<const double> sigma,
                                 RngState& rng) {
  const std::size_t p = sigma.size();
  if (p > std::min(m, n)) throw PreconditionError("matrix_with_spectrum: too many singular values");
  DenseMatrix u = random_orthonormal(m, p, rng);
  DenseMatrix v = random_orthonormal(n, p, rng);
  for (std::size_t j = 0; j < p; ++j)
    for (double& x : u.col(j)) x *= sigma[j];
  DenseMatrix a(m, n);
  gemm(Trans::kNo, Trans::kYes, 1.0, u, v, 0.0, a);
  return a;
}

DenseMatrix exact_rank_matrix(std::size_t m, std::size_t n, std::size_t r, RngState& rng) {
  DenseMatrix left = gaussian_matrix(rng, m, r);
  DenseMatrix right = gaussian_matrix(rng, r, n);
  return multiply(left, right);
}

DenseMatrix synthetic_image(std::size_t height, std::size_t width) {
  DenseMatrix img(height, width);
  const double cy = 0.5 * static_cast<double>(height);
  const double cx = 0.5 * static_cast<double>(width);
  const double scale = 0.5 * static_cast<double>(std::min(height, width));
  constexpr int kTeeth = 14;
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < height; ++i) {
      const double y = (static_cast<double>(i) + 0.5 - cy) / scale;
      const double x = (static_cast<double>(j) + 0.5 - cx) / scale;
      const double r = std::hypot(x, y);
      const double theta = std::atan2(y, x);
      double value = 0.15 + 0.25 * (static_cast<double>(i) / std::max<std::size_t>(1, height - 1));
      const double rim = std::cos(kTeeth * theta) > 0.0 ? 0.82 : 0.70;
      if (r < rim) value = 0.75 - 0.2 * r;
      if (r < 0.45 && r > 0.38) value = 0.35;
      for (int s = 0; s < 5; ++s) {
        const double a = 2.0 * std::numbers::pi * s / 5.0;
        const double hx = 0.25 * std::cos(a);
        const double hy = 0.25 * std::sin(a);
        if (std::hypot(x - hx, y - hy) < 0.06) value = 0.1;
      }
      if (r < 0.1) value = 0.95;
      if (r < 0.04) value = 0.0;
      img(i, j) = std::clamp(value, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace rqrcp

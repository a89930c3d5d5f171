#include "rqrcp/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rqrcp/errors.hpp"

namespace rqrcp {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Fills columns of u whose flag is false with unit vectors orthogonal to all others.
void complete_basis(DenseMatrix& u, const std::vector<bool>& valid) {
  const std::size_t m = u.rows();
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    if (valid[j]) continue;
    std::vector<bool> done(valid);
    for (; candidate < m; ++candidate) {
      auto x = u.col(j);
      std::ranges::fill(x, 0.0);
      x[candidate] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < u.cols(); ++c) {
          if (c == j || !done[c]) continue;
          const double h = dot(u.col(c), x);
          for (std::size_t i = 0; i < m; ++i) x[i] -= h * u(i, c);
        }
      }
      const double nx = norm2(x);
      if (nx > 0.5) {
        for (double& v : x) v /= nx;
        ++candidate;
        break;
      }
    }
  }
}

SvdResult jacobi_tall(ConstMatrixView a, std::size_t max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix u(a);
  DenseMatrix v = DenseMatrix::identity(n);
  SvdResult out;

  bool converged = n < 2;
  std::size_t sweep = 0;
  while (!converged) {
    if (sweep == max_sweeps) throw NumericalError("jacobi_svd: sweep limit reached without convergence");
    ++sweep;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(u.col(p), u.col(p));
        const double beta = dot(u.col(q), u.col(q));
        const double gamma = dot(u.col(p), u.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(u.col(p), u.col(q), c, s);
        rotate(v.col(p), v.col(q), c, s);
      }
    }
    converged = !rotated;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(u.col(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  out.u = DenseMatrix(m, n);
  out.v = DenseMatrix(n, n);
  out.sigma.resize(n);
  std::vector<bool> valid(n, true);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    copy(v.view().columns(src, 1), out.v.view().columns(j, 1));
    if (sigma[src] > std::numeric_limits<double>::min()) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = u(i, src) / sigma[src];
    } else {
      valid[j] = false;
    }
  }
  complete_basis(out.u, valid);
  out.sweeps = sweep;
  return out;
}

}  // namespace

SvdResult jacobi_svd(ConstMatrixView a, std::size_t max_sweeps) {
  if (std::min(a.rows(), a.cols()) > kJacobiMaxDimension)
    throw PreconditionError("jacobi_svd: matrix too large for the Jacobi oracle");
  if (a.rows() >= a.cols()) return jacobi_tall(a, max_sweeps);
  SvdResult t = jacobi_tall(transpose(a), max_sweeps);
  std::swap(t.u, t.v);
  return t;
}

double svd_truncation_error(const std::vector<double>& sigma, std::size_t k) {
  if (k >= sigma.size()) return 0.0;
  return norm2(std::span<const double>(sigma).subspan(k));
}

}  // namespace rqrcp

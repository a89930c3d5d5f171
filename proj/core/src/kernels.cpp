#include "rqrcp/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "rqrcp/errors.hpp"

namespace rqrcp {
namespace {

std::atomic<unsigned> g_threads{1};

constexpr std::uint64_t kWord = sizeof(double);

void count_gemm(OpCounters* c, std::uint64_t flops, std::uint64_t words) {
  if (c == nullptr) return;
  c->gemm_flops += flops;
  c->bytes_touched += words * kWord;
}

void count_level2(OpCounters* c, std::uint64_t flops, std::uint64_t words) {
  if (c == nullptr) return;
  c->level2_flops += flops;
  c->bytes_touched += words * kWord;
}

// Output columns [j0, j1) of C <- alpha * op(A) * op(B) + beta * C.
void gemm_columns(Trans ta, Trans tb, double alpha, ConstMatrixView a, ConstMatrixView b,
                  double beta, MatrixView c, std::size_t j0, std::size_t j1) {
  const std::size_t m = c.rows();
  const std::size_t k = ta == Trans::kNo ? a.cols() : a.rows();
  std::vector<double> bcol(tb == Trans::kYes ? k : 0);
  for (std::size_t j = j0; j < j1; ++j) {
    double* cj = c.col(j).data();
    if (beta == 0.0) {
      std::fill(cj, cj + m, 0.0);
    } else if (beta != 1.0) {
      for (std::size_t i = 0; i < m; ++i) cj[i] *= beta;
    }
    const double* bj;
    if (tb == Trans::kNo) {
      bj = b.col(j).data();
    } else {
      for (std::size_t l = 0; l < k; ++l) bcol[l] = b(j, l);
      bj = bcol.data();
    }
    if (ta == Trans::kNo) {
      for (std::size_t l = 0; l < k; ++l) {
        if (bj[l] == 0.0) continue;
        const double s = alpha * bj[l];
        const double* al = a.col(l).data();
        for (std::size_t i = 0; i < m; ++i) cj[i] += s * al[i];
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.col(i).data();
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += ai[l] * bj[l];
        cj[i] += alpha * s;
      }
    }
  }
}

}  // namespace

void set_kernel_threads(unsigned threads) { g_threads = std::max(1u, threads); }
unsigned kernel_threads() { return g_threads; }

void gemm(Trans ta, Trans tb, double alpha, ConstMatrixView a, ConstMatrixView b, double beta,
          MatrixView c, OpCounters* counters) {
  const std::size_t m = ta == Trans::kNo ? a.rows() : a.cols();
  const std::size_t k = ta == Trans::kNo ? a.cols() : a.rows();
  const std::size_t kb = tb == Trans::kNo ? b.rows() : b.cols();
  const std::size_t n = tb == Trans::kNo ? b.cols() : b.rows();
  if (k != kb || c.rows() != m || c.cols() != n) throw DimensionError("gemm: shape mismatch");
  count_gemm(counters, 2ULL * m * n * k, m * k + k * n + 2 * m * n);
  if (m == 0 || n == 0) return;

  const unsigned threads = g_threads;
  const bool parallel = threads > 1 && n >= 2 * threads && m * n * k >= (1u << 18);
  if (!parallel) {
    gemm_columns(ta, tb, alpha, a, b, beta, c, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t j0 = 0; j0 < n; j0 += chunk) {
    const std::size_t j1 = std::min(n, j0 + chunk);
    pool.emplace_back(gemm_columns, ta, tb, alpha, a, b, beta, c, j0, j1);
  }
  for (auto& t : pool) t.join();
}

void gemv(Trans ta, double alpha, ConstMatrixView a, std::span<const double> x, double beta,
          std::span<double> y, OpCounters* counters) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t nx = ta == Trans::kNo ? n : m;
  const std::size_t ny = ta == Trans::kNo ? m : n;
  if (x.size() != nx || y.size() != ny) throw DimensionError("gemv: shape mismatch");
  count_level2(counters, 2ULL * m * n, m * n + nx + 2 * ny);
  if (beta == 0.0) {
    std::ranges::fill(y, 0.0);
  } else if (beta != 1.0) {
    for (double& v : y) v *= beta;
  }
  if (ta == Trans::kNo) {
    for (std::size_t l = 0; l < n; ++l) {
      if (x[l] == 0.0) continue;
      const double s = alpha * x[l];
      const double* al = a.col(l).data();
      for (std::size_t i = 0; i < m; ++i) y[i] += s * al[i];
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double* aj = a.col(j).data();
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += aj[i] * x[i];
      y[j] += alpha * s;
    }
  }
}

void ger(double alpha, std::span<const double> x, std::span<const double> y, MatrixView a,
         OpCounters* counters) {
  if (x.size() != a.rows() || y.size() != a.cols()) throw DimensionError("ger: shape mismatch");
  const std::size_t m = a.rows();
  count_level2(counters, 2ULL * m * a.cols(), 2 * m * a.cols() + m + a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (y[j] == 0.0) continue;
    const double s = alpha * y[j];
    double* aj = a.col(j).data();
    for (std::size_t i = 0; i < m; ++i) aj[i] += s * x[i];
  }
}

void trmm_upper_left(Trans tu, ConstMatrixView u, MatrixView b, OpCounters* counters) {
  const std::size_t r = u.rows();
  if (u.cols() != r || b.rows() != r) throw DimensionError("trmm_upper_left: shape mismatch");
  count_gemm(counters, 1ULL * r * r * b.cols(), r * r / 2 + 2 * r * b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* bj = b.col(j).data();
    if (tu == Trans::kNo) {
      // Row i only reads rows >= i, so top-down is in place.
      for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t l = i; l < r; ++l) s += u(i, l) * bj[l];
        bj[i] = s;
      }
    } else {
      for (std::size_t i = r; i-- > 0;) {
        double s = 0.0;
        const double* ui = u.col(i).data();
        for (std::size_t l = 0; l <= i; ++l) s += ui[l] * bj[l];
        bj[i] = s;
      }
    }
  }
}

void trsm_upper_left(ConstMatrixView u, MatrixView b, OpCounters* counters) {
  const std::size_t r = u.rows();
  if (u.cols() != r || b.rows() != r) throw DimensionError("trsm_upper_left: shape mismatch");
  count_gemm(counters, 1ULL * r * r * b.cols(), r * r / 2 + 2 * r * b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* bj = b.col(j).data();
    for (std::size_t i = r; i-- > 0;) {
      double s = bj[i];
      for (std::size_t l = i + 1; l < r; ++l) s -= u(i, l) * bj[l];
      bj[i] = s / u(i, i);
    }
  }
}

}  // namespace rqrcp

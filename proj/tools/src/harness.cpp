#include "rqrcp_tools/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <utility>

#include "rqrcp/errors.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/qrcp.hpp"
#include "rqrcp/svd.hpp"
#include "rqrcp/truncated.hpp"

namespace rqrcp::tools {
namespace {

constexpr std::pair<Algorithm, std::string_view> kNames[] = {
    {Algorithm::kQrcpLevel2, "qrcp_level2"}, {Algorithm::kQrcpBlocked, "qrcp_blocked"},
    {Algorithm::kQrBlocked, "qr_blocked"},   {Algorithm::kQrPresorted, "qr_presorted"},
    {Algorithm::kSsrqrcp, "ssrqrcp"},        {Algorithm::kRqrcp, "rqrcp"},
    {Algorithm::kRsrqrcp, "rsrqrcp"},        {Algorithm::kTrqrcp, "trqrcp"},
    {Algorithm::kTuxv, "tuxv"},              {Algorithm::kSvd, "svd"},
};

// Pivoted QR whose rank-k truncation is a prefix of the rank-K factorization for k <= K.
bool nested(Algorithm a) {
  switch (a) {
    case Algorithm::kQrcpLevel2:
    case Algorithm::kQrcpBlocked:
    case Algorithm::kQrBlocked:
    case Algorithm::kQrPresorted:
    case Algorithm::kRqrcp:
    case Algorithm::kRsrqrcp:
      return true;
    default:
      return false;
  }
}

Factorization factor(ConstMatrixView a, Algorithm algorithm, std::optional<std::size_t> rank,
                     const RandomizedConfig& config) {
  const std::size_t full = std::min(a.rows(), a.cols());
  const std::size_t k = rank.value_or(full);
  switch (algorithm) {
    case Algorithm::kQrcpLevel2: return qrcp_level2(a, rank);
    case Algorithm::kQrcpBlocked: return qrcp_blocked(a, rank, config.block);
    case Algorithm::kQrBlocked: return qr_blocked(a, rank, config.block);
    case Algorithm::kQrPresorted: return qr_presorted(a, rank, config.block);
    case Algorithm::kSsrqrcp: return ssrqrcp(a, k, config);
    case Algorithm::kRqrcp: return rqrcp(a, k, config);
    case Algorithm::kRsrqrcp: return rsrqrcp(a, k, config);
    case Algorithm::kTrqrcp: return trqrcp(a, k, config).as_factorization();
    default: break;
  }
  throw PreconditionError("not a QR algorithm: " + std::string(algorithm_name(algorithm)));
}

// Leading k reflectors and rows of R.
Factorization prefix(const Factorization& f, std::size_t k) {
  k = std::min(k, f.rank);
  Factorization p;
  p.reflectors = DenseMatrix(f.reflectors.block(0, 0, f.reflectors.rows(), k));
  p.tau.assign(f.tau.begin(), f.tau.begin() + static_cast<std::ptrdiff_t>(k));
  p.r = DenseMatrix(f.r.block(0, 0, k, f.r.cols()));
  p.perm = f.perm;
  p.rank = k;
  return p;
}

double relative(double err, double norm_a) { return norm_a > 0.0 ? err / norm_a : 0.0; }

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& [a, n] : kNames)
    if (n == name) return a;
  return std::nullopt;
}

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [x, n] : kNames)
    if (x == a) return n;
  return "unknown";
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string_view name = list.substr(start, end - start);
    const auto a = parse_algorithm(name);
    if (!a) throw PreconditionError("unknown algorithm '" + std::string(name) + "'");
    out.push_back(*a);
    start = end + 1;
  }
  return out;
}

std::vector<Algorithm> quality_algorithms() {
  return {Algorithm::kQrPresorted, Algorithm::kQrcpBlocked, Algorithm::kRqrcp, Algorithm::kRsrqrcp,
          Algorithm::kTrqrcp,      Algorithm::kTuxv,        Algorithm::kSvd};
}

std::vector<double> ErrorCurve::column(Algorithm a) const {
  for (std::size_t i = 0; i < algorithms.size(); ++i)
    if (algorithms[i] == a) return relerr[i];
  return {};
}

RunResult run_algorithm(ConstMatrixView a, Algorithm algorithm, std::optional<std::size_t> rank,
                        const RandomizedConfig& config, std::size_t tuxv_iterations, bool diagonalize) {
  const std::size_t full = std::min(a.rows(), a.cols());
  const std::size_t k = rank.value_or(full);
  if (k > full) throw PreconditionError("rank exceeds min(rows, cols)");
  const double norm_a = frobenius_norm(a);
  RunResult out;
  if (algorithm == Algorithm::kSvd) {
    SvdResult s = jacobi_svd(a);
    DenseMatrix us(s.u.block(0, 0, s.u.rows(), k));
    for (std::size_t j = 0; j < k; ++j)
      for (double& v : us.col(j)) v *= s.sigma[j];
    out.approximation = DenseMatrix(a.rows(), a.cols());
    gemm(Trans::kNo, Trans::kYes, 1.0, us, s.v.block(0, 0, s.v.rows(), k), 0.0, out.approximation);
    out.rank = k;
    out.relerr = relative(svd_truncation_error(s.sigma, k), norm_a);
    out.orth_error = std::max(orthogonality_error(s.u.block(0, 0, s.u.rows(), k)),
                              orthogonality_error(s.v.block(0, 0, s.v.rows(), k)));
    return out;
  }
  if (algorithm == Algorithm::kTuxv) {
    TuxvFactorization t = tuxv(a, k, config, {.iterations = tuxv_iterations, .diagonalize = diagonalize});
    out.approximation = t.reconstruct();
    out.rank = t.x.rows();
    out.relerr = relative(frobenius_norm(subtract(a, out.approximation)), norm_a);
    out.orth_error = std::max(orthogonality_error(t.u), orthogonality_error(t.v));
    out.counters = t.counters;
    return out;
  }
  Factorization f = factor(a, algorithm, rank, config);
  out.rank = f.rank;
  out.counters = f.counters;
  out.approximation = f.reconstruct();
  out.relerr = relative(frobenius_norm(subtract(a, out.approximation)), norm_a);
  out.orth_error = orthogonality_error(f.thin_q());
  out.pivots.assign(f.perm.forward().begin(), f.perm.forward().begin() + static_cast<std::ptrdiff_t>(f.rank));
  return out;
}

ErrorCurve quality_sweep(ConstMatrixView a, const std::vector<Algorithm>& algorithms,
                         const std::vector<std::size_t>& ranks, const RandomizedConfig& config) {
  const std::size_t full = std::min(a.rows(), a.cols());
  if (ranks.empty()) throw PreconditionError("quality_sweep: no ranks");
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] > full) throw PreconditionError("quality_sweep: rank exceeds min(rows, cols)");
    if (i > 0 && ranks[i] <= ranks[i - 1]) throw PreconditionError("quality_sweep: ranks must be ascending");
  }
  const double norm_a = frobenius_norm(a);
  const std::size_t top = ranks.back();

  ErrorCurve curve;
  curve.ranks = ranks;
  curve.algorithms = algorithms;
  for (Algorithm alg : algorithms) {
    std::vector<double> errs;
    errs.reserve(ranks.size());
    if (alg == Algorithm::kSvd) {
      const SvdResult s = jacobi_svd(a);
      for (std::size_t k : ranks) errs.push_back(relative(svd_truncation_error(s.sigma, k), norm_a));
    } else if (nested(alg)) {
      const Factorization f = factor(a, alg, top, config);
      for (std::size_t k : ranks) errs.push_back(relative(reconstruction_error(a, prefix(f, k)), norm_a));
    } else {
      for (std::size_t k : ranks) errs.push_back(run_algorithm(a, alg, k, config).relerr);
    }
    curve.relerr.push_back(std::move(errs));
  }
  return curve;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(const ErrorCurve& curve, std::ostream& out) {
  out << "rank";
  for (Algorithm a : curve.algorithms) out << ',' << algorithm_name(a);
  out << '\n';
  for (std::size_t r = 0; r < curve.ranks.size(); ++r) {
    out << curve.ranks[r];
    for (const auto& col : curve.relerr) out << ',' << format_double(col[r]);
    out << '\n';
  }
}

std::vector<BenchRow> bench(ConstMatrixView a, const std::vector<Algorithm>& algorithms,
                            std::optional<std::size_t> rank, const RandomizedConfig& config) {
  std::vector<BenchRow> rows;
  for (Algorithm alg : algorithms) {
    const auto start = std::chrono::steady_clock::now();
    RunResult r = run_algorithm(a, alg, rank, config);
    const auto stop = std::chrono::steady_clock::now();
    rows.push_back({alg, r.rank, std::chrono::duration<double>(stop - start).count(), r.relerr, r.counters});
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out, bool timing) {
  out << "algorithm,rank";
  if (timing) out << ",seconds";
  out << ",gemm_flops,level2_flops,bytes_touched,resample_count,relerr\n";
  for (const BenchRow& r : rows) {
    out << algorithm_name(r.algorithm) << ',' << r.rank;
    if (timing) out << ',' << format_double(r.seconds);
    out << ',' << r.counters.gemm_flops << ',' << r.counters.level2_flops << ',' << r.counters.bytes_touched
        << ',' << r.counters.resample_count << ',' << format_double(r.relerr) << '\n';
  }
}

}  // namespace rqrcp::tools

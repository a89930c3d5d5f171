#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rqrcp/counters.hpp"
#include "rqrcp/matrix.hpp"
#include "rqrcp/randomized.hpp"

namespace rqrcp::tools {

enum class Algorithm {
  kQrcpLevel2,
  kQrcpBlocked,
  kQrBlocked,
  kQrPresorted,
  kSsrqrcp,
  kRqrcp,
  kRsrqrcp,
  kTrqrcp,
  kTuxv,
  kSvd,
};

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);
// Comma-separated list; throws PreconditionError on unknown names.
std::vector<Algorithm> parse_algorithm_list(std::string_view list);
// Everything quality_sweep compares, in CSV column order.
std::vector<Algorithm> quality_algorithms();

// Relative Frobenius errors ||A - A_k||_F / ||A||_F; relerr[a][r] belongs to algorithms[a] at
// ranks[r].
struct ErrorCurve {
  std::vector<std::size_t> ranks;
  std::vector<Algorithm> algorithms;
  std::vector<std::vector<double>> relerr;

  // Errors of one algorithm, or an empty vector when it was not swept.
  std::vector<double> column(Algorithm a) const;
};

// Pivoted QR variants are factored once at the largest rank and truncated (their prefixes are
// nested); trqrcp and tuxv are recomputed per rank; the SVD column comes from the singular
// value tail of one Jacobi SVD.
ErrorCurve quality_sweep(ConstMatrixView a, const std::vector<Algorithm>& algorithms,
                         const std::vector<std::size_t>& ranks, const RandomizedConfig& config);

// CSV: header "rank,<algorithm>..." then one row per rank, values with 17 significant digits.
void write_csv(const ErrorCurve& curve, std::ostream& out);

struct BenchRow {
  Algorithm algorithm;
  std::size_t rank = 0;
  double seconds = 0.0;
  double relerr = 0.0;
  OpCounters counters;
};

// Runs each algorithm once (rank = min(m, n) when not given) and records counters and time.
std::vector<BenchRow> bench(ConstMatrixView a, const std::vector<Algorithm>& algorithms,
                            std::optional<std::size_t> rank, const RandomizedConfig& config);

// CSV with the seconds column left out when timing is false, so output is reproducible.
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out, bool timing);

// Runs one algorithm at one rank: the result and its relative error.
struct RunResult {
  std::size_t rank = 0;
  double relerr = 0.0;
  double orth_error = 0.0;
  OpCounters counters;
  std::vector<std::size_t> pivots;  // empty for tuxv and svd
  DenseMatrix approximation;        // rank-k approximation of A in the original column order
};

RunResult run_algorithm(ConstMatrixView a, Algorithm algorithm, std::optional<std::size_t> rank,
                        const RandomizedConfig& config, std::size_t tuxv_iterations = 1,
                        bool diagonalize = false);

// Shortest round-trip formatting used for every CSV value.
std::string format_double(double v);

}  // namespace rqrcp::tools

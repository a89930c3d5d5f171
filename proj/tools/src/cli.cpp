#include "rqrcp_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "rqrcp/analysis.hpp"
#include "rqrcp/errors.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/random.hpp"
#include "rqrcp/synthetic.hpp"
#include "rqrcp_tools/harness.hpp"
#include "rqrcp_tools/io.hpp"

namespace rqrcp::tools {
namespace {

struct Options {
  std::string input;
  std::string synthetic;
  std::string size = "256x256";
  std::uint64_t matrix_seed = 1;
  std::size_t synthetic_rank = 16;

  std::string algo;
  std::optional<std::size_t> rank;
  std::size_t block = 32;
  std::size_t pad = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output;
  bool no_timing = false;

  std::size_t iterations = 1;
  bool diagonalize = false;
  std::string ranks;
  std::string pivots;

  std::size_t trials = 1000;
  std::size_t columns = 64;
  std::string phis;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::size_t> parse_size_list(const std::string& text, char sep, const char* what) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(start, end - start);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw UsageError(std::string("bad ") + what + " '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
    start = end + 1;
  }
  return out;
}

DenseMatrix load_input(const Options& o) {
  if (!o.input.empty() && !o.synthetic.empty()) throw UsageError("--input and --synthetic are exclusive");
  if (!o.input.empty()) return load_matrix(o.input);
  if (o.synthetic.empty()) throw UsageError("one of --input or --synthetic is required");
  const auto dims = parse_size_list(o.size, 'x', "--size");
  if (dims.size() != 2 || dims[0] == 0 || dims[1] == 0) throw UsageError("--size must look like 256x256");
  const std::size_t m = dims[0], n = dims[1];
  RngState rng(o.matrix_seed);
  if (o.synthetic == "image") return synthetic_image(m, n);
  if (o.synthetic == "gaussian") return gaussian_matrix(rng, m, n);
  if (o.synthetic == "lowrank") return exact_rank_matrix(m, n, std::min({o.synthetic_rank, m, n}), rng);
  if (const auto s = parse_spectrum(o.synthetic)) {
    const auto sigma = spectrum_values(*s, std::min(m, n));
    return matrix_with_spectrum(m, n, sigma, rng);
  }
  throw UsageError("unknown --synthetic '" + o.synthetic + "'");
}

RandomizedConfig config_of(const Options& o) {
  return {.block = o.block, .padding = o.pad, .seed = o.seed};
}

// Writes to --output when given, otherwise to out.
template <class F>
void emit(const Options& o, std::ostream& out, F&& write) {
  if (o.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw FileError("cannot write " + o.output);
  write(file);
}

void add_input_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "MatrixMarket (.mtx) or PGM (.pgm) input");
  cmd->add_option("--synthetic", o.synthetic, "geometric, stepped, cliff, gaussian, lowrank or image");
  cmd->add_option("--size", o.size, "Synthetic matrix size, rows x cols")->capture_default_str();
  cmd->add_option("--matrix-seed", o.matrix_seed, "Seed of the synthetic matrix")->capture_default_str();
  cmd->add_option("--synthetic-rank", o.synthetic_rank, "Rank of the lowrank synthetic matrix")
      ->capture_default_str();
}

void add_algorithm_options(CLI::App* cmd, Options& o) {
  cmd->add_option("-k,--rank", o.rank, "Approximation rank k");
  cmd->add_option("-b,--block", o.block, "Block size b")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("-p,--pad", o.pad, "Sample padding p")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Kernel threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  cmd->add_option("--output", o.output, "Output path");
  cmd->add_flag("--no-timing", o.no_timing, "Leave wall-clock columns out of the CSV");
}

int run_single(const Options& o, Algorithm alg, std::ostream& out) {
  const DenseMatrix a = load_input(o);
  const auto start = std::chrono::steady_clock::now();
  RunResult r = run_algorithm(a, alg, o.rank, config_of(o), o.iterations, o.diagonalize);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out << "algorithm,rows,cols,rank,relerr,orth_error,gemm_flops,level2_flops,resample_count";
  if (!o.no_timing) out << ",seconds";
  out << '\n'
      << algorithm_name(alg) << ',' << a.rows() << ',' << a.cols() << ',' << r.rank << ','
      << format_double(r.relerr) << ',' << format_double(r.orth_error) << ',' << r.counters.gemm_flops << ','
      << r.counters.level2_flops << ',' << r.counters.resample_count;
  if (!o.no_timing) out << ',' << format_double(seconds);
  out << '\n';

  if (!o.output.empty()) save_matrix(r.approximation, o.output);
  if (!o.pivots.empty()) {
    std::ofstream file(o.pivots);
    if (!file) throw FileError("cannot write " + o.pivots);
    for (std::size_t p : r.pivots) file << p << '\n';
  }
  return kExitOk;
}

Algorithm single_algorithm(const std::string& name, std::initializer_list<Algorithm> allowed) {
  const auto a = parse_algorithm(name);
  if (!a || std::ranges::find(allowed, *a) == allowed.end())
    throw UsageError("algorithm '" + name + "' is not available here");
  return *a;
}

std::vector<std::size_t> default_ranks(const DenseMatrix& a) {
  std::vector<std::size_t> r;
  const std::size_t top = std::min<std::size_t>(96, std::min(a.rows(), a.cols()));
  for (std::size_t k = 8; k <= top; k += 8) r.push_back(k);
  if (r.empty()) r.push_back(top);
  return r;
}

std::string one_line(std::string s) {
  std::ranges::replace(s, '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized QR with column pivoting: factorizations, quality sweeps and benchmarks", "rqrcp"};
  app.require_subcommand(1);
  Options o;

  auto* factor = app.add_subcommand("factor", "Pivoted QR factorization");
  add_input_options(factor, o);
  add_algorithm_options(factor, o);
  factor->add_option("--algo", o.algo, "qrcp_level2, qrcp_blocked, qr_blocked, qr_presorted, ssrqrcp, rqrcp, rsrqrcp")
      ->default_str("rqrcp");
  factor->add_option("--pivots", o.pivots, "Write the pivot sequence, one index per line");

  auto* truncate = app.add_subcommand("truncate", "Truncated factorization without trailing update");
  add_input_options(truncate, o);
  add_algorithm_options(truncate, o);
  truncate->add_option("--algo", o.algo, "trqrcp, rqrcp, rsrqrcp or ssrqrcp")->default_str("trqrcp");
  truncate->add_option("--pivots", o.pivots, "Write the pivot sequence, one index per line");

  auto* tuxv_cmd = app.add_subcommand("tuxv", "Approximate truncated SVD A ~ U X V^T");
  add_input_options(tuxv_cmd, o);
  add_algorithm_options(tuxv_cmd, o);
  tuxv_cmd->add_option("--iterations", o.iterations, "QR/LQ passes (j_max)")->capture_default_str()->check(CLI::PositiveNumber);
  tuxv_cmd->add_flag("--diagonalize", o.diagonalize, "Replace X by its singular values");

  auto* quality = app.add_subcommand("quality", "Relative error against rank for several algorithms");
  add_input_options(quality, o);
  add_algorithm_options(quality, o);
  quality->add_option("--algo", o.algo, "Comma-separated algorithms (default: all)");
  quality->add_option("--ranks", o.ranks, "Comma-separated ascending ranks (default 8,16,...,96)");

  auto* bench_cmd = app.add_subcommand("bench", "Operation counters and wall time");
  add_input_options(bench_cmd, o);
  add_algorithm_options(bench_cmd, o);
  bench_cmd->add_option("--algo", o.algo, "Comma-separated algorithms")->default_str("qr_blocked,qrcp_blocked,rqrcp,rsrqrcp,trqrcp");

  auto* bias = app.add_subcommand("bias-experiment", "Expected true norm of the sample-selected column");
  bias->add_option("-k,--rank", o.rank, "Rank k (sample rank k + p)");
  bias->add_option("-p,--pad", o.pad, "Sample padding p")->capture_default_str();
  bias->add_option("--seed", o.seed, "Seed")->capture_default_str();
  bias->add_option("--trials", o.trials, "Trials per phi")->capture_default_str();
  bias->add_option("--columns", o.columns, "Number of columns")->capture_default_str();
  bias->add_option("--phis", o.phis, "Comma-separated damping factors (default 0.05..0.95)");
  bias->add_option("--output", o.output, "Output path");

  const unsigned previous_threads = kernel_threads();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        for (const CLI::App* sub : app.get_subcommands()) out << sub->help();
        if (app.get_subcommands().empty()) out << app.help();
        return kExitOk;
      }
      err << "rqrcp: error: " << one_line(e.what()) << '\n';
      return kExitUsage;
    }
    set_kernel_threads(o.threads);

    int code = kExitOk;
    if (factor->parsed()) {
      code = run_single(o, single_algorithm(o.algo.empty() ? "rqrcp" : o.algo,
                                            {Algorithm::kQrcpLevel2, Algorithm::kQrcpBlocked, Algorithm::kQrBlocked,
                                             Algorithm::kQrPresorted, Algorithm::kSsrqrcp, Algorithm::kRqrcp,
                                             Algorithm::kRsrqrcp}),
                        out);
    } else if (truncate->parsed()) {
      if (!o.rank) throw UsageError("truncate needs --rank");
      code = run_single(o, single_algorithm(o.algo.empty() ? "trqrcp" : o.algo,
                                            {Algorithm::kTrqrcp, Algorithm::kRqrcp, Algorithm::kRsrqrcp,
                                             Algorithm::kSsrqrcp}),
                        out);
    } else if (tuxv_cmd->parsed()) {
      if (!o.rank) throw UsageError("tuxv needs --rank");
      code = run_single(o, Algorithm::kTuxv, out);
    } else if (quality->parsed()) {
      const DenseMatrix a = load_input(o);
      const auto algs = o.algo.empty() ? quality_algorithms() : parse_algorithm_list(o.algo);
      const auto ranks = o.ranks.empty() ? default_ranks(a) : parse_size_list(o.ranks, ',', "--ranks");
      const ErrorCurve curve = quality_sweep(a, algs, ranks, config_of(o));
      emit(o, out, [&](std::ostream& s) { write_csv(curve, s); });
    } else if (bench_cmd->parsed()) {
      const DenseMatrix a = load_input(o);
      const auto algs = parse_algorithm_list(o.algo.empty() ? "qr_blocked,qrcp_blocked,rqrcp,rsrqrcp,trqrcp" : o.algo);
      const auto rows = bench(a, algs, o.rank, config_of(o));
      emit(o, out, [&](std::ostream& s) { write_bench_csv(rows, s, !o.no_timing); });
    } else if (bias->parsed()) {
      BiasExperimentConfig cfg;
      cfg.k = o.rank.value_or(32);
      cfg.p = o.pad;
      cfg.trials = o.trials;
      cfg.columns = o.columns;
      cfg.seed = o.seed;
      if (!o.phis.empty()) {
        cfg.phis.clear();
        std::size_t start = 0;
        while (start <= o.phis.size()) {
          std::size_t end = o.phis.find(',', start);
          if (end == std::string::npos) end = o.phis.size();
          const std::string tok = o.phis.substr(start, end - start);
          std::size_t used = 0;
          double v = 0.0;
          try {
            v = std::stod(tok, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (tok.empty() || used != tok.size()) throw UsageError("bad --phis '" + o.phis + "'");
          cfg.phis.push_back(v);
          start = end + 1;
        }
      }
      const auto points = selection_bias_experiment(cfg);
      emit(o, out, [&](std::ostream& s) {
        s << "phi,expectation,standard_error,normalized\n";
        for (const BiasPoint& p : points)
          s << format_double(p.phi) << ',' << format_double(p.expectation) << ','
            << format_double(p.standard_error) << ',' << format_double(p.normalized()) << '\n';
      });
    }
    set_kernel_threads(previous_threads);
    return code;
  } catch (const ParseError& e) {
    err << "rqrcp: parse error: " << one_line(e.what()) << '\n';
    set_kernel_threads(previous_threads);
    return kExitInput;
  } catch (const UnsupportedFormatError& e) {
    err << "rqrcp: unsupported input: " << one_line(e.what()) << '\n';
    set_kernel_threads(previous_threads);
    return kExitInput;
  } catch (const FileError& e) {
    err << "rqrcp: " << one_line(e.what()) << '\n';
    set_kernel_threads(previous_threads);
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "rqrcp: numerical failure: " << one_line(e.what()) << '\n';
    set_kernel_threads(previous_threads);
    return kExitNumerical;
  } catch (const std::exception& e) {
    // Precondition, dimension and domain errors all stem from the requested parameters.
    err << "rqrcp: error: " << one_line(e.what()) << '\n';
    set_kernel_threads(previous_threads);
    return kExitUsage;
  }
}

}  // namespace rqrcp::tools

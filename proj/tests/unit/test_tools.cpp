#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rqrcp/random.hpp"
#include "rqrcp/synthetic.hpp"
#include "rqrcp_tools/cli.hpp"
#include "rqrcp_tools/harness.hpp"
#include "rqrcp_tools/io.hpp"

using namespace rqrcp;
using namespace rqrcp::tools;

namespace {

const std::filesystem::path kData = RQRCP_TEST_DATA_DIR;
const std::filesystem::path kRepoData = RQRCP_REPO_DATA_DIR;

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rqrcp_tools_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::ranges::count(s, '\n')); }

// Block-constant image whose pixels are integers over 255; rank is at most the number of distinct
// column patterns.
DenseMatrix block_image(std::size_t rank) {
  const std::size_t m = 48, n = 40;
  DenseMatrix a(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t bi = i / 12, bj = (j / 10) % rank;
      a(i, j) = static_cast<double>((37 * bi + 61 * bj + 11 * bi * bj) % 256) / 255.0;
    }
  return a;
}

}  // namespace

TEST(MatrixMarket, ArrayIsColumnMajor) {
  DenseMatrix a = load_matrix_market(kData / "array_2x2.mtx");
  ASSERT_EQ(a.rows(), 2u);
  EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(a(1, 0), 2.0);
  EXPECT_EQ(a(0, 1), 3.0);
  EXPECT_EQ(a(1, 1), 4.0);
}

TEST(MatrixMarket, SingleCoordinateEntry) {
  DenseMatrix a = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 5.0\n");
  EXPECT_EQ(a(0, 1), 5.0);
  EXPECT_EQ(a(0, 0), 0.0);
  EXPECT_EQ(a(1, 0), 0.0);
  EXPECT_EQ(a(1, 1), 0.0);
}

TEST(MatrixMarket, SymmetricStorageIsExpanded) {
  DenseMatrix a = load_matrix_market(kData / "coordinate_symmetric.mtx");
  EXPECT_EQ(a(0, 0), 2.5);
  EXPECT_EQ(a(2, 0), -1.0);
  EXPECT_EQ(a(0, 2), -1.0);
  EXPECT_EQ(a(1, 1), 4.0);
  EXPECT_EQ(a(2, 2), 0.0);
}

TEST(MatrixMarket, SkewSymmetricAndInteger) {
  DenseMatrix a =
      parse_matrix_market("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 7\n");
  EXPECT_EQ(a(1, 0), 7.0);
  EXPECT_EQ(a(0, 1), -7.0);
}

TEST(MatrixMarket, RoundTripIsBitwise) {
  RngState rng(11);
  DenseMatrix a = gaussian_matrix(rng, 10, 7);
  a(3, 2) = 1e-300;
  a(4, 5) = -0.1;
  for (auto layout : {MatrixMarketLayout::kArray, MatrixMarketLayout::kCoordinate}) {
    const auto path = temp_path("round_trip.mtx");
    save_matrix_market(a, path, layout);
    DenseMatrix b = load_matrix_market(path);
    ASSERT_EQ(b.rows(), 10u);
    ASSERT_EQ(b.cols(), 7u);
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a(i, j), b(i, j));
  }
}

TEST(MatrixMarket, ParseErrorsCarryLineNumbers) {
  try {
    load_matrix_market(kData / "bad_entry.mtx");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  const auto line_of = [](const std::string& text) {
    try {
      parse_matrix_market(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{999};
  };
  EXPECT_EQ(line_of("%%MatrixMarket matrix array real general\n2\n"), 2u);
  EXPECT_EQ(line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"), 3u);
  EXPECT_EQ(line_of("%%MatrixMarket matrix array real general\n1 2\n1\n"), 4u);
  EXPECT_EQ(line_of("not a header\n"), 1u);
}

TEST(MatrixMarket, UnsupportedFields) {
  EXPECT_THROW(load_matrix_market(kData / "complex.mtx"), UnsupportedFormatError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n"),
               UnsupportedFormatError);
  EXPECT_THROW(parse_matrix_market("%%MatrixMarket vector array real general\n1\n1\n"), UnsupportedFormatError);
  EXPECT_THROW(load_matrix_market(kData / "missing.mtx"), FileError);
}

TEST(Pgm, MaxvalPixelIsOne) {
  DenseMatrix a = parse_pgm("P2\n1 1\n255\n255\n");
  EXPECT_EQ(a(0, 0), 1.0);
  DenseMatrix b = parse_pgm(std::string("P5\n1 1\n65535\n\xff\xff", 15));
  EXPECT_EQ(b(0, 0), 1.0);
}

TEST(Pgm, AsciiWithComments) {
  DenseMatrix a = load_pgm(kData / "ramp.pgm");
  ASSERT_EQ(a.rows(), 2u);
  ASSERT_EQ(a.cols(), 3u);
  EXPECT_EQ(a(0, 0), 0.0);
  EXPECT_EQ(a(0, 2), 0.5);
  EXPECT_EQ(a(1, 0), 0.75);
  EXPECT_EQ(a(1, 2), 1.0);
}

TEST(Pgm, RoundTripWithinQuantization) {
  RngState rng(5);
  DenseMatrix a(8, 8);
  for (std::size_t j = 0; j < 8; ++j)
    for (double& v : a.col(j)) v = rng.next_uniform();
  for (bool binary : {true, false}) {
    DenseMatrix b = parse_pgm(format_pgm(a, 255, binary));
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t i = 0; i < 8; ++i) EXPECT_LE(std::abs(a(i, j) - b(i, j)), 1.0 / 255.0);
  }
  DenseMatrix c = parse_pgm(format_pgm(a, 65535));
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t i = 0; i < 8; ++i) EXPECT_LE(std::abs(a(i, j) - c(i, j)), 0.5 / 65535.0 + 1e-15);
}

TEST(Pgm, SaveClampsAndQuantizes) {
  DenseMatrix a = DenseMatrix::from_rows({{-0.5, 1.5, std::nan("")}});
  DenseMatrix b = parse_pgm(format_pgm(a, 255, false));
  EXPECT_EQ(b(0, 0), 0.0);
  EXPECT_EQ(b(0, 1), 1.0);
  EXPECT_EQ(b(0, 2), 0.0);
}

TEST(Pgm, MalformedHeaders) {
  EXPECT_THROW(parse_pgm("P3\n1 1\n255\n0\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n0 1\n255\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n1 1\n70000\n0\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n2 1\n255\n0\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n1 1\n255\n256\n"), ParseError);
  EXPECT_THROW(parse_pgm(std::string("P5\n2 1\n255\n\x01", 12)), ParseError);
}

TEST(Pgm, RankKReconstructionGivesIdenticalPixels) {
  for (std::size_t rank : {2u, 4u}) {
    const DenseMatrix image = block_image(rank);
    const auto path = temp_path("block.pgm");
    save_pgm(image, path);
    const DenseMatrix loaded = load_pgm(path);
    for (Algorithm alg : {Algorithm::kRqrcp, Algorithm::kTrqrcp, Algorithm::kQrcpBlocked, Algorithm::kTuxv}) {
      RunResult r = run_algorithm(loaded, alg, rank, {.block = 2, .padding = 4, .seed = 9});
      EXPECT_EQ(format_pgm(r.approximation), read_file(path)) << algorithm_name(alg) << " rank " << rank;
    }
  }
}

TEST(Pgm, BundledImageLoads) {
  DenseMatrix a = load_matrix(kRepoData / "gear.pgm");
  EXPECT_EQ(a.rows(), 256u);
  EXPECT_EQ(a.cols(), 256u);
  // The bundled file is the built-in synthetic image, quantized.
  const DenseMatrix ref = synthetic_image(256, 256);
  EXPECT_LE(frobenius_norm(subtract(a, ref)), 0.5 / 255.0 * 256.0);
}

TEST(Harness, AlgorithmNamesRoundTrip) {
  for (Algorithm a : {Algorithm::kQrcpLevel2, Algorithm::kQrcpBlocked, Algorithm::kQrBlocked,
                      Algorithm::kQrPresorted, Algorithm::kSsrqrcp, Algorithm::kRqrcp, Algorithm::kRsrqrcp,
                      Algorithm::kTrqrcp, Algorithm::kTuxv, Algorithm::kSvd})
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_THROW(parse_algorithm_list("rqrcp,magic"), PreconditionError);
}

TEST(Harness, SvdColumnIsThePointwiseMinimum) {
  RngState rng(21);
  const auto sigma = spectrum_values(Spectrum::kGeometric, 96);
  DenseMatrix a = matrix_with_spectrum(128, 96, sigma, rng);
  const ErrorCurve curve = quality_sweep(a, quality_algorithms(), {8, 16, 24, 32, 48}, {.block = 8, .padding = 8, .seed = 1});
  const auto svd = curve.column(Algorithm::kSvd);
  for (std::size_t r = 0; r < curve.ranks.size(); ++r) {
    if (r > 0) EXPECT_LE(svd[r], svd[r - 1]);
    for (const auto& col : curve.relerr) {
      EXPECT_GE(col[r], 0.0);
      EXPECT_LE(svd[r], col[r] + 1e-10);
    }
  }
}

TEST(Harness, PrefixReuseMatchesFreshFactorizations) {
  RngState rng(22);
  DenseMatrix a = gaussian_matrix(rng, 60, 50);
  const RandomizedConfig config{.block = 8, .padding = 4, .seed = 2};
  const std::vector<std::size_t> ranks{5, 13, 30};
  const ErrorCurve curve = quality_sweep(a, {Algorithm::kQrcpBlocked, Algorithm::kQrPresorted}, ranks, config);
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    EXPECT_NEAR(curve.relerr[0][r], run_algorithm(a, Algorithm::kQrcpBlocked, ranks[r], config).relerr, 1e-13);
    EXPECT_NEAR(curve.relerr[1][r], run_algorithm(a, Algorithm::kQrPresorted, ranks[r], config).relerr, 1e-13);
  }
}

TEST(Harness, ExactRankInputGivesTinyErrors) {
  RngState rng(23);
  DenseMatrix a = exact_rank_matrix(80, 64, 12, rng);
  const ErrorCurve curve = quality_sweep(a, quality_algorithms(), {12, 16, 32}, {.block = 8, .padding = 8, .seed = 4});
  for (const auto& col : curve.relerr)
    for (double e : col) EXPECT_LE(e, 1e-10);
}

TEST(Harness, RejectsBadRanks) {
  DenseMatrix a = DenseMatrix::identity(10, 8);
  EXPECT_THROW(quality_sweep(a, {Algorithm::kSvd}, {4, 4}, {}), PreconditionError);
  EXPECT_THROW(quality_sweep(a, {Algorithm::kSvd}, {9}, {}), PreconditionError);
  EXPECT_THROW(quality_sweep(a, {Algorithm::kSvd}, {}, {}), PreconditionError);
}

TEST(Harness, BenchCountersAreDeterministic) {
  RngState rng(24);
  DenseMatrix a = gaussian_matrix(rng, 64, 64);
  const auto algs = parse_algorithm_list("qr_blocked,rqrcp,rsrqrcp,trqrcp");
  std::ostringstream x, y;
  write_bench_csv(bench(a, algs, 16, {.block = 8, .padding = 8, .seed = 3}), x, false);
  write_bench_csv(bench(a, algs, 16, {.block = 8, .padding = 8, .seed = 3}), y, false);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(x.str().substr(0, x.str().find('\n')),
            "algorithm,rank,gemm_flops,level2_flops,bytes_touched,resample_count,relerr");
}

TEST(Cli, QualityCsvIsByteIdentical) {
  const std::vector<std::string> args{"quality", "--synthetic", "geometric", "--size", "64x48", "--ranks",
                                      "8,16,24", "--algo", "qrcp_blocked,rqrcp,trqrcp,svd", "--seed", "3"};
  const CliRun a = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, cli(args).out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  EXPECT_EQ(a.out, cli(threaded).out);
  EXPECT_EQ(a.out, read_file(kData / "quality_geometric_64x48.csv"));
}

TEST(Cli, SubcommandsSucceed) {
  const auto out_pgm = temp_path("cli_out.pgm").string();
  const auto pivots = temp_path("cli_pivots.txt").string();
  CliRun r = cli({"factor", "--synthetic", "image", "--size", "64x64", "-k", "16", "--output", out_pgm,
                  "--pivots", pivots, "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 2u);
  EXPECT_EQ(load_pgm(out_pgm).rows(), 64u);
  EXPECT_EQ(count_lines(read_file(pivots)), 16u);

  r = cli({"truncate", "--input", (kRepoData / "gear.pgm").string(), "-k", "32", "-b", "16"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = cli({"tuxv", "--synthetic", "cliff", "--size", "96x80", "-k", "16", "--iterations", "2", "--diagonalize"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = cli({"bench", "--synthetic", "gaussian", "--size", "64x64", "-k", "16", "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 6u);
  r = cli({"bias-experiment", "--trials", "100", "--phis", "0.2,0.8", "-k", "8", "-p", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 3u);
  r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bias-experiment"), std::string::npos);
}

TEST(Cli, ErrorPathsUseDocumentedExitCodes) {
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases{
      {{}, kExitUsage},
      {{"factor", "--bogus"}, kExitUsage},
      {{"factor"}, kExitUsage},
      {{"factor", "--synthetic", "flat"}, kExitUsage},
      {{"factor", "--synthetic", "geometric", "--size", "12"}, kExitUsage},
      {{"factor", "--synthetic", "geometric", "--size", "20x20", "-k", "21"}, kExitUsage},
      {{"factor", "--synthetic", "geometric", "--size", "20x20", "--algo", "tuxv"}, kExitUsage},
      {{"truncate", "--synthetic", "geometric", "--size", "20x20"}, kExitUsage},
      {{"quality", "--synthetic", "geometric", "--size", "20x20", "--ranks", "8,4"}, kExitUsage},
      {{"bias-experiment", "--trials", "5"}, kExitUsage},
      {{"bias-experiment", "--phis", "0.5,x"}, kExitUsage},
      {{"factor", "--input", (kData / "bad_entry.mtx").string()}, kExitInput},
      {{"factor", "--input", (kData / "complex.mtx").string()}, kExitInput},
      {{"factor", "--input", (kData / "missing.mtx").string()}, kExitInput},
      {{"factor", "--input", (kData / "ramp.txt").string()}, kExitInput},
  };
  for (const Case& c : cases) {
    const CliRun r = cli(c.args);
    std::string joined;
    for (const auto& a : c.args) joined += a + ' ';
    EXPECT_EQ(r.code, c.code) << joined << ": " << r.err;
    EXPECT_EQ(count_lines(r.err), 1u) << joined << ": " << r.err;
    EXPECT_TRUE(r.out.empty()) << joined;
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rqrcp/errors.hpp"
#include "rqrcp/randomized.hpp"
#include "rqrcp/synthetic.hpp"
#include "rqrcp/truncated.hpp"

using namespace rqrcp;
using oracle::kEps;
using oracle::MatrixXd;
using oracle::to_eigen;

namespace {

double relative_difference(const MatrixXd& x, const MatrixXd& ref) {
  return (x - ref).norm() / ref.norm();
}

}  // namespace

TEST(Trqrcp, MatchesRqrcpPivotsAndRows) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    DenseMatrix a = oracle::random_matrix(90, 70, seed + 200);
    const RandomizedConfig cfg{.block = 8, .padding = 8, .seed = seed};
    const std::size_t k = 20 + 4 * seed;
    TruncatedFactorization t = trqrcp(a, k, cfg);
    Factorization r = rqrcp::rqrcp(a, k, cfg);
    ASSERT_EQ(t.rank, k);
    EXPECT_EQ(t.perm, r.perm);
    EXPECT_LE(frobenius_norm(subtract(t.r, r.r)), 100 * kEps * frobenius_norm(a));
  }
}

TEST(Trqrcp, InnerProductPanelInvariant) {
  DenseMatrix a = oracle::random_matrix(80, 60, 3);
  TruncatedFactorization t = trqrcp(a, 24, {.block = 8, .padding = 8, .seed = 1});
  const auto& rf = t.reflectors;
  ASSERT_EQ(rf.W.rows(), 60u);
  ASSERT_EQ(rf.W.cols(), 24u);
  const MatrixXd ap = oracle::permute(to_eigen(a), oracle::forward_of(t.perm));
  const MatrixXd wt = to_eigen(rf.T).transpose() * to_eigen(rf.Y).transpose() * ap;
  EXPECT_LE((to_eigen(rf.W).transpose() - wt).norm(), 100 * kEps * frobenius_norm(a));
  // T really connects the reflectors: I - Y T Y^T == H_1 ... H_k.
  const MatrixXd q = oracle::reflector_product(to_eigen(rf.Y), rf.tau);
  const MatrixXd wy = MatrixXd::Identity(80, 80) - to_eigen(rf.Y) * to_eigen(rf.T) * to_eigen(rf.Y).transpose();
  EXPECT_LE((q - wy).norm(), 1e-13);
}

TEST(Trqrcp, ResidualIsUntouchedTrailingEnergy) {
  DenseMatrix a = oracle::random_matrix(60, 50, 4);
  TruncatedFactorization t = trqrcp(a, 16, {.block = 8, .padding = 8, .seed = 2});
  Factorization f = t.as_factorization();
  // ||A P - Q R||_F equals the norm of the trailing block of Q^T A P.
  const MatrixXd q = oracle::reflector_product(to_eigen(t.reflectors.Y), t.reflectors.tau);
  const MatrixXd qtap = q.transpose() * oracle::permute(to_eigen(a), oracle::forward_of(t.perm));
  EXPECT_NEAR(reconstruction_error(a, f), qtap.bottomRows(44).norm(), 1e-12 * frobenius_norm(a));
}

TEST(Trqrcp, ExactRankReconstruction) {
  RngState gen(5);
  DenseMatrix a = exact_rank_matrix(70, 60, 8, gen);
  TruncatedFactorization t = trqrcp(a, 8, {.block = 8, .padding = 8, .seed = 3});
  EXPECT_LE(reconstruction_error(a, t.as_factorization()), 1e-10 * frobenius_norm(a));
}

TEST(Trqrcp, AvoidsTrailingUpdateFlops) {
  DenseMatrix a = oracle::random_matrix(300, 300, 6);
  const RandomizedConfig cfg{.block = 16, .padding = 8, .seed = 4};
  TruncatedFactorization t = trqrcp(a, 32, cfg);
  Factorization r = rqrcp::rqrcp(a, 32, cfg);
  EXPECT_LT(t.counters.gemm_flops, r.counters.gemm_flops);
}

TEST(Trqrcp, RankDeficientInputResamples) {
  RngState gen(7);
  DenseMatrix a = exact_rank_matrix(60, 50, 12, gen);
  TruncatedFactorization t = trqrcp(a, 40, {.block = 8, .padding = 8, .seed = 3});
  Factorization r = rqrcp::rqrcp(a, 40, {.block = 8, .padding = 8, .seed = 3});
  EXPECT_EQ(t.counters.resample_count, r.counters.resample_count);
  EXPECT_LE(reconstruction_error(a, t.as_factorization()), 1e-10 * frobenius_norm(a));
}

TEST(Trqrcp, Preconditions) {
  DenseMatrix a = oracle::random_matrix(20, 20, 8);
  EXPECT_THROW(trqrcp(a, 21, {}), PreconditionError);
  EXPECT_THROW(trqrcp(a, 4, {.block = 16, .padding = 8, .seed = 0}), PreconditionError);
  EXPECT_THROW(trqrcp(a, 4, {.block = 4, .padding = 0, .seed = 0}), PreconditionError);
}

TEST(LqFactor, LowerTriangularInput) {
  DenseMatrix z = DenseMatrix::from_rows({{2, 0, 0}, {1, 3, 0}, {4, 5, 6}});
  LqFactorization lq = lq_factor(z);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(std::abs(lq.l(i, j)), std::abs(z(i, j)), 1e-14);
      EXPECT_NEAR(std::abs(lq.v(i, j)), i == j ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(LqFactor, RowVector) {
  LqFactorization lq = lq_factor(DenseMatrix::from_rows({{3, 4}}));
  ASSERT_EQ(lq.l.rows(), 1u);
  ASSERT_EQ(lq.l.cols(), 1u);
  EXPECT_NEAR(std::abs(lq.l(0, 0)), 5.0, 1e-15);
  const double s = lq.l(0, 0) / 5.0;
  EXPECT_NEAR(lq.v(0, 0) * s, 0.6, 1e-15);
  EXPECT_NEAR(lq.v(1, 0) * s, 0.8, 1e-15);
}

TEST(LqFactor, RandomReconstructs) {
  DenseMatrix z = oracle::random_matrix(8, 20, 9);
  LqFactorization lq = lq_factor(z);
  EXPECT_LE(frobenius_norm(subtract(multiply(lq.l, transpose(lq.v)), z)), 100 * kEps * frobenius_norm(z));
  EXPECT_LE(orthogonality_error(lq.v), 100 * kEps * 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) EXPECT_EQ(lq.l(i, j), 0.0);
  EXPECT_THROW(lq_factor(DenseMatrix(0, 3)), PreconditionError);
}

TEST(Tuxv, DiagonalMatrix) {
  DenseMatrix a = DenseMatrix::diagonal(std::vector<double>{5, 3, 1});
  const RandomizedConfig cfg{.block = 2, .padding = 1, .seed = 1};
  const auto piv = oracle::forward_of(trqrcp(a, 2, cfg).perm);
  ASSERT_EQ((std::set<std::size_t>{piv[0], piv[1]}), (std::set<std::size_t>{0, 1}));
  TuxvFactorization t = tuxv(a, 2, cfg);
  std::vector<double> d{std::abs(t.x(0, 0)), std::abs(t.x(1, 1))};
  std::ranges::sort(d, std::greater<>());
  EXPECT_NEAR(d[0], 5.0, 1e-8);
  EXPECT_NEAR(d[1], 3.0, 1e-8);
  EXPECT_NEAR(frobenius_norm(subtract(a, t.reconstruct())), 1.0, 1e-8);
}

TEST(Tuxv, ExactRankReconstruction) {
  RngState gen(10);
  DenseMatrix a = exact_rank_matrix(60, 45, 10, gen);
  TuxvFactorization t = tuxv(a, 10, {.block = 8, .padding = 8, .seed = 2});
  EXPECT_LE(frobenius_norm(subtract(a, t.reconstruct())), 1e-10 * frobenius_norm(a));
}

TEST(Tuxv, OneIterationIsTruncatedQlp) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    DenseMatrix a = oracle::random_matrix(64 + 8 * seed, 48, 300 + seed);
    const RandomizedConfig cfg{.block = 8, .padding = 8, .seed = seed};
    const std::size_t k = 16;
    TuxvFactorization t = tuxv(a, k, cfg);
    EXPECT_LE(relative_difference(to_eigen(t.reconstruct()), oracle::qlp_truncation(a, k, cfg)), 1e-9);
  }
}

TEST(Tuxv, ShapesAndOrthogonality) {
  DenseMatrix a = oracle::random_matrix(70, 50, 11);
  for (std::size_t iters : {1u, 2u, 3u}) {
    TuxvFactorization t = tuxv(a, 12, {.block = 8, .padding = 8, .seed = 3}, {.iterations = iters});
    ASSERT_EQ(t.u.rows(), 70u);
    ASSERT_EQ(t.v.rows(), 50u);
    ASSERT_EQ(t.x.rows(), 12u);
    EXPECT_EQ(t.iterations, iters);
    EXPECT_LE(orthogonality_error(t.u), 100 * kEps * 12);
    EXPECT_LE(orthogonality_error(t.v), 100 * kEps * 12);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 12; ++j) {
        if (iters % 2 == 1 && i > j) EXPECT_EQ(t.x(i, j), 0.0);
        if (iters % 2 == 0 && i < j) EXPECT_EQ(t.x(i, j), 0.0);
      }
  }
  EXPECT_THROW(tuxv(a, 12, {}, {.iterations = 0}), PreconditionError);
}

TEST(Tuxv, ErrorNeverWorseThanTrqrcp) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngState gen(seed);
    DenseMatrix a = matrix_with_spectrum(100, 80, spectrum_values(Spectrum::kGeometric, 80), gen);
    const RandomizedConfig cfg{.block = 8, .padding = 8, .seed = seed};
    for (std::size_t k : {8u, 16u, 32u}) {
      const double qr_err = reconstruction_error(a, trqrcp(a, k, cfg).as_factorization());
      const double tuxv_err = frobenius_norm(subtract(a, tuxv(a, k, cfg).reconstruct()));
      EXPECT_LE(tuxv_err, qr_err + 100 * kEps * frobenius_norm(a)) << "seed " << seed << " k " << k;
    }
  }
}

TEST(Tuxv, DiagonalizedXKeepsApproximation) {
  DenseMatrix a = oracle::random_matrix(60, 40, 12);
  const RandomizedConfig cfg{.block = 8, .padding = 8, .seed = 5};
  TuxvFactorization tri = tuxv(a, 10, cfg);
  TuxvFactorization diag = tuxv(a, 10, cfg, {.iterations = 1, .diagonalize = true});
  EXPECT_LE(frobenius_norm(subtract(tri.reconstruct(), diag.reconstruct())), 1e-12 * frobenius_norm(a));
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      if (i != j) EXPECT_EQ(diag.x(i, j), 0.0);
  for (std::size_t i = 0; i + 1 < 10; ++i) EXPECT_GE(diag.x(i, i), diag.x(i + 1, i + 1));
  EXPECT_LE(orthogonality_error(diag.u), 100 * kEps * 10);
  EXPECT_LE(orthogonality_error(diag.v), 100 * kEps * 10);
}

// The raw triangular diagonal oscillates between neighbours; the singular values of X are the
// stable estimate and are what the 15% budget is checked against.
TEST(Tuxv, DiagonalTracksSingularValues) {
  const std::size_t n = 120, k = 24;
  for (double rho : {0.5, 0.7, 0.8}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      RngState gen(13 + seed);
      std::vector<double> sigma(n);
      for (std::size_t j = 0; j < n; ++j) sigma[j] = std::pow(rho, double(j));
      DenseMatrix a = matrix_with_spectrum(n, n, sigma, gen);
      TuxvFactorization t = tuxv(a, k, {.block = 8, .padding = 8, .seed = 6}, {.diagonalize = true});
      for (std::size_t i = 0; i < k; ++i)
        EXPECT_NEAR(t.x(i, i) / sigma[i], 1.0, 0.15) << "rho " << rho << " seed " << seed << " i " << i;
    }
  }
}

#include "rqrcp/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rqrcp/errors.hpp"
#include "rqrcp/householder.hpp"
#include "rqrcp/kernels.hpp"
#include "rqrcp/norms.hpp"

namespace rqrcp {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_problem(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config,
                   std::size_t ell) {
  config.validate();
  if (rank > std::min(a.rows(), a.cols())) throw PreconditionError("rank exceeds min(rows, cols)");
  if (ell > a.rows()) throw PreconditionError("sample rank exceeds the row count");
}

Factorization finish(const DenseMatrix& packed, std::vector<double> tau, std::size_t rank,
                     Permutation perm, const OpCounters& counters) {
  Factorization f;
  f.reflectors = unpack_reflectors(packed, rank);
  tau.resize(rank);
  f.tau = std::move(tau);
  f.r = unpack_r(packed, rank);
  f.perm = std::move(perm);
  f.rank = rank;
  f.counters = counters;
  return f;
}

// Applies the sample's local pivots to columns [offset, n) of the working matrix.
void apply_local(const Permutation& local, std::size_t offset, MatrixView w, Permutation& perm) {
  for (const auto& [pos, piv] : local.swaps()) swap_columns(w, offset + pos, offset + piv);
  perm.append(local, offset);
}

// One panel of the blocked loop shared by rqrcp and rsrqrcp: QR of the r selected columns at
// (d, d) and block reflection of the trailing matrix.
void factor_block(DenseMatrix& w, std::size_t d, std::size_t r, std::vector<double>& tau,
                  OpCounters& counters) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  MatrixView panel = w.block(d, d, m - d, r);
  panel_qr(panel, std::span<double>(tau).subspan(d, r), &counters);
  if (d + r < n) {
    DenseMatrix y = unpack_reflectors(panel, r);
    DenseMatrix t = build_t_matrix(y, std::span<const double>(tau).subspan(d, r), &counters);
    apply_block_reflection(w.block(d, d + r, m - d, n - d - r), y, t, Side::kLeftTranspose,
                           &counters);
  }
}

SampleState resample(ConstMatrixView trailing, std::size_t ell, RngState& rng, double reference,
                     std::size_t block_index, OpCounters& counters) {
  SampleState s = make_sample(trailing, std::min(ell, trailing.rows()), rng, &counters);
  s.ell = s.b.rows();
  s.reference_norm = reference;
  s.block_index = block_index;
  return s;
}

}  // namespace

void RandomizedConfig::validate() const {
  if (block < 1) throw PreconditionError("block size must be at least 1");
  if (padding < 1) throw PreconditionError("padding must be at least 1");
}

SampleState make_sample(ConstMatrixView a, std::size_t ell, RngState& rng, OpCounters* counters) {
  if (ell < 1 || ell > a.rows()) throw PreconditionError("make_sample: need 1 <= ell <= rows");
  DenseMatrix omega = gaussian_matrix(rng, ell, a.rows());
  SampleState s;
  s.b = DenseMatrix(ell, a.cols());
  gemm(Trans::kNo, Trans::kNo, 1.0, omega, a, 0.0, s.b, counters);
  s.ell = ell;
  s.reference_norm = frobenius_norm(s.b);
  return s;
}

PivotSelection select_pivots(SampleState& sample, std::size_t block, OpCounters* counters) {
  const std::size_t ell = sample.ell;
  const std::size_t nlive = sample.live_cols();
  MatrixView live = sample.b.block(0, sample.offset, ell, nlive);
  const std::size_t steps = std::min({block, ell, nlive});
  const double threshold = kEps * sample.reference_norm;

  PivotSelection sel{Permutation(nlive), 0};
  ColumnNorms norms(live);
  std::vector<double> tau(steps);
  std::vector<double> work(nlive);
  std::size_t j = 0;
  for (; j < steps; ++j) {
    const std::size_t p = norms.argmax(j);
    if (norms.norm(p) <= threshold) break;
    swap_columns(live, j, p);
    norms.swap(j, p);
    sel.local.swap(j, p);

    auto x = live.block(j, j, ell - j, 1).col(0);
    tau[j] = form_reflector_in_place(x, counters);
    if (j + 1 < nlive) {
      const double beta = x[0];
      x[0] = 1.0;
      apply_reflector(x, tau[j], live.block(j, j + 1, ell - j, nlive - j - 1), work, counters);
      x[0] = beta;
      std::vector<double> row(nlive - j - 1);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = live(j, j + 1 + c);
      downdate_norms(norms, j + 1, row, live.block(j + 1, j + 1, ell - j - 1, nlive - j - 1));
    }
  }
  sel.count = j;
  sample.factored = j;
  sample.reflectors = unpack_reflectors(live, j);
  tau.resize(j);
  sample.tau = std::move(tau);
  // The reflector tails now live in sample.reflectors; leave S11 clean.
  for (std::size_t c = 0; c < j; ++c)
    for (std::size_t i = c + 1; i < ell; ++i) live(i, c) = 0.0;
  return sel;
}

UpdateStatus sample_update(SampleState& sample, ConstMatrixView r11, ConstMatrixView r12,
                           double scale, OpCounters* counters) {
  const std::size_t r = sample.factored;
  const std::size_t rest = sample.live_cols() - r;
  if (r11.rows() != r || r11.cols() != r || r12.rows() != r || r12.cols() != rest)
    throw DimensionError("sample_update: R blocks do not match the sample partition");
  const double floor = std::pow(kEps, 0.75) * scale;
  for (std::size_t i = 0; i < r; ++i)
    if (!(std::abs(r11(i, i)) >= floor)) return UpdateStatus::kDegenerate;

  DenseMatrix x(r12);
  trsm_upper_left(r11, x, counters);            // R11^{-1} R12
  trmm_upper_left(Trans::kNo, sample.s11(), x, counters);  // S11 R11^{-1} R12
  MatrixView s12 = sample.b.block(0, sample.offset + r, r, rest);
  for (std::size_t j = 0; j < rest; ++j)
    for (std::size_t i = 0; i < r; ++i) s12(i, j) -= x(i, j);
  sample.offset += r;
  sample.factored = 0;
  ++sample.block_index;
  return UpdateStatus::kUpdated;
}

Factorization ssrqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config) {
  const std::size_t ell = rank + config.padding;
  check_problem(a, rank, config, ell);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  OpCounters counters;
  RngState rng(config.seed);

  SampleState sample = make_sample(a, ell, rng, &counters);
  const PivotSelection sel = select_pivots(sample, rank, &counters);
  const std::size_t r = sel.count;

  DenseMatrix w(a);
  Permutation perm(n);
  apply_local(sel.local, 0, w, perm);

  std::vector<double> tau(r);
  MatrixView panel = w.block(0, 0, m, r);
  panel_qr(panel, tau, &counters);
  if (r < n) {
    DenseMatrix y = unpack_reflectors(panel, r);
    DenseMatrix t = build_t_matrix(y, tau, &counters);
    DenseMatrix r12(r, n - r);
    block_reflection_leading_rows(w.block(0, r, m, n - r), y, t, r12, &counters);
    copy(r12, w.block(0, r, r, n - r));
  }
  return finish(w, std::move(tau), r, std::move(perm), counters);
}

Factorization rqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config) {
  const std::size_t ell = config.sample_rank();
  check_problem(a, rank, config, ell);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double scale = frobenius_norm(a);
  OpCounters counters;
  RngState rng(config.seed);

  DenseMatrix w(a);
  Permutation perm(n);
  std::vector<double> tau(rank);
  SampleState sample = make_sample(a, ell, rng, &counters);
  const double reference = sample.reference_norm;

  std::size_t d = 0;
  while (d < rank) {
    const PivotSelection sel = select_pivots(sample, std::min(config.block, rank - d), &counters);
    const std::size_t r = sel.count;
    if (r == 0) break;
    apply_local(sel.local, d, w, perm);
    factor_block(w, d, r, tau, counters);
    d += r;
    if (d >= rank) break;
    const DenseMatrix r11 = unpack_r(w.block(d - r, d - r, r, r), r);
    const UpdateStatus status =
        sample_update(sample, r11, w.block(d - r, d, r, n - d), scale, &counters);
    if (status == UpdateStatus::kDegenerate) {
      ++counters.resample_count;
      sample = resample(w.block(d, d, m - d, n - d), ell, rng, reference, sample.block_index + 1,
                        counters);
    }
  }
  return finish(w, std::move(tau), d, std::move(perm), counters);
}

Factorization rsrqrcp(ConstMatrixView a, std::size_t rank, const RandomizedConfig& config) {
  const std::size_t ell = config.sample_rank();
  check_problem(a, rank, config, ell);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  OpCounters counters;
  RngState rng(config.seed);

  DenseMatrix w(a);
  Permutation perm(n);
  std::vector<double> tau(rank);
  SampleState sample = make_sample(a, ell, rng, &counters);
  const double reference = sample.reference_norm;

  std::size_t d = 0;
  std::size_t block_index = 0;
  while (d < rank) {
    const PivotSelection sel = select_pivots(sample, std::min(config.block, rank - d), &counters);
    const std::size_t r = sel.count;
    if (r == 0) break;
    apply_local(sel.local, d, w, perm);
    factor_block(w, d, r, tau, counters);
    d += r;
    ++block_index;
    if (d >= rank) break;
    sample = resample(w.block(d, d, m - d, n - d), ell, rng, reference, block_index, counters);
  }
  return finish(w, std::move(tau), d, std::move(perm), counters);
}

}  // namespace rqrcp

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rqrcp/counters.hpp"
#include "rqrcp/matrix.hpp"

namespace rqrcp {

// ---------------------------------------------------------------------------------------------
// Chi-squared machinery for sample-norm ratios x = ||Omega a||^2 / ||a||^2.
// ---------------------------------------------------------------------------------------------

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// x ~ chi^2(dof): mean dof, variance 2 dof.
Moments chisq_moments(std::size_t dof);
double chisq_pdf(std::size_t dof, double x);

// gamma(a, z) = int_0^z t^(a-1) e^(-t) dt. Series for z < a + 1, Lentz continued fraction
// for the complement otherwise; about 1e-14 relative.
double lower_incomplete_gamma(double a, double z);
// P(a, z) = gamma(a, z) / Gamma(a).
double regularized_lower_gamma(double a, double z);

// Chi-squared with `dof` degrees of freedom conditioned on x <= tau. tau may be +infinity.
struct TruncatedChiSq {
  std::size_t dof = 1;
  double tau = std::numeric_limits<double>::infinity();
};

// (x/2)^(dof/2) e^(-x/2) / (x * gamma(dof/2, tau/2)) on [0, tau], zero beyond.
// Throws std::domain_error for tau == 0 or x < 0.
double trunc_chisq_pdf(const TruncatedChiSq& d, double x);
// dof * (1 - e^(-tau/2) / f(dof/2, tau/2)) with f(s, z) = s * gamma(s, z) / z^s.
// Zero at tau == 0, increasing in tau, dof as tau -> infinity.
double trunc_chisq_mean(const TruncatedChiSq& d);
double trunc_chisq_variance(const TruncatedChiSq& d);

// Johnson-Lindenstrauss success bound 1 - 2 exp(-ell tau^2 (1 - tau) / 4), 0 < tau < 1/2.
// Throws std::domain_error outside that open interval.
double jl_bound(std::size_t ell, double tau);

// Controlling truncation thresholds after `completed` steps of QRCP on a sample.
//
// `s` is the partially factorized sample in the pivoted frame (rows < completed hold the
// finished triangle), `trailing_norms_sq` the squared true trailing norms ||a_hat_j'||^2 of the
// remaining columns j' = completed .. n-1. Returns, per remaining column,
//   tau_j' = min_i (s_ii^2 - sum_{k=i}^{completed-1} s_kj'^2) / ||a_hat_j'||^2.
// With completed == 0 (or a zero true trailing norm) the threshold is +infinity.
std::vector<double> tau_thresholds(ConstMatrixView s, std::size_t completed,
                                   std::span<const double> trailing_norms_sq);

// ---------------------------------------------------------------------------------------------
// Post hoc selection bias: how good is the column with the largest sample norm?
// ---------------------------------------------------------------------------------------------

std::vector<double> default_phi_grid();  // 0.05, 0.10, ..., 0.95

struct BiasExperimentConfig {
  std::vector<double> phis = default_phi_grid();
  std::size_t k = 32;
  std::size_t p = 8;
  std::size_t trials = 1000;
  std::size_t columns = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BiasPoint {
  double phi = 0.0;
  double expectation = 0.0;     // E(||a_selected||_2)
  double standard_error = 0.0;  // of the expectation estimate
  double optimum = 1.0;         // max_j ||a_j||_2 (always 1 = phi^0)

  double normalized() const { return expectation / optimum; }
};

// For each phi: A has orthogonal columns with ||a_j|| = phi^(j-1); a rank k + p Gaussian sample
// is drawn, the column with the largest sample norm is selected and its true norm averaged.
std::vector<BiasPoint> selection_bias_experiment(const BiasExperimentConfig& config);

}  // namespace rqrcp

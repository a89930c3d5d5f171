#include "rqrcp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rqrcp/errors.hpp"
#include "rqrcp/random.hpp"
#include "rqrcp/randomized.hpp"

namespace rqrcp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-16;
constexpr int kMaxTerms = 100000;

// sum_{n>=0} z^n / ((a+1)(a+2)...(a+n)); gamma(a, z) = z^a e^-z / a * M.
double kummer_series(double a, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= z / (a + n);
    sum += term;
    if (term < sum * kTol) return sum;
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Gamma(a, z) e^z z^-a by modified Lentz continued fraction (z >= a + 1).
double upper_fraction(double a, double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTol) return h;
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

// log gamma(a, z) for z > 0.
double log_lower_gamma(double a, double z) {
  const double log_prefix = a * std::log(z) - z;
  if (z < a + 1.0) return log_prefix + std::log(kummer_series(a, z) / a);
  const double q = std::exp(log_prefix - std::lgamma(a)) * upper_fraction(a, z);
  return std::lgamma(a) + std::log1p(-q);
}

void check_tau(double tau) {
  if (std::isnan(tau) || tau < 0.0) throw std::domain_error("truncation threshold must be >= 0");
}

}  // namespace

Moments chisq_moments(std::size_t dof) {
  if (dof < 1) throw std::domain_error("chi-squared needs dof >= 1");
  return {static_cast<double>(dof), 2.0 * static_cast<double>(dof)};
}

double chisq_pdf(std::size_t dof, double x) {
  if (dof < 1) throw std::domain_error("chi-squared needs dof >= 1");
  if (x < 0.0) return 0.0;
  const double s = 0.5 * static_cast<double>(dof);
  if (x == 0.0) return dof == 1 ? kInf : (dof == 2 ? 0.5 : 0.0);
  return std::exp((s - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(s)) * 0.5;
}

double lower_incomplete_gamma(double a, double z) {
  if (!(a > 0.0) || z < 0.0) throw std::domain_error("lower_incomplete_gamma: need a > 0, z >= 0");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return std::tgamma(a);
  return std::exp(log_lower_gamma(a, z));
}

double regularized_lower_gamma(double a, double z) {
  if (!(a > 0.0) || z < 0.0) throw std::domain_error("regularized_lower_gamma: need a > 0, z >= 0");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  return std::exp(log_lower_gamma(a, z) - std::lgamma(a));
}

double trunc_chisq_pdf(const TruncatedChiSq& d, double x) {
  check_tau(d.tau);
  if (d.dof < 1) throw std::domain_error("truncated chi-squared needs dof >= 1");
  if (d.tau == 0.0) throw std::domain_error("truncated chi-squared density undefined at tau = 0");
  if (x < 0.0) throw std::domain_error("truncated chi-squared density needs x >= 0");
  if (x > d.tau) return 0.0;
  if (std::isinf(d.tau)) return chisq_pdf(d.dof, x);
  const double s = 0.5 * static_cast<double>(d.dof);
  const double log_norm = log_lower_gamma(s, 0.5 * d.tau);
  if (x == 0.0) {
    if (d.dof == 1) return kInf;
    return d.dof == 2 ? 0.5 * std::exp(-log_norm) : 0.0;
  }
  return std::exp(s * std::log(0.5 * x) - 0.5 * x - std::log(x) - log_norm);
}

double trunc_chisq_mean(const TruncatedChiSq& d) {
  check_tau(d.tau);
  if (d.dof < 1) throw std::domain_error("truncated chi-squared needs dof >= 1");
  const double dof = static_cast<double>(d.dof);
  if (d.tau == 0.0) return 0.0;
  if (std::isinf(d.tau)) return dof;
  const double s = 0.5 * dof;
  const double z = 0.5 * d.tau;
  if (z < s + 30.0) return dof * (1.0 - 1.0 / kummer_series(s, z));
  // e^-z / f(s, z) with log f = log s + log gamma(s, z) - s log z
  const double log_f = std::log(s) + log_lower_gamma(s, z) - s * std::log(z);
  return dof * (1.0 - std::exp(-z - log_f));
}

double trunc_chisq_variance(const TruncatedChiSq& d) {
  check_tau(d.tau);
  if (d.dof < 1) throw std::domain_error("truncated chi-squared needs dof >= 1");
  const double dof = static_cast<double>(d.dof);
  if (d.tau == 0.0) return 0.0;
  if (std::isinf(d.tau)) return 2.0 * dof;
  const double s = 0.5 * dof;
  const double z = 0.5 * d.tau;
  if (z < s + 30.0) {
    // E x = 2 gamma(s+1)/gamma(s), E x^2 = 4 gamma(s+2)/gamma(s), via the Kummer sums.
    const double m0 = kummer_series(s, z);
    const double r1 = s / (s + 1.0) * kummer_series(s + 1.0, z) / m0;
    const double r2 = s / (s + 2.0) * kummer_series(s + 2.0, z) / m0;
    return 4.0 * z * z * (r2 - r1 * r1);
  }
  const double g0 = log_lower_gamma(s, z);
  const double mean = 2.0 * std::exp(log_lower_gamma(s + 1.0, z) - g0);
  const double second = 4.0 * std::exp(log_lower_gamma(s + 2.0, z) - g0);
  return second - mean * mean;
}

double jl_bound(std::size_t ell, double tau) {
  if (!(tau > 0.0 && tau < 0.5)) throw std::domain_error("jl_bound: tau must lie in (0, 1/2)");
  return 1.0 - 2.0 * std::exp(-static_cast<double>(ell) * tau * tau * (1.0 - tau) / 4.0);
}

std::vector<double> tau_thresholds(ConstMatrixView s, std::size_t completed,
                                   std::span<const double> trailing_norms_sq) {
  if (completed > std::min(s.rows(), s.cols())) throw DimensionError("tau_thresholds: completed too large");
  const std::size_t rest = s.cols() - completed;
  if (trailing_norms_sq.size() != rest) throw DimensionError("tau_thresholds: norm count mismatch");
  std::vector<double> tau(rest, kInf);
  if (completed == 0) return tau;
  for (std::size_t c = 0; c < rest; ++c) {
    const double denom = trailing_norms_sq[c];
    if (denom == 0.0) continue;
    const std::size_t col = completed + c;
    double tail = 0.0;  // sum_{k=i}^{completed-1} s_k,col^2, accumulated from the bottom
    for (std::size_t i = completed; i-- > 0;) {
      tail += s(i, col) * s(i, col);
      tau[c] = std::min(tau[c], (s(i, i) * s(i, i) - tail) / denom);
    }
  }
  return tau;
}

std::vector<double> default_phi_grid() {
  std::vector<double> phis;
  for (int i = 1; i <= 19; ++i) phis.push_back(0.05 * i);
  return phis;
}

void BiasExperimentConfig::validate() const {
  if (phis.empty()) throw PreconditionError("bias experiment: empty phi grid");
  for (double phi : phis)
    if (!(phi >= 0.0 && phi <= 1.0)) throw PreconditionError("bias experiment: phi must lie in [0, 1]");
  if (k < 1 || p < 1) throw PreconditionError("bias experiment: k and p must be at least 1");
  if (trials < 100) throw PreconditionError("bias experiment: need at least 100 trials");
  if (columns < 1) throw PreconditionError("bias experiment: need at least one column");
  if (k + p > columns) throw PreconditionError("bias experiment: k + p exceeds the row count");
}

std::vector<BiasPoint> selection_bias_experiment(const BiasExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.columns;
  const std::size_t ell = config.k + config.p;
  std::vector<BiasPoint> out;
  out.reserve(config.phis.size());
  for (std::size_t g = 0; g < config.phis.size(); ++g) {
    const double phi = config.phis[g];
    // Orthogonal columns with ||a_j|| = phi^(j-1): a scaled identity.
    DenseMatrix a(n, n);
    double norm = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      a(j, j) = norm;
      norm *= phi;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      RngState rng = RngState::derive(config.seed, g * config.trials + t);
      const SampleState s = make_sample(a, ell, rng);
      std::size_t best = 0;
      double best_norm = -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double bn = norm2(s.b.col(j));
        if (bn > best_norm) {
          best_norm = bn;
          best = j;
        }
      }
      const double chosen = a(best, best);
      sum += chosen;
      sum_sq += chosen * chosen;
    }
    const double trials = static_cast<double>(config.trials);
    const double mean = sum / trials;
    const double var = std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1.0));
    out.push_back({phi, mean, std::sqrt(var / trials), 1.0});
  }
  return out;
}

}  // namespace rqrcp

#include "rqrcp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rqrcp/errors.hpp"

namespace rqrcp {
namespace {

const double kCancellation = std::sqrt(std::numeric_limits<double>::epsilon());

}  // namespace

std::vector<double> column_norms(ConstMatrixView a) {
  std::vector<double> out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = norm2(a.col(j));
  return out;
}

ColumnNorms::ColumnNorms(ConstMatrixView a) : norm_(column_norms(a)), reference_(norm_) {}

std::size_t ColumnNorms::argmax(std::size_t first) const {
  std::size_t best = first;
  for (std::size_t j = first + 1; j < norm_.size(); ++j)
    if (norm_[j] > norm_[best]) best = j;
  return best;
}

void ColumnNorms::swap(std::size_t i, std::size_t j) {
  std::swap(norm_[i], norm_[j]);
  std::swap(reference_[i], reference_[j]);
}

bool ColumnNorms::downdate(std::size_t j, double entry) {
  if (norm_[j] == 0.0) return true;
  const double ratio = std::abs(entry) / norm_[j];
  const double remaining = std::max(0.0, (1.0 - ratio) * (1.0 + ratio));
  const double rel = norm_[j] / reference_[j];
  if (remaining * rel * rel <= kCancellation) return false;
  norm_[j] *= std::sqrt(remaining);
  return true;
}

void ColumnNorms::refresh(std::size_t j, double exact_norm) {
  norm_[j] = exact_norm;
  reference_[j] = exact_norm;
  ++recomputes_;
}

void downdate_norms(ColumnNorms& norms, std::size_t first, std::span<const double> row,
                    ConstMatrixView below) {
  if (below.cols() != row.size() || first + row.size() > norms.size())
    throw DimensionError("downdate_norms: shape mismatch");
  for (std::size_t c = 0; c < row.size(); ++c)
    if (!norms.downdate(first + c, row[c])) norms.refresh(first + c, norm2(below.col(c)));
}

}  // namespace rqrcp

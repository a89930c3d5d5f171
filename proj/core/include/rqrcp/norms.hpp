#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rqrcp/matrix.hpp"

namespace rqrcp {

std::vector<double> column_norms(ConstMatrixView a);

// Running trailing column norms for pivoted QR. Each column keeps the norm observed at its last
// exact computation; downdates that cancel below sqrt(eps) of that reference must be refreshed
// from the actual trailing column.
class ColumnNorms {
 public:
  ColumnNorms() = default;
  explicit ColumnNorms(ConstMatrixView a);

  std::size_t size() const { return norm_.size(); }
  double norm(std::size_t j) const { return norm_[j]; }
  std::span<const double> norms() const { return norm_; }

  // Largest norm over [first, size()); ties go to the lowest index.
  std::size_t argmax(std::size_t first) const;
  void swap(std::size_t i, std::size_t j);

  // Removes |entry|^2 from column j. Returns false when the result has cancelled and the
  // caller must call refresh(j, exact) with a freshly computed norm.
  [[nodiscard]] bool downdate(std::size_t j, double entry);
  void refresh(std::size_t j, double exact_norm);

  std::size_t recompute_count() const { return recomputes_; }

 private:
  std::vector<double> norm_;
  std::vector<double> reference_;
  std::size_t recomputes_ = 0;
};

// Downdates columns [first, first + row.size()) by the entries of a finished row and
// recomputes cancelled ones from `below`, whose column c holds the already-updated trailing
// part of column first + c.
void downdate_norms(ColumnNorms& norms, std::size_t first, std::span<const double> row,
                    ConstMatrixView below);

}  // namespace rqrcp

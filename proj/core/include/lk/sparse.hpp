#pragma once

#include "lk/types.hpp"

#include <Eigen/SparseCore>

#include <utility>
#include <vector>

namespace lk {

/// Compressed sparse row storage. Column indices are strictly increasing
/// within each row.
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr{0};
  std::vector<Index> col;
  std::vector<double> val;

  Index nonzeros() const { return static_cast<Index>(val.size()); }
  Index row_begin(Index i) const { return row_ptr[static_cast<std::size_t>(i)]; }
  Index row_end(Index i) const { return row_ptr[static_cast<std::size_t>(i) + 1]; }
  Index row_size(Index i) const { return row_end(i) - row_begin(i); }

  /// Value at (i, j), or 0 when (i, j) is not stored.
  double coeff(Index i, Index j) const;
  double row_sum(Index i) const;
  Vector row_sums() const;

  Vector multiply(const Vector& x) const;
  Vector transpose_multiply(const Vector& y) const;

  Matrix to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;

  /// Builds from per-row (column, value) lists. Each list must be sorted by
  /// column with no duplicates.
  static CsrMatrix from_rows(Index cols,
                             const std::vector<std::vector<std::pair<Index, double>>>& rows);

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;
};

}  // namespace lk

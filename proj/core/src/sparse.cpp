#include "lk/sparse.hpp"

#include "lk/errors.hpp"

#include <algorithm>

namespace lk {

double CsrMatrix::coeff(Index i, Index j) const {
  const auto first = col.begin() + row_begin(i);
  const auto last = col.begin() + row_end(i);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::row_sum(Index i) const {
  double s = 0.0;
  for (Index p = row_begin(i); p < row_end(i); ++p) s += val[static_cast<std::size_t>(p)];
  return s;
}

Vector CsrMatrix::row_sums() const {
  Vector s(rows);
  for (Index i = 0; i < rows; ++i) s[i] = row_sum(i);
  return s;
}

Vector CsrMatrix::multiply(const Vector& x) const {
  if (x.size() != cols) throw InvalidArgument("CsrMatrix::multiply: size mismatch");
  Vector y(rows);
  for (Index i = 0; i < rows; ++i) {
    double s = 0.0;
    for (Index p = row_begin(i); p < row_end(i); ++p) {
      s += val[static_cast<std::size_t>(p)] * x[col[static_cast<std::size_t>(p)]];
    }
    y[i] = s;
  }
  return y;
}

Vector CsrMatrix::transpose_multiply(const Vector& y) const {
  if (y.size() != rows) throw InvalidArgument("CsrMatrix::transpose_multiply: size mismatch");
  Vector x = Vector::Zero(cols);
  for (Index i = 0; i < rows; ++i) {
    const double yi = y[i];
    for (Index p = row_begin(i); p < row_end(i); ++p) {
      x[col[static_cast<std::size_t>(p)]] += val[static_cast<std::size_t>(p)] * yi;
    }
  }
  return x;
}

Matrix CsrMatrix::to_dense() const {
  Matrix d = Matrix::Zero(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index p = row_begin(i); p < row_end(i); ++p) {
      d(i, col[static_cast<std::size_t>(p)]) = val[static_cast<std::size_t>(p)];
    }
  }
  return d;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(val.size());
  for (Index i = 0; i < rows; ++i) {
    for (Index p = row_begin(i); p < row_end(i); ++p) {
      triplets.emplace_back(i, col[static_cast<std::size_t>(p)], val[static_cast<std::size_t>(p)]);
    }
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

CsrMatrix CsrMatrix::from_rows(Index cols,
                               const std::vector<std::vector<std::pair<Index, double>>>& rows) {
  CsrMatrix m;
  m.rows = static_cast<Index>(rows.size());
  m.cols = cols;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  m.row_ptr.reserve(rows.size() + 1);
  m.col.reserve(total);
  m.val.reserve(total);
  for (const auto& r : rows) {
    Index prev = -1;
    for (const auto& [j, v] : r) {
      if (j <= prev || j >= cols) throw InvalidArgument("CsrMatrix::from_rows: unsorted or out-of-range column");
      prev = j;
      m.col.push_back(j);
      m.val.push_back(v);
    }
    m.row_ptr.push_back(static_cast<Index>(m.col.size()));
  }
  return m;
}

}  // namespace lk

#pragma once

#include <map>
#include <vector>

#include "lorentzcg/half_int.hpp"

namespace lorentzcg {

/// Complex sparse matrix over truncated bases.  Rows hold ordered maps so
/// iteration (and hence serialization) is deterministic.  Exact zeros are
/// never stored.
class SparseOperator {
public:
  SparseOperator() = default;
  SparseOperator(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

  static SparseOperator identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, Complex v);
  Complex at(int r, int c) const;
  const std::map<int, Complex>& row(int r) const { return data_[r]; }

  SparseOperator operator+(const SparseOperator& o) const;
  SparseOperator operator-(const SparseOperator& o) const;
  SparseOperator operator*(const SparseOperator& o) const;
  SparseOperator scaled(Complex s) const;
  SparseOperator dagger() const;

  std::vector<Complex> apply(const std::vector<Complex>& x) const;
  double max_abs() const;

  /// Largest |entry| over positions where both masks hold (row mask, col mask).
  double max_abs_masked(const std::vector<bool>& row_mask, const std::vector<bool>& col_mask) const;

private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::map<int, Complex>> data_;
};

inline SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

} // namespace lorentzcg

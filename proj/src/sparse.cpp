#include "lorentzcg/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace lorentzcg {

SparseOperator SparseOperator::identity(int n) {
  SparseOperator out(n, n);
  for (int i = 0; i < n; ++i) out.data_[i][i] = 1.0;
  return out;
}

void SparseOperator::add(int r, int c, Complex v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("SparseOperator::add: index out of bounds");
  if (v == Complex{}) return;
  auto& row = data_[r];
  auto it = row.find(c);
  if (it == row.end()) {
    row.emplace(c, v);
  } else {
    it->second += v;
    if (it->second == Complex{}) row.erase(it);
  }
}

Complex SparseOperator::at(int r, int c) const {
  const auto& row = data_[r];
  auto it = row.find(c);
  return it == row.end() ? Complex{} : it->second;
}

SparseOperator SparseOperator::operator+(const SparseOperator& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("SparseOperator: shape mismatch in +");
  SparseOperator out = *this;
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : o.data_[r]) out.add(r, c, v);
  return out;
}

SparseOperator SparseOperator::operator-(const SparseOperator& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("SparseOperator: shape mismatch in -");
  SparseOperator out = *this;
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : o.data_[r]) out.add(r, c, -v);
  return out;
}

SparseOperator SparseOperator::operator*(const SparseOperator& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("SparseOperator: shape mismatch in *");
  SparseOperator out(rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (const auto& [k, v] : data_[r])
      for (const auto& [c, w] : o.data_[k]) out.add(r, c, v * w);
  return out;
}

SparseOperator SparseOperator::scaled(Complex s) const {
  SparseOperator out(rows_, cols_);
  if (s == Complex{}) return out;
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) out.data_[r][c] = s * v;
  return out;
}

SparseOperator SparseOperator::dagger() const {
  SparseOperator out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) out.data_[c][r] = std::conj(v);
  return out;
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("SparseOperator::apply: vector size mismatch");
  std::vector<Complex> y(rows_, Complex{});
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) y[r] += v * x[c];
  return y;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& row : data_)
    for (const auto& [c, v] : row) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::max_abs_masked(const std::vector<bool>& row_mask,
                                      const std::vector<bool>& col_mask) const {
  double m = 0.0;
  for (int r = 0; r < rows_; ++r) {
    if (!row_mask[r]) continue;
    for (const auto& [c, v] : data_[r])
      if (col_mask[c]) m = std::max(m, std::abs(v));
  }
  return m;
}

} // namespace lorentzcg

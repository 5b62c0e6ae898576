#include "lorentzcg/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lorentzcg {

namespace {

double norm2(const std::vector<Complex>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

struct Givens {
  double c;
  Complex s;
};

// Rotation with [[c, s], [-conj(s), c]] * (f, g)^T = (r, 0)^T, c real.
Givens make_givens(Complex f, Complex g) {
  if (g == Complex{}) return {1.0, Complex{}};
  if (f == Complex{}) return {0.0, std::conj(g) / std::abs(g)};
  const double d = std::hypot(std::abs(f), std::abs(g));
  const Complex phase = f / std::abs(f);
  return {std::abs(f) / d, phase * std::conj(g) / d};
}

// Eigenvalues of [[a, b], [c, d]].
std::pair<Complex, Complex> eig2(Complex a, Complex b, Complex c, Complex d) {
  const Complex t = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  return {t + disc, t - disc};
}

} // namespace

std::vector<Complex> Tridiagonal::apply(const std::vector<Complex>& x) const {
  const int n = size();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("Tridiagonal::apply: size mismatch");
  std::vector<Complex> y(n);
  for (int i = 0; i < n; ++i) {
    Complex v = diag[i] * x[i];
    if (i > 0) v += sub[i - 1] * x[i - 1];
    if (i + 1 < n) v += sup[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

Complex Tridiagonal::trace() const {
  Complex t{};
  for (const auto& v : diag) t += v;
  return t;
}

double Tridiagonal::max_abs() const {
  double m = 0.0;
  for (const auto& v : diag) m = std::max(m, std::abs(v));
  for (const auto& v : sub) m = std::max(m, std::abs(v));
  for (const auto& v : sup) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::vector<Complex>> Tridiagonal::dense() const {
  const int n = size();
  std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) {
    a[i][i] = diag[i];
    if (i > 0) a[i][i - 1] = sub[i - 1];
    if (i + 1 < n) a[i][i + 1] = sup[i];
  }
  return a;
}

std::vector<Complex> eigvec_by_recurrence(const Tridiagonal& T, Complex k, double tol) {
  const int n = T.size();
  for (const auto& c : T.sup)
    if (c == Complex{})
      throw std::domain_error("eigvec_by_recurrence: zero superdiagonal entry");

  std::vector<Complex> x(n);
  x[0] = 1.0;
  if (n > 1) x[1] = -(T.diag[0] - k) / T.sup[0];
  for (int i = 1; i + 1 < n; ++i)
    x[i + 1] = -(T.sub[i - 1] * x[i - 1] + (T.diag[i] - k) * x[i]) / T.sup[i];

  std::vector<Complex> r = T.apply(x);
  for (int i = 0; i < n; ++i) r[i] -= k * x[i];
  const double scale = std::max(1.0, T.max_abs());
  const double residual = norm2(r) / norm2(x);
  if (residual > tol * scale) throw NotAnEigenvalue(residual);
  return x;
}

int geometric_multiplicity(const Tridiagonal& T, Complex k) {
  const int n = T.size();
  auto a = T.dense();
  for (int i = 0; i < n; ++i) a[i][i] -= k;

  double max_entry = 0.0;
  for (const auto& row : a)
    for (const auto& v : row) max_entry = std::max(max_entry, std::abs(v));
  const double threshold = 1e-8 * max_entry;

  int rank = 0;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int pivot = row;
    for (int r = row + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= threshold) continue;
    std::swap(a[pivot], a[row]);
    for (int r = row + 1; r < n; ++r) {
      const Complex f = a[r][col] / a[row][col];
      for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[row][cc];
    }
    ++rank;
    ++row;
  }
  return n - rank;
}

std::vector<Complex> eig_dense(std::vector<std::vector<Complex>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return {};
  if (n > 64) throw std::domain_error("eig_dense: n exceeds the desk-scale cap of 64");
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("eig_dense: not square");

  double norm = 0.0;
  for (const auto& row : a)
    for (const auto& v : row) norm = std::max(norm, std::abs(v));
  if (norm == 0.0) return std::vector<Complex>(n, Complex{});

  // Householder reduction to upper Hessenberg form.
  for (int k = 0; k + 2 < n; ++k) {
    double col_scale = 0.0;
    for (int i = k + 1; i < n; ++i) col_scale += std::norm(a[i][k]);
    col_scale = std::sqrt(col_scale);
    if (col_scale == 0.0) continue;
    Complex alpha = a[k + 1][k];
    const Complex phase = (alpha == Complex{}) ? Complex(1.0) : alpha / std::abs(alpha);
    const Complex sigma = -phase * col_scale;
    std::vector<Complex> v(n, Complex{});
    v[k + 1] = alpha - sigma;
    for (int i = k + 2; i < n; ++i) v[i] = a[i][k];
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    // A <- (I - 2 v v^H / |v|^2) A (I - 2 v v^H / |v|^2)
    for (int c = 0; c < n; ++c) {
      Complex dot{};
      for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a[i][c];
      dot *= 2.0 / vnorm2;
      for (int i = k + 1; i < n; ++i) a[i][c] -= dot * v[i];
    }
    for (int r = 0; r < n; ++r) {
      Complex dot{};
      for (int i = k + 1; i < n; ++i) dot += a[r][i] * v[i];
      dot *= 2.0 / vnorm2;
      for (int i = k + 1; i < n; ++i) a[r][i] -= dot * std::conj(v[i]);
    }
  }

  // Shifted QR on the Hessenberg matrix.
  const double eps = 2.0 * std::numeric_limits<double>::epsilon();
  std::vector<Complex> eigs;
  eigs.reserve(n);
  int hi = n - 1;
  int iters_in_block = 0;
  int total_iters = 0;
  const int cap = 100 * n;

  auto subdiag_negligible = [&](int i) {
    const double tol = eps * (std::abs(a[i - 1][i - 1]) + std::abs(a[i][i])) + eps * norm;
    return std::abs(a[i][i - 1]) <= tol;
  };

  while (hi >= 0) {
    if (hi == 0) {
      eigs.push_back(a[0][0]);
      break;
    }
    // Deflate trailing 1x1 / 2x2 blocks.
    if (subdiag_negligible(hi)) {
      eigs.push_back(a[hi][hi]);
      --hi;
      iters_in_block = 0;
      continue;
    }
    if (hi == 1 || subdiag_negligible(hi - 1)) {
      const auto [e1, e2] = eig2(a[hi - 1][hi - 1], a[hi - 1][hi], a[hi][hi - 1], a[hi][hi]);
      eigs.push_back(e1);
      eigs.push_back(e2);
      hi -= 2;
      iters_in_block = 0;
      continue;
    }
    // Active block [lo..hi].
    int lo = hi - 1;
    while (lo > 0 && !subdiag_negligible(lo)) --lo;

    if (++total_iters > cap)
      throw std::runtime_error("eig_dense: QR iteration cap exceeded");

    Complex shift{};
    if (iters_in_block >= 10) {
      const auto [e1, e2] = eig2(a[hi - 1][hi - 1], a[hi - 1][hi], a[hi][hi - 1], a[hi][hi]);
      shift = (std::abs(e1 - a[hi][hi]) < std::abs(e2 - a[hi][hi])) ? e1 : e2;
    }
    ++iters_in_block;

    // Explicit shifted QR step: factor (H - shift I) with Givens rotations,
    // then reassemble R Q + shift I.
    const int m = hi - lo + 1;
    std::vector<Givens> rot(m - 1);
    for (int i = lo; i <= hi; ++i) a[i][i] -= shift;
    for (int kk = lo; kk < hi; ++kk) {
      const Givens g = make_givens(a[kk][kk], a[kk + 1][kk]);
      rot[kk - lo] = g;
      for (int c = kk; c <= hi; ++c) {
        const Complex t1 = a[kk][c], t2 = a[kk + 1][c];
        a[kk][c] = g.c * t1 + g.s * t2;
        a[kk + 1][c] = -std::conj(g.s) * t1 + g.c * t2;
      }
    }
    for (int kk = lo; kk < hi; ++kk) {
      const Givens g = rot[kk - lo];
      for (int r = lo; r <= std::min(kk + 1, hi); ++r) {
        const Complex t1 = a[r][kk], t2 = a[r][kk + 1];
        a[r][kk] = t1 * g.c + t2 * std::conj(g.s);
        a[r][kk + 1] = -t1 * g.s + t2 * g.c;
      }
    }
    for (int i = lo; i <= hi; ++i) a[i][i] += shift;
  }
  return eigs;
}

std::vector<Complex> dense_eig_oracle(const Tridiagonal& T) { return eig_dense(T.dense()); }

} // namespace lorentzcg

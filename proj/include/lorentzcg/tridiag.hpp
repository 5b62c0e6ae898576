#pragma once

#include <stdexcept>
#include <vector>

#include "lorentzcg/half_int.hpp"

namespace lorentzcg {

/// Complex tridiagonal matrix; sub holds a_2..a_n, diag b_1..b_n,
/// sup c_1..c_{n-1}.
struct Tridiagonal {
  std::vector<Complex> sub, diag, sup;

  Tridiagonal() = default;
  explicit Tridiagonal(int n) : sub(n > 0 ? n - 1 : 0), diag(n), sup(n > 0 ? n - 1 : 0) {
    if (n < 1) throw std::domain_error("Tridiagonal: n must be >= 1");
  }

  int size() const { return static_cast<int>(diag.size()); }
  std::vector<Complex> apply(const std::vector<Complex>& x) const;
  Complex trace() const;
  double max_abs() const;
  std::vector<std::vector<Complex>> dense() const;
};

struct NotAnEigenvalue : std::runtime_error {
  double residual;
  explicit NotAnEigenvalue(double r)
      : std::runtime_error("eigvec_by_recurrence: residual " + std::to_string(r) +
                           " exceeds tolerance; k is not an eigenvalue"),
        residual(r) {}
};

/// Eigenvector for eigenvalue k via the three-term recurrence with x_1 = 1.
/// Requires all superdiagonal entries nonzero.  Throws NotAnEigenvalue
/// (carrying the relative residual) when the closing equation fails.
std::vector<Complex> eigvec_by_recurrence(const Tridiagonal& T, Complex k, double tol = 1e-9);

/// dim ker(T - k I) by row reduction with partial pivoting; pivots below
/// 1e-8 times the largest entry of T - kI count as zero.
int geometric_multiplicity(const Tridiagonal& T, Complex k);

/// Eigenvalues (with algebraic multiplicity) of a general dense complex
/// matrix, n <= 64: Householder reduction to Hessenberg form, then QR
/// iteration (10 unshifted sweeps per block, Wilkinson shifts after,
/// iteration cap 100 n).  Throws std::runtime_error on non-convergence.
std::vector<Complex> eig_dense(std::vector<std::vector<Complex>> a);

/// Eigenvalue oracle for tridiagonal input (already Hessenberg).
std::vector<Complex> dense_eig_oracle(const Tridiagonal& T);

} // namespace lorentzcg

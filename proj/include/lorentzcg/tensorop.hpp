#pragma once

#include <string>
#include <vector>

#include "lorentzcg/coupling.hpp"
#include "lorentzcg/half_int.hpp"
#include "lorentzcg/repr.hpp"
#include "lorentzcg/sparse.hpp"

namespace lorentzcg {

/// Components T_mu of an irreducible tensor operator transforming as
/// F^A_gamma, mapping a truncated source module into a truncated target
/// module.  Matrix elements vanish unless m' = m + mu and |j' - j| <= gamma.
struct TensorOperator {
  FiniteLabel finite;
  TruncatedModule source, target;
  std::vector<std::pair<HalfInt, SparseOperator>> components; // mu ascending

  const SparseOperator* component(HalfInt mu) const;
};

/// Max interior deviation of [X, T_mu] - sum_nu <e^nu, X e_mu> T_nu over all
/// components, where the bracket coefficients are the F^A_gamma matrix
/// elements of X.  Interior excludes gamma + 1 levels below each truncation.
double intertwiner_residual(const TensorOperator& T, Generator gen);

/// The Wigner-Eckart projection onto V_{Lambda,P} inside
/// F^A_gamma (x) V_{lambda,rho}: matrix elements are
/// B{(Lambda,P) j' | gamma_A; (lambda,rho) j} <j',m'|gamma,mu; j,m>, i.e. the
/// reduced element is normalized to one.  Throws when the target pair does
/// not appear in the decomposition (the operator would vanish identically).
TensorOperator wigner_eckart_projection(const CouplingProblem& problem, const EigenPair& target,
                                        HalfInt j_cut);

struct ReducedElement {
  Complex value;  // averaged ratio of matrix elements to the factorized form
  double scatter; // max relative deviation across samples
  int samples;
};

/// Reduced matrix element of T against the factorization encoded in the
/// table.  Samples every interior matrix element with a non-negligible
/// factorized denominator; throws when no sample survives.
ReducedElement reduced_matrix_element(const TensorOperator& T, const CGTable& table);

/// The two half-spin ladder tensor operators at a given source label:
/// T lowers (lambda, rho) by (1/2, A/2), Ttilde raises by the same step.
struct JSOperators {
  IrrepLabel source;
  int A;
  TensorOperator T, Ttilde;
};

/// Matrix elements of the ladder pair; requires rho^2 != lambda^2.
JSOperators js_operators(const IrrepLabel& label, int A, HalfInt j_cut);

/// su(2) generators reassembled from ladder bilinears,
/// M0 = -(T_- Ttilde_+ + T_+ Ttilde_-)/2 and M+- = +-T_+- Ttilde_+-,
/// compared entrywise against (J - iA K)/2 on interior states.
struct JSReconstruction {
  SparseOperator M0, Mp, Mm;
  double residual;
};

JSReconstruction js_reconstruct(const IrrepLabel& label, int A, HalfInt j_cut);

/// Interior residuals of the ladder commutation relations: the cross pairs
/// equal delta^{AB} (with sign), every other bracket vanishes.
struct JSCommutators {
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual;
};

JSCommutators js_commutators(const IrrepLabel& label, int A, int B, HalfInt j_cut);

/// (J - iA K)/2 component matrices on a truncated module.
SparseOperator m_generator(const TruncatedModule& module, int A, int component /* 0, +1, -1 */);

} // namespace lorentzcg

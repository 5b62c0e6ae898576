#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lorentzcg/half_int.hpp"
#include "lorentzcg/index_sets.hpp"
#include "lorentzcg/repr.hpp"
#include "lorentzcg/sparse.hpp"
#include "lorentzcg/tridiag.hpp"

namespace lorentzcg {

/// F^A_gamma (x) V_{lambda,rho} with gamma >= 1/2 and the infinite factor not
/// finite-dimensional.
struct CouplingProblem {
  FiniteLabel finite;
  IrrepLabel infinite;

  CouplingProblem(FiniteLabel f, IrrepLabel v);
};

/// Casimir eigenvalue pair (Lambda, P): c1 = i Lambda P, c2 = Lambda^2 + P^2 - 1.
struct EigenPair {
  HalfInt Lambda;
  Complex P;

  Complex c1() const { return Complex(0.0, 1.0) * Lambda.value() * P; }
  Complex c2() const { return Complex(Lambda.value()) * Lambda.value() + P * P - 1.0; }
};

/// Truncated product module with the total-generator action and the coupled
/// (J, M) basis.  The truncation is exact on states with j at least two
/// levels below j_cut.
class ProductSpace {
public:
  ProductSpace(const CouplingProblem& problem, HalfInt j_cut);

  const CouplingProblem& problem() const { return problem_; }
  const TruncatedModule& module() const { return module_; }
  const std::vector<HalfInt>& mus() const { return mus_; }
  int dim() const { return static_cast<int>(mus_.size()) * module_.dim(); }
  int index(int mu_idx, int v_idx) const { return mu_idx * module_.dim() + v_idx; }

  const SparseOperator& total_generator(Generator g) const;
  const SparseOperator& casimir1() const { return c1_; }
  const SparseOperator& casimir2() const { return c2_; }

  /// |(j) J, M> expanded over the product basis.
  std::vector<Complex> coupled_vector(HalfInt j, HalfInt J, HalfInt M) const;

private:
  CouplingProblem problem_;
  TruncatedModule module_;
  std::vector<HalfInt> mus_;
  SparseOperator gens_[6];
  SparseOperator c1_, c2_;
};

/// J-eigenspace with both Casimir restrictions (tridiagonal in j).
struct VJBlock {
  HalfInt J;
  std::vector<HalfInt> omega;
  Tridiagonal c1, c2;
};

/// Both readings of the ambiguous diagonal factor in the closed-form second
/// Casimir block: J(J+1) - j(j+1) versus J(J+1) - j(J+1).  The compositional
/// construction is the source of truth; the closed form is a cross-check that
/// records which reading survives.
enum class C2Diagonal { CoupledMinusSource, CoupledMinusMixed };

/// Block built compositionally: total generators on the coupled basis, then
/// the Casimir bilinears.  Asserts tridiagonality to 1e-12 of scale.
VJBlock casimir_block(const CouplingProblem& problem, HalfInt J);
VJBlock casimir_block(const ProductSpace& space, HalfInt J);

/// Block from the printed closed-form entries.
VJBlock casimir_block_closed_form(const CouplingProblem& problem, HalfInt J,
                                  C2Diagonal reading = C2Diagonal::CoupledMinusSource);

/// True iff rho + A lambda is NOT an integer in the open interval
/// (-2 gamma, 2 gamma); exactly then the Casimirs diagonalise simultaneously.
bool is_decomposable(const CouplingProblem& problem);

/// The pairs (lambda + nu, rho + A nu), nu in M_gamma, restricted to
/// J >= |lambda + nu|; nu ascending.  Requires a decomposable problem.
std::vector<EigenPair> eigenpair_set(const CouplingProblem& problem, HalfInt J);

/// Coupled basis vector |(j) J, M> over the product basis of the given space.
std::vector<Complex> coupled_basis_vector(const ProductSpace& space, HalfInt j, HalfInt J,
                                          HalfInt M);

/// Closed-form inverse coefficient B{(Lambda,P) J | (1/2)_A; (lambda,rho) j}
/// for the half-spin coupling; nu_sign = -1 selects (lambda-1/2, rho-A/2).
Complex half_coupling_B(const IrrepLabel& label, int A, int nu_sign, HalfInt J, HalfInt j);

struct CGColumn {
  EigenPair pair;
  HalfInt nu;                  // pair = (lambda + nu, rho + A nu)
  std::vector<Complex> coeffs; // over omega, bilinear sum of squares = 1
  double residual;             // worst relative eigen-residual against c1 and c2
};

struct CGBlock {
  HalfInt J;
  std::vector<HalfInt> omega;
  std::vector<CGColumn> columns;              // nu ascending
  std::vector<std::vector<Complex>> inverse;  // row per column (same order), entries over omega
  double inverse_residual;                    // max |A B - 1| entry

  const CGColumn* find(HalfInt nu) const;
  std::optional<int> omega_index(HalfInt j) const;
};

struct CGTable {
  CouplingProblem problem;
  HalfInt J_max;
  std::vector<CGBlock> blocks; // J ascending from jset_min

  const CGBlock* block(HalfInt J) const;

  /// A{gamma_A; (lambda,rho) j | (lambda+nu, rho+A nu) J}.
  Complex coefficient(HalfInt nu, HalfInt J, HalfInt j) const;
  /// B{(lambda+nu, rho+A nu) J | gamma_A; (lambda,rho) j}.
  Complex inverse_coefficient(HalfInt nu, HalfInt J, HalfInt j) const;
};

/// Clebsch-Gordan decomposition of F^A_gamma (x) V_{lambda,rho} for all
/// J <= J_max.  Columns are eigenvectors of the c1 block from the three-term
/// recurrence, verified against the c2 block, bilinear-normalized, with the
/// phase convention: gamma = 1/2 matches the closed-form half-coupling table;
/// larger gamma anchors each (Lambda, P) tower at its lowest J and continues
/// the sign upward by transporting with the total raising boost.  Block
/// construction runs on `threads` workers; output is identical for any count.
CGTable decompose(const CouplingProblem& problem, HalfInt J_max, int threads = 1);

/// Ratio of stretched-j inverse coefficients between the (Lambda+1, P+A) and
/// (Lambda, P) columns, paired with its closed-form sqrt expression.  Their
/// quotient is the per-column constant independent of J.
std::pair<Complex, Complex> cg_ratio_check(const CGTable& table, HalfInt nu, HalfInt J);
std::pair<Complex, Complex> cg_ratio_check(const CouplingProblem& problem, HalfInt Lambda,
                                           Complex P, HalfInt J);

struct GeneralCouplingResult {
  bool decomposable;
  std::vector<EigenPair> pairs; // multiset over the (nu1, nu2) grid
};

/// (gamma1, gamma2) (x) V_{lambda,rho} decomposability and eigenvalue pairs
/// (lambda + nu1 + nu2, rho - nu1 + nu2); pairs need not be distinct.
GeneralCouplingResult general_coupling(HalfInt gamma1, HalfInt gamma2, const IrrepLabel& label);

/// Two-stage table for (gamma1, gamma2) (x) V: stage 1 couples F^{+}_{gamma2},
/// stage 2 couples F^{-}_{gamma1} to each intermediate module.  The
/// intermediate eigenpair is the multiplicity label.
struct TwoStageTable {
  HalfInt gamma1, gamma2;
  IrrepLabel label;
  HalfInt J_max;
  CGTable stage1;
  std::vector<std::pair<EigenPair, CGTable>> stage2; // (alpha, table), stage-1 nu ascending

  int alpha_count() const { return static_cast<int>(stage2.size()); }
  const EigenPair& alpha(int i) const { return stage2[i].first; }

  /// Composed coefficient
  /// A{(gamma1,gamma2) mu1, mu2; (lambda,rho) j, m | [alpha] (Lambda,P) J, M}
  /// where the final pair is identified by nu1 within the alpha branch.
  Complex coefficient(HalfInt mu1, HalfInt mu2, HalfInt j, HalfInt m, int alpha_index,
                      HalfInt nu1, HalfInt J, HalfInt M) const;
};

TwoStageTable two_stage_cg(HalfInt gamma1, HalfInt gamma2, const IrrepLabel& label, HalfInt J_max,
                           int threads = 1);

} // namespace lorentzcg

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lorentzcg/half_int.hpp"
#include "lorentzcg/sparse.hpp"

namespace lorentzcg {

/// Label (lambda, rho) of an irreducible module V_{lambda,rho}.
struct IrrepLabel {
  HalfInt lambda;
  Complex rho;

  IrrepLabel(HalfInt l, Complex r);

  /// True iff rho lies in +-(|lambda| + N) on the real axis, i.e. the module
  /// terminates at j_max = |rho| - 1.
  bool finite_dimensional() const;
  std::optional<HalfInt> j_max() const;
};

/// Label of a finite-dimensional left (A = -1) or right (A = +1) module of
/// spin gamma.
struct FiniteLabel {
  HalfInt gamma;
  int A; // +1 or -1

  FiniteLabel(HalfInt g, int a);
};

enum class Generator { J0, Jp, Jm, K0, Kp, Km };

const char* generator_name(Generator g);
bool is_boost(Generator g);

enum class ModuleClass { Principal, Complementary, Trivial, FiniteDimensional, NonUnitaryInfinite };

const char* module_class_name(ModuleClass c);

struct Classification {
  ModuleClass cls;
  std::optional<HalfInt> j_max; // set iff FiniteDimensional (or Trivial, j_max = 0)
  Complex c1, c2;               // Casimir eigenvalues
};

/// Rotation-level state |j, m> within a module.
struct State {
  HalfInt j, m;
  friend constexpr auto operator<=>(const State&, const State&) = default;
};

struct PFunctions {
  Complex minus; // coefficient for j -> j-1 transitions
  Complex p;     // coefficient for j -> j transitions
  Complex plus;  // coefficient for j -> j+1 transitions
};

/// Boost coefficient functions at level j.  Square roots of complex arguments
/// use the principal branch; the factors are kept separate, never combined
/// under one root.  Exactly zero at j = |lambda|.
PFunctions p_functions(const IrrepLabel& label, HalfInt j);

/// Single boost matrix element <target| gen |source>; zero outside the
/// selection rules.  Throws for rotation generators (those follow the plain
/// su(2) ladder action).
Complex boost_element(const IrrepLabel& label, State target, Generator gen, State source);

/// V_{lambda,rho} truncated at j_cut (or at j_max when the module is
/// finite-dimensional and smaller).  Basis ascending in (j, m).
class TruncatedModule {
public:
  TruncatedModule(IrrepLabel label, HalfInt j_cut);

  const IrrepLabel& label() const { return label_; }
  HalfInt j_cut() const { return j_cut_; }
  HalfInt j_top() const { return j_top_; } // actual highest level in the basis
  const std::vector<State>& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.size()); }

  std::optional<int> index_of(State s) const;

  /// Mask of basis states with j <= j_cut - margin, on which truncated
  /// operator identities are exact.
  std::vector<bool> interior_mask(HalfInt margin) const;

private:
  IrrepLabel label_;
  HalfInt j_cut_, j_top_;
  std::vector<State> basis_;
  std::vector<int> level_offset_; // index of (j, m=-j) per level
};

/// Full generator matrix over the truncated basis; transitions past the
/// truncation boundary are dropped.
SparseOperator generator_matrix(const TruncatedModule& module, Generator gen);

/// Generator matrix on F^A_gamma: rotations act as standard su(2), boosts as
/// iA times the corresponding rotation.  Basis is mrange(gamma), ascending.
SparseOperator finite_generator_matrix(const FiniteLabel& label, Generator gen);

/// (c1, c2) scalars through which the two Casimirs act on V_{lambda,rho}.
std::pair<Complex, Complex> casimir_eigenvalues(const IrrepLabel& label);

/// First Casimir J.K assembled from generator matrices.
SparseOperator casimir1_matrix(const TruncatedModule& module);
/// Second Casimir J^2 - K^2 assembled from generator matrices.
SparseOperator casimir2_matrix(const TruncatedModule& module);

Classification classify(const IrrepLabel& label);

/// Dimension (omega - lambda + 1)(omega + lambda + 1) of the finite module
/// with top level omega; lambda >= 0, omega in lambda + N0.
int finite_dim(HalfInt lambda, HalfInt omega);

/// Module label realized by the product of two su(2) modules (j1, j2).
IrrepLabel jj_labels(HalfInt j1, HalfInt j2);

} // namespace lorentzcg

#pragma once

#include <vector>

#include "lorentzcg/half_int.hpp"

namespace lorentzcg::verify {

/// Independent Clebsch-Gordan oracle: builds the full coupled basis for
/// (j1, j2) by explicit ladder descent and Gram-Schmidt on each highest-M
/// subspace, fixing signs by the Condon-Shortley rule (largest m1 coefficient
/// of each |J, J> positive).  No closed-form evaluation anywhere; this is the
/// reference the single-sum evaluator is checked against.
class Su2CgOracle {
public:
  Su2CgOracle(HalfInt j1, HalfInt j2);

  double cg(HalfInt m1, HalfInt m2, HalfInt J, HalfInt M) const;

private:
  HalfInt j1_, j2_;
  std::vector<std::pair<HalfInt, HalfInt>> pairs_; // (m1, m2) product basis
  // coefficient vector over pairs_ for each (J, M), J from j1+j2 downward
  std::vector<std::vector<std::vector<double>>> table_;

  int pair_index(HalfInt m1, HalfInt m2) const;
};

} // namespace lorentzcg::verify

#pragma once

#include "lorentzcg/half_int.hpp"

namespace lorentzcg {

/// Ladder coefficient sqrt(j -+ m) * sqrt(j +- m + 1); sign = +1 for raising,
/// -1 for lowering.  Throws std::domain_error for |m| > j.
double c_pm(int sign, HalfInt j, HalfInt m);

/// su(2) Clebsch-Gordan coefficient <J, M | j1, m1; j2, m2> in the
/// Condon-Shortley convention, evaluated by the Racah single-sum closed form
/// with a precomputed factorial table (spins up to 50).  Inputs outside the
/// selection rules (M != m1 + m2, triangle violation) return exactly 0;
/// malformed spins (negative j, |m| > j, non-matching parity) throw.
double su2_cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

} // namespace lorentzcg

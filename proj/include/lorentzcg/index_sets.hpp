#pragma once

#include <vector>

#include "lorentzcg/half_int.hpp"

namespace lorentzcg {

/// M_j = {-j, -j+1, ..., j}, ascending.  Throws std::domain_error for j < 0.
std::vector<HalfInt> mrange(HalfInt j);

/// Smallest element of the total-spin set J(lambda, gamma); the set itself is
/// jset_min + N0 in integer steps.
HalfInt jset_min(HalfInt lambda, HalfInt gamma);

/// True iff J lies in J(lambda, gamma) (right offset and integer step).
bool in_jset(HalfInt lambda, HalfInt gamma, HalfInt J);

/// Ascending j values spanning the J-eigenspace of the coupled product.
std::vector<HalfInt> omega_set(HalfInt lambda, HalfInt gamma, HalfInt J);

/// dim V^J_M; equals omega_set(...).size().
int vj_dimension(HalfInt lambda, HalfInt gamma, HalfInt J);

/// Number of nu in M_gamma with J >= |lambda + nu|.  Counting route for the
/// block dimension, kept separate so the two can be cross-checked.
int sigma_indicator_count(HalfInt lambda, HalfInt gamma, HalfInt J);

} // namespace lorentzcg

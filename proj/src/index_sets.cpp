#include "lorentzcg/index_sets.hpp"

#include <algorithm>
#include <stdexcept>

namespace lorentzcg {

std::vector<HalfInt> mrange(HalfInt j) {
  if (j < HalfInt::whole(0)) throw std::domain_error("mrange: j must be nonnegative");
  std::vector<HalfInt> out;
  out.reserve(static_cast<std::size_t>(j.twice()) + 1);
  for (int t = -j.twice(); t <= j.twice(); t += 2) out.push_back(HalfInt::from_twice(t));
  return out;
}

HalfInt jset_min(HalfInt lambda, HalfInt gamma) {
  if (gamma < HalfInt::from_twice(1)) throw std::domain_error("jset_min: gamma must be >= 1/2");
  const HalfInt eps = (lambda + gamma).is_integer() ? HalfInt::whole(0) : HalfInt::from_twice(1);
  return std::max(eps, lambda.abs() - gamma);
}

bool in_jset(HalfInt lambda, HalfInt gamma, HalfInt J) {
  const HalfInt lo = jset_min(lambda, gamma);
  return J >= lo && (J - lo).is_integer();
}

std::vector<HalfInt> omega_set(HalfInt lambda, HalfInt gamma, HalfInt J) {
  if (!in_jset(lambda, gamma, J)) throw std::domain_error("omega_set: J not in J(lambda, gamma)");
  const HalfInt al = lambda.abs();
  HalfInt lo, hi;
  if (J >= (al - gamma).abs()) {
    lo = std::max(al, J - gamma);
    hi = J + gamma;
  } else {
    lo = gamma - J;
    hi = gamma + J;
  }
  std::vector<HalfInt> out;
  for (HalfInt j = lo; j <= hi; j += HalfInt::whole(1)) out.push_back(j);
  return out;
}

int vj_dimension(HalfInt lambda, HalfInt gamma, HalfInt J) {
  if (!in_jset(lambda, gamma, J)) throw std::domain_error("vj_dimension: J not in J(lambda, gamma)");
  const HalfInt al = lambda.abs();
  if (J >= (al - gamma).abs()) {
    const int a = (J + gamma - al).twice() / 2 + 1;
    const int b = gamma.twice() + 1;
    return std::min(a, b);
  }
  return J.twice() + 1;
}

int sigma_indicator_count(HalfInt lambda, HalfInt gamma, HalfInt J) {
  int count = 0;
  for (HalfInt nu : mrange(gamma))
    if (J >= (lambda + nu).abs()) ++count;
  return count;
}

} // namespace lorentzcg

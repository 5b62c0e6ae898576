#include "lorentzcg/su2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lorentzcg {

namespace {

// Largest factorial argument reachable with the spin cap of 50:
// j1 + j2 + J + 1 <= 151.
constexpr int kMaxFact = 160;

const std::array<double, kMaxFact + 1>& factorials() {
  static const auto table = [] {
    std::array<double, kMaxFact + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFact; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

double fact(int n) {
  if (n < 0 || n > kMaxFact) throw std::domain_error("su2_cg: factorial argument out of range");
  return factorials()[n];
}

} // namespace

double c_pm(int sign, HalfInt j, HalfInt m) {
  if (sign != 1 && sign != -1) throw std::domain_error("c_pm: sign must be +1 or -1");
  if (m.abs() > j) throw std::domain_error("c_pm: |m| > j");
  const double jv = j.value(), mv = m.value(), s = sign;
  return std::sqrt(jv - s * mv) * std::sqrt(jv + s * mv + 1.0);
}

double su2_cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  const HalfInt zero = HalfInt::whole(0);
  if (j1 < zero || j2 < zero || J < zero) throw std::domain_error("su2_cg: negative spin");
  if (j1 > HalfInt::whole(50) || j2 > HalfInt::whole(50) || J > HalfInt::whole(50))
    throw std::domain_error("su2_cg: spin exceeds supported cap of 50");
  if (m1.abs() > j1 || m2.abs() > j2 || M.abs() > J) throw std::domain_error("su2_cg: |m| > j");
  if (!(j1 - m1).is_integer() || !(j2 - m2).is_integer() || !(J - M).is_integer())
    throw std::domain_error("su2_cg: m not in M_j");

  if (M != m1 + m2) return 0.0;
  if (J < (j1 - j2).abs() || J > j1 + j2) return 0.0;
  if (!(j1 + j2 - J).is_integer()) return 0.0;

  // All combinations below are integers once the guards above pass.
  const auto n = [](HalfInt h) { return h.twice() / 2; };

  const int a = n(j1 + j2 - J);
  const int b = n(j1 - j2 + J);
  const int c = n(-j1 + j2 + J);
  const int d = n(j1 + j2 + J) + 1;

  double pre = std::sqrt(J.twice() + 1.0);
  pre *= std::sqrt(fact(a) * fact(b) * fact(c) / fact(d));
  pre *= std::sqrt(fact(n(J + M)) * fact(n(J - M)) * fact(n(j1 - m1)) * fact(n(j1 + m1)) *
                   fact(n(j2 - m2)) * fact(n(j2 + m2)));

  const int kmin = std::max({0, n(j2 - J - m1), n(j1 - J + m2)});
  const int kmax = std::min({a, n(j1 - m1), n(j2 + m2)});

  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double denom = fact(k) * fact(a - k) * fact(n(j1 - m1) - k) * fact(n(j2 + m2) - k) *
                         fact(n(J - j2 + m1) + k) * fact(n(J - j1 - m2) + k);
    sum += (k % 2 == 0 ? 1.0 : -1.0) / denom;
  }
  return pre * sum;
}

} // namespace lorentzcg

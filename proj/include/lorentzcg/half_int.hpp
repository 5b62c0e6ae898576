#pragma once

#include <compare>
#include <complex>

namespace lorentzcg {

using Complex = std::complex<double>;

/// Exact half-integer, stored as twice its value.  All basis bookkeeping
/// (j, m, lambda, gamma, mu, nu, J, M, omega) runs on these, so index math
/// never touches floating point.
class HalfInt {
public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int t) { return HalfInt(t); }
  static constexpr HalfInt whole(int n) { return HalfInt(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr HalfInt abs() const { return HalfInt(twice_ < 0 ? -twice_ : twice_); }
  constexpr int sign() const { return twice_ > 0 ? 1 : (twice_ < 0 ? -1 : 0); }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice_ - b.twice_); }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }
  friend constexpr HalfInt operator*(int n, HalfInt a) { return HalfInt(n * a.twice_); }

  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

private:
  constexpr explicit HalfInt(int t) : twice_(t) {}
  int twice_ = 0;
};

inline constexpr HalfInt operator""_h2(unsigned long long t) {
  return HalfInt::from_twice(static_cast<int>(t));
}

} // namespace lorentzcg

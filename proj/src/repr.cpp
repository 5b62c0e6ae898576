#include "lorentzcg/repr.hpp"

#include <cmath>
#include <stdexcept>

#include "lorentzcg/index_sets.hpp"
#include "lorentzcg/su2.hpp"

namespace lorentzcg {

namespace {

constexpr double kClassifyTol = 1e-12;

bool is_zero(double x) { return std::abs(x) < kClassifyTol; }

bool near_integer(double x) { return std::abs(x - std::round(x)) < kClassifyTol; }

} // namespace

IrrepLabel::IrrepLabel(HalfInt l, Complex r) : lambda(l), rho(r) {
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw std::domain_error("IrrepLabel: rho must be finite");
}

bool IrrepLabel::finite_dimensional() const { return j_max().has_value(); }

std::optional<HalfInt> IrrepLabel::j_max() const {
  if (!is_zero(rho.imag())) return std::nullopt;
  const double r = std::abs(rho.real());
  const double n = r - lambda.abs().value(); // must be a positive integer
  if (n < 0.5 || !near_integer(n)) return std::nullopt;
  // j_max = |rho| - 1, a half-integer of the same parity class as lambda.
  const double t = 2.0 * (r - 1.0);
  if (!near_integer(t)) return std::nullopt;
  return HalfInt::from_twice(static_cast<int>(std::llround(t)));
}

FiniteLabel::FiniteLabel(HalfInt g, int a) : gamma(g), A(a) {
  if (a != 1 && a != -1) throw std::domain_error("FiniteLabel: A must be +1 or -1");
  if (g < HalfInt::whole(0)) throw std::domain_error("FiniteLabel: gamma must be >= 0");
}

const char* generator_name(Generator g) {
  switch (g) {
    case Generator::J0: return "J0";
    case Generator::Jp: return "J+";
    case Generator::Jm: return "J-";
    case Generator::K0: return "K0";
    case Generator::Kp: return "K+";
    case Generator::Km: return "K-";
  }
  return "?";
}

bool is_boost(Generator g) {
  return g == Generator::K0 || g == Generator::Kp || g == Generator::Km;
}

const char* module_class_name(ModuleClass c) {
  switch (c) {
    case ModuleClass::Principal: return "principal";
    case ModuleClass::Complementary: return "complementary";
    case ModuleClass::Trivial: return "trivial";
    case ModuleClass::FiniteDimensional: return "finite_dimensional";
    case ModuleClass::NonUnitaryInfinite: return "non_unitary_infinite";
  }
  return "?";
}

PFunctions p_functions(const IrrepLabel& label, HalfInt j) {
  const HalfInt al = label.lambda.abs();
  if (j < al) throw std::domain_error("p_functions: j < |lambda|");
  if (!(j - al).is_integer()) throw std::domain_error("p_functions: j not in |lambda| + N0");

  const double jv = j.value();
  const double lv = label.lambda.value();
  const Complex rho = label.rho;

  PFunctions out;

  // P(j): case split at j = 0, no limit taken.
  out.p = (j == HalfInt::whole(0)) ? Complex{} : Complex(0.0, 1.0) * lv * rho / (jv * (jv + 1.0));

  auto pminus = [&](HalfInt jj) -> Complex {
    // Exactly zero at the bottom level; also avoids the j = 0 denominator.
    if (jj == al || jj == HalfInt::whole(0)) return Complex{};
    const double x = jj.value();
    // Grouped so that (lambda, rho) -> (-lambda, -rho) is bit-exact.
    const double real_part = std::sqrt(x + std::abs(lv)) * std::sqrt(x - std::abs(lv));
    const Complex complex_part = std::sqrt(Complex(x) + rho) * std::sqrt(Complex(x) - rho);
    return real_part * complex_part / (x * std::sqrt(2.0 * x + 1.0) * std::sqrt(2.0 * x - 1.0));
  };

  out.minus = pminus(j);
  out.plus = pminus(j + HalfInt::whole(1));
  return out;
}

Complex boost_element(const IrrepLabel& label, State target, Generator gen, State source) {
  if (!is_boost(gen))
    throw std::domain_error("boost_element: rotation generators take the su(2) ladder path");

  const HalfInt j = source.j, m = source.m;
  const int dj = (target.j - j).twice() / 2;
  const HalfInt dm = target.m - m;
  if (!(target.j - j).is_integer() || dj < -1 || dj > 1) return Complex{};

  const PFunctions p = p_functions(label, j);
  const double jv = j.value(), mv = m.value();

  if (gen == Generator::K0) {
    if (dm != HalfInt::whole(0)) return Complex{};
    if (dj == 1) return p.plus * std::sqrt(jv + mv + 1.0) * std::sqrt(jv - mv + 1.0);
    if (dj == 0) return p.p * mv;
    return p.minus * std::sqrt(jv + mv) * std::sqrt(jv - mv);
  }

  const double s = (gen == Generator::Kp) ? 1.0 : -1.0;
  if (dm != (gen == Generator::Kp ? HalfInt::whole(1) : -HalfInt::whole(1))) return Complex{};
  if (dj == 1) return -s * p.plus * std::sqrt(jv + s * mv + 1.0) * std::sqrt(jv + s * mv + 2.0);
  if (dj == 0) return p.p * c_pm(gen == Generator::Kp ? 1 : -1, j, m);
  return s * p.minus * std::sqrt(jv - s * mv) * std::sqrt(jv - s * mv - 1.0);
}

TruncatedModule::TruncatedModule(IrrepLabel label, HalfInt j_cut) : label_(label), j_cut_(j_cut) {
  const HalfInt al = label_.lambda.abs();
  if (j_cut_ < al) throw std::domain_error("TruncatedModule: j_cut < |lambda|");
  if (!(j_cut_ - al).is_integer())
    j_cut_ = al + HalfInt::whole((j_cut_ - al).twice() / 2); // snap down to the level grid
  j_top_ = j_cut_;
  if (auto jm = label_.j_max(); jm && *jm < j_top_) j_top_ = *jm;
  for (HalfInt j = al; j <= j_top_; j += HalfInt::whole(1)) {
    level_offset_.push_back(static_cast<int>(basis_.size()));
    for (HalfInt m : mrange(j)) basis_.push_back(State{j, m});
  }
}

std::optional<int> TruncatedModule::index_of(State s) const {
  const HalfInt al = label_.lambda.abs();
  if (s.j < al || s.j > j_top_ || !(s.j - al).is_integer()) return std::nullopt;
  if (s.m.abs() > s.j || !(s.j - s.m).is_integer()) return std::nullopt;
  const int level = (s.j - al).twice() / 2;
  return level_offset_[level] + (s.m + s.j).twice() / 2;
}

std::vector<bool> TruncatedModule::interior_mask(HalfInt margin) const {
  std::vector<bool> mask(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) mask[i] = basis_[i].j <= j_cut_ - margin;
  return mask;
}

SparseOperator generator_matrix(const TruncatedModule& module, Generator gen) {
  const int n = module.dim();
  SparseOperator out(n, n);
  const auto& label = module.label();

  auto put = [&](State target, int source_idx, Complex v) {
    if (v == Complex{}) return;
    if (auto t = module.index_of(target)) out.add(*t, source_idx, v);
  };

  for (int c = 0; c < n; ++c) {
    const State s = module.basis()[c];
    switch (gen) {
      case Generator::J0:
        put(s, c, Complex(s.m.value()));
        break;
      case Generator::Jp:
        if (s.m < s.j) put(State{s.j, s.m + HalfInt::whole(1)}, c, Complex(c_pm(1, s.j, s.m)));
        break;
      case Generator::Jm:
        if (-s.j < s.m) put(State{s.j, s.m - HalfInt::whole(1)}, c, Complex(c_pm(-1, s.j, s.m)));
        break;
      default: {
        const HalfInt dm = gen == Generator::K0 ? HalfInt::whole(0)
                          : gen == Generator::Kp ? HalfInt::whole(1)
                                                 : -HalfInt::whole(1);
        for (int dj = -1; dj <= 1; ++dj) {
          const State t{s.j + HalfInt::whole(dj), s.m + dm};
          if (t.j < HalfInt::whole(0) || t.m.abs() > t.j) continue;
          if (module.index_of(t)) put(t, c, boost_element(label, t, gen, s));
        }
        break;
      }
    }
  }
  return out;
}

SparseOperator finite_generator_matrix(const FiniteLabel& label, Generator gen) {
  const auto mus = mrange(label.gamma);
  const int n = static_cast<int>(mus.size());
  SparseOperator out(n, n);
  const Complex boost_factor = is_boost(gen) ? Complex(0.0, 1.0) * double(label.A) : Complex(1.0);
  for (int c = 0; c < n; ++c) {
    const HalfInt mu = mus[c];
    switch (gen) {
      case Generator::J0:
      case Generator::K0:
        out.add(c, c, boost_factor * mu.value());
        break;
      case Generator::Jp:
      case Generator::Kp:
        if (c + 1 < n) out.add(c + 1, c, boost_factor * c_pm(1, label.gamma, mu));
        break;
      case Generator::Jm:
      case Generator::Km:
        if (c > 0) out.add(c - 1, c, boost_factor * c_pm(-1, label.gamma, mu));
        break;
    }
  }
  return out;
}

std::pair<Complex, Complex> casimir_eigenvalues(const IrrepLabel& label) {
  const Complex l(label.lambda.value());
  const Complex c1 = Complex(0.0, 1.0) * l * label.rho;
  const Complex c2 = l * l + label.rho * label.rho - 1.0;
  return {c1, c2};
}

SparseOperator casimir1_matrix(const TruncatedModule& module) {
  const auto J0 = generator_matrix(module, Generator::J0);
  const auto Jp = generator_matrix(module, Generator::Jp);
  const auto Jm = generator_matrix(module, Generator::Jm);
  const auto K0 = generator_matrix(module, Generator::K0);
  const auto Kp = generator_matrix(module, Generator::Kp);
  const auto Km = generator_matrix(module, Generator::Km);
  return J0 * K0 + (Jm * Kp + Jp * Km).scaled(0.5);
}

SparseOperator casimir2_matrix(const TruncatedModule& module) {
  const auto J0 = generator_matrix(module, Generator::J0);
  const auto Jp = generator_matrix(module, Generator::Jp);
  const auto Jm = generator_matrix(module, Generator::Jm);
  const auto K0 = generator_matrix(module, Generator::K0);
  const auto Kp = generator_matrix(module, Generator::Kp);
  const auto Km = generator_matrix(module, Generator::Km);
  // J^2 - (J0 + K0^2 + K+K-) with J^2 = J0^2 + J0 + J-J+.
  return J0 * J0 + Jm * Jp - K0 * K0 - Kp * Km;
}

Classification classify(const IrrepLabel& label) {
  const auto [c1, c2] = casimir_eigenvalues(label);
  Classification out{ModuleClass::NonUnitaryInfinite, std::nullopt, c1, c2};

  const double re = label.rho.real(), im = label.rho.imag();
  const bool rho_real = is_zero(im);

  if (is_zero(re)) {
    out.cls = ModuleClass::Principal;
    return out;
  }
  if (label.lambda == HalfInt::whole(0) && rho_real && std::abs(re) < 1.0 && !is_zero(re)) {
    out.cls = ModuleClass::Complementary;
    return out;
  }
  if (label.lambda == HalfInt::whole(0) && rho_real && is_zero(std::abs(re) - 1.0)) {
    out.cls = ModuleClass::Trivial;
    out.j_max = HalfInt::whole(0);
    return out;
  }
  // The (lambda, rho) -> (-lambda, -rho) isomorphism makes the sign of lambda
  // irrelevant here; j_max() already tests |rho| against |lambda| + N.
  if (auto jm = label.j_max()) {
    out.cls = ModuleClass::FiniteDimensional;
    out.j_max = jm;
    return out;
  }
  return out;
}

int finite_dim(HalfInt lambda, HalfInt omega) {
  if (lambda < HalfInt::whole(0)) throw std::domain_error("finite_dim: lambda must be >= 0");
  if (omega < lambda || !(omega - lambda).is_integer())
    throw std::domain_error("finite_dim: omega not in lambda + N0");
  const int a = (omega - lambda).twice() / 2 + 1;
  const int b = (omega + lambda).twice() / 2 + 1;
  return a * b;
}

IrrepLabel jj_labels(HalfInt j1, HalfInt j2) {
  if (j1 < HalfInt::whole(0) || j2 < HalfInt::whole(0))
    throw std::domain_error("jj_labels: spins must be nonnegative");
  const HalfInt lambda = (j1 - j2).abs();
  const double r = (j1 + j2).value() + 1.0;
  return IrrepLabel(lambda, j1 < j2 ? Complex(r) : Complex(-r));
}

} // namespace lorentzcg

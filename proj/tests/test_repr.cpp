#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorentzcg/repr.hpp"
#include "lorentzcg/su2.hpp"

using namespace lorentzcg;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

double masked(const SparseOperator& op, const std::vector<bool>& m) {
  return op.max_abs_masked(m, m);
}

IrrepLabel random_infinite_label(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.2, 2.2);
  std::uniform_int_distribution<int> lt(-4, 4);
  for (;;) {
    const HalfInt lambda = h(lt(rng));
    const Complex rho(u(rng), u(rng));
    IrrepLabel label(lambda, rho);
    bool bad = false;
    for (int n = 1; n <= 6; ++n) {
      const double ladder = lambda.abs().value() + n;
      if (std::abs(rho - Complex(ladder)) < 0.2 || std::abs(rho + Complex(ladder)) < 0.2)
        bad = true;
    }
    if (!bad) return label;
  }
}

} // namespace

TEST_CASE("boost coefficient functions") {
  // lambda = 0 kills the diagonal coefficient
  const IrrepLabel scalar(h(0), Complex(0.3, 0.7));
  for (int jt = 2; jt <= 10; jt += 2) CHECK(p_functions(scalar, h(jt)).p == Complex{});

  // finite tower: the raising coefficient vanishes exactly at the top
  const IrrepLabel finite(h(2), Complex(3.0)); // j_max = 2
  CHECK(p_functions(finite, HalfInt::whole(2)).plus == Complex{});
  CHECK(p_functions(finite, HalfInt::whole(1)).plus != Complex{});

  // bottom level: the lowering coefficient vanishes exactly
  const IrrepLabel spinor(h(1), Complex(0.3, 0.7));
  CHECK(p_functions(spinor, h(1)).minus == Complex{});
  CHECK_THROWS_AS(p_functions(spinor, h(-1)), std::domain_error);
}

TEST_CASE("boost matrix elements, spot values") {
  const IrrepLabel label(h(1), Complex(0.4, 1.3));
  const HalfInt j = h(3), m = h(1);
  const PFunctions p = p_functions(label, j);
  const double jv = j.value(), mv = m.value();

  CHECK(boost_element(label, State{j + HalfInt::whole(1), m}, Generator::K0, State{j, m}) ==
        p.plus * std::sqrt(jv + mv + 1.0) * std::sqrt(jv - mv + 1.0));
  CHECK(boost_element(label, State{j, m}, Generator::K0, State{j, m}) == p.p * mv);
  // lowering transition of the raising boost component carries the plus sign
  CHECK(boost_element(label, State{j - HalfInt::whole(1), m + HalfInt::whole(1)}, Generator::Kp,
                      State{j, m}) ==
        p.minus * std::sqrt(jv - mv) * std::sqrt(jv - mv - 1.0));
  CHECK(boost_element(label, State{j, m}, Generator::K0, State{j, m + HalfInt::whole(1)}) ==
        Complex{});
  CHECK_THROWS_AS(boost_element(label, State{j, m}, Generator::J0, State{j, m}), std::domain_error);
}

TEST_CASE("rotation generators on the truncated basis") {
  const IrrepLabel label(h(0), Complex(0.0, 1.7));
  const TruncatedModule module(label, HalfInt::whole(6));
  const auto J0 = generator_matrix(module, Generator::J0);
  for (int i = 0; i < module.dim(); ++i)
    CHECK(J0.at(i, i) == Complex(module.basis()[i].m.value()));

  const auto Jp = generator_matrix(module, Generator::Jp);
  for (int c = 0; c < module.dim(); ++c) {
    const State s = module.basis()[c];
    if (s.m == s.j)
      for (int r = 0; r < module.dim(); ++r) CHECK(Jp.at(r, c) == Complex{});
  }
}

TEST_CASE("commutators and Casimir scalars on random labels") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const IrrepLabel label = random_infinite_label(rng);
    const TruncatedModule module(label, label.lambda.abs() + HalfInt::whole(12));
    const auto mask = module.interior_mask(HalfInt::whole(2));

    const auto J0 = generator_matrix(module, Generator::J0);
    const auto Jp = generator_matrix(module, Generator::Jp);
    const auto Jm = generator_matrix(module, Generator::Jm);
    const auto K0 = generator_matrix(module, Generator::K0);
    const auto Kp = generator_matrix(module, Generator::Kp);
    const auto Km = generator_matrix(module, Generator::Km);

    CHECK(masked(commutator(Jp, Jm) - J0.scaled(2.0), mask) < 1e-10);
    CHECK(masked(commutator(Kp, Km) + J0.scaled(2.0), mask) < 1e-10);
    CHECK(masked(commutator(Jp, Km) - K0.scaled(2.0), mask) < 1e-10);
    CHECK(masked(commutator(K0, Kp) + Jp, mask) < 1e-10);
    CHECK(masked(commutator(J0, K0), mask) < 1e-10);

    const auto [c1v, c2v] = casimir_eigenvalues(label);
    const auto eye = SparseOperator::identity(module.dim());
    CHECK(masked(casimir1_matrix(module) - eye.scaled(c1v), mask) <
          1e-10 * std::max(1.0, std::abs(c1v)));
    CHECK(masked(casimir2_matrix(module) - eye.scaled(c2v), mask) <
          1e-10 * std::max(1.0, std::abs(c2v)));
  }
}

TEST_CASE("label negation is an isomorphism, entrywise") {
  const IrrepLabel a(h(3), Complex(0.8, -0.6));
  const IrrepLabel b(h(-3), Complex(-0.8, 0.6));
  const TruncatedModule ma(a, h(3) + HalfInt::whole(5));
  const TruncatedModule mb(b, h(3) + HalfInt::whole(5));
  for (Generator g : {Generator::J0, Generator::Jp, Generator::Jm, Generator::K0, Generator::Kp,
                      Generator::Km})
    CHECK((generator_matrix(ma, g) - generator_matrix(mb, g)).max_abs() == 0.0);
}

TEST_CASE("unitarity of the boost action per class") {
  // principal: K0 and K+/- are mutually adjoint
  {
    const IrrepLabel label(h(3), Complex(0.0, 1.3));
    const TruncatedModule module(label, h(3) + HalfInt::whole(8));
    const auto mask = module.interior_mask(HalfInt::whole(2));
    const auto K0 = generator_matrix(module, Generator::K0);
    const auto Kp = generator_matrix(module, Generator::Kp);
    const auto Km = generator_matrix(module, Generator::Km);
    CHECK(masked(K0 - K0.dagger(), mask) < 1e-12);
    CHECK(masked(Kp - Km.dagger(), mask) < 1e-12);
  }
  // complementary
  {
    const IrrepLabel label(h(0), Complex(0.62));
    const TruncatedModule module(label, HalfInt::whole(8));
    const auto mask = module.interior_mask(HalfInt::whole(2));
    const auto K0 = generator_matrix(module, Generator::K0);
    CHECK(masked(K0 - K0.dagger(), mask) < 1e-12);
  }
  // finite-dimensional: the boost action is anti-self-adjoint
  {
    const IrrepLabel label(h(1), Complex(2.5)); // j_max = 3/2
    const TruncatedModule module(label, HalfInt::whole(9));
    CHECK(module.j_top() == h(3));
    std::vector<bool> all(module.dim(), true);
    const auto K0 = generator_matrix(module, Generator::K0);
    const auto Kp = generator_matrix(module, Generator::Kp);
    const auto Km = generator_matrix(module, Generator::Km);
    CHECK((K0 + K0.dagger()).max_abs_masked(all, all) < 1e-12);
    CHECK((Kp + Km.dagger()).max_abs_masked(all, all) < 1e-12);
  }
}

TEST_CASE("finite towers truncate exactly") {
  const IrrepLabel label(h(1), Complex(-2.5)); // j_max = 3/2
  CHECK(label.finite_dimensional());
  CHECK(*label.j_max() == h(3));
  const TruncatedModule module(label, HalfInt::whole(10));
  CHECK(module.dim() == finite_dim(h(1), h(3)));
  CHECK(p_functions(label, h(3)).plus == Complex{});
}

TEST_CASE("finite module generators") {
  const FiniteLabel left(h(1), -1);
  const auto K0 = finite_generator_matrix(left, Generator::K0);
  // mu = +1/2 sits at index 1
  CHECK(K0.at(1, 1) == Complex(0.0, -0.5));
  CHECK(K0.at(0, 0) == Complex(0.0, 0.5));

  for (int gt : {1, 2, 3}) {
    for (int A : {1, -1}) {
      const FiniteLabel label(h(gt), A);
      const Complex iA(0.0, A);
      CHECK((finite_generator_matrix(label, Generator::Kp) -
             finite_generator_matrix(label, Generator::Jp).scaled(iA))
                .max_abs() == 0.0);
      CHECK((finite_generator_matrix(label, Generator::Km) -
             finite_generator_matrix(label, Generator::Jm).scaled(iA))
                .max_abs() == 0.0);
    }
  }
}

TEST_CASE("finite module route agreement") {
  // F^A_gamma realized as the (lambda = gamma, rho = A(gamma+1)) tower matches
  // the direct su(2) construction.
  for (int gt : {1, 2}) {
    for (int A : {1, -1}) {
      const HalfInt gamma = h(gt);
      const IrrepLabel label(gamma, Complex(A * (gamma.value() + 1.0)));
      const TruncatedModule module(label, gamma + HalfInt::whole(4));
      CHECK(module.j_top() == gamma);
      for (Generator g : {Generator::J0, Generator::Jp, Generator::K0, Generator::Kp}) {
        const auto via_tower = generator_matrix(module, g);
        const auto direct = finite_generator_matrix(FiniteLabel(gamma, A), g);
        CHECK((via_tower - direct).max_abs() < 1e-12);
      }
    }
  }
}

TEST_CASE("casimir scalar values") {
  CHECK(casimir_eigenvalues(IrrepLabel(h(0), Complex(1.3, -0.2))).first == Complex{});
  const auto [c1, c2] = casimir_eigenvalues(IrrepLabel(h(1), Complex(0.0, 2.0)));
  CHECK(c1 == Complex(-1.0));
  CHECK(c2 == Complex(0.25 - 4.0 - 1.0));
  CHECK(std::abs(casimir_eigenvalues(IrrepLabel(h(0), Complex(1.0))).second) == 0.0);
  CHECK(std::abs(casimir_eigenvalues(IrrepLabel(h(0), Complex(-1.0))).second) == 0.0);
}

TEST_CASE("classification") {
  CHECK(classify(IrrepLabel(h(1), Complex(0.0, 2.0))).cls == ModuleClass::Principal);
  CHECK(classify(IrrepLabel(h(0), Complex(0.5))).cls == ModuleClass::Complementary);
  CHECK(classify(IrrepLabel(h(0), Complex(1.0))).cls == ModuleClass::Trivial);
  CHECK(classify(IrrepLabel(h(0), Complex(-1.0))).cls == ModuleClass::Trivial);
  const auto fd = classify(IrrepLabel(h(1), Complex(-1.5)));
  CHECK(fd.cls == ModuleClass::FiniteDimensional);
  CHECK(*fd.j_max == h(1));
  CHECK(classify(IrrepLabel(h(-1), Complex(1.5))).cls == ModuleClass::FiniteDimensional);
  CHECK(classify(IrrepLabel(h(1), Complex(0.5))).cls == ModuleClass::NonUnitaryInfinite);
  CHECK(classify(IrrepLabel(h(0), Complex(0.0))).cls == ModuleClass::Principal);
}

TEST_CASE("finite dimension formula") {
  CHECK(finite_dim(h(0), h(0)) == 1);
  CHECK(finite_dim(h(1), h(1)) == 2);
  CHECK(finite_dim(h(0), HalfInt::whole(1)) == 4);
  for (int lt = 0; lt <= 10; ++lt)
    for (int wt = lt; wt <= 10; wt += 2) {
      int level_sum = 0;
      for (HalfInt j = h(lt); j <= h(wt); j += HalfInt::whole(1)) level_sum += j.twice() + 1;
      CHECK(finite_dim(h(lt), h(wt)) == level_sum);
    }
  CHECK_THROWS_AS(finite_dim(h(2), h(0)), std::domain_error);
}

TEST_CASE("product labels") {
  const IrrepLabel a = jj_labels(h(1), h(0));
  CHECK(a.lambda == h(1));
  CHECK(a.rho == Complex(-1.5));
  const IrrepLabel b = jj_labels(h(0), h(1));
  CHECK(b.lambda == h(1));
  CHECK(b.rho == Complex(1.5));
  const IrrepLabel c = jj_labels(h(0), h(0));
  CHECK(c.rho == Complex(-1.0));
  CHECK(classify(c).cls == ModuleClass::Trivial);
}

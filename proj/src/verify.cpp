#include "lorentzcg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lorentzcg/coupling.hpp"
#include "lorentzcg/index_sets.hpp"
#include "lorentzcg/repr.hpp"
#include "lorentzcg/su2.hpp"
#include "lorentzcg/su2_oracle.hpp"
#include "lorentzcg/tensorop.hpp"
#include "lorentzcg/tridiag.hpp"

namespace lorentzcg::verify {

namespace {

struct LabelSampler {
  std::mt19937_64 rng;
  explicit LabelSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  int pick(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); }

  HalfInt half_int_upto(int max_twice) {
    return HalfInt::from_twice(pick(2 * max_twice + 1) - max_twice);
  }

  // Infinite-dimensional label with |lambda| <= max_lambda, |rho| <= 3, kept
  // a safe distance from the finite-dimensional ladder.
  IrrepLabel infinite_label(int max_lambda_twice) {
    for (;;) {
      const HalfInt lambda = half_int_upto(max_lambda_twice);
      const Complex rho(uniform(-2.5, 2.5), uniform(-2.5, 2.5));
      if (std::abs(rho) > 3.0) continue;
      bool bad = false;
      for (int n = 1; n <= 8 && !bad; ++n) {
        const double ladder = lambda.abs().value() + n;
        if (std::abs(rho - Complex(ladder)) < 0.2 || std::abs(rho + Complex(ladder)) < 0.2)
          bad = true;
      }
      if (!bad) return IrrepLabel(lambda, rho);
    }
  }

  // Additionally keeps rho + A lambda away from the integers of the
  // non-diagonalizable window (both signs of A), and away from +-lambda.
  IrrepLabel decomposable_label(int max_lambda_twice, HalfInt gamma) {
    for (;;) {
      IrrepLabel label = infinite_label(max_lambda_twice);
      bool bad = false;
      for (int A : {-1, 1}) {
        const Complex z = label.rho + Complex(A * label.lambda.value());
        for (int n = -gamma.twice(); n <= gamma.twice() && !bad; ++n)
          if (std::abs(z - Complex(n)) < 0.15) bad = true;
        if (std::abs(z) < 0.15) bad = true;
      }
      if (!bad) return label;
    }
  }
};

struct Battery {
  Options options;
  Report report;

  double tol(double default_tol) const {
    return options.tolerance_override ? *options.tolerance_override : default_tol;
  }

  void add(const std::string& name, const std::string& anchor, double residual,
           double tolerance) {
    report.checks.push_back(CheckResult{name, anchor, residual, tolerance,
                                        residual <= tolerance});
  }

  void note(const std::string& s) { report.notes.push_back(s); }
};

double masked_max(const SparseOperator& op, const std::vector<bool>& mask) {
  return op.max_abs_masked(mask, mask);
}

// ---- criterion 1 & 2: algebra closure and Casimir scalars -----------------

void check_algebra(Battery& b) {
  LabelSampler sampler(b.options.seed + 1);
  double worst_comm = 0.0, worst_casimir = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const IrrepLabel label = sampler.infinite_label(4);
    const TruncatedModule module(label, label.lambda.abs() + HalfInt::whole(12));
    const auto mask = module.interior_mask(HalfInt::whole(2));

    const SparseOperator g[6] = {
        generator_matrix(module, Generator::J0), generator_matrix(module, Generator::Jp),
        generator_matrix(module, Generator::Jm), generator_matrix(module, Generator::K0),
        generator_matrix(module, Generator::Kp), generator_matrix(module, Generator::Km)};
    const int J0 = 0, Jp = 1, Jm = 2, K0 = 3, Kp = 4, Km = 5;

    struct Rule {
      int x, y;          // commutator [x, y]
      int target;        // index of the expected generator, -1 for zero
      double coeff;
    };
    static const Rule rules[] = {
        {J0, Jp, Jp, 1.0},  {J0, Jm, Jm, -1.0}, {Jp, Jm, J0, 2.0},  {J0, K0, -1, 0.0},
        {J0, Kp, Kp, 1.0},  {J0, Km, Km, -1.0}, {Jp, K0, Kp, -1.0}, {Jm, K0, Km, 1.0},
        {Jp, Km, K0, 2.0},  {Jm, Kp, K0, -2.0}, {Jp, Kp, -1, 0.0},  {Jm, Km, -1, 0.0},
        {K0, Kp, Jp, -1.0}, {K0, Km, Jm, 1.0},  {Kp, Km, J0, -2.0}};

    for (const Rule& rule : rules) {
      const SparseOperator xy = g[rule.x] * g[rule.y];
      const SparseOperator yx = g[rule.y] * g[rule.x];
      SparseOperator r = xy - yx;
      if (rule.target >= 0) r = r - g[rule.target].scaled(rule.coeff);
      const double scale = std::max(1.0, masked_max(xy, mask) + masked_max(yx, mask));
      worst_comm = std::max(worst_comm, masked_max(r, mask) / scale);
    }

    const auto [c1v, c2v] = casimir_eigenvalues(label);
    const SparseOperator c1 = casimir1_matrix(module) -
                              SparseOperator::identity(module.dim()).scaled(c1v);
    const SparseOperator c2 = casimir2_matrix(module) -
                              SparseOperator::identity(module.dim()).scaled(c2v);
    const double scale1 = std::max(1.0, std::abs(c1v));
    const double scale2 = std::max(1.0, std::abs(c2v));
    worst_casimir = std::max(worst_casimir, masked_max(c1, mask) / scale1);
    worst_casimir = std::max(worst_casimir, masked_max(c2, mask) / scale2);
  }
  b.add("criterion 1: algebra closure",
        "all fifteen ladder-basis commutators on interior states, ten random labels", worst_comm,
        b.tol(1e-10));
  b.add("criterion 2: casimir scalars",
        "assembled J.K and J^2-K^2 act as i*lambda*rho and lambda^2+rho^2-1", worst_casimir,
        b.tol(1e-10));
}

// ---- criterion 3: half-coupling golden table -------------------------------

void check_golden_table(Battery& b) {
  LabelSampler sampler(b.options.seed + 3);
  const HalfInt half = HalfInt::from_twice(1);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const IrrepLabel label = sampler.decomposable_label(3, half);
    const int A = sampler.pick(2) == 0 ? 1 : -1;
    const CouplingProblem problem(FiniteLabel(half, A), label);
    HalfInt J_max = HalfInt::from_twice(15);
    while (!in_jset(label.lambda, half, J_max)) J_max -= half;
    const CGTable table = decompose(problem, J_max, b.options.threads);
    for (const auto& block : table.blocks) {
      for (const auto& col : block.columns) {
        for (std::size_t i = 0; i < block.omega.size(); ++i) {
          const Complex want =
              half_coupling_B(label, A, col.nu.sign(), block.J, block.omega[i]);
          worst = std::max(worst, std::abs(col.coeffs[i] - want));
        }
      }
      // Forward table == inverse table for the half coupling.
      for (std::size_t c = 0; c < block.columns.size(); ++c)
        for (std::size_t i = 0; i < block.omega.size(); ++i)
          worst = std::max(worst,
                           std::abs(block.columns[c].coeffs[i] - block.inverse[c][i]));
    }
  }
  b.add("criterion 3: half-coupling golden table",
        "gamma = 1/2 coefficients match the closed-form table entrywise; forward == inverse",
        worst, b.tol(1e-10));
}

// ---- criterion 4: block spectra --------------------------------------------

void check_block_spectra(Battery& b) {
  LabelSampler sampler(b.options.seed + 4);
  double worst = 0.0;
  int dim_violations = 0;
  for (const int gamma_twice : {2, 3, 4}) {
    const HalfInt gamma = HalfInt::from_twice(gamma_twice);
    for (int trial = 0; trial < 5; ++trial) {
      const IrrepLabel label = sampler.decomposable_label(3, gamma);
      const int A = sampler.pick(2) == 0 ? 1 : -1;
      const CouplingProblem problem(FiniteLabel(gamma, A), label);
      const HalfInt J_hi = label.lambda.abs() + gamma + HalfInt::whole(4);
      const ProductSpace space(problem, J_hi + gamma + HalfInt::whole(2));
      for (HalfInt J = jset_min(label.lambda, gamma); J <= J_hi; J += HalfInt::whole(1)) {
        const VJBlock block = casimir_block(space, J);
        const auto pairs = eigenpair_set(problem, J);
        if (static_cast<int>(block.omega.size()) !=
            sigma_indicator_count(label.lambda, gamma, J))
          ++dim_violations;
        auto eigs = dense_eig_oracle(block.c1);
        std::vector<bool> used(eigs.size(), false);
        for (const auto& pair : pairs) {
          const Complex want = pair.c1();
          double best = 1e300;
          int best_i = -1;
          for (std::size_t i = 0; i < eigs.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(eigs[i] - want);
            if (d < best) {
              best = d;
              best_i = static_cast<int>(i);
            }
          }
          used[best_i] = true;
          worst = std::max(worst, best / std::max(1.0, std::abs(want)));
        }
      }
    }
  }
  b.add("criterion 4: block spectra",
        "QR oracle spectrum of every J block equals the shifted-pair multiset; "
        "dimension matches the indicator count",
        worst + dim_violations, b.tol(1e-8));
}

// ---- criterion 5: defect detection -----------------------------------------

void check_defect_detection(Battery& b) {
  int violations = 0;
  for (const int gamma_twice : {1, 2, 3}) {
    const HalfInt gamma = HalfInt::from_twice(gamma_twice);
    for (int n = -gamma.twice() + 1; n <= gamma.twice() - 1; ++n) {
      // Pick (lambda, A) keeping the module infinite-dimensional.
      bool handled = false;
      for (const int lambda_twice : {1, 0, 2, 3}) {
        for (const int A : {1, -1}) {
          const HalfInt lambda = HalfInt::from_twice(lambda_twice);
          const IrrepLabel label(lambda, Complex(-A * lambda.value() + n));
          if (label.finite_dimensional()) continue;
          const CouplingProblem problem(FiniteLabel(gamma, A), label);
          if (is_decomposable(problem)) {
            ++violations; // this rho must sit inside the defective window
            handled = true;
            break;
          }
          const VJBlock block = casimir_block(problem, lambda.abs() + gamma);
          const auto eigs = dense_eig_oracle(block.c1);
          const double scale = std::max(1.0, block.c1.max_abs());
          bool found = false;
          for (std::size_t i = 0; i < eigs.size() && !found; ++i) {
            int mult = 0;
            Complex centroid{};
            for (std::size_t k = 0; k < eigs.size(); ++k)
              if (std::abs(eigs[k] - eigs[i]) < 1e-5 * scale) {
                ++mult;
                centroid += eigs[k];
              }
            if (mult >= 2 &&
                geometric_multiplicity(block.c1, centroid / double(mult)) == 1)
              found = true;
          }
          if (!found) ++violations;
          handled = true;
          break;
        }
        if (handled) break;
      }
      if (!handled) ++violations;
    }
  }
  b.add("criterion 5: defect detection",
        "rho = -A lambda + n inside the window produces an eigenvalue with algebraic "
        "multiplicity >= 2 and geometric multiplicity 1",
        violations, 0.5);
}

// ---- criterion 6: ratio recurrence -----------------------------------------

void check_ratio_recurrence(Battery& b) {
  LabelSampler sampler(b.options.seed + 6);
  double worst = 0.0;
  for (const int gamma_twice : {1, 2}) {
    const HalfInt gamma = HalfInt::from_twice(gamma_twice);
    for (int trial = 0; trial < 3; ++trial) {
      const IrrepLabel label = sampler.decomposable_label(2, gamma);
      const int A = sampler.pick(2) == 0 ? 1 : -1;
      const CouplingProblem problem(FiniteLabel(gamma, A), label);
      const HalfInt J_lo = label.lambda.abs() + gamma;
      const CGTable table = decompose(problem, J_lo + HalfInt::whole(4), b.options.threads);
      for (HalfInt nu = -gamma; nu < gamma; nu += HalfInt::whole(1)) {
        Complex reference{};
        for (int step = 0; step < 5; ++step) {
          const HalfInt J = J_lo + HalfInt::whole(step);
          const auto [lhs, rhs] = cg_ratio_check(table, nu, J);
          const Complex quotient = lhs / rhs;
          if (step == 0)
            reference = quotient;
          else
            worst = std::max(worst, std::abs(quotient / reference - 1.0));
        }
      }
    }
  }
  b.add("criterion 6: ratio recurrence",
        "the stretched-coefficient ratio over its closed sqrt form is constant in J", worst,
        b.tol(1e-9));
}

// ---- criterion 7: projection round trip -------------------------------------

void check_projection_round_trip(Battery& b) {
  LabelSampler sampler(b.options.seed + 7);
  double worst = 0.0;
  int guard_violations = 0;
  for (const int gamma_twice : {1, 2}) {
    const HalfInt gamma = HalfInt::from_twice(gamma_twice);
    const IrrepLabel label = sampler.decomposable_label(2, gamma);
    const int A = sampler.pick(2) == 0 ? 1 : -1;
    const CouplingProblem problem(FiniteLabel(gamma, A), label);
    const HalfInt j_cut = label.lambda.abs() + gamma + HalfInt::whole(7);

    for (HalfInt nu : mrange(gamma)) {
      const EigenPair target{label.lambda + nu,
                             label.rho + Complex(A * nu.value())};
      const TensorOperator proj = wigner_eckart_projection(problem, target, j_cut);
      for (Generator g : {Generator::J0, Generator::Jp, Generator::Jm, Generator::K0,
                          Generator::Kp, Generator::Km})
        worst = std::max(worst, intertwiner_residual(proj, g));

      const CGTable table = decompose(problem, proj.target.j_top());
      const ReducedElement red = reduced_matrix_element(proj, table);
      worst = std::max(worst, std::abs(red.value - 1.0));
      worst = std::max(worst, red.scatter);
    }

    // Absent target: one step above the ladder top must be rejected.
    try {
      const EigenPair absent{label.lambda + gamma + HalfInt::whole(1), label.rho};
      wigner_eckart_projection(problem, absent, j_cut);
      ++guard_violations;
    } catch (const std::domain_error&) {
    }
  }
  b.add("criterion 7: projection round trip",
        "projections intertwine all six generators, reduce to unit element with tiny scatter, "
        "and absent targets are rejected",
        worst + guard_violations, b.tol(1e-9));
}

// ---- criterion 8: ladder reconstruction -------------------------------------

void check_ladder_reconstruction(Battery& b) {
  LabelSampler sampler(b.options.seed + 8);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    IrrepLabel label = sampler.infinite_label(3);
    // Keep rho^2 != lambda^2 with margin at the source and at every shifted
    // label reached inside the compositions.
    const double margin = 0.2;
    bool bad = false;
    for (double s : {-0.5, 0.0, 0.5})
      for (double u : {-0.5, 0.0, 0.5}) {
        const Complex r = label.rho + Complex(u);
        const double l = label.lambda.value() + s;
        if (std::abs(r - Complex(l)) < margin || std::abs(r + Complex(l)) < margin) bad = true;
      }
    if (bad) {
      --trial;
      continue;
    }
    const HalfInt j_cut = label.lambda.abs() + HalfInt::whole(10);
    for (int A : {-1, 1}) {
      worst = std::max(worst, js_reconstruct(label, A, j_cut).residual);
      for (int B : {-1, 1})
        worst = std::max(worst, js_commutators(label, A, B, j_cut).max_residual);
    }
  }
  b.add("criterion 8: ladder reconstruction",
        "bilinears in the half-spin ladder operators rebuild (J - iA K)/2 and satisfy the "
        "oscillator brackets",
        worst, b.tol(1e-10));
}

// ---- criterion 9: tridiagonal eigenspaces -----------------------------------

void check_tridiagonal_eigenspaces(Battery& b) {
  std::mt19937_64 rng(b.options.seed + 9);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 8);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    Tridiagonal t(n);
    for (int i = 0; i < n; ++i) t.diag[i] = Complex(unit(rng), unit(rng));
    for (int i = 0; i + 1 < n; ++i) {
      t.sub[i] = Complex(unit(rng), unit(rng));
      do {
        t.sup[i] = Complex(unit(rng), unit(rng));
      } while (std::abs(t.sup[i]) <= 0.1);
    }
    for (const Complex& k : dense_eig_oracle(t))
      if (geometric_multiplicity(t, k) != 1) ++violations;
  }
  b.add("criterion 9: tridiagonal eigenspaces",
        "every eigenvalue of 200 random tridiagonals with nonzero superdiagonal has a "
        "one-dimensional eigenspace",
        violations, 0.5);
}

// ---- criterion 10: su(2) layer ----------------------------------------------

void check_su2_layer(Battery& b) {
  double worst = 0.0;
  for (int t1 = 0; t1 <= 6; ++t1) {
    for (int t2 = 0; t2 <= 6; ++t2) {
      const HalfInt j1 = HalfInt::from_twice(t1), j2 = HalfInt::from_twice(t2);
      const Su2CgOracle oracle(j1, j2);

      for (HalfInt J = (j1 - j2).abs(); J <= j1 + j2; J += HalfInt::whole(1)) {
        for (HalfInt M : mrange(J)) {
          // Oracle agreement over the full column.
          for (HalfInt m1 : mrange(j1)) {
            const HalfInt m2 = M - m1;
            if (m2.abs() > j2) continue;
            worst = std::max(worst, std::abs(su2_cg(j1, m1, j2, m2, J, M) -
                                             oracle.cg(m1, m2, J, M)));
          }
          // Orthogonality between (J, M) and every (J', M).
          for (HalfInt Jp = (j1 - j2).abs(); Jp <= j1 + j2; Jp += HalfInt::whole(1)) {
            if (M.abs() > Jp) continue;
            double s = 0.0;
            for (HalfInt m1 : mrange(j1)) {
              const HalfInt m2 = M - m1;
              if (m2.abs() > j2) continue;
              s += su2_cg(j1, m1, j2, m2, J, M) * su2_cg(j1, m1, j2, m2, Jp, M);
            }
            worst = std::max(worst, std::abs(s - (J == Jp ? 1.0 : 0.0)));
          }
        }
      }

      // Completeness on the product side.
      for (HalfInt m1 : mrange(j1))
        for (HalfInt m2 : mrange(j2))
          for (HalfInt m1p : mrange(j1))
            for (HalfInt m2p : mrange(j2)) {
              if (m1 + m2 != m1p + m2p) continue;
              double s = 0.0;
              for (HalfInt J = (j1 - j2).abs(); J <= j1 + j2; J += HalfInt::whole(1)) {
                const HalfInt M = m1 + m2;
                if (M.abs() > J) continue;
                s += su2_cg(j1, m1, j2, m2, J, M) * su2_cg(j1, m1p, j2, m2p, J, M);
              }
              worst = std::max(worst,
                               std::abs(s - ((m1 == m1p && m2 == m2p) ? 1.0 : 0.0)));
            }
    }
  }
  b.add("criterion 10: su(2) layer",
        "closed-form coupling coefficients match the ladder/Gram-Schmidt oracle and satisfy "
        "orthogonality and completeness",
        worst, b.tol(1e-12));
}

// ---- criterion 11: classification and dimensions ----------------------------

bool unitary_class(ModuleClass c) {
  return c == ModuleClass::Principal || c == ModuleClass::Complementary ||
         c == ModuleClass::Trivial;
}

int count_unitary_outputs(const IrrepLabel& label, int A) {
  int count = 0;
  for (int sign : {-1, 1}) {
    const HalfInt nu = HalfInt::from_twice(sign);
    const IrrepLabel out(label.lambda + nu, label.rho + Complex(A * nu.value()));
    if (unitary_class(classify(out).cls)) ++count;
  }
  return count;
}

void check_classification(Battery& b) {
  int violations = 0;

  struct GridPoint {
    HalfInt lambda;
    Complex rho;
    ModuleClass expect;
  };
  std::vector<GridPoint> grid;
  for (const int lt : {0, 1, 2, 3, 4})
    for (const double t : {0.7, -1.9, 0.35})
      grid.push_back({HalfInt::from_twice(lt), Complex(0.0, t), ModuleClass::Principal});
  grid.push_back({HalfInt::from_twice(1), Complex(0.0), ModuleClass::Principal});
  grid.push_back({HalfInt::from_twice(4), Complex(0.0), ModuleClass::Principal});
  for (const double r : {0.5, -0.5, 0.93, -0.93, 0.17, -0.17})
    grid.push_back({HalfInt::whole(0), Complex(r), ModuleClass::Complementary});
  grid.push_back({HalfInt::whole(0), Complex(1.0), ModuleClass::Trivial});
  grid.push_back({HalfInt::whole(0), Complex(-1.0), ModuleClass::Trivial});
  for (const int lt : {0, 1, 2, 3})
    for (const int n : {1, 2})
      for (const int s : {1, -1}) {
        const double r = s * (0.5 * lt + n);
        const ModuleClass expect = (lt == 0 && n == 1) ? ModuleClass::Trivial
                                                       : ModuleClass::FiniteDimensional;
        grid.push_back({HalfInt::from_twice(lt), Complex(r), expect});
      }
  for (const auto& rho : {Complex(1.7), Complex(-2.3), Complex(0.4, 0.8), Complex(-0.6, -1.1)})
    for (const int lt : {1, 2})
      grid.push_back({HalfInt::from_twice(lt), rho, ModuleClass::NonUnitaryInfinite});
  grid.push_back({HalfInt::whole(0), Complex(1.5), ModuleClass::NonUnitaryInfinite});
  grid.push_back({HalfInt::whole(0), Complex(0.3, 0.4), ModuleClass::NonUnitaryInfinite});

  for (const auto& point : grid) {
    const Classification c = classify(IrrepLabel(point.lambda, point.rho));
    if (c.cls != point.expect) ++violations;
    if (point.expect == ModuleClass::FiniteDimensional) {
      const double want = std::abs(point.rho.real()) - 1.0;
      if (!c.j_max || std::abs(c.j_max->value() - want) > 1e-12) ++violations;
    }
  }

  // Dimension formula against the level-sum route.
  for (int lt = 0; lt <= 10; ++lt)
    for (int wt = lt; wt <= 10; wt += 2) {
      const HalfInt lambda = HalfInt::from_twice(lt), omega = HalfInt::from_twice(wt);
      int level_sum = 0;
      for (HalfInt j = lambda; j <= omega; j += HalfInt::whole(1)) level_sum += j.twice() + 1;
      if (finite_dim(lambda, omega) != level_sum) ++violations;
    }

  // Half-spin coupling of the special families yields exactly one unitary
  // module; generic labels yield none.
  for (const int A : {1, -1}) {
    for (const double t : {0.6, -1.3})
      for (const double sign : {1.0, -1.0}) {
        const IrrepLabel label(HalfInt::whole(0), Complex(0.5 * sign, t));
        if (count_unitary_outputs(label, A) != 1) ++violations;
      }
    for (const double s : {0.4, -0.7})
      for (const int lsign : {1, -1}) {
        const IrrepLabel label(HalfInt::from_twice(lsign),
                               Complex(lsign * A * 0.5 + s, 0.0));
        if (count_unitary_outputs(label, A) != 1) ++violations;
      }
    for (const auto& generic :
         {IrrepLabel(HalfInt::whole(1), Complex(0.3, 0.2)),
          IrrepLabel(HalfInt::from_twice(1), Complex(0.17, -1.4)),
          IrrepLabel(HalfInt::whole(0), Complex(0.2, 0.9)),
          IrrepLabel(HalfInt::whole(2), Complex(-0.31, 0.55))}) {
      if (count_unitary_outputs(generic, A) != 0) ++violations;
    }
  }

  b.add("criterion 11: classification and dimensions",
        "unitary classes and finite towers on a 50-point grid; dimension formula equals the "
        "level sum; half-spin coupling unitarity census",
        violations, 0.5);
}

// ---- extra: closed-form block cross-check -----------------------------------

void check_closed_form_blocks(Battery& b) {
  LabelSampler sampler(b.options.seed + 12);
  double worst_good = 0.0, worst_bad = 1e300;
  for (const int gamma_twice : {1, 2, 3}) {
    const HalfInt gamma = HalfInt::from_twice(gamma_twice);
    const IrrepLabel label = sampler.decomposable_label(2, gamma);
    const int A = sampler.pick(2) == 0 ? 1 : -1;
    const CouplingProblem problem(FiniteLabel(gamma, A), label);
    const HalfInt J = label.lambda.abs() + gamma + HalfInt::whole(1);
    const VJBlock built = casimir_block(problem, J);
    const VJBlock source = casimir_block_closed_form(problem, J, C2Diagonal::CoupledMinusSource);
    const VJBlock mixed = casimir_block_closed_form(problem, J, C2Diagonal::CoupledMinusMixed);

    auto deviation = [](const Tridiagonal& x, const Tridiagonal& y) {
      double m = 0.0;
      for (int i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x.diag[i] - y.diag[i]));
      for (int i = 0; i + 1 < x.size(); ++i) {
        m = std::max(m, std::abs(x.sub[i] - y.sub[i]));
        m = std::max(m, std::abs(x.sup[i] - y.sup[i]));
      }
      return m;
    };
    worst_good = std::max({worst_good, deviation(built.c1, source.c1),
                           deviation(built.c2, source.c2)});
    worst_bad = std::min(worst_bad, deviation(built.c2, mixed.c2));
  }
  b.add("extra: closed-form block cross-check",
        "compositional Casimir blocks match the closed-form entries with the j(j+1) diagonal",
        worst_good, b.tol(1e-10));
  std::ostringstream note;
  note.precision(3);
  note << "closed-form second-Casimir diagonal: the j(j+1) reading matches the compositional "
          "construction to "
       << worst_good << "; the literal j(J+1) reading deviates by at least " << worst_bad
       << " on the same sample.";
  b.note(note.str());
}

} // namespace

Report run_acceptance(const Options& options) {
  Battery b{options, Report{options, {}, {}, true}};

  check_algebra(b);
  check_golden_table(b);
  check_block_spectra(b);
  check_defect_detection(b);
  check_ratio_recurrence(b);
  check_projection_round_trip(b);
  check_ladder_reconstruction(b);
  check_tridiagonal_eigenspaces(b);
  check_su2_layer(b);
  check_classification(b);
  check_closed_form_blocks(b);

  b.note(
      "decomposability reading: simultaneous diagonalization fails exactly when rho + A*lambda "
      "is an integer in the open interval (-2*gamma, 2*gamma); the complementary reading "
      "(failure outside that window) would contradict the distinct-eigenvalue count and is "
      "rejected; the defect detector confirms the implemented reading.");

  b.report.all_pass = true;
  for (const auto& c : b.report.checks) b.report.all_pass = b.report.all_pass && c.pass;
  return b.report;
}

} // namespace lorentzcg::verify

#include "lorentzcg/coupling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lorentzcg/su2.hpp"

namespace lorentzcg {

namespace {

constexpr double kIntegerTol = 1e-9;
constexpr double kTridiagTol = 1e-12;

double norm2(const std::vector<Complex>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

Complex hdot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

bool integer_in_open_interval(Complex z, HalfInt width2) {
  // Is z an integer strictly inside (-width2, width2)?  width2 carries 2*gamma.
  if (std::abs(z.imag()) > kIntegerTol) return false;
  const double n = std::round(z.real());
  if (std::abs(z.real() - n) > kIntegerTol) return false;
  return std::abs(n) < width2.value() - kIntegerTol / 2;
}

// (-iA)^p for integer p >= 0.
Complex minus_iA_pow(int A, int p) {
  static const Complex cycle_plus[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};  // A = +1
  const Complex v = cycle_plus[p % 4];
  return A == 1 ? v : std::conj(v);
}

std::vector<std::vector<Complex>> invert_dense(std::vector<std::vector<Complex>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Complex>> inv(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == Complex{})
      throw std::runtime_error("decompose: singular coefficient matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Complex d = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a[r][col];
      if (f == Complex{}) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

} // namespace

CouplingProblem::CouplingProblem(FiniteLabel f, IrrepLabel v) : finite(f), infinite(v) {
  if (finite.gamma < HalfInt::from_twice(1))
    throw std::domain_error("CouplingProblem: gamma must be >= 1/2");
  if (infinite.finite_dimensional())
    throw std::domain_error("CouplingProblem: the infinite factor must not be finite-dimensional");
}

ProductSpace::ProductSpace(const CouplingProblem& problem, HalfInt j_cut)
    : problem_(problem), module_(problem.infinite, j_cut), mus_(mrange(problem.finite.gamma)) {
  const int nf = static_cast<int>(mus_.size());
  const int nv = module_.dim();
  const int n = nf * nv;
  static constexpr Generator kAll[6] = {Generator::J0, Generator::Jp, Generator::Jm,
                                        Generator::K0, Generator::Kp, Generator::Km};
  for (Generator g : kAll) {
    const SparseOperator F = finite_generator_matrix(problem_.finite, g);
    const SparseOperator V = generator_matrix(module_, g);
    SparseOperator total(n, n);
    for (int rf = 0; rf < nf; ++rf)
      for (const auto& [cf, vf] : F.row(rf))
        for (int k = 0; k < nv; ++k) total.add(index(rf, k), index(cf, k), vf);
    for (int rv = 0; rv < nv; ++rv)
      for (const auto& [cv, vv] : V.row(rv))
        for (int mu = 0; mu < nf; ++mu) total.add(index(mu, rv), index(mu, cv), vv);
    gens_[static_cast<int>(g)] = std::move(total);
  }
  const auto& J0 = gens_[static_cast<int>(Generator::J0)];
  const auto& Jp = gens_[static_cast<int>(Generator::Jp)];
  const auto& Jm = gens_[static_cast<int>(Generator::Jm)];
  const auto& K0 = gens_[static_cast<int>(Generator::K0)];
  const auto& Kp = gens_[static_cast<int>(Generator::Kp)];
  const auto& Km = gens_[static_cast<int>(Generator::Km)];
  c1_ = J0 * K0 + (Jm * Kp + Jp * Km).scaled(0.5);
  c2_ = J0 * J0 + Jm * Jp - K0 * K0 - Kp * Km;
}

const SparseOperator& ProductSpace::total_generator(Generator g) const {
  return gens_[static_cast<int>(g)];
}

std::vector<Complex> ProductSpace::coupled_vector(HalfInt j, HalfInt J, HalfInt M) const {
  if (!module_.index_of(State{j, j}))
    throw std::domain_error("coupled_vector: j outside the truncated module");
  std::vector<Complex> v(dim(), Complex{});
  const HalfInt gamma = problem_.finite.gamma;
  for (int mu_idx = 0; mu_idx < static_cast<int>(mus_.size()); ++mu_idx) {
    const HalfInt mu = mus_[mu_idx];
    const HalfInt m = M - mu;
    if (m.abs() > j || !(j - m).is_integer()) continue;
    const double cg = su2_cg(gamma, mu, j, m, J, M);
    if (cg == 0.0) continue;
    v[index(mu_idx, *module_.index_of(State{j, m}))] = cg;
  }
  return v;
}

std::vector<Complex> coupled_basis_vector(const ProductSpace& space, HalfInt j, HalfInt J,
                                          HalfInt M) {
  const auto& lam = space.problem().infinite.lambda;
  const auto& gam = space.problem().finite.gamma;
  if (!in_jset(lam, gam, J)) throw std::domain_error("coupled_basis_vector: J not admissible");
  const auto omega = omega_set(lam, gam, J);
  if (std::find(omega.begin(), omega.end(), j) == omega.end())
    throw std::domain_error("coupled_basis_vector: j not in Omega_J");
  if (M.abs() > J) throw std::domain_error("coupled_basis_vector: |M| > J");
  return space.coupled_vector(j, J, M);
}

namespace {

// Tridiagonal restriction of a product-space operator to span{|(j) J, M>}.
Tridiagonal restrict_to_block(const SparseOperator& op, const std::vector<std::vector<Complex>>& vs,
                              double scale) {
  const int n = static_cast<int>(vs.size());
  Tridiagonal t(n);
  for (int c = 0; c < n; ++c) {
    const auto w = op.apply(vs[c]);
    std::vector<Complex> proj(w.size(), Complex{});
    for (int r = 0; r < n; ++r) {
      const Complex e = hdot(vs[r], w);
      if (r == c)
        t.diag[c] = e;
      else if (r == c + 1)
        t.sub[c] = e;
      else if (r == c - 1)
        t.sup[r] = e;
      else if (std::abs(e) > kTridiagTol * scale)
        throw std::runtime_error("casimir_block: entry outside the tridiagonal band");
      for (std::size_t i = 0; i < w.size(); ++i) proj[i] += e * vs[r][i];
    }
    double leak = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) leak += std::norm(w[i] - proj[i]);
    if (std::sqrt(leak) > kTridiagTol * scale * 10)
      throw std::runtime_error("casimir_block: action leaks out of the J-eigenspace");
  }
  return t;
}

} // namespace

VJBlock casimir_block(const ProductSpace& space, HalfInt J) {
  const auto& problem = space.problem();
  const auto omega = omega_set(problem.infinite.lambda, problem.finite.gamma, J);
  // Products of two generators are exact two levels below the cut.
  if (omega.back() > space.module().j_top() - HalfInt::whole(2))
    throw std::invalid_argument("casimir_block: product space truncated too low for this J");
  std::vector<std::vector<Complex>> vs;
  vs.reserve(omega.size());
  for (HalfInt j : omega) vs.push_back(space.coupled_vector(j, J, J));
  const double scale =
      std::max({1.0, space.casimir1().max_abs(), space.casimir2().max_abs()});
  VJBlock block;
  block.J = J;
  block.omega = omega;
  block.c1 = restrict_to_block(space.casimir1(), vs, scale);
  block.c2 = restrict_to_block(space.casimir2(), vs, scale);
  return block;
}

VJBlock casimir_block(const CouplingProblem& problem, HalfInt J) {
  ProductSpace space(problem, J + problem.finite.gamma + HalfInt::whole(2));
  return casimir_block(space, J);
}

VJBlock casimir_block_closed_form(const CouplingProblem& problem, HalfInt J, C2Diagonal reading) {
  const HalfInt lambda = problem.infinite.lambda;
  const HalfInt gamma = problem.finite.gamma;
  const double A = problem.finite.A;
  const Complex rho = problem.infinite.rho;
  const auto omega = omega_set(lambda, gamma, J);
  const int n = static_cast<int>(omega.size());
  const double Jv = J.value(), gv = gamma.value();
  const double lv = lambda.value();

  VJBlock block;
  block.J = J;
  block.omega = omega;
  block.c1 = Tridiagonal(n);
  block.c2 = Tridiagonal(n);

  const Complex iA(0.0, A);
  for (int i = 0; i < n; ++i) {
    const HalfInt j = omega[i];
    const double jv = j.value();
    const PFunctions p = p_functions(problem.infinite, j);

    block.c1.diag[i] = Jv * (Jv + 1.0) * 0.5 * (iA + p.p) -
                       (jv * (jv + 1.0) - gv * (gv + 1.0)) * 0.5 * (iA - p.p);
    const double source_term =
        reading == C2Diagonal::CoupledMinusSource ? jv * (jv + 1.0) : jv * (Jv + 1.0);
    block.c2.diag[i] = (Jv * (Jv + 1.0) - source_term) * (1.0 - iA * p.p) +
                       gv * (gv + 1.0) * (1.0 + iA * p.p) + lv * lv + rho * rho - 1.0;

    if (i + 1 < n) {
      const double s = std::sqrt(Jv + jv + gv + 2.0) * std::sqrt(jv + gv - Jv + 1.0) *
                       std::sqrt(Jv + jv - gv + 1.0) * std::sqrt(Jv - jv + gv);
      block.c1.sub[i] = p.plus * 0.5 * s;
      block.c2.sub[i] = -iA * p.plus * s;
    }
    if (i > 0) {
      const double r = std::sqrt(Jv + jv + gv + 1.0) * std::sqrt(jv + gv - Jv) *
                       std::sqrt(Jv + jv - gv) * std::sqrt(Jv - jv + gv + 1.0);
      block.c1.sup[i - 1] = p.minus * 0.5 * r;
      block.c2.sup[i - 1] = -iA * p.minus * r;
    }
  }
  return block;
}

bool is_decomposable(const CouplingProblem& problem) {
  const Complex z = problem.infinite.rho +
                    Complex(problem.finite.A * problem.infinite.lambda.value());
  return !integer_in_open_interval(z, 2 * problem.finite.gamma);
}

std::vector<EigenPair> eigenpair_set(const CouplingProblem& problem, HalfInt J) {
  if (!is_decomposable(problem))
    throw std::domain_error("eigenpair_set: the Casimirs are not diagonalisable for this problem");
  if (!in_jset(problem.infinite.lambda, problem.finite.gamma, J))
    throw std::domain_error("eigenpair_set: J not admissible");
  std::vector<EigenPair> out;
  for (HalfInt nu : mrange(problem.finite.gamma)) {
    const HalfInt Lambda = problem.infinite.lambda + nu;
    if (J < Lambda.abs()) continue;
    out.push_back(EigenPair{Lambda, problem.infinite.rho + Complex(problem.finite.A * nu.value())});
  }
  if (static_cast<int>(out.size()) !=
      vj_dimension(problem.infinite.lambda, problem.finite.gamma, J))
    throw std::runtime_error("eigenpair_set: pair count disagrees with the block dimension");
  return out;
}

Complex half_coupling_B(const IrrepLabel& label, int A, int nu_sign, HalfInt J, HalfInt j) {
  const double lv = label.lambda.value();
  const double Jv = J.value();
  const Complex rho = label.rho;
  const Complex Arho = double(A) * rho;
  const Complex denom = std::sqrt(2.0 * Jv + 1.0) * std::sqrt(Complex(lv) + Arho);
  const Complex iA(0.0, A);
  const bool lower_j = (j == J - HalfInt::from_twice(1));
  const bool upper_j = (j == J + HalfInt::from_twice(1));
  if (!lower_j && !upper_j) return Complex{};
  const Complex low = std::sqrt(Complex(Jv - lv + 0.5)) * std::sqrt(Complex(Jv + 0.5) - Arho);
  const Complex high = std::sqrt(Complex(Jv + lv + 0.5)) * std::sqrt(Complex(Jv + 0.5) + Arho);
  if (nu_sign < 0) return (lower_j ? iA * low : high) / denom;
  return (lower_j ? high : -iA * low) / denom;
}

const CGColumn* CGBlock::find(HalfInt nu) const {
  for (const auto& col : columns)
    if (col.nu == nu) return &col;
  return nullptr;
}

std::optional<int> CGBlock::omega_index(HalfInt j) const {
  for (std::size_t i = 0; i < omega.size(); ++i)
    if (omega[i] == j) return static_cast<int>(i);
  return std::nullopt;
}

const CGBlock* CGTable::block(HalfInt J) const {
  for (const auto& b : blocks)
    if (b.J == J) return &b;
  return nullptr;
}

Complex CGTable::coefficient(HalfInt nu, HalfInt J, HalfInt j) const {
  const CGBlock* b = block(J);
  if (!b) return Complex{};
  const CGColumn* col = b->find(nu);
  if (!col) return Complex{};
  const auto idx = b->omega_index(j);
  return idx ? col->coeffs[*idx] : Complex{};
}

Complex CGTable::inverse_coefficient(HalfInt nu, HalfInt J, HalfInt j) const {
  const CGBlock* b = block(J);
  if (!b) return Complex{};
  const auto idx = b->omega_index(j);
  if (!idx) return Complex{};
  for (std::size_t c = 0; c < b->columns.size(); ++c)
    if (b->columns[c].nu == nu) return b->inverse[c][*idx];
  return Complex{};
}

namespace {

struct BlockWork {
  HalfInt J;
  std::vector<HalfInt> omega;
  Tridiagonal c1, c2;
  std::vector<std::vector<Complex>> coupled; // |(j) J, J> over the product basis
  std::vector<CGColumn> columns;             // provisional signs
};

void build_block_work(const ProductSpace& space, const CouplingProblem& problem, HalfInt J,
                      BlockWork& work) {
  work.J = J;
  VJBlock block = casimir_block(space, J);
  work.omega = block.omega;
  work.coupled.clear();
  for (HalfInt j : work.omega) work.coupled.push_back(space.coupled_vector(j, J, J));
  work.c1 = std::move(block.c1);
  work.c2 = std::move(block.c2);

  const double scale1 = std::max(1.0, work.c1.max_abs());
  const double scale2 = std::max(1.0, work.c2.max_abs());
  for (const EigenPair& pair : eigenpair_set(problem, J)) {
    auto x = eigvec_by_recurrence(work.c1, pair.c1());
    // Simultaneous eigenvector: the c2 block must agree.
    auto r2 = work.c2.apply(x);
    const Complex c2v = pair.c2();
    for (std::size_t i = 0; i < r2.size(); ++i) r2[i] -= c2v * x[i];
    const double res2 = norm2(r2) / (norm2(x) * scale2);
    if (res2 > 1e-9)
      throw std::runtime_error("decompose: eigenvector fails the second Casimir block");

    auto r1 = work.c1.apply(x);
    const Complex c1v = pair.c1();
    for (std::size_t i = 0; i < r1.size(); ++i) r1[i] -= c1v * x[i];
    const double res1 = norm2(r1) / (norm2(x) * scale1);

    // Bilinear normalization: unconjugated sum of squares equals one.
    Complex s{};
    for (const auto& v : x) s += v * v;
    if (std::abs(s) < 1e-12 * norm2(x) * norm2(x))
      throw std::runtime_error("decompose: column is bilinear-isotropic, cannot normalize");
    const Complex inv = 1.0 / std::sqrt(s);
    for (auto& v : x) v *= inv;

    CGColumn col;
    col.pair = pair;
    col.nu = pair.Lambda - problem.infinite.lambda;
    col.coeffs = std::move(x);
    col.residual = std::max(res1, res2);
    work.columns.push_back(std::move(col));
  }
}

} // namespace

CGTable decompose(const CouplingProblem& problem, HalfInt J_max, int threads) {
  if (!is_decomposable(problem))
    throw std::domain_error("decompose: the Casimirs are not diagonalisable for this problem");
  const HalfInt lambda = problem.infinite.lambda;
  const HalfInt gamma = problem.finite.gamma;
  const int A = problem.finite.A;
  if (!in_jset(lambda, gamma, J_max)) throw std::domain_error("decompose: J_max not admissible");

  std::vector<HalfInt> Js;
  for (HalfInt J = jset_min(lambda, gamma); J <= J_max; J += HalfInt::whole(1)) Js.push_back(J);

  const ProductSpace space(problem, J_max + gamma + HalfInt::whole(2));
  std::vector<BlockWork> work(Js.size());

  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(Js.size())));
  if (nthreads == 1) {
    for (std::size_t i = 0; i < Js.size(); ++i) build_block_work(space, problem, Js[i], work[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= Js.size()) return;
        try {
          build_block_work(space, problem, Js[i], work[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  // Sequential phase: signs.  gamma = 1/2 follows the closed-form table; for
  // larger gamma each (Lambda, P) tower is anchored at its lowest J and the
  // sign is continued upward by transporting the previous column with the
  // total raising boost (the action that defines the normalization of the
  // eigenbasis across J).
  const auto& Kp = space.total_generator(Generator::Kp);
  struct PrevColumn {
    std::vector<Complex> coeffs;
    HalfInt J;
    std::vector<HalfInt> omega;
  };
  std::map<int, PrevColumn> prev; // keyed by nu.twice()

  CGTable table{problem, J_max, {}};
  for (std::size_t bi = 0; bi < work.size(); ++bi) {
    BlockWork& w = work[bi];
    for (auto& col : w.columns) {
      auto& x = col.coeffs;
      const auto it = prev.find(col.nu.twice());
      if (it == prev.end()) {
        if (gamma == HalfInt::from_twice(1)) {
          const HalfInt j_ref = w.omega.back();
          const Complex t = half_coupling_B(problem.infinite, A, col.nu.sign(), w.J, j_ref);
          if (std::abs(x.back() - t) > std::abs(x.back() + t))
            for (auto& v : x) v = -v;
        } else {
          const int p = (gamma + col.nu).twice() / 2;
          const Complex wv = x.back() * std::conj(minus_iA_pow(A, p));
          const bool flip =
              (std::abs(wv.real()) > 1e-12 * std::abs(x.back())) ? wv.real() < 0 : wv.imag() < 0;
          if (flip)
            for (auto& v : x) v = -v;
        }
      } else {
        const PrevColumn& pc = it->second;
        std::vector<Complex> lower(space.dim(), Complex{});
        for (std::size_t i = 0; i < pc.omega.size(); ++i) {
          const auto v = space.coupled_vector(pc.omega[i], pc.J, pc.J);
          for (std::size_t k = 0; k < lower.size(); ++k) lower[k] += pc.coeffs[i] * v[k];
        }
        auto raised = Kp.apply(lower);
        const IrrepLabel pair_label(col.pair.Lambda, col.pair.P);
        const double Jp_v = pc.J.value();
        const Complex denom = -p_functions(pair_label, pc.J).plus *
                              std::sqrt(2.0 * Jp_v + 1.0) * std::sqrt(2.0 * Jp_v + 2.0);
        std::vector<Complex> y(w.omega.size());
        for (std::size_t i = 0; i < w.omega.size(); ++i) y[i] = hdot(w.coupled[i], raised) / denom;

        double dplus = 0.0, dminus = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
          dplus += std::norm(x[i] - y[i]);
          dminus += std::norm(x[i] + y[i]);
        }
        if (dminus < dplus)
          for (auto& v : x) v = -v;
        if (std::sqrt(std::min(dplus, dminus)) > 1e-6 * std::max(1.0, norm2(y)))
          throw std::runtime_error("decompose: raising transport disagrees with the recurrence");
      }
      prev[col.nu.twice()] = PrevColumn{x, w.J, w.omega};
    }

    CGBlock block;
    block.J = w.J;
    block.omega = std::move(w.omega);
    block.columns = std::move(w.columns);

    const int n = static_cast<int>(block.omega.size());
    std::vector<std::vector<Complex>> amat(n, std::vector<Complex>(n));
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) amat[r][c] = block.columns[c].coeffs[r];
    auto inv = invert_dense(amat);
    double resid = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        Complex s{};
        for (int k = 0; k < n; ++k) s += amat[r][k] * inv[k][c];
        resid = std::max(resid, std::abs(s - (r == c ? Complex(1.0) : Complex{})));
      }
    block.inverse = std::move(inv);
    block.inverse_residual = resid;
    table.blocks.push_back(std::move(block));
  }
  return table;
}

std::pair<Complex, Complex> cg_ratio_check(const CGTable& table, HalfInt nu, HalfInt J) {
  const auto& problem = table.problem;
  const HalfInt gamma = problem.finite.gamma;
  const HalfInt lambda = problem.infinite.lambda;
  if (J < lambda.abs() + gamma)
    throw std::domain_error("cg_ratio_check: requires J >= |lambda| + gamma");
  if (nu.abs() > gamma || nu + HalfInt::whole(1) > gamma)
    throw std::domain_error("cg_ratio_check: no (Lambda+1, P+A) partner at the top of the ladder");
  const CGBlock* b = table.block(J);
  if (!b) throw std::domain_error("cg_ratio_check: block not present in the table");
  const HalfInt j = J - gamma;
  const Complex b_lo = table.inverse_coefficient(nu, J, j);
  const Complex b_hi = table.inverse_coefficient(nu + HalfInt::whole(1), J, j);
  if (b_lo == Complex{})
    throw std::domain_error("cg_ratio_check: vanishing reference coefficient");
  const Complex lhs = b_hi / b_lo;

  const double A = problem.finite.A;
  const double Lv = (lambda + nu).value();
  const Complex P = problem.infinite.rho + Complex(A * nu.value());
  const double Jv = J.value();
  const Complex rhs = std::sqrt(Complex(Jv + Lv + 1.0)) * std::sqrt(Complex(Jv + 1.0) + A * P) /
                      (std::sqrt(Complex(Jv - Lv)) * std::sqrt(Complex(Jv) - A * P));
  return {lhs, rhs};
}

std::pair<Complex, Complex> cg_ratio_check(const CouplingProblem& problem, HalfInt Lambda,
                                           Complex P, HalfInt J) {
  const HalfInt nu = Lambda - problem.infinite.lambda;
  const Complex expect = problem.infinite.rho + Complex(problem.finite.A * nu.value());
  if (std::abs(P - expect) > 1e-9)
    throw std::domain_error("cg_ratio_check: (Lambda, P) is not an eigenpair of this problem");
  return cg_ratio_check(decompose(problem, J), nu, J);
}

GeneralCouplingResult general_coupling(HalfInt gamma1, HalfInt gamma2, const IrrepLabel& label) {
  if (gamma1 < HalfInt::from_twice(1) || gamma2 < HalfInt::from_twice(1))
    throw std::domain_error("general_coupling: gamma1, gamma2 must be >= 1/2");
  if (label.finite_dimensional())
    throw std::domain_error("general_coupling: label must be infinite-dimensional");
  GeneralCouplingResult out;
  const Complex lam(label.lambda.value());
  out.decomposable = !integer_in_open_interval(label.rho - lam, 2 * gamma1) &&
                     !integer_in_open_interval(label.rho + lam, 2 * gamma2);
  for (HalfInt nu1 : mrange(gamma1))
    for (HalfInt nu2 : mrange(gamma2))
      out.pairs.push_back(EigenPair{label.lambda + nu1 + nu2,
                                    label.rho - Complex(nu1.value()) + Complex(nu2.value())});
  return out;
}

Complex TwoStageTable::coefficient(HalfInt mu1, HalfInt mu2, HalfInt j, HalfInt m, int alpha_index,
                                   HalfInt nu1, HalfInt J, HalfInt M) const {
  const auto& [alpha_pair, stage2_table] = stage2.at(alpha_index);
  const HalfInt M2 = mu2 + m;
  if (mu1 + M2 != M) return Complex{};
  const HalfInt nu2 = alpha_pair.Lambda - label.lambda;
  Complex sum{};
  if (!in_jset(alpha_pair.Lambda, gamma1, J)) return Complex{};
  for (HalfInt J2 : omega_set(alpha_pair.Lambda, gamma1, J)) {
    if (M2.abs() > J2) continue;
    const Complex a1 = stage2_table.coefficient(nu1, J, J2);
    if (a1 == Complex{}) continue;
    const Complex a2 = stage1.coefficient(nu2, J2, j);
    if (a2 == Complex{}) continue;
    sum += a1 * su2_cg(gamma1, mu1, J2, M2, J, M) * a2 * su2_cg(gamma2, mu2, j, m, J2, M2);
  }
  return sum;
}

TwoStageTable two_stage_cg(HalfInt gamma1, HalfInt gamma2, const IrrepLabel& label, HalfInt J_max,
                           int threads) {
  const auto gc = general_coupling(gamma1, gamma2, label);
  if (!gc.decomposable)
    throw std::domain_error("two_stage_cg: the Casimirs are not diagonalisable for this product");

  // Requested tops snap down one half step at most to land on each stage's
  // J grid; anything lower means the sweep cannot reach a single block.
  auto snap = [](HalfInt lambda, HalfInt gamma, HalfInt top) {
    if (!in_jset(lambda, gamma, top)) top -= HalfInt::from_twice(1);
    if (!in_jset(lambda, gamma, top))
      throw std::domain_error("two_stage_cg: J_max below the first admissible block");
    return top;
  };

  const CouplingProblem stage1_problem(FiniteLabel(gamma2, +1), label);
  // Stage-1 blocks are consumed at J2 <= J_max + gamma1.
  CGTable stage1 =
      decompose(stage1_problem, snap(label.lambda, gamma2, J_max + gamma1), threads);

  TwoStageTable out{gamma1, gamma2, label, J_max, std::move(stage1), {}};
  for (HalfInt nu2 : mrange(gamma2)) {
    const EigenPair alpha{label.lambda + nu2, label.rho + Complex(nu2.value())};
    const IrrepLabel mid(alpha.Lambda, alpha.P);
    if (mid.finite_dimensional())
      throw std::runtime_error("two_stage_cg: intermediate module is finite-dimensional");
    out.stage2.emplace_back(alpha, decompose(CouplingProblem(FiniteLabel(gamma1, -1), mid),
                                             snap(mid.lambda, gamma1, J_max), threads));
  }
  return out;
}

} // namespace lorentzcg

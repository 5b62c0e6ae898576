#include "lorentzcg/tensorop.hpp"

#include <cmath>
#include <stdexcept>

#include "lorentzcg/su2.hpp"

namespace lorentzcg {

namespace {

std::vector<bool> interior_and(const TruncatedModule& m, HalfInt margin) {
  return m.interior_mask(margin);
}

double masked_residual(const SparseOperator& r, const TruncatedModule& target,
                       const TruncatedModule& source, HalfInt margin) {
  return r.max_abs_masked(interior_and(target, margin), interior_and(source, margin));
}

} // namespace

const SparseOperator* TensorOperator::component(HalfInt mu) const {
  for (const auto& [m, op] : components)
    if (m == mu) return &op;
  return nullptr;
}

double intertwiner_residual(const TensorOperator& T, Generator gen) {
  // Cuts snap to each module's own level grid, so they may differ by a half
  // step; anything more means the two truncations were chosen inconsistently.
  if ((T.source.j_cut() - T.target.j_cut()).abs() > HalfInt::from_twice(1))
    throw std::domain_error("intertwiner_residual: source/target truncations differ");
  const auto Xs = generator_matrix(T.source, gen);
  const auto Xt = generator_matrix(T.target, gen);
  const auto F = finite_generator_matrix(T.finite, gen);
  const HalfInt margin = T.finite.gamma + HalfInt::whole(1);

  double worst = 0.0;
  for (std::size_t mi = 0; mi < T.components.size(); ++mi) {
    const auto& [mu, Tmu] = T.components[mi];
    SparseOperator r = Xt * Tmu - Tmu * Xs;
    for (std::size_t ni = 0; ni < T.components.size(); ++ni) {
      const Complex f = F.at(static_cast<int>(ni), static_cast<int>(mi));
      if (f == Complex{}) continue;
      r = r - T.components[ni].second.scaled(f);
    }
    worst = std::max(worst, masked_residual(r, T.target, T.source, margin));
  }
  return worst;
}

TensorOperator wigner_eckart_projection(const CouplingProblem& problem, const EigenPair& target,
                                        HalfInt j_cut) {
  const HalfInt lambda = problem.infinite.lambda;
  const HalfInt gamma = problem.finite.gamma;
  const int A = problem.finite.A;
  const HalfInt nu = target.Lambda - lambda;
  const Complex expect = problem.infinite.rho + Complex(A * nu.value());
  if (nu.abs() > gamma || !(gamma - nu).is_integer() || std::abs(target.P - expect) > 1e-9)
    throw std::domain_error(
        "wigner_eckart_projection: target does not appear in the decomposition, "
        "the tensor operator must identically vanish");

  TensorOperator out{problem.finite, TruncatedModule(problem.infinite, j_cut),
                     TruncatedModule(IrrepLabel(target.Lambda, target.P), j_cut),
                     {}};
  const CGTable table = decompose(problem, out.target.j_top());

  for (HalfInt mu : mrange(gamma)) {
    SparseOperator op(out.target.dim(), out.source.dim());
    for (int r = 0; r < out.target.dim(); ++r) {
      const State t = out.target.basis()[r];
      for (HalfInt j : omega_set(lambda, gamma, t.j)) {
        const State s{j, t.m - mu};
        const auto c = out.source.index_of(s);
        if (!c) continue;
        const Complex b = table.inverse_coefficient(nu, t.j, j);
        if (b == Complex{}) continue;
        const double cg = su2_cg(gamma, mu, s.j, s.m, t.j, t.m);
        if (cg == 0.0) continue;
        op.add(r, *c, b * cg);
      }
    }
    out.components.emplace_back(mu, std::move(op));
  }
  return out;
}

ReducedElement reduced_matrix_element(const TensorOperator& T, const CGTable& table) {
  const HalfInt gamma = T.finite.gamma;
  const HalfInt nu = T.target.label().lambda - T.source.label().lambda;
  const auto src_mask = T.source.interior_mask(gamma + HalfInt::whole(1));
  const auto tgt_mask = T.target.interior_mask(gamma + HalfInt::whole(1));

  Complex sum{};
  std::vector<Complex> ratios;
  for (const auto& [mu, op] : T.components) {
    for (int r = 0; r < T.target.dim(); ++r) {
      if (!tgt_mask[r]) continue;
      const State t = T.target.basis()[r];
      for (int c = 0; c < T.source.dim(); ++c) {
        if (!src_mask[c]) continue;
        const State s = T.source.basis()[c];
        if (s.m + mu != t.m) continue;
        const Complex b = table.inverse_coefficient(nu, t.j, s.j);
        if (b == Complex{}) continue;
        const Complex denom = b * su2_cg(gamma, mu, s.j, s.m, t.j, t.m);
        // Selection-rule zeros are structural, skip rather than divide.
        if (std::abs(denom) < 1e-12) continue;
        const Complex ratio = op.at(r, c) / denom;
        ratios.push_back(ratio);
        sum += ratio;
      }
    }
  }
  if (ratios.empty())
    throw std::runtime_error("reduced_matrix_element: no usable sample, all denominators vanish");
  const Complex mean = sum / double(ratios.size());
  double scatter = 0.0;
  for (const auto& r : ratios) scatter = std::max(scatter, std::abs(r - mean));
  return ReducedElement{mean, scatter / std::max(std::abs(mean), 1e-15),
                        static_cast<int>(ratios.size())};
}

namespace {

// Ladder matrix elements; sign = +1/-1 selects the component mu = +-1/2,
// lower = true selects T (step down in lambda), false selects Ttilde.
SparseOperator ladder_component(const IrrepLabel& label, int A, int sign, bool lower,
                                const TruncatedModule& src, const TruncatedModule& tgt) {
  SparseOperator op(tgt.dim(), src.dim());
  const double lv = label.lambda.value();
  const Complex rho = label.rho;
  const Complex Arho = double(A) * rho;
  const Complex iA(0.0, A);
  const double s = sign;
  const HalfInt dmu = HalfInt::from_twice(sign);

  for (int c = 0; c < src.dim(); ++c) {
    const State st = src.basis()[c];
    const double j = st.j.value(), m = st.m.value();
    if (const auto r = tgt.index_of(State{st.j - HalfInt::from_twice(1), st.m + dmu})) {
      Complex v;
      if (lower)
        v = s * std::sqrt(j - s * m) * std::sqrt(j + lv) * std::sqrt(Complex(j) + Arho) /
            (std::sqrt(2.0 * j) * std::sqrt(2.0 * j + 1.0));
      else
        v = -s * iA * std::sqrt(j - s * m) * std::sqrt(j - lv) * std::sqrt(Complex(j) - Arho) /
            (std::sqrt(2.0 * j) * std::sqrt(2.0 * j + 1.0));
      op.add(*r, c, v);
    }
    if (const auto r = tgt.index_of(State{st.j + HalfInt::from_twice(1), st.m + dmu})) {
      Complex v;
      if (lower)
        v = iA * std::sqrt(j + s * m + 1.0) * std::sqrt(j - lv + 1.0) *
            std::sqrt(Complex(j + 1.0) - Arho) / (std::sqrt(2.0 * j + 1.0) * std::sqrt(2.0 * j + 2.0));
      else
        v = std::sqrt(j + s * m + 1.0) * std::sqrt(j + lv + 1.0) *
            std::sqrt(Complex(j + 1.0) + Arho) / (std::sqrt(2.0 * j + 1.0) * std::sqrt(2.0 * j + 2.0));
      op.add(*r, c, v);
    }
  }
  return op;
}

void require_nondegenerate(const IrrepLabel& label) {
  const Complex l(label.lambda.value());
  if (std::abs(label.rho - l) < 1e-12 || std::abs(label.rho + l) < 1e-12)
    throw std::domain_error(
        "js_operators: rho^2 = lambda^2 degenerates the ladder normalization sqrt(lambda + A rho)");
}

} // namespace

JSOperators js_operators(const IrrepLabel& label, int A, HalfInt j_cut) {
  if (A != 1 && A != -1) throw std::domain_error("js_operators: A must be +1 or -1");
  require_nondegenerate(label);

  const HalfInt half = HalfInt::from_twice(1);
  const Complex halfA(0.5 * A);
  TruncatedModule src(label, j_cut);
  TruncatedModule dn(IrrepLabel(label.lambda - half, label.rho - halfA), j_cut);
  TruncatedModule up(IrrepLabel(label.lambda + half, label.rho + halfA), j_cut);

  JSOperators out{label, A,
                  TensorOperator{FiniteLabel(half, A), src, dn, {}},
                  TensorOperator{FiniteLabel(half, A), src, up, {}}};
  for (int sign : {-1, +1}) {
    out.T.components.emplace_back(HalfInt::from_twice(sign),
                                  ladder_component(label, A, sign, true, src, dn));
    out.Ttilde.components.emplace_back(HalfInt::from_twice(sign),
                                       ladder_component(label, A, sign, false, src, up));
  }
  return out;
}

SparseOperator m_generator(const TruncatedModule& module, int A, int component) {
  const Generator jg = component == 0 ? Generator::J0 : (component > 0 ? Generator::Jp : Generator::Jm);
  const Generator kg = component == 0 ? Generator::K0 : (component > 0 ? Generator::Kp : Generator::Km);
  const Complex miA(0.0, -double(A));
  return (generator_matrix(module, jg) + generator_matrix(module, kg).scaled(miA)).scaled(0.5);
}

JSReconstruction js_reconstruct(const IrrepLabel& label, int A, HalfInt j_cut) {
  const HalfInt half = HalfInt::from_twice(1);
  const Complex halfA(0.5 * A);
  const JSOperators base = js_operators(label, A, j_cut);
  const JSOperators up = js_operators(IrrepLabel(label.lambda + half, label.rho + halfA), A, j_cut);

  const auto& T_up = up.T;          // maps the raised module back to (lambda, rho)
  const auto& Tt = base.Ttilde;
  const HalfInt plus = HalfInt::from_twice(1), minus = HalfInt::from_twice(-1);

  JSReconstruction out{
      (*T_up.component(minus) * *Tt.component(plus) + *T_up.component(plus) * *Tt.component(minus))
          .scaled(-0.5),
      *T_up.component(plus) * *Tt.component(plus),
      (*T_up.component(minus) * *Tt.component(minus)).scaled(-1.0),
      0.0};

  const TruncatedModule& mod = base.T.source;
  const auto mask = mod.interior_mask(HalfInt::whole(2));
  double res = 0.0;
  res = std::max(res, (out.M0 - m_generator(mod, A, 0)).max_abs_masked(mask, mask));
  res = std::max(res, (out.Mp - m_generator(mod, A, +1)).max_abs_masked(mask, mask));
  res = std::max(res, (out.Mm - m_generator(mod, A, -1)).max_abs_masked(mask, mask));
  out.residual = res;
  return out;
}

JSCommutators js_commutators(const IrrepLabel& label, int A, int B, HalfInt j_cut) {
  const HalfInt half = HalfInt::from_twice(1);
  const HalfInt plus = HalfInt::from_twice(1), minus = HalfInt::from_twice(-1);
  const double delta = (A == B) ? 1.0 : 0.0;

  const JSOperators opsA = js_operators(label, A, j_cut);
  const JSOperators opsB = js_operators(label, B, j_cut);
  const TruncatedModule& mod = opsA.T.source;
  const auto mask = mod.interior_mask(HalfInt::whole(2));

  // Second factors act on the shifted modules reached by the first.
  const JSOperators after_upB = js_operators(IrrepLabel(label.lambda + half, label.rho + Complex(0.5 * B)), A, j_cut);
  const JSOperators after_dnA = js_operators(IrrepLabel(label.lambda - half, label.rho - Complex(0.5 * A)), B, j_cut);
  const JSOperators after_upA = js_operators(IrrepLabel(label.lambda + half, label.rho + Complex(0.5 * A)), B, j_cut);
  const JSOperators after_dnB = js_operators(IrrepLabel(label.lambda - half, label.rho - Complex(0.5 * B)), A, j_cut);

  JSCommutators out{{}, 0.0};
  auto record = [&](const std::string& name, SparseOperator diff) {
    const double r = diff.max_abs_masked(mask, mask);
    out.residuals.emplace_back(name, r);
    out.max_residual = std::max(out.max_residual, r);
  };
  auto eye = [&](double factor) {
    return SparseOperator::identity(mod.dim()).scaled(Complex(factor));
  };

  // [T^A_mu, Ttilde^B_nu]: route through the raised module first, then the
  // lowered one; the difference lands back on (lambda, rho + (B - A)/2),
  // which is the source exactly when A = B.
  auto TtT = [&](HalfInt mu, HalfInt nu) {
    return *after_upB.T.component(mu) * *opsB.Ttilde.component(nu) -
           *after_dnA.Ttilde.component(nu) * *opsA.T.component(mu);
  };
  record("[T+,Tt-]", TtT(plus, minus) - eye(delta));
  record("[T-,Tt+]", TtT(minus, plus) - eye(-delta));
  record("[T+,Tt+]", TtT(plus, plus));
  record("[T-,Tt-]", TtT(minus, minus));

  auto TtildeT = [&](HalfInt mu, HalfInt nu) {
    return *after_dnB.Ttilde.component(mu) * *opsB.T.component(nu) -
           *after_upA.T.component(nu) * *opsA.Ttilde.component(mu);
  };
  record("[Tt+,T-]", TtildeT(plus, minus) - eye(delta));
  record("[Tt-,T+]", TtildeT(minus, plus) - eye(-delta));

  // Same-type brackets vanish.
  const JSOperators dn2A = js_operators(IrrepLabel(label.lambda - half, label.rho - Complex(0.5 * B)), A, j_cut);
  const JSOperators dn2B = js_operators(IrrepLabel(label.lambda - half, label.rho - Complex(0.5 * A)), B, j_cut);
  auto TT = [&](HalfInt mu, HalfInt nu) {
    return *dn2A.T.component(mu) * *opsB.T.component(nu) -
           *dn2B.T.component(nu) * *opsA.T.component(mu);
  };
  record("[T+,T-]", TT(plus, minus));
  record("[T+,T+]", TT(plus, plus));
  record("[T-,T-]", TT(minus, minus));

  const JSOperators up2A = js_operators(IrrepLabel(label.lambda + half, label.rho + Complex(0.5 * B)), A, j_cut);
  const JSOperators up2B = js_operators(IrrepLabel(label.lambda + half, label.rho + Complex(0.5 * A)), B, j_cut);
  auto TtTt = [&](HalfInt mu, HalfInt nu) {
    return *up2A.Ttilde.component(mu) * *opsB.Ttilde.component(nu) -
           *up2B.Ttilde.component(nu) * *opsA.Ttilde.component(mu);
  };
  record("[Tt+,Tt-]", TtTt(plus, minus));
  record("[Tt+,Tt+]", TtTt(plus, plus));
  record("[Tt-,Tt-]", TtTt(minus, minus));

  return out;
}

} // namespace lorentzcg

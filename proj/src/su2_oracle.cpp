#include "lorentzcg/su2_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "lorentzcg/index_sets.hpp"
#include "lorentzcg/su2.hpp"

namespace lorentzcg::verify {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

} // namespace

int Su2CgOracle::pair_index(HalfInt m1, HalfInt m2) const {
  const int n2 = j2_.twice() + 1;
  const int i1 = (m1 + j1_).twice() / 2;
  const int i2 = (m2 + j2_).twice() / 2;
  return i1 * n2 + i2;
}

Su2CgOracle::Su2CgOracle(HalfInt j1, HalfInt j2) : j1_(j1), j2_(j2) {
  for (HalfInt m1 : mrange(j1))
    for (HalfInt m2 : mrange(j2)) pairs_.emplace_back(m1, m2);
  const int dim = static_cast<int>(pairs_.size());

  const HalfInt Jtop = j1 + j2;
  const HalfInt Jbot = (j1 - j2).abs();
  const int levels = (Jtop - Jbot).twice() / 2 + 1;
  table_.resize(levels);

  for (int li = 0; li < levels; ++li) {
    const HalfInt J = Jtop - HalfInt::whole(li);
    const int nm = J.twice() + 1;
    table_[li].assign(nm, std::vector<double>(dim, 0.0));

    // Highest-weight vector: stretched state at the top level, otherwise the
    // Gram-Schmidt complement of the higher towers inside the M = J subspace.
    std::vector<double>& top = table_[li][J.twice()]; // index of M = J (see cg())
    if (li == 0) {
      top[pair_index(j1, j2)] = 1.0;
    } else {
      // Seed with the admissible product state of largest m1, then remove the
      // components along every |J', J> with J' > J.
      const HalfInt m1_seed = std::min(j1, J + j2);
      std::vector<double> v(dim, 0.0);
      v[pair_index(m1_seed, J - m1_seed)] = 1.0;
      for (int hi = 0; hi < li; ++hi) {
        const HalfInt Jh = Jtop - HalfInt::whole(hi);
        const std::vector<double>& u = table_[hi][(J + Jh).twice() / 2];
        const double c = dot(u, v);
        for (int k = 0; k < dim; ++k) v[k] -= c * u[k];
      }
      double norm = std::sqrt(dot(v, v));
      if (norm < 1e-12) throw std::runtime_error("Su2CgOracle: degenerate M-subspace");
      // Condon-Shortley: the largest-m1 coefficient of |J, J> is positive.
      double lead = 0.0;
      for (HalfInt m1 = j1;; m1 -= HalfInt::whole(1)) {
        const HalfInt m2 = J - m1;
        if (m2.abs() <= j2) {
          lead = v[pair_index(m1, m2)];
          break;
        }
      }
      if (lead < 0) norm = -norm;
      for (int k = 0; k < dim; ++k) v[k] /= norm;
      top = v;
    }

    // Ladder descent through the M values.
    for (HalfInt M = J; M > -J; M -= HalfInt::whole(1)) {
      const std::vector<double>& cur = table_[li][(M + J).twice() / 2];
      std::vector<double>& nxt = table_[li][(M + J).twice() / 2 - 1];
      const double cm = c_pm(-1, J, M);
      for (int k = 0; k < dim; ++k) {
        if (cur[k] == 0.0) continue;
        const auto& [m1, m2] = pairs_[k];
        if (-j1 < m1) nxt[pair_index(m1 - HalfInt::whole(1), m2)] += cur[k] * c_pm(-1, j1_, m1) / cm;
        if (-j2 < m2) nxt[pair_index(m1, m2 - HalfInt::whole(1))] += cur[k] * c_pm(-1, j2_, m2) / cm;
      }
    }
  }
}

double Su2CgOracle::cg(HalfInt m1, HalfInt m2, HalfInt J, HalfInt M) const {
  if (m1 + m2 != M) return 0.0;
  const HalfInt Jtop = j1_ + j2_;
  const HalfInt Jbot = (j1_ - j2_).abs();
  if (J < Jbot || J > Jtop || !(Jtop - J).is_integer()) return 0.0;
  if (M.abs() > J || m1.abs() > j1_ || m2.abs() > j2_) return 0.0;
  const int li = (Jtop - J).twice() / 2;
  return table_[li][(M + J).twice() / 2][pair_index(m1, m2)];
}

} // namespace lorentzcg::verify

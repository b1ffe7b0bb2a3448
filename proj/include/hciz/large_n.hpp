#pragma once

// Planar limit: free cumulants and the curve b(a), derivatives of the
// free energy F at theta = 0 from generating functions, F itself from the
// formal-N character sum, the cubic for the diagonal F(x), the equation
// for psi, and residuals of the dispersionless equations.
//
// Derivatives use the rescaled nabla(a) = sum_q a^q d/dtheta_q: the
// coefficient of a1^q a2^r in nabla(a1) nabla(a2) F is d_q d_r F itself.

#include <hciz/grid_series.hpp>
#include <hciz/hciz_finite.hpp>
#include <hciz/multi_series.hpp>
#include <hciz/series_ops.hpp>
#include <hciz/uni_series.hpp>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hciz {

/// Values of theta_1..theta_Q (index 0 unused). Entries may be formal
/// variables or constants.
using ThetaValues = std::vector<RationalSeries>;

inline ThetaValues formal_thetas(int group, int qmax, int cutoff) {
  ThetaValues v{RationalSeries(cutoff)};
  for (int q = 1; q <= qmax; ++q) v.push_back(RationalSeries::variable(group, q, cutoff));
  return v;
}

inline ThetaValues numeric_thetas(const std::map<int, Rational>& values, int qmax) {
  ThetaValues v(static_cast<std::size_t>(qmax) + 1, RationalSeries(Rational(0)));
  for (const auto& [q, x] : values) {
    if (q < 1) throw std::invalid_argument("moment index must be >= 1");
    if (q <= qmax) v[static_cast<std::size_t>(q)] = RationalSeries(x);
  }
  return v;
}

namespace detail {

inline RationalSeries theta_at(const ThetaValues& v, int q) {
  if (q < static_cast<int>(v.size())) return v[static_cast<std::size_t>(q)];
  return v.empty() ? RationalSeries() : v[0].zero();
}

inline RationalSeries power(const RationalSeries& x, int e) {
  RationalSeries r = x.one();
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

// All alpha with sum_i i alpha_i = q, visited as exponent vectors (index 1..q).
inline void for_each_composition(int q, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> alpha(static_cast<std::size_t>(q) + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int rest) {
    if (i == 0) {
      if (rest == 0) f(alpha);
      return;
    }
    for (int a = 0; a * i <= rest; ++a) {
      alpha[static_cast<std::size_t>(i)] = a;
      rec(i - 1, rest - a * i);
    }
    alpha[static_cast<std::size_t>(i)] = 0;
  };
  rec(q, q);
}

}  // namespace detail

/// m~_q = -sum_alpha (q + |alpha| - 2)!/(q-1)! prod (-theta~_i)^alpha_i / alpha_i!
inline std::vector<RationalSeries> free_cumulants_direct(const ThetaValues& tt, int qmax) {
  if (qmax < 1) throw std::invalid_argument("cumulant order must be >= 1");
  std::vector<RationalSeries> m{detail::theta_at(tt, 0).zero()};
  for (int q = 1; q <= qmax; ++q) {
    RationalSeries acc = m[0].zero();
    detail::for_each_composition(q, [&](const std::vector<int>& alpha) {
      int parts = 0;
      Integer den = factorial(static_cast<unsigned long>(q - 1));
      RationalSeries term = acc.one();
      for (int i = 1; i <= q; ++i) {
        const int a = alpha[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        parts += a;
        den *= factorial(static_cast<unsigned long>(a));
        term = term * detail::power(-detail::theta_at(tt, i), a);
      }
      acc -= term * (Rational(factorial(static_cast<unsigned long>(q + parts - 2))) / Rational(den));
    });
    m.push_back(acc);
  }
  return m;
}

/// Reverts a = v + sum theta~_q v^{q+1} (v = 1/b) and reads m~_q off
/// b(a) = 1/(a w(a)) with w = v/a.
inline std::vector<RationalSeries> free_cumulants_inversion(const ThetaValues& tt, int qmax) {
  if (qmax < 1) throw std::invalid_argument("cumulant order must be >= 1");
  const RationalSeries zero = detail::theta_at(tt, 0).zero();
  UniSeries<RationalSeries> a_of_v(qmax + 1);
  for (int k = 0; k <= qmax + 1; ++k) a_of_v.set(k, zero);
  a_of_v.set(1, zero.one());
  for (int q = 1; q <= qmax; ++q) a_of_v.set(q + 1, detail::theta_at(tt, q));
  const auto v_of_a = series_revert(a_of_v);
  const auto c = series_inverse(v_of_a.divided_by_x());
  std::vector<RationalSeries> m{zero};
  for (int q = 1; q <= qmax; ++q) m.push_back(c[q]);
  return m;
}

/// b(a) = 1/a + sum m~_q a^{q-1}.
class Curve {
 public:
  explicit Curve(std::vector<RationalSeries> cumulants) : m_(std::move(cumulants)) {
    if (m_.size() < 2) throw std::invalid_argument("curve needs at least one cumulant");
  }
  static Curve from_theta_tilde(const ThetaValues& tt, int order) { return Curve(free_cumulants_direct(tt, order)); }

  int order() const { return static_cast<int>(m_.size()) - 1; }
  RationalSeries cumulant(int q) const {
    if (q < 1) throw std::invalid_argument("cumulant index must be >= 1");
    if (q > order()) throw std::out_of_range("curve known only to cumulant " + std::to_string(order()));
    return m_[static_cast<std::size_t>(q)];
  }
  const std::vector<RationalSeries>& cumulants() const { return m_; }

  LaurentSeries<RationalSeries> b_of_a() const {
    UniSeries<RationalSeries> body(order());
    body.set(0, m_[0].one());
    for (int q = 1; q <= order(); ++q) body.set(q, m_[static_cast<std::size_t>(q)]);
    return LaurentSeries<RationalSeries>(-1, body);
  }
  /// v = 1/b as a series in a, i.e. the inverse of a(v) = G~(1/v).
  UniSeries<RationalSeries> v_of_a() const {
    UniSeries<RationalSeries> s(order());
    s.set(0, m_[0].one());
    for (int q = 1; q <= order(); ++q) s.set(q, m_[static_cast<std::size_t>(q)]);
    return series_inverse(s).times_x();
  }

 private:
  std::vector<RationalSeries> m_;
};

/// Keys are ordered index tuples (every permutation present).
using DerivativeTable = std::map<std::vector<int>, RationalSeries>;

/// d F/d theta_q at theta = 0 is m~_q / q.
inline std::vector<RationalSeries> gradient_F(const Curve& c, int qmax) {
  std::vector<RationalSeries> g{c.cumulants()[0].zero()};
  for (int q = 1; q <= qmax; ++q) g.push_back(c.cumulant(q) * make_rational(1, q));
  return g;
}

/// d_q d_r F at theta = 0 for q + r <= max_total, from
/// log(1 - sum_p m~_p sum_{k=1}^{p-1} a1^k a2^{p-k}).
inline DerivativeTable hessian_F(const Curve& c, int max_total) {
  using G = GridSeries<RationalSeries, 2>;
  G arg = G::constant(c.cumulants()[0].one(), max_total);
  for (int p = 2; p <= max_total; ++p)
    for (int k = 1; k < p; ++k) arg -= G::monomial({k, p - k}, c.cumulant(p), max_total);
  const G l = series_log(arg);
  DerivativeTable out;
  for (int q = 1; q < max_total; ++q)
    for (int r = 1; q + r <= max_total; ++r) out[{q, r}] = l.coefficient({q, r});
  return out;
}

/// d_q d_r d_s F at theta = 0 for q + r + s <= max_total, from the symmetric
/// sum of b'(a_i)/((b(a_i) - b(a_j))(b(a_i) - b(a_k))) plus 1, cleared of
/// its poles: with E_ij = 1 - a_i a_j (beta(a_i) - beta(a_j))/(a_i - a_j),
/// beta(a) = sum m~_q a^{q-1} and G_i = (1 - a_i^2 beta'(a_i)) / (E_ij E_ik),
/// the sum is [-a2 a3 (a2-a3) G1 + a1 a3 (a1-a3) G2 - a1 a2 (a1-a2) G3] / V.
inline DerivativeTable third_derivative_F(const Curve& c, int max_total) {
  using G = GridSeries<RationalSeries, 3>;
  const int deg = max_total + 3;
  const RationalSeries one = c.cumulants()[0].one();
  auto m = [&](int p) { return p <= c.order() ? c.cumulant(p) : one.zero(); };
  auto mono = [&](int e1, int e2, int e3, const RationalSeries& x) { return G::monomial({e1, e2, e3}, x, deg); };
  auto ex = [](int i, int e) {
    std::array<int, 3> a{0, 0, 0};
    a[static_cast<std::size_t>(i)] = e;
    return a;
  };
  auto slope = [&](int i) {
    G s = G::constant(one, deg);
    for (int p = 2; p <= deg; ++p) s -= G::monomial(ex(i, p), m(p) * Rational(p - 1), deg);
    return s;
  };
  auto e_inv = [&](int i, int j) {
    G e = G::constant(one, deg);
    for (int p = 2; p <= deg; ++p)
      for (int k = 0; k <= p - 2; ++k) {
        std::array<int, 3> a{0, 0, 0};
        a[static_cast<std::size_t>(i)] += k + 1;
        a[static_cast<std::size_t>(j)] += p - 2 - k + 1;
        e -= G::monomial(a, m(p), deg);
      }
    return series_inverse(e);
  };
  const G e12 = e_inv(0, 1), e13 = e_inv(0, 2), e23 = e_inv(1, 2);
  const G g1 = slope(0) * e12 * e13;
  const G g2 = slope(1) * e12 * e23;
  const G g3 = slope(2) * e13 * e23;
  const G w1 = mono(0, 1, 2, one) - mono(0, 2, 1, one);  // a2 a3 (a3 - a2)
  const G w2 = mono(2, 0, 1, one) - mono(1, 0, 2, one);  // a1 a3 (a1 - a3)
  const G w3 = mono(1, 2, 0, one) - mono(2, 1, 0, one);  // a1 a2 (a2 - a1)
  const G num = w1 * g1 + w2 * g2 + w3 * g3;
  const G sum = num.divided_by_difference(0, 1).divided_by_difference(0, 2).divided_by_difference(1, 2) +
                G::constant(one, max_total);
  DerivativeTable out;
  for (int q = 1; q <= max_total; ++q)
    for (int r = 1; q + r < max_total; ++r)
      for (int s = 1; q + r + s <= max_total; ++s) out[{q, r, s}] = sum.coefficient({q, r, s});
  return out;
}

/// d_q d~_r F at theta = 0 from -log(1 - a1 a2 w(a1)), w = 1/(a b(a)):
/// the a1^q a2^r coefficient is [a^{q-r}] w^r / r.
inline DerivativeTable mixed_derivative_F(const Curve& c, int qmax) {
  const RationalSeries one = c.cumulants()[0].one();
  UniSeries<RationalSeries> s(qmax);
  s.set(0, one);
  for (int q = 1; q <= qmax; ++q) s.set(q, q <= c.order() ? c.cumulant(q) : one.zero());
  const auto w = series_inverse(s);
  DerivativeTable out;
  auto wr = UniSeries<RationalSeries>::constant(one, qmax);
  for (int r = 1; r <= qmax; ++r) {
    wr = wr * w;
    for (int q = 1; q <= qmax; ++q) out[{q, r}] = q < r ? one.zero() : wr[q - r] * make_rational(1, r);
  }
  return out;
}

/// d/dtheta_{q...} d/dtheta~_{r...} of F, then theta = 0. This is the only
/// place where coefficients of F turn into derivatives.
inline RationalSeries derivative_at_zero(const RationalSeries& f, const std::vector<int>& theta,
                                         const std::vector<int>& theta_tilde = {}) {
  RationalSeries d = f;
  for (int q : theta) d = d.derivative(0, q);
  for (int r : theta_tilde) d = d.derivative(1, r);
  return d.filtered([](const Monomial& m) { return m.group_degree(0) == 0; });
}

/// F = lim log I_N / N^2 up to total weight w, from the formal-N character sum.
inline RationalSeries assemble_F(int weight, int jobs = 1) {
  if (weight < 1) throw std::invalid_argument("weight cutoff must be >= 1");
  const FormalSeries log_i = series_log(hciz_character_sum_formal(weight, jobs));
  RationalSeries f(weight);
  for (const auto& [m, c] : log_i.terms()) {
    if (c.degree() > 2)
      throw std::logic_error("log I_N coefficient of " + m.key() + " grows faster than N^2: " + c.to_string());
    f.add_term(m, c.coefficient_at_infinity(2));
  }
  return f;
}

/// Empty if F has no pure-theta terms, equal weights on both sides and the
/// theta <-> theta~ symmetry; otherwise a description of the first failure.
inline std::optional<std::string> free_energy_defect(const RationalSeries& f) {
  for (const auto& [m, c] : f.terms()) {
    if (m.group_degree(0) == 0 || m.group_degree(1) == 0) return "pure term " + m.key();
    if (m.group_weight(0) != m.group_weight(1)) return "unbalanced weights in " + m.key();
    if (!(f.coefficient(m.swapped()) == c)) return "exchange symmetry fails at " + m.key();
  }
  return std::nullopt;
}

/// 16 xi^3 + 8 xi^2 + (1 - 36 x) xi + x (27 x - 1)
inline Rational cubic_value(const Rational& x, const Rational& xi) {
  return Rational(16) * xi * xi * xi + Rational(8) * xi * xi + (Rational(1) - Rational(36) * x) * xi +
         x * (Rational(27) * x - Rational(1));
}
inline Rational cubic_xi_derivative(const Rational& x, const Rational& xi) {
  return Rational(48) * xi * xi + Rational(16) * xi + Rational(1) - Rational(36) * x;
}

/// The root of the cubic vanishing at x = 0, to order x^order.
inline UniSeries<Rational> xi_series(int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  using U = UniSeries<Rational>;
  const U x = U::variable(order);
  const U one = U::constant(Rational(1), order);
  const std::vector<U> p{x * x * Rational(27) - x, one - x * Rational(36), one * Rational(8), one * Rational(16)};
  return algebraic_series_solve(p, Rational(0));
}

/// (3n)! 2^n / ((n+1)! (2n+1)!), the coefficient of x^{n+1} in xi.
inline Rational xi_closed_form(int n) {
  Integer two_n = 1;
  for (int i = 0; i < n; ++i) two_n *= 2;
  const Integer num = factorial(static_cast<unsigned long>(3 * n)) * two_n;
  const Integer den = factorial(static_cast<unsigned long>(n + 1)) * factorial(static_cast<unsigned long>(2 * n + 1));
  return Rational(num) / Rational(den);
}

/// F(x) on theta_1 theta~_1 = x with x F' = xi, F(0) = 0.
inline UniSeries<Rational> diagonal_free_energy(int order) {
  const auto xi = xi_series(order);
  UniSeries<Rational> f(order);
  for (int n = 1; n <= order; ++n) f.set(n, xi[n] * make_rational(1, n));
  return f;
}

/// e^{2F + 9 x^2 F''} - F' - x F'' to order x^order.
inline UniSeries<Rational> scaltodab_residual(int order) {
  const auto f = diagonal_free_energy(order + 2);
  const auto d1 = f.derivative();
  const auto d2 = d1.derivative();
  const auto arg = (f * Rational(2) + d2.times_x().times_x() * Rational(9)).truncated(order);
  return series_exp(arg) - d1.truncated(order) - d2.times_x().truncated(order);
}

/// Literal left side minus right side of the scaling form of the
/// dispersionless Toda equation, valid to total weight weight(F) - 2.
inline RationalSeries scaltoda_residual(const RationalSeries& f) {
  const int w = f.cutoff();
  if (w == kExact || w < 2) throw std::invalid_argument("scaltoda residual needs F at a finite weight >= 2");
  const int top = w;
  auto c1 = [](int q) -> Rational { return make_rational(q + 2, 2) * make_rational(q - 4, 2); };
  auto c2 = [](int q) -> Rational { return make_rational(q + 2, 2); };
  RationalSeries arg = f * Rational(2);
  std::vector<RationalSeries> e[2];
  for (int g = 0; g < 2; ++g)
    for (int q = 1; q <= top; ++q) {
      e[g].push_back(f.euler(g, q));
      arg += e[g].back() * c1(q);
    }
  // theta_q theta_r d_q d_r = E_q E_r - delta_qr E_q, with E_q = theta_q d_q.
  for (int g = 0; g < 2; ++g)
    for (int h = 0; h < 2; ++h)
      for (int q = 1; q <= top; ++q)
        for (int r = 1; r <= top; ++r) {
          const RationalSeries& er = e[h][static_cast<std::size_t>(r) - 1];
          if (er.is_zero()) continue;
          RationalSeries term = er.euler(g, q);
          if (g == h && q == r) term -= er;
          arg += term * (c2(q) * c2(r));
        }
  const RationalSeries lhs = series_exp(arg);
  const RationalSeries rhs = f.derivative(0, 1).derivative(1, 1);
  return (lhs - rhs).truncated(w - 2);
}

/// -1 + psi + sum_q (-1)^q (2q)!/(q!)^2 theta_q psi^{2q+1} = 0 with psi(0) = 1.
inline RationalSeries psi_series(const ThetaValues& theta) {
  const int ell = static_cast<int>(theta.size()) - 1;
  if (ell < 1) throw std::invalid_argument("psi needs at least theta_1");
  const RationalSeries zero = theta[0].zero();
  std::vector<RationalSeries> p(static_cast<std::size_t>(2 * ell + 2), zero);
  p[0] = -zero.one();
  p[1] = zero.one();
  for (int q = 1; q <= ell; ++q) {
    const Integer fq = factorial(static_cast<unsigned long>(q));
    Rational k = Rational(factorial(static_cast<unsigned long>(2 * q))) / Rational(fq * fq);
    if (q % 2) k = -k;
    p[static_cast<std::size_t>(2 * q + 1)] += theta[static_cast<std::size_t>(q)] * k;
  }
  return algebraic_series_solve(p, Rational(1));
}

inline RationalSeries psi_series(int ell, int cutoff) { return psi_series(formal_thetas(0, ell, cutoff)); }

/// d_1 d~_1 F on theta~_1 = 1, theta~_{q>=2} = 0; exact to theta-weight w/2 - 1.
inline RationalSeries psi_from_free_energy(const RationalSeries& f) {
  const int w = f.cutoff();
  RationalSeries psi(w == kExact ? kExact : w / 2 - 1);
  for (const auto& [m, c] : f.terms()) {
    if (m.group_degree(1) != m.exponent(1, 1) || m.exponent(0, 1) == 0) continue;
    const Monomial rest = Monomial(m.group(0), {}).lowered(0, 1);
    psi.add_term(rest, c * Rational(m.exponent(1, 1)) * Rational(m.exponent(0, 1)));
  }
  return psi;
}

/// 2 chi_22 + d_1(-2 chi_3 + chi chi_1) with chi = 2 psi^4, theta_q for
/// q <= ell live, valid to weight w.
inline RationalSeries dkp_residual(int ell, int weight) {
  const RationalSeries psi = psi_series(ell, weight + 4);
  const RationalSeries psi2 = psi * psi;
  const RationalSeries chi = psi2 * psi2 * Rational(2);
  const RationalSeries inner = chi.derivative(0, 3) * Rational(-2) + chi * chi.derivative(0, 1);
  return (chi.derivative(0, 2).derivative(0, 2) * Rational(2) + inner.derivative(0, 1)).truncated(weight);
}

/// Per theta-multiset of degree 1..3 and theta-weight <= side_weight, the
/// derivative formulas against the coefficients of F (which must reach
/// total weight 2 side_weight). Returns descriptions of mismatches.
inline std::vector<std::string> route_mismatches(const RationalSeries& f, int side_weight) {
  if (f.cutoff() < 2 * side_weight) throw std::invalid_argument("F does not reach the requested weight");
  const Curve curve = Curve::from_theta_tilde(formal_thetas(1, side_weight + 3, side_weight), side_weight + 3);
  std::vector<std::string> bad;
  auto check = [&](const std::vector<int>& idx, const RationalSeries& formula) {
    const RationalSeries from_f = derivative_at_zero(f, idx).truncated(side_weight);
    if (!(from_f == formula.truncated(side_weight))) {
      std::string key;
      for (int q : idx) key += (key.empty() ? "" : ",") + std::to_string(q);
      bad.push_back("d(" + key + ")F: formula " + to_canonical_text(formula) + " vs F " + to_canonical_text(from_f));
    }
  };
  const auto g = gradient_F(curve, side_weight);
  for (int q = 1; q <= side_weight; ++q) check({q}, g[static_cast<std::size_t>(q)]);
  for (const auto& [idx, v] : hessian_F(curve, side_weight)) check(idx, v);
  for (const auto& [idx, v] : third_derivative_F(curve, side_weight)) check(idx, v);
  return bad;
}

}  // namespace hciz

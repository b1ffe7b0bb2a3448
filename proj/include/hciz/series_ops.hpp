#pragma once

// Inverse, log, exp, reversion and Newton solving for truncated series.
// The algorithms work weight layer by weight layer and apply to every
// series type exposing graded_parts(), constant_term(), zero() and one().

#include <hciz/grid_series.hpp>
#include <hciz/multi_series.hpp>
#include <hciz/rational.hpp>
#include <hciz/uni_series.hpp>

#include <stdexcept>
#include <vector>

namespace hciz {

template <class S>
S series_inverse(const S& s) {
  const auto c0 = s.constant_term();
  if (is_zero(c0)) throw std::domain_error("series with zero constant term has no inverse");
  const auto c0_inv = inv(c0);
  const auto parts = s.graded_parts();
  std::vector<S> y;
  y.push_back(s.one() * c0_inv);
  for (std::size_t w = 1; w < parts.size(); ++w) {
    S acc = s.zero();
    for (std::size_t k = 1; k <= w; ++k)
      if (!is_zero(parts[k]) && !is_zero(y[w - k])) acc += parts[k] * y[w - k];
    y.push_back(-(acc * c0_inv));
  }
  S out = s.zero();
  for (const auto& p : y) out += p;
  return out;
}

/// Inverse of a nonzero MultiSeries constant or series coefficient.
template <class C>
MultiSeries<C> inv(const MultiSeries<C>& s) {
  if (s.exact()) {
    if (s.size() == 1 && s.terms().begin()->first.is_constant()) return MultiSeries<C>(inv(s.constant_term()));
    throw std::domain_error("inverse of an untruncated non-constant series");
  }
  return series_inverse(s);
}

template <class S>
S series_log(const S& s) {
  using C = decltype(s.constant_term());
  if (!(s.constant_term() == C(Rational(1)))) throw std::invalid_argument("series_log needs constant term 1");
  const auto parts = s.graded_parts();
  std::vector<S> l(parts.size(), s.zero());
  for (std::size_t w = 1; w < parts.size(); ++w) {
    S acc = s.zero();
    for (std::size_t k = 1; k < w; ++k)
      if (!is_zero(l[k]) && !is_zero(parts[w - k])) acc += (l[k] * parts[w - k]) * Rational(static_cast<long>(k));
    l[w] = parts[w] - acc * make_rational(1, static_cast<long>(w));
  }
  S out = s.zero();
  for (const auto& p : l) out += p;
  return out;
}

template <class S>
S series_exp(const S& s) {
  if (!is_zero(s.constant_term())) throw std::invalid_argument("series_exp needs constant term 0");
  const auto parts = s.graded_parts();
  std::vector<S> y;
  y.push_back(s.one());
  for (std::size_t w = 1; w < parts.size(); ++w) {
    S acc = s.zero();
    for (std::size_t k = 1; k <= w; ++k)
      if (!is_zero(parts[k])) acc += (parts[k] * y[w - k]) * Rational(static_cast<long>(k));
    y.push_back(acc * make_rational(1, static_cast<long>(w)));
  }
  S out = s.zero();
  for (const auto& p : y) out += p;
  return out;
}

/// Compositional inverse r with s(r(x)) = x, by Newton iteration.
template <class C>
UniSeries<C> series_revert(const UniSeries<C>& s) {
  const int t = s.order();
  if (t < 1) throw std::invalid_argument("reversion needs truncation order >= 1");
  if (!is_zero(s[0])) throw std::domain_error("reversion needs zero constant term");
  if (is_zero(s[1])) throw std::domain_error("no formal inverse: vanishing linear term");
  const auto x = UniSeries<C>::variable(t);
  const auto ds = s.derivative();
  UniSeries<C> r = x * inv(s[1]);
  for (int iter = 0; iter < 64; ++iter) {
    const auto defect = s.compose(r) - x;
    if (defect.is_zero()) return r;
    // defect = O(x^2) and s' has order t-1, so the step is x * (defect/x) / s'(r).
    r -= (defect.divided_by_x() * series_inverse(ds.compose(r.truncated(t - 1)))).times_x();
  }
  throw std::logic_error("series reversion did not converge");
}

template <class S>
S evaluate_polynomial(const std::vector<S>& p, const S& x) {
  if (p.empty()) return x.zero();
  S acc = p.back();
  for (std::size_t k = p.size() - 1; k-- > 0;) acc = acc * x + p[k];
  return acc;
}

/// The root xi(0) = seed of sum_k p_k xi^k = 0, for series coefficients
/// p_k, by Newton iteration. The root must be simple at the origin.
template <class S>
S algebraic_series_solve(const std::vector<S>& p, const Rational& seed) {
  if (p.size() < 2) throw std::invalid_argument("polynomial of degree >= 1 required");
  std::vector<S> dp;
  for (std::size_t k = 1; k < p.size(); ++k) dp.push_back(p[k] * Rational(static_cast<long>(k)));
  auto at_origin = [&seed](const std::vector<S>& poly) {
    Rational acc(0);
    for (std::size_t k = poly.size(); k-- > 0;) acc = acc * seed + Rational(poly[k].constant_term());
    return acc;
  };
  if (!is_zero(at_origin(p))) throw std::invalid_argument("seed is not a root at the origin");
  if (is_zero(at_origin(dp))) throw std::domain_error("degenerate seed: multiple root at the origin");
  S xi = p[0].one();
  for (const auto& c : p) xi += c.zero();
  xi = xi * Rational(seed);
  for (int iter = 0; iter < 64; ++iter) {
    const S value = evaluate_polynomial(p, xi);
    if (is_zero(value)) return xi;
    xi -= value * series_inverse(evaluate_polynomial(dp, xi));
  }
  throw std::logic_error("Newton iteration did not converge");
}

}  // namespace hciz

#include <hciz/formal_n.hpp>
#include <hciz/multi_series.hpp>
#include <hciz/series_ops.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace hciz;

namespace {

using Uni = UniSeries<Rational>;

Uni uni(std::vector<long> c, int order) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return Uni(v, order);
}

// exp by the defining sum of powers, independent of the layered recursion.
template <class S>
S naive_exp(const S& s) {
  S acc = s.one();
  S power = s.one();
  for (int k = 1; k <= s.cutoff(); ++k) {
    power = power * s * make_rational(1, k);
    acc += power;
  }
  return acc;
}

RationalSeries x(int q, int w) { return RationalSeries::variable(0, q, w); }
RationalSeries y(int q, int w) { return RationalSeries::variable(1, q, w); }

RationalSeries random_series(std::mt19937& rng, int cutoff, Rational constant) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  RationalSeries s(constant, cutoff);
  for (int q1 = 1; q1 <= cutoff; ++q1)
    for (int q2 = 0; q1 + q2 <= cutoff; ++q2) {
      Monomial m = Monomial::variable(0, q1);
      if (q2 > 0) m = m * Monomial::variable(1, q2);
      s.add_term(m, make_rational(coeff(rng), 1 + std::abs(coeff(rng))));
    }
  return s;
}

}  // namespace

TEST(Rational, CanonicalTextAndParsing) {
  EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
  EXPECT_EQ(to_string(Rational(3)), "3/1");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(parse_rational("-10/4"), make_rational(-5, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::domain_error);
  EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(FormalN, ArithmeticReducesByLinearFactors) {
  const auto n = FormalNRational::N();
  const auto r = FormalNRational::reciprocal_of_shifts({0, 1});  // 1/(N(N+1))
  const auto prod = r * n;
  EXPECT_EQ(prod, FormalNRational::reciprocal_of_shifts({1}));
  // 1/N - 1/(N+1) = 1/(N(N+1))
  EXPECT_EQ(FormalNRational::reciprocal_of_shifts({0}) - FormalNRational::reciprocal_of_shifts({1}), r);
  EXPECT_EQ(r.degree(), -2);
  EXPECT_EQ(r.evaluate(Rational(2)), make_rational(1, 6));
  EXPECT_THROW(r.evaluate(Rational(-1)), std::domain_error);
  EXPECT_EQ(r.inverse() * r, FormalNRational(Rational(1)));
  const FormalNRational n2p1 = FormalNRational(Polynomial(std::vector<Rational>{1, 0, 1}));
  EXPECT_THROW(n2p1.inverse(), std::domain_error);
  EXPECT_EQ((n * n * Rational(3) + n).coefficient_at_infinity(2), Rational(3));
  EXPECT_THROW((n * n * n).coefficient_at_infinity(2), std::logic_error);
}

TEST(Monomial, KeyGrammarRoundTrip) {
  const Monomial m = Monomial::variable(0, 2) * Monomial::variable(1, 1, 2) * Monomial::variable(0, 1);
  EXPECT_EQ(m.key(), "t:1^1*t:2^1*tt:1^2");
  EXPECT_EQ(Monomial::parse_key(m.key()), m);
  EXPECT_EQ(Monomial().key(), "1");
  EXPECT_EQ(m.weight(), 5);
  EXPECT_THROW(Monomial::parse_key("tt:1^1*t:1^1"), std::invalid_argument);
  EXPECT_THROW(Monomial::parse_key("t:1"), std::invalid_argument);
  EXPECT_THROW(Monomial::parse_key("t:0^1"), std::invalid_argument);
}

TEST(Monomial, CanonicalOrderIsLexDescending) {
  CanonicalOrder less;
  const Monomial a = Monomial::variable(0, 1) * Monomial::variable(1, 1);
  const Monomial b = Monomial::variable(0, 2) * Monomial::variable(1, 2);
  EXPECT_TRUE(less(a, b));
  EXPECT_TRUE(less(Monomial::variable(0, 1, 2), a));
  EXPECT_FALSE(less(a, a));
}

TEST(UniSeries, LogOfGeometricSeries) {
  const Uni geometric = uni({1, 1, 1, 1}, 3);
  const Uni l = series_log(geometric);
  EXPECT_EQ(l[0], 0);
  EXPECT_EQ(l[1], 1);
  EXPECT_EQ(l[2], make_rational(1, 2));
  EXPECT_EQ(l[3], make_rational(1, 3));
  EXPECT_EQ(naive_exp(l), geometric);
  EXPECT_TRUE(series_log(uni({1}, 5)).is_zero());
}

TEST(UniSeries, ExpOfVariable) {
  const Uni e = series_exp(Uni::variable(4));
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(e[k], Rational(1) / Rational(factorial(k)));
  EXPECT_THROW(series_exp(uni({1, 1}, 2)), std::invalid_argument);
  EXPECT_THROW(series_log(uni({2, 1}, 2)), std::invalid_argument);
}

TEST(UniSeries, RevertMatchesSignedCatalan) {
  const Uni s = uni({0, 1, 1}, 8);
  const Uni r = series_revert(s);
  // Signed Catalan numbers, computed by the convolution recurrence.
  std::vector<Integer> cat{1};
  for (int n = 1; n < 8; ++n) {
    Integer c = 0;
    for (int k = 0; k < n; ++k) c += cat[k] * cat[n - 1 - k];
    cat.push_back(c);
  }
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(r[n], Rational((n % 2 ? 1 : -1) * cat[n - 1])) << n;
  EXPECT_EQ(s.compose(r), Uni::variable(8));
  EXPECT_EQ(series_revert(r), s);
  EXPECT_EQ(series_revert(Uni::variable(5)), Uni::variable(5));
  EXPECT_THROW(series_revert(uni({0, 0, 1}, 4)), std::domain_error);
}

TEST(UniSeries, NewtonSolvesLinearAndQuadratic) {
  // xi - x = 0
  const std::vector<Uni> linear{-Uni::variable(6), uni({1}, 6)};
  EXPECT_EQ(algebraic_series_solve(linear, Rational(0)), Uni::variable(6));
  // x xi^2 - xi + 1 = 0 at xi(0) = 1: Catalan generating function.
  const std::vector<Uni> quad{uni({1}, 7), uni({-1}, 7), Uni::variable(7)};
  const Uni c = algebraic_series_solve(quad, Rational(1));
  const std::vector<long> catalan{1, 1, 2, 5, 14, 42, 132, 429};
  for (int n = 0; n <= 7; ++n) EXPECT_EQ(c[n], catalan[n]);
  // xi^2 - x: the root at the origin is double.
  const std::vector<Uni> degenerate{-Uni::variable(4), uni({0}, 4), uni({1}, 4)};
  EXPECT_THROW(algebraic_series_solve(degenerate, Rational(0)), std::domain_error);
  EXPECT_THROW(algebraic_series_solve(linear, Rational(1)), std::invalid_argument);
}

TEST(MultiSeries, LogOfOnePlusProductIsMercator) {
  const auto z = x(1, 4) * y(1, 4);
  const auto l = series_log(z.one() + z);
  const auto expected = z - z * z * make_rational(1, 2);
  EXPECT_EQ(l, expected);
  EXPECT_EQ(l.cutoff(), 4);
  EXPECT_EQ(naive_exp(l), z.one() + z);
}

TEST(MultiSeries, ExpGeneratesCompleteHomogeneous) {
  // exp(t1 u) at u^3 -> t1^3/6, with u carried as the second group.
  const auto e = series_exp(x(1, 6) * y(1, 6));
  EXPECT_EQ(e.coefficient(Monomial::variable(0, 1, 3) * Monomial::variable(1, 1, 3)), make_rational(1, 6));
}

TEST(MultiSeries, LogExpRoundTripOnRandomSeries) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_series(rng, 6, Rational(1));
    EXPECT_EQ(series_exp(series_log(s)), s);
    const auto g = random_series(rng, 6, Rational(0));
    EXPECT_EQ(series_log(series_exp(g)), g);
    EXPECT_EQ(series_inverse(s) * s, s.one());
  }
}

TEST(MultiSeries, ProductRespectsGradingExhaustively) {
  for (int w = 1; w <= 5; ++w) {
    RationalSeries all(w);
    for (int q = 1; q <= w; ++q) all += x(q, w) + y(q, w);
    const auto sq = all * all;
    for (const auto& [m, c] : sq.terms()) {
      EXPECT_LE(m.weight(), w);
      EXPECT_EQ(m.degree(), 2);
    }
  }
  // x1 * y2 has weight 3 and is dropped at cutoff 2.
  EXPECT_TRUE((x(1, 2) * y(2, 5)).is_zero());
}

TEST(MultiSeries, DerivativeAndEuler) {
  const auto s = x(1, 6) * x(1, 6) * y(2, 6) * Rational(3);
  const auto d = s.derivative(0, 1);
  EXPECT_EQ(d.cutoff(), 5);
  EXPECT_EQ(d.coefficient(Monomial::variable(0, 1) * Monomial::variable(1, 2)), 6);
  EXPECT_EQ(s.euler(0, 1), s * Rational(2));
  EXPECT_EQ(s.euler(1, 2), s);
}

TEST(MultiSeries, CanonicalTextRoundTrip) {
  std::mt19937 rng(7);
  const auto s = random_series(rng, 5, Rational(2));
  const auto text = to_canonical_text(s);
  EXPECT_EQ(parse_canonical_text(text, 5), s);
  EXPECT_EQ(to_canonical_text(parse_canonical_text(text, 5)), text);
  EXPECT_THROW(parse_canonical_text("t:1^1 1/2\n"), std::invalid_argument);
  EXPECT_THROW(parse_canonical_text("t:1^1\t1/2\nt:1^1\t1/3\n"), std::invalid_argument);
}

TEST(GridSeries, DivisionByDifference) {
  using G = GridSeries<Rational, 3>;
  const int d = 6;
  const auto a1 = G::variable(0, d), a2 = G::variable(1, d), a3 = G::variable(2, d);
  const auto p = a1 * a1 * a3 + a2 * Rational(3) - a3 * a3 * a2 + G::constant(Rational(5), d);
  const auto prod = p * (a1 - a3);
  EXPECT_EQ(prod.divided_by_difference(0, 2), p.truncated(d - 1));
  EXPECT_THROW(p.divided_by_difference(0, 1), std::domain_error);
}

TEST(GridSeries, LogOfSeriesCoefficients) {
  using G = GridSeries<RationalSeries, 2>;
  const auto t = RationalSeries::variable(1, 1, 4);
  // log(1 - t a1 a2) = -sum (t a1 a2)^k / k
  const auto e = G::constant(RationalSeries(Rational(1), 4), 4) - G::monomial({1, 1}, t, 4);
  const auto l = series_log(e);
  EXPECT_EQ(l.coefficient({2, 2}), t * t * make_rational(-1, 2));
  EXPECT_TRUE(l.coefficient({1, 2}).is_zero());
}

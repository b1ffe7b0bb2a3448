#include <hciz/toda_ladder.hpp>

#include <gtest/gtest.h>

using namespace hciz;

namespace {

RationalSeries var(int group, int q, int w) { return RationalSeries::variable(group, q, w); }
Rational inv_factorial(int n) { return Rational(1) / Rational(factorial(static_cast<unsigned long>(n))); }

}  // namespace

TEST(Moments, VanishingTimes) {
  const TimeGenerators gen(4, {0, 0});
  for (int i = -1; i < 4; ++i)
    for (int j = -1; j < 4; ++j) {
      const RationalSeries m = moment_entry(i, j, gen);
      if (i == j && i >= 0) EXPECT_EQ(m, RationalSeries(inv_factorial(i), 4));
      else EXPECT_TRUE(m.is_zero()) << i << "," << j;
    }
}

TEST(Moments, TimeDerivativesShiftIndices) {
  const int w = 6;
  const TimeGenerators gen(w, TimeSupport::full());
  for (int i = -1; i < 3; ++i)
    for (int j = -1; j < 3; ++j)
      for (int q = 1; q <= 2; ++q) {
        const RationalSeries m = moment_entry(i, j, gen);
        EXPECT_EQ(m.derivative(0, q), moment_entry(i, j + q, gen).truncated(w - q)) << i << j << q;
        EXPECT_EQ(m.derivative(1, q), moment_entry(i + q, j, gen).truncated(w - q)) << i << j << q;
      }
}

TEST(Moments, LowOrderExpansion) {
  // m_00 = sum_k s_k s~_k / k! = 1 + t1 t~1 + (t1^2/2 + t2)(t~1^2/2 + t~2)/2 + ...
  const int w = 4;
  const RationalSeries s2 = var(0, 1, w) * var(0, 1, w) * make_rational(1, 2) + var(0, 2, w);
  const RationalSeries st2 = var(1, 1, w) * var(1, 1, w) * make_rational(1, 2) + var(1, 2, w);
  const RationalSeries expected = RationalSeries(Rational(1), w) + var(0, 1, w) * var(1, 1, w) + s2 * st2 * make_rational(1, 2);
  EXPECT_EQ(moment_entry(0, 0, w), expected);
}

TEST(Ladder, FactorsReproduceMoments) {
  const int w = 5;
  const SeriesMatrix m = moment_matrix(5, TimeGenerators(w, TimeSupport::full()));
  const Ladder lad = biorthogonalize(m);
  const SeriesMatrix d = SeriesMatrix::diagonal(lad.pivots);
  EXPECT_TRUE((lad.lower * d * lad.upper - m).is_zero());
  EXPECT_TRUE((lad.lower_inv * m * lad.upper_inv - d).is_zero());
  // Biorthogonality of the rescaled polynomials: q_hat^T M p_hat = D.
  EXPECT_TRUE((lad.q_hat().transposed() * m * lad.p_hat() - d).is_zero());
  for (int n = 0; n < 5; ++n) EXPECT_EQ(lad.h_squared(n).constant_term(), inv_factorial(n));
  for (int n = 1; n < 5; ++n) EXPECT_EQ(lad.r_squared(n).constant_term(), make_rational(1, n));
}

TEST(Ladder, PolynomialsWithOnlyTildeTimes) {
  // t = 0: d_n = 1/n!, p_hat_{ij} = (i!/j!) e_{j-i} with e_k from exp(-sum t~_q v^q).
  const int w = 6, n = 6;
  const Ladder lad = biorthogonalize(moment_matrix(n, TimeGenerators(w, {0, kExact})));
  RationalSeries arg(w);
  for (int q = 1; q <= w; ++q) arg -= var(1, q, w);
  // e_k is the weight-k part of exp(-sum t~_q) with every t~_q of weight q.
  const auto e = series_exp(arg).graded_parts();
  for (int i = 0; i < n; ++i) {
    EXPECT_EQ(lad.h_squared(i), RationalSeries(inv_factorial(i), w));
    for (int j = 0; j < n; ++j) {
      const RationalSeries expected =
          j < i || j - i > w ? RationalSeries(w)
                             : e[static_cast<std::size_t>(j - i)] * (Rational(factorial(i)) / Rational(factorial(j)));
      EXPECT_EQ(lad.p_hat()(i, j), expected) << i << "," << j;
    }
  }
  EXPECT_TRUE((lad.lower - SeriesMatrix::identity(n, w)).is_zero());
}

TEST(Ladder, LeftInverseOfLaxAtVanishingTimes) {
  // With t = 0 the matrix U Z^T U^{-1} has ones above the diagonal and
  // (i!/k!) (k-i-1) t~_{k-i-1} further right.
  const int w = 5, n = 8;
  const Ladder lad = biorthogonalize(moment_matrix(n, TimeGenerators(w, {0, kExact})));
  const SeriesMatrix a = lad.upper * SeriesMatrix::shift(n, w).transposed() * lad.upper_inv;
  for (int i = 0; i < n - 1; ++i)
    for (int k = 0; k < n - 1; ++k) {
      RationalSeries expected(w);
      if (k == i + 1) expected = RationalSeries(Rational(1), w);
      else if (k > i + 1 && k - i - 1 <= w)
        expected = var(1, k - i - 1, w) * (Rational(factorial(i)) / Rational(factorial(k)) * Rational(k - i - 1));
      EXPECT_EQ(a(i, k), expected) << i << "," << k;
    }
  // The tilde Lax matrix has no diagonal: only d_{i+1}/d_i above it.
  const LaxPair lp = build_lax(lad);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n; ++j)
      EXPECT_EQ(lp.u_tilde(i, j), j == i + 1 ? RationalSeries(make_rational(1, i + 1), w) : RationalSeries(w)) << i << "," << j;
}

TEST(Tau, ThreeRoutesAgree) {
  for (int n = 1; n <= 4; ++n)
    for (int w = 0; w <= 6; ++w) {
      const TimeGenerators gen(w, TimeSupport::full());
      const RationalSeries by_det = tau_determinant(n, w);
      const RationalSeries by_pivots = biorthogonalize(moment_matrix(n, gen)).tau(n);
      const RationalSeries by_schur = tau_schur_sum(n, w);
      EXPECT_EQ(by_det, by_pivots) << n << " " << w;
      EXPECT_EQ(by_det, by_schur) << n << " " << w;
    }
}

TEST(Tau, RestrictedSupportIsSpecialization) {
  const int n = 3, w = 6;
  const TimeSupport sup{2, 1};
  const RationalSeries restricted = tau_schur_sum(n, w, sup);
  const RationalSeries full = tau_schur_sum(n, w).filtered([&](const Monomial& m) {
    for (int q = 3; q <= w; ++q)
      if (m.exponent(0, q) > 0) return false;
    for (int q = 2; q <= w; ++q)
      if (m.exponent(1, q) > 0) return false;
    return true;
  });
  EXPECT_EQ(restricted, full);
  EXPECT_EQ(tau_determinant(n, w, sup), full);
}

TEST(Tau, TruncationIsStable) {
  const RationalSeries high = tau_determinant(3, 8);
  for (int w = 0; w <= 8; ++w) EXPECT_EQ(tau_determinant(3, w), high.truncated(w)) << w;
}

TEST(Toda, ResidualVanishes) {
  for (int n = 1; n <= 3; ++n) {
    const RationalSeries r = toda_residual(n, 4);
    EXPECT_TRUE(r.is_zero()) << n << ": " << to_canonical_text(r);
  }
}

TEST(Toda, WrongSignIsCaught) {
  const int n = 2, w = 4;
  const Ladder lad = biorthogonalize(moment_matrix(n + 1, TimeGenerators(w + 2, TimeSupport::full())));
  const RationalSeries tn = lad.tau(n);
  const RationalSeries wrong = lad.tau(n + 1) * lad.tau(n - 1) -
                               (tn * tn.derivative(0, 1).derivative(1, 1) + tn.derivative(0, 1) * tn.derivative(1, 1));
  EXPECT_FALSE(wrong.truncated(w).is_zero());
}

TEST(Kp, ResidualVanishes) {
  for (int n = 1; n <= 2; ++n) {
    const RationalSeries r = kp_residual(n, 4);
    EXPECT_TRUE(r.is_zero()) << n << ": " << to_canonical_text(r);
  }
}

TEST(Lax, FlowsVanishOnInterior) {
  for (int q = 1; q <= 2; ++q)
    for (Flow f : {Flow::t, Flow::t_tilde})
      for (LaxSide s : {LaxSide::u, LaxSide::u_tilde}) {
        const ResidualReport r = lax_residual(q, f, s, 3, 3);
        EXPECT_TRUE(r.zero) << q << " " << static_cast<int>(f) << static_cast<int>(s) << ": " << r.describe();
        EXPECT_EQ(r.window, 3 + r.margin);
      }
}

TEST(Lax, WrongProjectionIsCaught) {
  // Projecting onto the upper half instead of the lower half must fail.
  const int q = 1, w = 2, k = 8;
  const Ladder lad = biorthogonalize(moment_matrix(k, TimeGenerators(w + q, TimeSupport::full())));
  const LaxPair lp = build_lax(lad);
  std::vector<RationalSeries> g;
  for (int i = 0; i < k; ++i) g.push_back(lad.pivots_inv[i] * lad.pivots[i].derivative(0, q) * make_rational(1, 2));
  const SeriesMatrix wrong =
      lp.u.derivative(0, q) + commutator(SeriesMatrix::diagonal(g), lp.u) + commutator(lp.u.upper_half(), lp.u);
  bool any = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) any = any || !wrong(i, j).truncated(w).is_zero();
  EXPECT_TRUE(any);
}

TEST(Lax, WindowTooSmallIsRejected) {
  EXPECT_THROW(lax_residual(1, Flow::t, LaxSide::u, 3, 3, 4), std::invalid_argument);
  EXPECT_THROW(string_residual(3, 2, TimeSupport::full(), 3), std::invalid_argument);
  const Ladder one = biorthogonalize(moment_matrix(1, TimeGenerators(2, TimeSupport::full())));
  EXPECT_THROW(build_lax(one), std::invalid_argument);
}

TEST(Lax, ExactBlockIndependentOfWindow) {
  const int w = 4;
  const TimeGenerators gen(w, TimeSupport::full());
  const LaxPair small = build_lax(biorthogonalize(moment_matrix(6, gen)));
  const LaxPair large = build_lax(biorthogonalize(moment_matrix(10, gen)));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < small.exact; ++j) {
      EXPECT_EQ(small.u(i, j), large.u(i, j)) << i << "," << j;
      EXPECT_EQ(small.u_tilde(j, i), large.u_tilde(j, i)) << j << "," << i;
    }
  // Entries above the band are of weight at least their distance from it.
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < small.exact; ++j)
      for (const auto& [m, c] : small.u(i, j).terms()) EXPECT_GE(m.weight(), j - i + 1);
}

TEST(StringEquation, VanishesOnInterior) {
  const ResidualReport at_zero = string_residual(3, 0, {0, 0});
  EXPECT_TRUE(at_zero.zero) << at_zero.describe();
  const ResidualReport first_order = string_residual(3, 2, {1, 0});
  EXPECT_TRUE(first_order.zero) << first_order.describe();
  const ResidualReport general = string_residual(3, 3);
  EXPECT_TRUE(general.zero) << general.describe();
}

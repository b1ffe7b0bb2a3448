#pragma once

// Finite-N two-matrix model in the times t_q (group 0) and t~_q (group 1):
// moment matrix, biorthogonal (LDU) factorization, Lax matrices, and
// residuals of the Toda, KP, Lax and string equations as exact truncated
// series.
//
// Square roots never appear. With M = L D U (L unit lower, U unit upper),
// h_n^2 = d_n and S = D^{1/2}, the Lax matrices are U = S Ub S^{-1} and
// U~ = S Wb S^{-1} where
//   Ub = U Z U^{-1},   Wb = D^{-1} L^{-1} Z^T L D,   Z_{ij} = delta_{i,j+1}.
// Conjugating an equation by S turns d/dt into d/dt + [S^{-1} dS/dt, .].

#include <hciz/multi_series.hpp>
#include <hciz/series_matrix.hpp>
#include <hciz/series_ops.hpp>
#include <hciz/symfun.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hciz {

/// Times t_1..t_{t_max} and t~_1..t~_{tt_max} are live; the others are 0.
struct TimeSupport {
  int t_max = kExact;
  int tt_max = kExact;

  static TimeSupport full() { return {}; }
  int bound(int group) const { return group == 0 ? t_max : tt_max; }
};

/// s_m(t), the coefficients of exp(sum_q t_q v^q), for both groups.
class TimeGenerators {
 public:
  TimeGenerators(int cutoff, TimeSupport support) : cutoff_(cutoff), support_(support) {
    if (cutoff < 0 || cutoff == kExact) throw std::invalid_argument("finite nonnegative cutoff required");
    for (int g = 0; g < 2; ++g) {
      auto& s = s_[g];
      s.push_back(RationalSeries(Rational(1), cutoff));
      for (int m = 1; m <= cutoff; ++m) {
        RationalSeries acc(cutoff);
        for (int q = 1; q <= std::min(m, support.bound(g)); ++q)
          acc += RationalSeries::variable(g, q, cutoff) * s[static_cast<std::size_t>(m - q)] * Rational(q);
        s.push_back(acc * make_rational(1, m));
      }
    }
  }

  int cutoff() const { return cutoff_; }
  const TimeSupport& support() const { return support_; }
  /// s_m for group 0, s~_m for group 1; zero for m < 0 or m > cutoff.
  RationalSeries s(int group, int m) const {
    if (m < 0 || m > cutoff_) return RationalSeries(cutoff_);
    return s_[group][static_cast<std::size_t>(m)];
  }
  const std::vector<RationalSeries>& all(int group) const { return s_[group]; }

 private:
  int cutoff_;
  TimeSupport support_;
  std::vector<RationalSeries> s_[2];
};

/// m_ij = sum_{k >= max(i,j,0)} s_{k-j}(t) s~_{k-i}(t~) / k!; indices may be -1.
inline RationalSeries moment_entry(int i, int j, const TimeGenerators& gen) {
  if (i < -1 || j < -1) throw std::invalid_argument("moment indices must be >= -1");
  const int w = gen.cutoff();
  RationalSeries m(w);
  for (int k = std::max({i, j, 0}); 2 * k - i - j <= w; ++k)
    m += gen.s(0, k - j) * gen.s(1, k - i) * (Rational(1) / Rational(factorial(static_cast<unsigned long>(k))));
  return m;
}

inline RationalSeries moment_entry(int i, int j, int cutoff, TimeSupport support = TimeSupport::full()) {
  return moment_entry(i, j, TimeGenerators(cutoff, support));
}

/// Rows/columns offset..offset+n-1 of the moment matrix.
inline SeriesMatrix moment_matrix(int n, const TimeGenerators& gen, int offset = 0) {
  SeriesMatrix m(n, n, gen.cutoff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = moment_entry(i + offset, j + offset, gen);
  return m;
}

/// M = L D U over the series ring, with inverses of the triangular factors.
struct Ladder {
  int size = 0;
  int cutoff = 0;
  SeriesMatrix moments;
  SeriesMatrix lower;      // L, unit lower triangular
  SeriesMatrix upper;      // U, unit upper triangular
  SeriesMatrix lower_inv;  // L^{-1}
  SeriesMatrix upper_inv;  // U^{-1}
  std::vector<RationalSeries> pivots;      // d_n = h_n^2
  std::vector<RationalSeries> pivots_inv;  // 1/d_n

  const RationalSeries& h_squared(int n) const { return pivots.at(static_cast<std::size_t>(n)); }
  /// r_n^2 = h_n^2 / h_{n-1}^2 for n >= 1.
  RationalSeries r_squared(int n) const {
    if (n < 1) throw std::invalid_argument("r_n^2 needs n >= 1");
    return pivots.at(static_cast<std::size_t>(n)) * pivots_inv.at(static_cast<std::size_t>(n) - 1);
  }
  /// tau_n = det M_n = prod_{i<n} h_i^2.
  RationalSeries tau(int n) const {
    if (n < 0 || n > size) throw std::out_of_range("tau index outside the ladder");
    RationalSeries t(Rational(1), cutoff);
    for (int i = 0; i < n; ++i) t = t * pivots[static_cast<std::size_t>(i)];
    return t;
  }
  /// p_{kn} h_n: the polynomial coefficients rescaled to stay rational.
  const SeriesMatrix& p_hat() const { return upper_inv; }
  /// q_{kn} h_n.
  SeriesMatrix q_hat() const { return lower_inv.transposed(); }
};

inline SeriesMatrix unit_lower_inverse(const SeriesMatrix& l) {
  const int n = l.rows();
  SeriesMatrix x = SeriesMatrix::identity(n, l.cutoff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      RationalSeries acc(l.cutoff());
      for (int k = j; k < i; ++k)
        if (!l(i, k).is_zero() && !x(k, j).is_zero()) acc += l(i, k) * x(k, j);
      x(i, j) = -acc;
    }
  return x;
}

inline Ladder biorthogonalize(const SeriesMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("moment matrix must be square");
  Ladder lad;
  lad.size = n;
  lad.cutoff = m.cutoff();
  lad.moments = m;
  lad.lower = SeriesMatrix::identity(n, m.cutoff());
  lad.upper = SeriesMatrix::identity(n, m.cutoff());
  for (int k = 0; k < n; ++k) {
    RationalSeries d = m(k, k);
    for (int p = 0; p < k; ++p) d -= lad.lower(k, p) * lad.pivots[p] * lad.upper(p, k);
    if (is_zero(d.constant_term())) throw std::logic_error("pivot with zero constant term");
    const RationalSeries d_inv = series_inverse(d);
    lad.pivots.push_back(d);
    lad.pivots_inv.push_back(d_inv);
    for (int j = k + 1; j < n; ++j) {
      RationalSeries u = m(k, j);
      RationalSeries l = m(j, k);
      for (int p = 0; p < k; ++p) {
        const RationalSeries dp = lad.pivots[p];
        if (!lad.upper(p, j).is_zero() && !lad.lower(k, p).is_zero()) u -= lad.lower(k, p) * dp * lad.upper(p, j);
        if (!lad.lower(j, p).is_zero() && !lad.upper(p, k).is_zero()) l -= lad.lower(j, p) * dp * lad.upper(p, k);
      }
      lad.upper(k, j) = u * d_inv;
      lad.lower(j, k) = l * d_inv;
    }
  }
  lad.lower_inv = unit_lower_inverse(lad.lower);
  lad.upper_inv = unit_lower_inverse(lad.upper.transposed()).transposed();
  return lad;
}

/// Lax matrices in the S-frame; entries are exact for columns < exact
/// (Ub) and rows < exact (Wb), where exact = size - 1.
struct LaxPair {
  SeriesMatrix u;        // Ub = U Z U^{-1}
  SeriesMatrix u_tilde;  // Wb = D^{-1} L^{-1} Z^T L D
  int exact = 0;
};

inline LaxPair build_lax(const Ladder& lad) {
  if (lad.size < 2) throw std::invalid_argument("band truncation: ladder window too small for Lax matrices");
  const int n = lad.size;
  const auto z = SeriesMatrix::shift(n, lad.cutoff);
  LaxPair lp;
  lp.u = lad.upper * z * lad.upper_inv;
  lp.u_tilde = SeriesMatrix::diagonal(lad.pivots_inv) * lad.lower_inv * z.transposed() * lad.lower *
               SeriesMatrix::diagonal(lad.pivots);
  lp.exact = n - 1;
  return lp;
}

/// Where a residual failed (or that it did not).
struct ResidualReport {
  bool zero = true;
  int row = -1;
  int col = -1;
  std::string monomial;
  Rational value;
  int window = 0;
  int margin = 0;
  int weight = 0;

  void record(const RationalSeries& s, int i = -1, int j = -1) {
    if (!zero || s.is_zero()) return;
    zero = false;
    row = i;
    col = j;
    monomial = s.terms().begin()->first.key();
    value = s.terms().begin()->second;
  }
  std::string describe() const {
    if (zero) return "zero";
    std::string where = row >= 0 ? "entry (" + std::to_string(row) + "," + std::to_string(col) + ") " : "";
    return where + monomial + " -> " + to_string(value);
  }
};

inline ResidualReport report_series(const RationalSeries& s, int weight) {
  ResidualReport r;
  r.weight = weight;
  r.record(s.truncated(weight));
  return r;
}

/// tau_{n+1} tau_{n-1} - (tau_n d1 d~1 tau_n - d1 tau_n d~1 tau_n), valid to weight w.
inline RationalSeries toda_residual(int n, int weight, TimeSupport support = TimeSupport::full()) {
  if (n < 1) throw std::invalid_argument("Toda residual needs n >= 1");
  const int w = weight + 2;
  const Ladder lad = biorthogonalize(moment_matrix(n + 1, TimeGenerators(w, support)));
  const RationalSeries tn = lad.tau(n);
  const RationalSeries d1 = tn.derivative(0, 1);
  const RationalSeries d1t = tn.derivative(1, 1);
  const RationalSeries dd = d1.derivative(1, 1);
  const RationalSeries res = lad.tau(n + 1) * lad.tau(n - 1) - (tn * dd - d1 * d1t);
  return res.truncated(weight);
}

/// 3 chi_22 + d1(-4 chi_3 + 6 chi chi_1 + chi_111) with chi = 2 d1^2 log tau_N,
/// valid to weight w; times t_1..t_3 and all t~ live.
inline RationalSeries kp_residual(int n, int weight) {
  if (n < 1) throw std::invalid_argument("KP residual needs N >= 1");
  const int w = weight + 6;
  const Ladder lad = biorthogonalize(moment_matrix(n, TimeGenerators(w, {3, kExact})));
  const RationalSeries tau = lad.tau(n);
  const RationalSeries log_tau = series_log(tau * inv(tau.constant_term()));
  const RationalSeries chi = log_tau.derivative(0, 1).derivative(0, 1) * Rational(2);
  const RationalSeries chi1 = chi.derivative(0, 1);
  const RationalSeries inner =
      chi.derivative(0, 3) * Rational(-4) + chi * chi1 * Rational(6) + chi1.derivative(0, 1).derivative(0, 1);
  const RationalSeries res = chi.derivative(0, 2).derivative(0, 2) * Rational(3) + inner.derivative(0, 1);
  return res.truncated(weight);
}

enum class Flow { t, t_tilde };
enum class LaxSide { u, u_tilde };

inline int lax_margin(int q, int weight) { return weight + 2 * q + 2; }

/// Residual of dX/dt_q = -[(Ub^q)_+, X] or dX/dt~_q = [(Wb^q)_-, X] for X
/// in {Ub, Wb}, in the S-frame, on the leading interior x interior block.
inline ResidualReport lax_residual(int q, Flow flow, LaxSide side, int interior, int weight,
                                   std::optional<int> window = std::nullopt) {
  if (q < 1 || interior < 1 || weight < 0) throw std::invalid_argument("bad Lax residual parameters");
  const int margin = lax_margin(q, weight);
  const int k = window.value_or(interior + margin);
  if (k < interior + margin)
    throw std::invalid_argument("band truncation: window " + std::to_string(k) + " too small for interior " +
                                std::to_string(interior) + " (margin " + std::to_string(margin) + ")");
  const int w = weight + q;
  const Ladder lad = biorthogonalize(moment_matrix(k, TimeGenerators(w, TimeSupport::full())));
  const LaxPair lp = build_lax(lad);
  const int group = flow == Flow::t ? 0 : 1;
  std::vector<RationalSeries> g;
  for (int i = 0; i < k; ++i)
    g.push_back(lad.pivots_inv[i] * lad.pivots[i].derivative(group, q) * make_rational(1, 2));
  const SeriesMatrix gm = SeriesMatrix::diagonal(g);
  const SeriesMatrix& x = side == LaxSide::u ? lp.u : lp.u_tilde;
  SeriesMatrix res = x.derivative(group, q) + commutator(gm, x);
  if (flow == Flow::t) res += commutator(lp.u.power(q).lower_half(), x);
  else res -= commutator(lp.u_tilde.power(q).upper_half(), x);
  ResidualReport rep;
  rep.window = k;
  rep.margin = margin;
  rep.weight = weight;
  for (int i = 0; i < interior; ++i)
    for (int j = 0; j < interior; ++j) rep.record(res(i, j).truncated(weight), i, j);
  return rep;
}

inline int string_margin(int weight, TimeSupport support) { return weight + std::min(weight, support.t_max) + 2; }

/// Residual of Ub Db + sum_q q t_q Ub^q - D^{-1} Tb on the interior block,
/// where Db = U D_u U^{-1} is d/du and Tb = L^{-1} M^{(-1)} U^{-1} comes
/// from the shifted moments m_{i-1,j-1}.
inline ResidualReport string_residual(int interior, int weight, TimeSupport support = TimeSupport::full(),
                                      std::optional<int> window = std::nullopt) {
  if (interior < 1 || weight < 0) throw std::invalid_argument("bad string residual parameters");
  const int margin = string_margin(weight, support);
  const int k = window.value_or(interior + margin);
  if (k < interior + margin)
    throw std::invalid_argument("band truncation: window " + std::to_string(k) + " too small for interior " +
                                std::to_string(interior) + " (margin " + std::to_string(margin) + ")");
  const TimeGenerators gen(weight, support);
  const Ladder lad = biorthogonalize(moment_matrix(k, gen));
  const LaxPair lp = build_lax(lad);
  SeriesMatrix du(k, k, weight);
  for (int j = 1; j < k; ++j) du(j - 1, j) = RationalSeries(Rational(j), weight);
  const SeriesMatrix db = lad.upper * du * lad.upper_inv;
  const SeriesMatrix tb = SeriesMatrix::diagonal(lad.pivots_inv) * lad.lower_inv * moment_matrix(k, gen, -1) * lad.upper_inv;
  SeriesMatrix res = lp.u * db - tb;
  SeriesMatrix up = SeriesMatrix::identity(k, weight);
  for (int q = 1; q <= std::min(weight, support.t_max); ++q) {
    up = up * lp.u;
    res += up.map([&](const RationalSeries& s) { return s * RationalSeries::variable(0, q, weight) * Rational(q); });
  }
  ResidualReport rep;
  rep.window = k;
  rep.margin = margin;
  rep.weight = weight;
  for (int i = 0; i < interior; ++i)
    for (int j = 0; j < interior; ++j) rep.record(res(i, j).truncated(weight), i, j);
  return rep;
}

/// det M_N by expansion over column subsets.
inline RationalSeries tau_determinant(int n, int weight, TimeSupport support = TimeSupport::full()) {
  const SeriesMatrix m = moment_matrix(n, TimeGenerators(weight, support));
  std::vector<std::vector<RationalSeries>> a(static_cast<std::size_t>(n));
  std::vector<std::vector<bool>> nz(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i].push_back(m(i, j));
      nz[i][j] = !m(i, j).is_zero();
    }
  return subset_determinant(a, RationalSeries(Rational(1), weight), nz);
}

/// sum over rows(lambda) <= N, 2|lambda| <= w of
/// s_lambda(t) s_lambda(t~) / prod_{i=1..N} (lambda_i + N - i)!,
/// with s_lambda(t) the Schur function at power sums q t_q.
inline RationalSeries tau_schur_sum(int n, int weight, TimeSupport support = TimeSupport::full()) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  const TimeGenerators gen(weight, support);
  const RationalSeries one(Rational(1), weight);
  RationalSeries total(weight);
  for (int size = 0; 2 * size <= weight; ++size)
    for (const auto& lambda : enumerate_partitions(size, n)) {
      const RationalSeries sa = schur_from_complete(lambda, gen.all(0), one);
      if (sa.is_zero()) continue;
      const RationalSeries sb = schur_from_complete(lambda, gen.all(1), one);
      Integer den = 1;
      for (long h : lambda.shifted_weights(n)) den *= factorial(static_cast<unsigned long>(h));
      total += sa * sb * (Rational(1) / Rational(den));
    }
  return total;
}

}  // namespace hciz

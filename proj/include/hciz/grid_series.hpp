#pragma once

// Truncated power series in K auxiliary variables a_1..a_K, truncated by
// total degree. Used for the generating functions of derivatives, where
// the coefficients are series in the moments.

#include <hciz/multi_series.hpp>
#include <hciz/rational.hpp>

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace hciz {

template <class C, int K>
class GridSeries;
template <class C, int K>
bool is_zero(const GridSeries<C, K>& s);

template <class C, int K>
class GridSeries {
 public:
  using Coefficient = C;
  using Exponent = std::array<int, K>;

  GridSeries() : GridSeries(0) {}
  explicit GridSeries(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("negative degree bound");
  }

  static GridSeries constant(const C& c, int degree) {
    GridSeries s(degree);
    s.add_term(Exponent{}, c);
    return s;
  }
  static GridSeries monomial(const Exponent& e, const C& c, int degree) {
    GridSeries s(degree);
    s.add_term(e, c);
    return s;
  }
  static GridSeries variable(int i, int degree) {
    Exponent e{};
    e[static_cast<std::size_t>(i)] = 1;
    return monomial(e, C(Rational(1)), degree);
  }

  static int total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

  int degree() const { return degree_; }
  int cutoff() const { return degree_; }
  const std::map<Exponent, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  C coefficient(const Exponent& e) const {
    if (total(e) > degree_) throw std::out_of_range("coefficient above the degree bound");
    auto it = terms_.find(e);
    return it == terms_.end() ? C() : it->second;
  }
  C constant_term() const { return terms_.count(Exponent{}) ? terms_.at(Exponent{}) : C(); }

  void add_term(const Exponent& e, const C& c) {
    for (int x : e)
      if (x < 0) throw std::invalid_argument("negative exponent");
    if (total(e) > degree_ || hciz::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (hciz::is_zero(it->second)) terms_.erase(it);
    }
  }

  GridSeries zero() const { return GridSeries(degree_); }
  GridSeries one() const { return constant(C(Rational(1)), degree_); }
  GridSeries truncated(int degree) const {
    GridSeries out(std::min(degree, degree_));
    for (const auto& [e, c] : terms_)
      if (total(e) <= out.degree_) out.terms_.emplace(e, c);
    return out;
  }
  /// The bound may be raised when the caller knows the series is exact
  /// past its current bound (e.g. a polynomial).
  GridSeries with_degree(int degree) const {
    GridSeries out(degree);
    for (const auto& [e, c] : terms_)
      if (total(e) <= degree) out.terms_.emplace(e, c);
    return out;
  }
  std::vector<GridSeries> graded_parts() const {
    std::vector<GridSeries> parts(static_cast<std::size_t>(degree_) + 1, GridSeries(degree_));
    for (const auto& [e, c] : terms_) parts[static_cast<std::size_t>(total(e))].terms_.emplace(e, c);
    return parts;
  }

  /// Exact quotient by (a_x - a_y); the degree bound drops by one. Throws
  /// if the division leaves a remainder.
  GridSeries divided_by_difference(int x, int y) const {
    if (x == y) throw std::invalid_argument("difference of a variable with itself");
    GridSeries q(degree_ > 0 ? degree_ - 1 : 0);
    if (degree_ == 0) {
      if (!is_zero()) throw std::domain_error("series not divisible by the variable difference");
      return q;
    }
    // P[b + e_x] = Q[b] - Q[b + e_x - e_y], solved from the highest power
    // of a_x downwards within each total degree.
    std::map<Exponent, C> p = terms_;
    for (int d = degree_ - 1; d >= 0; --d) {
      std::vector<Exponent> level;
      for_each_exponent(d, [&](const Exponent& e) { level.push_back(e); });
      std::sort(level.begin(), level.end(), [x](const Exponent& a, const Exponent& b) { return a[x] > b[x]; });
      for (const Exponent& b : level) {
        Exponent up = b;
        ++up[static_cast<std::size_t>(x)];
        C v = take(p, up);
        if (b[static_cast<std::size_t>(y)] > 0) {
          Exponent side = up;
          --side[static_cast<std::size_t>(y)];
          auto it = q.terms_.find(side);
          if (it != q.terms_.end()) v += it->second;
        }
        if (!hciz::is_zero(v)) q.terms_.emplace(b, v);
      }
      // Remaining degree-(d+1) terms have no a_x; they must equal -Q[. - e_y].
      for_each_exponent(d + 1, [&](const Exponent& e) {
        if (e[static_cast<std::size_t>(x)] != 0) return;
        C v = take(p, e);
        if (e[static_cast<std::size_t>(y)] > 0) {
          Exponent down = e;
          --down[static_cast<std::size_t>(y)];
          auto it = q.terms_.find(down);
          if (it != q.terms_.end()) v += it->second;
        }
        if (!hciz::is_zero(v)) throw std::domain_error("series not divisible by the variable difference");
      });
    }
    if (!hciz::is_zero(take(p, Exponent{}))) throw std::domain_error("series not divisible by the variable difference");
    return q;
  }

  GridSeries& operator+=(const GridSeries& o) {
    if (o.degree_ < degree_) *this = truncated(o.degree_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  GridSeries& operator-=(const GridSeries& o) {
    if (o.degree_ < degree_) *this = truncated(o.degree_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  GridSeries& operator*=(const C& s) {
    if (hciz::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second *= s;
    std::erase_if(terms_, [](const auto& kv) { return hciz::is_zero(kv.second); });
    return *this;
  }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  GridSeries& operator*=(const R& s) {
    return *this *= C(s);
  }

  friend GridSeries operator+(GridSeries a, const GridSeries& b) { return a += b; }
  friend GridSeries operator-(GridSeries a, const GridSeries& b) { return a -= b; }
  friend GridSeries operator-(GridSeries a) {
    for (auto& kv : a.terms_) kv.second = -kv.second;
    return a;
  }
  friend GridSeries operator*(GridSeries a, const C& s) { return a *= s; }
  friend GridSeries operator*(const C& s, GridSeries a) { return a *= s; }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  friend GridSeries operator*(GridSeries a, const R& s) {
    return a *= C(s);
  }
  friend GridSeries operator*(const GridSeries& a, const GridSeries& b) {
    GridSeries out(std::min(a.degree_, b.degree_));
    for (const auto& [ea, ca] : a.terms_) {
      const int da = total(ea);
      for (const auto& [eb, cb] : b.terms_) {
        if (da + total(eb) > out.degree_) continue;
        Exponent e;
        for (std::size_t i = 0; i < K; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }
  GridSeries& operator*=(const GridSeries& o) { return *this = *this * o; }

  friend bool operator==(const GridSeries& a, const GridSeries& b) {
    const int d = std::min(a.degree_, b.degree_);
    const auto x = a.truncated(d);
    const auto y = b.truncated(d);
    if (x.terms_.size() != y.terms_.size()) return false;
    for (const auto& [e, c] : x.terms_) {
      auto it = y.terms_.find(e);
      if (it == y.terms_.end() || !(it->second == c)) return false;
    }
    return true;
  }

  /// Calls f on every exponent of total degree d.
  template <class F>
  static void for_each_exponent(int d, F&& f) {
    Exponent e{};
    fill(e, 0, d, f);
  }

 private:
  template <class F>
  static void fill(Exponent& e, int i, int remaining, F& f) {
    if (i == K - 1) {
      e[static_cast<std::size_t>(i)] = remaining;
      f(e);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      e[static_cast<std::size_t>(i)] = v;
      fill(e, i + 1, remaining - v, f);
    }
  }
  static C take(std::map<Exponent, C>& p, const Exponent& e) {
    auto it = p.find(e);
    if (it == p.end()) return C();
    C v = std::move(it->second);
    p.erase(it);
    return v;
  }

  std::map<Exponent, C> terms_;
  int degree_;
};

template <class C, int K>
bool is_zero(const GridSeries<C, K>& s) {
  return s.is_zero();
}

}  // namespace hciz

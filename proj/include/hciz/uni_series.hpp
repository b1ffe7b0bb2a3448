#pragma once

// Univariate truncated power series and Laurent series. The coefficient
// type may itself be a series (e.g. MultiSeries in the moments).

#include <hciz/rational.hpp>

#include <algorithm>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace hciz {

template <class C>
class UniSeries;
template <class C>
bool is_zero(const UniSeries<C>& s);

/// c_0 + c_1 x + ... + c_T x^T + O(x^{T+1})
template <class C>
class UniSeries {
 public:
  using Coefficient = C;

  UniSeries() : UniSeries(0) {}
  explicit UniSeries(int order) : c_(static_cast<std::size_t>(check_order(order)) + 1), order_(order) {}
  UniSeries(std::vector<C> coeffs, int order) : c_(std::move(coeffs)), order_(check_order(order)) {
    c_.resize(static_cast<std::size_t>(order) + 1);
  }

  static UniSeries constant(const C& c, int order) {
    UniSeries s(order);
    s.c_[0] = c;
    return s;
  }
  static UniSeries variable(int order) {
    UniSeries s(order);
    if (order >= 1) s.c_[1] = C(Rational(1));
    return s;
  }

  int order() const { return order_; }
  int cutoff() const { return order_; }
  const std::vector<C>& coefficients() const { return c_; }
  const C& operator[](int k) const {
    if (k < 0 || k > order_) throw std::out_of_range("coefficient outside the truncation order");
    return c_[static_cast<std::size_t>(k)];
  }
  void set(int k, const C& v) {
    if (k < 0 || k > order_) throw std::out_of_range("coefficient outside the truncation order");
    c_[static_cast<std::size_t>(k)] = v;
  }
  C constant_term() const { return c_[0]; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const C& x) { return hciz::is_zero(x); });
  }

  UniSeries zero() const { return UniSeries(order_); }
  UniSeries one() const { return constant(C(Rational(1)), order_); }

  UniSeries truncated(int order) const {
    const int t = std::min(order, order_);
    return UniSeries(std::vector<C>(c_.begin(), c_.begin() + t + 1), t);
  }
  std::vector<UniSeries> graded_parts() const {
    std::vector<UniSeries> parts;
    for (int k = 0; k <= order_; ++k) {
      UniSeries p(order_);
      p.c_[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
      parts.push_back(std::move(p));
    }
    return parts;
  }

  /// d/dx lowers the order by one.
  UniSeries derivative() const {
    if (order_ == 0) return UniSeries(0);
    UniSeries d(order_ - 1);
    for (int k = 1; k <= order_; ++k) d.c_[static_cast<std::size_t>(k) - 1] = c_[static_cast<std::size_t>(k)] * C(Rational(k));
    return d;
  }
  /// s / x, requires a zero constant term; lowers the order by one.
  UniSeries divided_by_x() const {
    if (!hciz::is_zero(c_[0])) throw std::domain_error("series has a nonzero constant term");
    if (order_ == 0) throw std::domain_error("cannot divide an order-0 series by x");
    return UniSeries(std::vector<C>(c_.begin() + 1, c_.end()), order_ - 1);
  }
  /// x * s raises the order by one.
  UniSeries times_x() const {
    std::vector<C> v(c_.size() + 1);
    std::copy(c_.begin(), c_.end(), v.begin() + 1);
    return UniSeries(std::move(v), order_ + 1);
  }

  /// s(inner) for inner with zero constant term.
  UniSeries compose(const UniSeries& inner) const {
    if (!hciz::is_zero(inner.c_[0])) throw std::domain_error("composition needs an inner series without constant term");
    const int t = std::min(order_, inner.order_);
    const UniSeries in = inner.truncated(t);
    UniSeries acc = constant(c_[static_cast<std::size_t>(t)], t);
    for (int k = t - 1; k >= 0; --k) {
      acc = acc * in;
      acc.c_[0] += c_[static_cast<std::size_t>(k)];
    }
    return acc;
  }

  UniSeries& operator+=(const UniSeries& o) {
    shrink(o.order_);
    for (int k = 0; k <= order_; ++k) c_[static_cast<std::size_t>(k)] += o.c_[static_cast<std::size_t>(k)];
    return *this;
  }
  UniSeries& operator-=(const UniSeries& o) {
    shrink(o.order_);
    for (int k = 0; k <= order_; ++k) c_[static_cast<std::size_t>(k)] -= o.c_[static_cast<std::size_t>(k)];
    return *this;
  }
  UniSeries& operator*=(const C& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  UniSeries& operator*=(const R& s) {
    return *this *= C(s);
  }

  friend UniSeries operator+(UniSeries a, const UniSeries& b) { return a += b; }
  friend UniSeries operator-(UniSeries a, const UniSeries& b) { return a -= b; }
  friend UniSeries operator-(UniSeries a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend UniSeries operator*(UniSeries a, const C& s) { return a *= s; }
  friend UniSeries operator*(const C& s, UniSeries a) { return a *= s; }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  friend UniSeries operator*(UniSeries a, const R& s) {
    return a *= C(s);
  }
  friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
    const int t = std::min(a.order_, b.order_);
    UniSeries out(t);
    for (int i = 0; i <= t; ++i) {
      const C& x = a.c_[static_cast<std::size_t>(i)];
      if (hciz::is_zero(x)) continue;
      for (int j = 0; i + j <= t; ++j) {
        const C& y = b.c_[static_cast<std::size_t>(j)];
        if (!hciz::is_zero(y)) out.c_[static_cast<std::size_t>(i + j)] += x * y;
      }
    }
    return out;
  }
  UniSeries& operator*=(const UniSeries& o) { return *this = *this * o; }

  friend bool operator==(const UniSeries& a, const UniSeries& b) {
    const int t = std::min(a.order_, b.order_);
    for (int k = 0; k <= t; ++k)
      if (!(a.c_[static_cast<std::size_t>(k)] == b.c_[static_cast<std::size_t>(k)])) return false;
    return true;
  }
  friend bool operator!=(const UniSeries& a, const UniSeries& b) { return !(a == b); }

 private:
  static int check_order(int t) {
    if (t < 0) throw std::invalid_argument("negative truncation order");
    return t;
  }
  void shrink(int t) {
    if (t < order_) {
      order_ = t;
      c_.resize(static_cast<std::size_t>(t) + 1);
    }
  }

  std::vector<C> c_;
  int order_;
};

template <class C>
bool is_zero(const UniSeries<C>& s) {
  return s.is_zero();
}

/// x^v * (c_0 + c_1 x + ... + c_T x^T + O(x^{T+1})). The valuation is
/// normalized so c_0 != 0 unless the series vanishes to its order.
template <class C>
class LaurentSeries {
 public:
  LaurentSeries(int valuation, UniSeries<C> body) : valuation_(valuation), body_(std::move(body)) { normalize(); }

  int valuation() const { return valuation_; }
  /// Highest exponent whose coefficient is known.
  int order() const { return valuation_ + body_.order(); }
  const UniSeries<C>& body() const { return body_; }
  bool is_zero() const { return body_.is_zero(); }

  C coefficient(int n) const {
    if (n > order()) throw std::out_of_range("Laurent coefficient outside the truncation order");
    return n < valuation_ ? C() : body_[n - valuation_];
  }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    return LaurentSeries(a.valuation_ + b.valuation_, a.body_ * b.body_);
  }

 private:
  void normalize() {
    while (body_.order() > 0 && hciz::is_zero(body_[0])) {
      body_ = body_.divided_by_x();
      ++valuation_;
    }
  }

  int valuation_;
  UniSeries<C> body_;
};

}  // namespace hciz

#pragma once

// Truncated multivariate power series in two indexed variable groups,
// graded by weight (x_q and y_q have weight q). A series carries a weight
// cutoff W: every coefficient of weight <= W is exact, nothing above W is
// stored. Polynomials known exactly use the cutoff kExact.

#include <hciz/formal_n.hpp>
#include <hciz/monomial.hpp>
#include <hciz/rational.hpp>

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace hciz {

inline constexpr int kExact = INT_MAX;

template <class C>
class MultiSeries;
template <class C>
bool is_zero(const MultiSeries<C>& s);

template <class C>
class MultiSeries {
 public:
  using Coefficient = C;
  using Terms = std::map<Monomial, C, CanonicalOrder>;

  MultiSeries() = default;
  explicit MultiSeries(int cutoff) : cutoff_(check_cutoff(cutoff)) {}
  explicit MultiSeries(const Rational& constant, int cutoff = kExact) : cutoff_(check_cutoff(cutoff)) {
    if (!hciz::is_zero(constant)) terms_.emplace(Monomial(), C(constant));
  }
  template <class D = C, std::enable_if_t<!std::is_same_v<D, Rational>, int> = 0>
  explicit MultiSeries(const C& constant, int cutoff = kExact) : cutoff_(check_cutoff(cutoff)) {
    if (!hciz::is_zero(constant)) terms_.emplace(Monomial(), constant);
  }

  static MultiSeries monomial(const Monomial& m, const C& coeff, int cutoff = kExact) {
    MultiSeries s(cutoff);
    s.add_term(m, coeff);
    return s;
  }
  /// x_q (group 0) or y_q (group 1)
  static MultiSeries variable(int group, int q, int cutoff = kExact) {
    return monomial(Monomial::variable(group, q), C(Rational(1)), cutoff);
  }

  int cutoff() const { return cutoff_; }
  bool exact() const { return cutoff_ == kExact; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  C coefficient(const Monomial& m) const {
    if (m.weight() > cutoff_) throw std::out_of_range("coefficient above the weight cutoff requested");
    auto it = terms_.find(m);
    return it == terms_.end() ? C() : it->second;
  }
  C constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? C() : it->second;
  }

  /// Adds c * m; terms above the cutoff are dropped.
  void add_term(const Monomial& m, const C& c) {
    if (m.weight() > cutoff_ || hciz::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (hciz::is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiSeries truncated(int cutoff) const {
    MultiSeries out(std::min(cutoff, cutoff_));
    for (const auto& [m, c] : terms_)
      if (m.weight() <= out.cutoff_) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }

  /// Homogeneous parts of weight 0..cutoff, each carrying the full cutoff.
  std::vector<MultiSeries> graded_parts() const {
    if (exact()) throw std::logic_error("graded_parts needs a finite cutoff");
    std::vector<MultiSeries> parts(static_cast<std::size_t>(cutoff_) + 1, MultiSeries(cutoff_));
    for (const auto& [m, c] : terms_) parts[static_cast<std::size_t>(m.weight())].terms_.emplace(m, c);
    return parts;
  }
  int max_weight() const {
    int w = -1;
    for (const auto& kv : terms_) w = std::max(w, kv.first.weight());
    return w;
  }

  MultiSeries zero() const { return MultiSeries(cutoff_); }
  MultiSeries one() const { return MultiSeries(Rational(1), cutoff_); }

  /// Keeps the terms whose monomial satisfies pred; the cutoff is unchanged.
  MultiSeries filtered(const std::function<bool(const Monomial&)>& pred) const {
    MultiSeries out(cutoff_);
    for (const auto& [m, c] : terms_)
      if (pred(m)) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    MultiSeries<D> out(cutoff_);
    for (const auto& [m, c] : terms_) out.add_term(m, f(c));
    return out;
  }

  /// d/dx_q lowers the cutoff by q.
  MultiSeries derivative(int group, int q) const {
    MultiSeries out(exact() ? kExact : cutoff_ - q);
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(group, q);
      if (e == 0) continue;
      out.add_term(m.lowered(group, q), c * C(Rational(e)));
    }
    return out;
  }
  /// x_q d/dx_q keeps the cutoff.
  MultiSeries euler(int group, int q) const {
    MultiSeries out(cutoff_);
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(group, q);
      if (e != 0) out.terms_.emplace_hint(out.terms_.end(), m, c * C(Rational(e)));
    }
    return out;
  }

  MultiSeries& operator+=(const MultiSeries& o) {
    cutoff_ = std::min(cutoff_, o.cutoff_);
    drop_above_cutoff();
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiSeries& operator-=(const MultiSeries& o) {
    cutoff_ = std::min(cutoff_, o.cutoff_);
    drop_above_cutoff();
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  MultiSeries& operator*=(const C& s) {
    if (hciz::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  MultiSeries& operator*=(const R& s) {
    return *this *= C(s);
  }

  friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
  friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
  friend MultiSeries operator-(MultiSeries a) {
    for (auto& kv : a.terms_) kv.second = -kv.second;
    return a;
  }
  friend MultiSeries operator*(MultiSeries a, const C& s) { return a *= s; }
  friend MultiSeries operator*(const C& s, MultiSeries a) { return a *= s; }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  friend MultiSeries operator*(MultiSeries a, const R& s) {
    return a *= C(s);
  }
  template <class R, std::enable_if_t<std::is_same_v<R, Rational> && !std::is_same_v<C, Rational>, int> = 0>
  friend MultiSeries operator*(const R& s, MultiSeries a) {
    return a *= C(s);
  }

  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    MultiSeries out(std::min(a.cutoff_, b.cutoff_));
    if (a.is_zero() || b.is_zero()) return out;
    const auto ba = a.buckets(out.cutoff_);
    const auto bb = b.buckets(out.cutoff_);
    for (std::size_t wa = 0; wa < ba.size(); ++wa) {
      for (std::size_t wb = 0; wb < bb.size(); ++wb) {
        if (out.cutoff_ != kExact && static_cast<long>(wa + wb) > out.cutoff_) break;
        for (const auto* x : ba[wa])
          for (const auto* y : bb[wb]) out.add_term(x->first * y->first, x->second * y->second);
      }
    }
    return out;
  }
  MultiSeries& operator*=(const MultiSeries& o) { return *this = *this * o; }

  /// Equal as truncated series: compared up to the smaller cutoff.
  friend bool operator==(const MultiSeries& a, const MultiSeries& b) {
    const int w = std::min(a.cutoff_, b.cutoff_);
    return a.truncated(w).terms_ == b.truncated(w).terms_;
  }
  friend bool operator!=(const MultiSeries& a, const MultiSeries& b) { return !(a == b); }

 private:
  static int check_cutoff(int w) {
    if (w < 0) throw std::invalid_argument("negative weight cutoff");
    return w;
  }
  void drop_above_cutoff() {
    if (exact()) return;
    for (auto it = terms_.begin(); it != terms_.end();) it = it->first.weight() > cutoff_ ? terms_.erase(it) : std::next(it);
  }
  std::vector<std::vector<const typename Terms::value_type*>> buckets(int cutoff) const {
    int top = 0;
    for (const auto& kv : terms_) top = std::max(top, kv.first.weight());
    if (cutoff != kExact) top = std::min(top, cutoff);
    std::vector<std::vector<const typename Terms::value_type*>> out(static_cast<std::size_t>(top) + 1);
    for (const auto& kv : terms_)
      if (kv.first.weight() <= top) out[static_cast<std::size_t>(kv.first.weight())].push_back(&kv);
    return out;
  }

  Terms terms_;
  int cutoff_ = kExact;
};

template <class C>
bool is_zero(const MultiSeries<C>& s) {
  return s.is_zero();
}

using RationalSeries = MultiSeries<Rational>;

/// One `key<TAB>num/den` line per nonzero term, canonical order.
inline std::string to_canonical_text(const RationalSeries& s) {
  std::string out;
  for (const auto& [m, c] : s.terms()) out += m.key() + "\t" + to_string(c) + "\n";
  return out;
}

inline RationalSeries parse_canonical_text(const std::string& text, int cutoff = kExact) {
  RationalSeries s(cutoff);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("series line without a tab: '" + line + "'");
    const Monomial m = Monomial::parse_key(line.substr(0, tab));
    if (!is_zero(s.coefficient(m))) throw std::invalid_argument("duplicate monomial '" + line.substr(0, tab) + "'");
    const Rational c = parse_rational(line.substr(tab + 1));
    if (is_zero(c)) throw std::invalid_argument("zero coefficient stored for '" + line.substr(0, tab) + "'");
    s.add_term(m, c);
  }
  return s;
}

}  // namespace hciz

#pragma once

// Exact rational functions of a formal symbol N whose denominators are
// products of integer shifts (N + c). This is the coefficient field of the
// formal-N character expansion: every weight 1/prod(N + content) has this
// shape, and it is closed under the ring operations. Inversion is only
// defined for numerators that split into such factors.

#include <hciz/rational.hpp>

#include <climits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hciz {

/// Dense univariate polynomial in N over the rationals, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& constant) {
    if (!hciz::is_zero(constant)) c_.push_back(constant);
  }
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// N + shift
  static Polynomial linear(long shift) {
    return Polynomial(std::vector<Rational>{Rational(shift), Rational(1)});
  }
  static Polynomial monomial(int degree, const Rational& coeff = Rational(1)) {
    std::vector<Rational> c(static_cast<std::size_t>(degree) + 1);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(int k) const {
    return (k >= 0 && k <= degree()) ? c_[static_cast<std::size_t>(k)] : Rational(0);
  }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational evaluate(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (hciz::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(Polynomial a, const Rational& s) {
    if (hciz::is_zero(s)) return {};
    for (auto& x : a.c_) x *= s;
    return a;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Exact division by (N + shift); throws if -shift is not a root.
  Polynomial divide_by_linear(long shift) const {
    if (is_zero()) return {};
    const Rational root(-shift);
    std::vector<Rational> q(c_.size() - 1);
    Rational carry(0);
    for (std::size_t i = c_.size(); i-- > 0;) {
      Rational v = c_[i] + carry * root;
      if (i == 0) {
        if (!hciz::is_zero(v)) throw std::logic_error("polynomial not divisible by linear factor");
      } else {
        q[i - 1] = v;
      }
      carry = v;
    }
    return Polynomial(std::move(q));
  }

  std::string to_string(const char* var = "N") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const Rational& a = c_[static_cast<std::size_t>(k)];
      if (hciz::is_zero(a)) continue;
      if (!first) os << (sgn(a) < 0 ? " - " : " + ");
      else if (sgn(a) < 0) os << "-";
      const Rational mag = abs(a);
      if (k == 0) {
        os << mag.get_str();
      } else {
        if (mag != 1) os << mag.get_str() << "*";
        os << var;
        if (k > 1) os << "^" << k;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && hciz::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// numerator / prod_c (N + c)^{m_c}, kept reduced: no (N + c) of the
/// denominator divides the numerator. The denominator is monic, so the
/// representation is unique and equality is structural.
class FormalNRational {
 public:
  using Factors = std::map<long, int>;

  FormalNRational() = default;
  FormalNRational(const Rational& c) : num_(c) {}  // NOLINT: constants embed implicitly
  explicit FormalNRational(Polynomial num, Factors den = {}) : num_(std::move(num)), den_(std::move(den)) {
    drop_zero_multiplicities();
    reduce();
  }

  static FormalNRational N() { return FormalNRational(Polynomial::monomial(1)); }
  static FormalNRational N_power(int k) { return FormalNRational(Polynomial::monomial(k)); }
  /// 1 / prod (N + c) over the given shifts (repeats allowed).
  static FormalNRational reciprocal_of_shifts(const std::vector<long>& shifts) {
    Factors f;
    for (long c : shifts) ++f[c];
    return FormalNRational(Polynomial(Rational(1)), std::move(f));
  }

  const Polynomial& numerator() const { return num_; }
  const Factors& denominator_factors() const { return den_; }
  Polynomial denominator() const {
    Polynomial d(Rational(1));
    for (const auto& [c, m] : den_)
      for (int i = 0; i < m; ++i) d = d * Polynomial::linear(c);
    return d;
  }
  bool is_zero() const { return num_.is_zero(); }

  /// Growth exponent as N -> infinity; INT_MIN for the zero function.
  int degree() const {
    if (num_.is_zero()) return INT_MIN;
    int d = num_.degree();
    for (const auto& [c, m] : den_) d -= m;
    return d;
  }

  /// Coefficient of N^power in the large-N expansion, assuming the function
  /// grows no faster than N^power.
  Rational coefficient_at_infinity(int power) const {
    const int d = degree();
    if (d > power)
      throw std::logic_error("rational function grows faster than N^" + std::to_string(power));
    return d == power ? num_.leading() : Rational(0);
  }

  Rational evaluate(const Rational& n) const {
    Rational den(1);
    for (const auto& [c, m] : den_)
      for (int i = 0; i < m; ++i) den *= (n + c);
    if (hciz::is_zero(den)) throw std::domain_error("evaluation at a pole of a formal-N coefficient");
    return num_.evaluate(n) / den;
  }

  FormalNRational& operator+=(const FormalNRational& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    Factors lcm = den_;
    for (const auto& [c, m] : o.den_) lcm[c] = std::max(lcm[c], m);
    num_ = lift(num_, den_, lcm) + lift(o.num_, o.den_, lcm);
    den_ = std::move(lcm);
    reduce();
    return *this;
  }
  FormalNRational& operator-=(const FormalNRational& o) { return *this += -o; }
  FormalNRational& operator*=(const FormalNRational& o) {
    if (is_zero() || o.is_zero()) return *this = FormalNRational();
    num_ = num_ * o.num_;
    for (const auto& [c, m] : o.den_) den_[c] += m;
    reduce();
    return *this;
  }
  FormalNRational& operator*=(const Rational& s) {
    num_ = num_ * s;
    if (num_.is_zero()) den_.clear();
    return *this;
  }
  FormalNRational& operator/=(const Rational& s) { return *this *= hciz::inv(s); }

  friend FormalNRational operator+(FormalNRational a, const FormalNRational& b) { return a += b; }
  friend FormalNRational operator-(FormalNRational a, const FormalNRational& b) { return a -= b; }
  friend FormalNRational operator*(FormalNRational a, const FormalNRational& b) { return a *= b; }
  friend FormalNRational operator*(FormalNRational a, const Rational& s) { return a *= s; }
  friend FormalNRational operator*(const Rational& s, FormalNRational a) { return a *= s; }
  friend FormalNRational operator/(FormalNRational a, const Rational& s) { return a /= s; }
  friend FormalNRational operator/(const FormalNRational& a, const FormalNRational& b) { return a * b.inverse(); }
  friend FormalNRational operator-(FormalNRational a) {
    a.num_ = -a.num_;
    return a;
  }
  friend bool operator==(const FormalNRational& a, const FormalNRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Defined when the numerator splits over integer shifts (N + c).
  FormalNRational inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero formal-N rational");
    Polynomial rest = num_;
    Factors roots;
    // Integer roots of content products lie well inside this range.
    constexpr long kSearch = 256;
    for (long c = -kSearch; c <= kSearch && rest.degree() > 0; ++c) {
      while (rest.degree() > 0 && hciz::is_zero(rest.evaluate(Rational(-c)))) {
        rest = rest.divide_by_linear(c);
        ++roots[c];
      }
    }
    if (rest.degree() > 0)
      throw std::domain_error("formal-N numerator does not split into (N + c) factors: " + to_string());
    Polynomial new_num = denominator() * hciz::inv(rest.leading());
    return FormalNRational(std::move(new_num), std::move(roots));
  }

  std::string to_string() const {
    if (den_.empty()) return num_.to_string();
    std::string d;
    for (const auto& [c, m] : den_) {
      std::string f = c == 0 ? "N" : "(N" + std::string(c > 0 ? "+" : "-") + std::to_string(c > 0 ? c : -c) + ")";
      if (m > 1) f += "^" + std::to_string(m);
      d += (d.empty() ? "" : "*") + f;
    }
    return "(" + num_.to_string() + ")/(" + d + ")";
  }

 private:
  static Polynomial lift(const Polynomial& num, const Factors& have, const Factors& want) {
    Polynomial out = num;
    for (const auto& [c, m] : want) {
      auto it = have.find(c);
      const int missing = m - (it == have.end() ? 0 : it->second);
      for (int i = 0; i < missing; ++i) out = out * Polynomial::linear(c);
    }
    return out;
  }
  void drop_zero_multiplicities() {
    for (auto it = den_.begin(); it != den_.end();) it = it->second <= 0 ? den_.erase(it) : std::next(it);
  }
  void reduce() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0 && num_.degree() > 0 && hciz::is_zero(num_.evaluate(Rational(-it->first)))) {
        num_ = num_.divide_by_linear(it->first);
        --it->second;
      }
      it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
  }

  Polynomial num_;
  Factors den_;
};

inline bool is_zero(const FormalNRational& x) { return x.is_zero(); }
inline FormalNRational inv(const FormalNRational& x) { return x.inverse(); }

}  // namespace hciz

#pragma once

// Monomials in two indexed variable groups x_1, x_2, ... and y_1, y_2, ...
// (the moments theta_q / theta~_q, or the times t_q / t~_q). The grading
// gives x_q and y_q weight q.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hciz {

class Monomial {
 public:
  using Exponents = std::vector<std::uint16_t>;

  Monomial() = default;
  Monomial(Exponents first, Exponents second) : g_{std::move(first), std::move(second)} {
    trim(g_[0]);
    trim(g_[1]);
    recompute();
  }

  /// group 0 is theta / t, group 1 is theta~ / t~; q >= 1
  static Monomial variable(int group, int q, int power = 1) {
    if (q < 1) throw std::invalid_argument("variable index must be >= 1");
    Monomial m;
    auto& g = m.g_[check_group(group)];
    g.assign(static_cast<std::size_t>(q), 0);
    g.back() = static_cast<std::uint16_t>(power);
    m.recompute();
    return m;
  }

  const Exponents& group(int g) const { return g_[check_group(g)]; }
  int exponent(int group, int q) const {
    const auto& e = g_[check_group(group)];
    return (q >= 1 && static_cast<std::size_t>(q) <= e.size()) ? e[static_cast<std::size_t>(q) - 1] : 0;
  }
  int weight() const { return weight_; }
  int group_weight(int g) const { return group_weight_[check_group(g)]; }
  int degree() const { return degree_[0] + degree_[1]; }
  int group_degree(int g) const { return degree_[check_group(g)]; }
  bool is_constant() const { return g_[0].empty() && g_[1].empty(); }

  /// Same exponent in the other group.
  Monomial swapped() const { return Monomial(g_[1], g_[0]); }

  /// Lowers the exponent of one variable by one; requires it to be positive.
  Monomial lowered(int group, int q) const {
    Monomial m = *this;
    auto& e = m.g_[check_group(group)];
    if (exponent(group, q) == 0) throw std::logic_error("lowering an absent variable");
    --e[static_cast<std::size_t>(q) - 1];
    trim(e);
    m.recompute();
    return m;
  }
  Monomial raised(int group, int q, int by = 1) const {
    Monomial m = *this;
    auto& e = m.g_[check_group(group)];
    if (e.size() < static_cast<std::size_t>(q)) e.resize(static_cast<std::size_t>(q), 0);
    e[static_cast<std::size_t>(q) - 1] = static_cast<std::uint16_t>(e[static_cast<std::size_t>(q) - 1] + by);
    m.recompute();
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int g = 0; g < 2; ++g) {
      const auto& x = a.g_[g];
      const auto& y = b.g_[g];
      auto& z = m.g_[g];
      z.assign(std::max(x.size(), y.size()), 0);
      for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i];
      for (std::size_t i = 0; i < y.size(); ++i) z[i] = static_cast<std::uint16_t>(z[i] + y[i]);
    }
    m.weight_ = a.weight_ + b.weight_;
    for (int g = 0; g < 2; ++g) {
      m.group_weight_[g] = a.group_weight_[g] + b.group_weight_[g];
      m.degree_[g] = a.degree_[g] + b.degree_[g];
    }
    return m;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.g_[0] == b.g_[0] && a.g_[1] == b.g_[1]; }

  /// `t:<q>^<e>` factors then `tt:<q>^<e>` factors, ascending q, joined by
  /// `*`; the constant monomial is `1`.
  std::string key() const {
    std::string out;
    static const char* prefix[2] = {"t:", "tt:"};
    for (int g = 0; g < 2; ++g) {
      for (std::size_t i = 0; i < g_[g].size(); ++i) {
        if (g_[g][i] == 0) continue;
        if (!out.empty()) out += '*';
        out += prefix[g] + std::to_string(i + 1) + "^" + std::to_string(g_[g][i]);
      }
    }
    return out.empty() ? "1" : out;
  }

  static Monomial parse_key(const std::string& key) {
    if (key == "1") return {};
    Exponents e[2];
    std::size_t pos = 0;
    int last_group = 0;
    int last_q = 0;
    while (pos <= key.size()) {
      std::size_t end = key.find('*', pos);
      if (end == std::string::npos) end = key.size();
      const std::string factor = key.substr(pos, end - pos);
      int group;
      std::size_t body;
      if (factor.rfind("tt:", 0) == 0) {
        group = 1;
        body = 3;
      } else if (factor.rfind("t:", 0) == 0) {
        group = 0;
        body = 2;
      } else {
        throw std::invalid_argument("bad monomial factor '" + factor + "'");
      }
      const auto caret = factor.find('^', body);
      if (caret == std::string::npos) throw std::invalid_argument("bad monomial factor '" + factor + "'");
      const int q = parse_positive(factor.substr(body, caret - body));
      const int p = parse_positive(factor.substr(caret + 1));
      if (group < last_group || (group == last_group && q <= last_q))
        throw std::invalid_argument("monomial key not in canonical order: '" + key + "'");
      last_group = group;
      last_q = q;
      e[group].resize(static_cast<std::size_t>(q), 0);
      e[group][static_cast<std::size_t>(q) - 1] = static_cast<std::uint16_t>(p);
      pos = end + 1;
    }
    return Monomial(std::move(e[0]), std::move(e[1]));
  }

 private:
  static int check_group(int g) {
    if (g != 0 && g != 1) throw std::invalid_argument("variable group must be 0 or 1");
    return g;
  }
  static void trim(Exponents& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
  }
  static int parse_positive(const std::string& s) {
    if (s.empty() || s.size() > 5 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw std::invalid_argument("bad integer '" + s + "' in monomial key");
    const int v = std::stoi(s);
    if (v <= 0) throw std::invalid_argument("non-positive integer in monomial key");
    return v;
  }
  void recompute() {
    weight_ = 0;
    for (int g = 0; g < 2; ++g) {
      group_weight_[g] = 0;
      degree_[g] = 0;
      for (std::size_t i = 0; i < g_[g].size(); ++i) {
        group_weight_[g] += static_cast<int>(i + 1) * g_[g][i];
        degree_[g] += g_[g][i];
      }
      weight_ += group_weight_[g];
    }
  }

  Exponents g_[2];
  int weight_ = 0;
  int group_weight_[2] = {0, 0};
  int degree_[2] = {0, 0};
};

/// Lex monomial order on the dense exponent vector (x_1, x_2, ..., y_1,
/// y_2, ...), largest first: x_1 > x_2 > ... > y_1 > y_2 > ...
struct CanonicalOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    for (int g = 0; g < 2; ++g) {
      const auto& x = a.group(g);
      const auto& y = b.group(g);
      const std::size_t n = std::max(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int ex = i < x.size() ? x[i] : 0;
        const int ey = i < y.size() ? y[i] : 0;
        if (ex != ey) return ex > ey;
      }
    }
    return false;
  }
};

}  // namespace hciz

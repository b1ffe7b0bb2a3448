#pragma once

// Partitions, contents and hooks, and Schur functions in power-sum
// variables (Jacobi-Trudi over complete homogeneous functions).

#include <hciz/formal_n.hpp>
#include <hciz/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hciz {

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
      size_ += parts_[i];
    }
  }

  const std::vector<int>& parts() const { return parts_; }
  int size() const { return size_; }
  int rows() const { return static_cast<int>(parts_.size()); }
  int part(int i) const { return i < rows() ? parts_[static_cast<std::size_t>(i)] : 0; }
  Partition conjugate() const {
    std::vector<int> c;
    for (int j = 0; j < part(0); ++j) {
      int len = 0;
      while (len < rows() && parts_[static_cast<std::size_t>(len)] > j) ++len;
      c.push_back(len);
    }
    return Partition(std::move(c));
  }

  /// Contents j - i of all cells, row by row (0-based i, j).
  std::vector<long> contents() const {
    std::vector<long> c;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < parts_[static_cast<std::size_t>(i)]; ++j) c.push_back(j - i);
    return c;
  }
  Integer hook_product() const {
    const Partition t = conjugate();
    Integer h = 1;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < parts_[static_cast<std::size_t>(i)]; ++j)
        h *= (parts_[static_cast<std::size_t>(i)] - j) + (t.part(j) - i) - 1;
    return h;
  }
  /// lambda_i + N - i for i = 1..N; needs N >= rows.
  std::vector<long> shifted_weights(int n) const {
    if (n < rows()) throw std::invalid_argument("more rows than N");
    std::vector<long> h;
    for (int i = 1; i <= n; ++i) h.push_back(part(i - 1) + n - i);
    return h;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
    return s + ")";
  }
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }

 private:
  std::vector<int> parts_;
  int size_ = 0;
};

/// All partitions of n, in reverse-lexicographic order: (n), (n-1,1), ...
inline std::vector<Partition> enumerate_partitions(int n, std::optional<int> max_rows = std::nullopt) {
  if (n < 0) throw std::invalid_argument("negative partition size");
  std::vector<Partition> out;
  std::vector<int> cur;
  const int rows = max_rows.value_or(n);
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == rows) return;
    for (int p = std::min(remaining, cap); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// prod over cells of (N + content), a polynomial in the formal N.
inline FormalNRational content_product(const Partition& lambda) {
  Polynomial p(Rational(1));
  for (long c : lambda.contents()) p = p * Polynomial::linear(c);
  return FormalNRational(std::move(p));
}

/// The same product at a numeric N.
inline Integer content_product_at(const Partition& lambda, long n) {
  Integer p = 1;
  for (long c : lambda.contents()) p *= n + c;
  return p;
}

/// h_0..h_kmax from power sums p[1..] (p[0] unused) via k h_k = sum p_i h_{k-i}.
template <class S>
std::vector<S> complete_homogeneous_all(int kmax, const std::vector<S>& p, const S& one) {
  std::vector<S> h{one};
  for (int k = 1; k <= kmax; ++k) {
    S acc = one * Rational(0);
    for (int i = 1; i <= k; ++i) {
      if (static_cast<std::size_t>(i) >= p.size()) break;
      acc += p[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(k - i)];
    }
    h.push_back(acc * make_rational(1, k));
  }
  return h;
}

template <class S>
S complete_homogeneous(int k, const std::vector<S>& p, const S& one) {
  return complete_homogeneous_all(k, p, one).back();
}

/// Determinant by expansion over column subsets (no divisions), skipping
/// zero entries; cost n 2^n ring operations.
template <class S>
S subset_determinant(const std::vector<std::vector<S>>& a, const S& one, const std::vector<std::vector<bool>>& nonzero) {
  const std::size_t n = a.size();
  if (n == 0) return one;
  if (n > 24) throw std::invalid_argument("matrix too large for subset expansion");
  const std::size_t full = (std::size_t{1} << n);
  std::vector<std::optional<S>> dp(full);
  dp[0] = one;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!dp[mask]) continue;
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (std::size_t{1} << c) || !nonzero[row][c]) continue;
      // sign of inserting column c after the columns already used
      const int above = __builtin_popcountll(mask >> (c + 1));
      S term = *dp[mask] * a[row][c];
      if (above % 2) term = -term;
      auto& slot = dp[mask | (std::size_t{1} << c)];
      if (slot) *slot += term;
      else slot = std::move(term);
    }
  }
  return dp[full - 1] ? *dp[full - 1] : one * Rational(0);
}

/// Jacobi-Trudi matrix entries h_{lambda_i - i + j} given h_0..h_|lambda|.
template <class S>
S schur_from_complete(const Partition& lambda, const std::vector<S>& h, const S& one) {
  const int n = lambda.rows();
  std::vector<std::vector<S>> a(static_cast<std::size_t>(n));
  std::vector<std::vector<bool>> nz(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int k = lambda.part(i) - i + j;
      const bool present = k >= 0 && static_cast<std::size_t>(k) < h.size();
      if (k >= 0 && !present) throw std::invalid_argument("complete homogeneous functions missing for Jacobi-Trudi");
      a[static_cast<std::size_t>(i)].push_back(present ? h[static_cast<std::size_t>(k)] : one * Rational(0));
      nz[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = present;
    }
  return subset_determinant(a, one, nz);
}

template <class S>
S schur_from_power_sums(const Partition& lambda, const std::vector<S>& p, const S& one) {
  return schur_from_complete(lambda, complete_homogeneous_all(lambda.size(), p, one), one);
}

/// Power sums sum_i x_i^q for q = 0..qmax.
inline std::vector<Rational> power_sums(const std::vector<Rational>& xs, int qmax) {
  std::vector<Rational> p(static_cast<std::size_t>(qmax) + 1, Rational(0));
  for (const auto& x : xs) {
    Rational pw(1);
    for (int q = 0; q <= qmax; ++q) {
      p[static_cast<std::size_t>(q)] += pw;
      pw *= x;
    }
  }
  return p;
}

}  // namespace hciz

#pragma once

// Dense matrices of truncated series with zero-skipping products.

#include <hciz/multi_series.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

namespace hciz {

class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(int rows, int cols, int cutoff)
      : rows_(rows), cols_(cols), cutoff_(cutoff), a_(static_cast<std::size_t>(rows * cols), RationalSeries(cutoff)) {}

  static SeriesMatrix identity(int n, int cutoff) {
    SeriesMatrix m(n, n, cutoff);
    for (int i = 0; i < n; ++i) m(i, i) = RationalSeries(Rational(1), cutoff);
    return m;
  }
  /// Z_{ij} = delta_{i, j+1}
  static SeriesMatrix shift(int n, int cutoff) {
    SeriesMatrix m(n, n, cutoff);
    for (int j = 0; j + 1 < n; ++j) m(j + 1, j) = RationalSeries(Rational(1), cutoff);
    return m;
  }
  static SeriesMatrix diagonal(const std::vector<RationalSeries>& d) {
    const int n = static_cast<int>(d.size());
    int w = kExact;
    for (const auto& x : d) w = std::min(w, x.cutoff());
    SeriesMatrix m(n, n, w);
    for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)].truncated(w);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cutoff() const { return cutoff_; }
  RationalSeries& operator()(int i, int j) { return a_[index(i, j)]; }
  const RationalSeries& operator()(int i, int j) const { return a_[index(i, j)]; }

  SeriesMatrix block(int rows, int cols) const {
    if (rows > rows_ || cols > cols_) throw std::out_of_range("block larger than matrix");
    SeriesMatrix b(rows, cols, cutoff_);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) b(i, j) = (*this)(i, j);
    return b;
  }
  SeriesMatrix transposed() const {
    SeriesMatrix t(cols_, rows_, cutoff_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  SeriesMatrix map(const std::function<RationalSeries(const RationalSeries&)>& f) const {
    SeriesMatrix out(rows_, cols_, cutoff_);
    int w = kExact;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      out.a_[k] = f(a_[k]);
      w = std::min(w, out.a_[k].cutoff());
    }
    out.cutoff_ = w;
    return out;
  }
  SeriesMatrix truncated(int cutoff) const {
    return map([cutoff](const RationalSeries& s) { return s.truncated(cutoff); }).with_cutoff(cutoff);
  }
  SeriesMatrix derivative(int group, int q) const {
    return map([group, q](const RationalSeries& s) { return s.derivative(group, q); });
  }

  /// Strictly lower part plus half the diagonal.
  SeriesMatrix lower_half() const { return split(true); }
  /// Strictly upper part plus half the diagonal.
  SeriesMatrix upper_half() const { return split(false); }

  bool is_zero() const {
    for (const auto& s : a_)
      if (!s.is_zero()) return false;
    return true;
  }

  SeriesMatrix& operator+=(const SeriesMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    cutoff_ = std::min(cutoff_, o.cutoff_);
    return *this;
  }
  SeriesMatrix& operator-=(const SeriesMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    cutoff_ = std::min(cutoff_, o.cutoff_);
    return *this;
  }
  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) { return a += b; }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) { return a -= b; }
  friend SeriesMatrix operator*(SeriesMatrix a, const Rational& s) {
    for (auto& x : a.a_) x *= s;
    return a;
  }
  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimensions do not match");
    SeriesMatrix out(a.rows_, b.cols_, std::min(a.cutoff_, b.cutoff_));
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const auto& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const auto& y = b(k, j);
          if (!y.is_zero()) out(i, j) += x * y;
        }
      }
    return out;
  }
  friend SeriesMatrix commutator(const SeriesMatrix& a, const SeriesMatrix& b) { return a * b - b * a; }

  SeriesMatrix power(int q) const {
    if (q < 0) throw std::invalid_argument("negative matrix power");
    SeriesMatrix r = identity(rows_, cutoff_);
    for (int k = 0; k < q; ++k) r = r * (*this);
    return r;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    return static_cast<std::size_t>(i * cols_ + j);
  }
  void check_same(const SeriesMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimensions do not match");
  }
  SeriesMatrix with_cutoff(int w) const {
    SeriesMatrix m = *this;
    m.cutoff_ = std::min(cutoff_, w);
    return m;
  }
  SeriesMatrix split(bool lower) const {
    SeriesMatrix out(rows_, cols_, cutoff_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        if (i == j) out(i, j) = (*this)(i, j) * make_rational(1, 2);
        else if ((i > j) == lower) out(i, j) = (*this)(i, j);
      }
    return out;
  }

  int rows_ = 0;
  int cols_ = 0;
  int cutoff_ = kExact;
  std::vector<RationalSeries> a_;
};

}  // namespace hciz

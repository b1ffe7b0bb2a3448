#pragma once

// Finite-N evaluators of the spherical integral
//   I_N(A, B) = \int dU exp(N tr A U B U^+)
// by the eigenvalue determinant formula, by the normalized character sum
// (numeric or formal N) and by Monte Carlo over Haar unitaries.

#include <hciz/formal_n.hpp>
#include <hciz/multi_series.hpp>
#include <hciz/parallel.hpp>
#include <hciz/rational.hpp>
#include <hciz/symfun.hpp>

#include <Eigen/Dense>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace hciz {

using Real = boost::multiprecision::mpfr_float;

/// Sets the default working precision (decimal digits) for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
    if (digits < 10) throw std::invalid_argument("precision must be at least 10 digits");
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

struct SpectrumPair {
  std::vector<Rational> a;
  std::vector<Rational> b;

  int n() const { return static_cast<int>(a.size()); }
  void validate() const {
    if (a.empty()) throw std::invalid_argument("spectra must have at least one eigenvalue");
    if (a.size() != b.size()) throw std::invalid_argument("spectra must have equal lengths");
  }
};

/// Moments and times: theta_q = tr A^q / N and t_q = N^{q/2+1} theta_q / q.
struct ScalingConvention {
  static std::vector<Rational> moments(const std::vector<Rational>& spectrum, int qmax) {
    auto p = power_sums(spectrum, qmax);
    const Rational n(static_cast<long>(spectrum.size()));
    for (auto& x : p) x /= n;
    return p;
  }
  /// Exponent of N in t_q / theta_q (times q).
  static Rational time_power(int q) { return make_rational(q + 2, 2); }
};

class DegenerateSpectrum : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// C_N det(exp(N a_i b_j)) / (Delta(a) Delta(b)) with
/// C_N = prod_{p<N} p! * N^{-N(N-1)/2}.
inline Real hciz_determinant(const SpectrumPair& s, unsigned digits = 50) {
  s.validate();
  PrecisionScope scope(digits);
  const int n = s.n();
  for (const auto* v : {&s.a, &s.b})
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((*v)[i] == (*v)[j]) throw DegenerateSpectrum("repeated eigenvalue; perturb the spectrum");

  const Real nn(n);
  std::vector<std::vector<Real>> m(static_cast<std::size_t>(n), std::vector<Real>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = exp(nn * to_real(s.a[i] * s.b[j]));

  Real det(1);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return Real(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      const Real f = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }

  Rational vand(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) vand *= (s.a[j] - s.a[i]) * (s.b[j] - s.b[i]);
  Integer cn = 1;
  for (int p = 1; p < n; ++p) cn *= factorial(static_cast<unsigned long>(p));
  Real result = det * to_real(Rational(cn) / vand);
  return result / pow(nn, Real(n * (n - 1)) / 2);
}

/// Exact partial sum over |lambda| <= cutoff, rows <= N of
/// N^{|lambda|} s_lambda(a) s_lambda(b) / prod_cells (N + content).
inline Rational hciz_character_sum_exact(const SpectrumPair& s, int cutoff) {
  s.validate();
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  const int n = s.n();
  const auto pa = power_sums(s.a, cutoff);
  const auto pb = power_sums(s.b, cutoff);
  const auto ha = complete_homogeneous_all(cutoff, pa, Rational(1));
  const auto hb = complete_homogeneous_all(cutoff, pb, Rational(1));
  Rational total(0);
  Integer npow = 1;
  for (int size = 0; size <= cutoff; ++size) {
    for (const auto& lambda : enumerate_partitions(size, n)) {
      const Rational sa = schur_from_complete(lambda, ha, Rational(1));
      if (is_zero(sa)) continue;
      const Rational sb = schur_from_complete(lambda, hb, Rational(1));
      total += Rational(npow) * sa * sb / Rational(content_product_at(lambda, n));
    }
    npow *= n;
  }
  return total;
}

inline Real hciz_character_sum(const SpectrumPair& s, int cutoff, unsigned digits = 50) {
  PrecisionScope scope(digits);
  return to_real(hciz_character_sum_exact(s, cutoff));
}

using FormalSeries = MultiSeries<FormalNRational>;

/// I_N as a series in the moments theta_q (group 0) and theta~_q (group 1)
/// up to total weight `weight`, with exact rational functions of N as
/// coefficients. Power sums are N theta_q.
inline FormalSeries hciz_character_sum_formal(int weight, int jobs = 1) {
  if (weight < 0) throw std::invalid_argument("negative weight");
  const int top = weight / 2;
  const RationalSeries one(Rational(1), top);
  std::vector<RationalSeries> p{RationalSeries(top)};
  for (int q = 1; q <= top; ++q) p.push_back(RationalSeries::variable(0, q, top));
  const auto h = complete_homogeneous_all(top, p, one);

  std::vector<Partition> all;
  for (int size = 0; size <= top; ++size)
    for (auto& lambda : enumerate_partitions(size)) all.push_back(std::move(lambda));

  auto contribution = [&](const Partition& lambda) {
    const RationalSeries s = schur_from_complete(lambda, h, one);
    // Collect the polynomial in N for each monomial before dividing once.
    std::map<Monomial, Polynomial, CanonicalOrder> acc;
    for (const auto& [ma, ca] : s.terms())
      for (const auto& [mb, cb] : s.terms()) {
        const Monomial m = ma * mb.swapped();
        acc[m] += Polynomial::monomial(lambda.size() + ma.degree() + mb.degree(), ca * cb);
      }
    FormalSeries out(weight);
    const std::vector<long> shifts = lambda.contents();
    for (auto& [m, poly] : acc) {
      FormalNRational::Factors f;
      for (long c : shifts) ++f[c];
      out.add_term(m, FormalNRational(std::move(poly), std::move(f)));
    }
    return out;
  };

  std::vector<FormalSeries> parts(all.size());
  parallel_for(static_cast<long>(all.size()), jobs, [&](long i) { parts[i] = contribution(all[i]); });
  FormalSeries total(weight);
  for (const auto& part : parts) total += part;
  return total;
}

using ComplexMatrix = Eigen::MatrixXcd;

/// Haar unitary: QR of a complex Gaussian matrix, with the phases of R's
/// diagonal moved into Q so the factorization is unique.
template <class Rng>
ComplexMatrix haar_sample(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
  std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
  ComplexMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = {gauss(rng), gauss(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double m = std::abs(d);
    q.col(j) *= (m == 0.0 ? std::complex<double>(1.0) : d / m);
  }
  return q;
}

/// Independent stream for chunk k of a run with the given seed.
inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

struct MonteCarloResult {
  double estimate = 0;
  double stderr_ = 0;
  long samples = 0;
};

/// Running mean and squared deviations, merged with Chan's formula.
struct Moments {
  long n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

inline constexpr long kMonteCarloChunk = 1024;

/// Mean of exp(N tr A U B U^+) over Haar U. The exponent is evaluated as
/// N^2 mean(a) mean(b) + N sum (a_i - mean a)(b_j - mean b) |U_ij|^2,
/// which is the same number since |U_ij|^2 is doubly stochastic.
inline MonteCarloResult hciz_monte_carlo(const SpectrumPair& s, long samples, std::uint64_t seed, int jobs = 1) {
  s.validate();
  if (samples < 2) throw std::invalid_argument("at least two samples are required");
  const int n = s.n();
  std::vector<double> a, b;
  Rational abar(0), bbar(0);
  for (int i = 0; i < n; ++i) {
    abar += s.a[i];
    bbar += s.b[i];
  }
  abar /= n;
  bbar /= n;
  for (int i = 0; i < n; ++i) {
    a.push_back(Rational(s.a[i] - abar).get_d());
    b.push_back(Rational(s.b[i] - bbar).get_d());
  }
  const double base = Rational(Rational(n * n) * abar * bbar).get_d();
  const double nd = n;

  const long chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<Moments> partial(static_cast<std::size_t>(chunks));
  auto run_chunk = [&](long k) {
    auto rng = chunk_rng(seed, static_cast<std::uint64_t>(k));
    const long count = std::min(kMonteCarloChunk, samples - k * kMonteCarloChunk);
    Moments m;
    for (long i = 0; i < count; ++i) {
      const ComplexMatrix u = haar_sample(n, rng);
      double e = 0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) e += a[r] * b[c] * std::norm(u(r, c));
      m.add(std::exp(base + nd * e));
    }
    partial[static_cast<std::size_t>(k)] = m;
  };
  parallel_for(chunks, jobs, run_chunk);
  Moments total;
  for (const auto& m : partial) total.merge(m);
  MonteCarloResult res;
  res.samples = samples;
  res.estimate = total.mean;
  res.stderr_ = std::sqrt(total.m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return res;
}

/// (estimate - reference) / stderr; a zero stderr gives 0 when the estimate
/// matches the reference to 1e-12 relative, and infinity otherwise.
inline double z_score(double estimate, double stderr_, double reference) {
  const double diff = estimate - reference;
  if (stderr_ == 0.0) {
    return std::abs(diff) <= 1e-12 * std::abs(reference) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return diff / stderr_;
}

}  // namespace hciz

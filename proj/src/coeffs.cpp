#include "lvlab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lvlab/primes.hpp"
#include "lvlab/primezeta.hpp"
#include "lvlab/simd.hpp"

namespace lvlab {

namespace {

constexpr std::uint64_t kTableLimitCap = 10'000'000;
constexpr std::uint64_t kNMaxCap = 20'000'000;
constexpr double kEvalXCap = 1e8;

bool contains(const std::vector<std::uint32_t>& sorted, std::uint64_t p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

// Largest r with r^k <= n (n <= 1e18), found from a float seed and corrected.
std::uint64_t iroot(std::uint64_t n, std::uint32_t k) {
  const auto ipow_le = [](std::uint64_t r, std::uint32_t k, std::uint64_t n) {
    std::uint64_t v = 1;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (r != 0 && v > n / r) return false;
      v *= r;
    }
    return v <= n;
  };
  std::uint64_t r = static_cast<std::uint64_t>(
      std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k)));
  while (ipow_le(r + 1, k, n)) ++r;
  while (r > 1 && !ipow_le(r, k, n)) --r;
  return r;
}

}  // namespace

GrowthCertificate::GrowthCertificate(double A0, double eps0, double Ath, double theta)
    : a_bound_const(A0), a_bound_exp(eps0), b_bound_const(Ath), b_bound_exp(theta) {
  if (!(A0 > 0.0) || !std::isfinite(A0))
    throw std::invalid_argument("growth: coefficient constant must be positive");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0))
    throw std::invalid_argument("growth: coefficient exponent must be >= 0");
  if (!(Ath > 0.0) || !std::isfinite(Ath))
    throw std::invalid_argument("growth: prime-power constant must be positive");
  if (!(theta >= 0.0) || !(theta < 0.5))
    throw std::invalid_argument("growth: prime-power exponent must lie in [0, 1/2)");
}

CoefficientSource::CoefficientSource(std::map<PrimePowerKey, cplx> table,
                                     std::uint64_t table_limit, ClosedForm extension,
                                     GrowthCertificate growth)
    : table_(std::move(table)),
      table_limit_(table_limit),
      extension_(std::move(extension)),
      growth_(growth) {
  if (table_limit_ < 2 || table_limit_ > kTableLimitCap)
    throw std::invalid_argument("source: table limit outside [2, 1e7]");
  for (const auto& [key, val] : table_) {
    const auto& [p, k] = key;
    if (k < 1 || p < 2 || !is_prime_u64(p))
      throw std::invalid_argument("source: table key is not a prime power");
    const double cap = growth_.b_bound_const *
                       std::pow(static_cast<double>(p),
                                k * growth_.b_bound_exp) * (1.0 + 1e-9) + 1e-300;
    if (!(std::abs(val) <= cap))
      throw std::invalid_argument("source: table value violates the growth bound");
  }
  // every prime power <= table_limit must be materialized
  for (std::uint32_t p : prime_sieve(table_limit_)) {
    std::uint64_t pk = p;
    for (std::uint32_t k = 1; pk <= table_limit_; ++k) {
      if (table_.find({p, k}) == table_.end())
        throw std::invalid_argument("source: table is missing a prime power below the limit");
      if (pk > table_limit_ / p) break;
      pk *= p;
    }
  }
}

cplx CoefficientSource::b(std::uint64_t p, std::uint32_t k) const {
  const auto it = table_.find({p, k});
  if (it != table_.end()) return it->second;
  if (extension_) return extension_(p, k);
  return cplx(0.0);
}

bool CoefficientSource::tabulated(std::uint64_t p, std::uint32_t k) const {
  return table_.find({p, k}) != table_.end();
}

DirichletCoefficients b_to_a(const CoefficientSource& src, std::uint64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("b_to_a: empty range");
  if (n_max > src.table_limit())
    throw std::out_of_range("b_to_a: range exceeds the tabulated coefficients");
  if (n_max > kNMaxCap) throw std::invalid_argument("b_to_a: range above supported size");

  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= n_max; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }

  DirichletCoefficients out{std::vector<cplx>(n_max + 1, cplx(0.0)), src.growth()};
  out.a[1] = cplx(1.0);
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    if (spf[n] == n) {
      // prime: exponentiate the local log-series onto its powers
      std::vector<cplx> c{cplx(1.0)};
      std::uint64_t pk = n;
      for (std::uint32_t k = 1; pk <= n_max; ++k) {
        cplx acc(0.0);
        for (std::uint32_t j = 1; j <= k; ++j)
          acc += static_cast<double>(j) * src.b(n, j) * c[k - j];
        c.push_back(acc / static_cast<double>(k));
        out.a[pk] = c[k];
        if (pk > n_max / n) break;
        pk *= n;
      }
    } else {
      const std::uint32_t p = spf[n];
      std::uint64_t q = 1, m = n;
      while (m % p == 0) {
        m /= p;
        q *= p;
      }
      out.a[n] = out.a[q] * out.a[m];
    }
  }
  return out;
}

std::map<PrimePowerKey, cplx> a_to_b(const DirichletCoefficients& coeffs) {
  const std::uint64_t N = coeffs.n_max();
  std::map<PrimePowerKey, cplx> out;
  for (std::uint64_t p = 2; p <= N; ++p) {
    if (!is_prime_u64(p)) continue;
    std::vector<cplx> c{cplx(1.0)}, b{cplx(0.0)};
    std::uint64_t pk = p;
    for (std::uint32_t k = 1; pk <= N; ++k) {
      c.push_back(coeffs.a[pk]);
      cplx acc = static_cast<double>(k) * c[k];
      for (std::uint32_t j = 1; j < k; ++j)
        acc -= static_cast<double>(j) * b[j] * c[k - j];
      b.push_back(acc / static_cast<double>(k));
      out[{p, k}] = b[k];
      if (pk > N / p) break;
      pk *= p;
    }
  }
  return out;
}

CoefficientSource log_derivative_source(const CoefficientSource& src, int m) {
  if (m < 0) throw std::invalid_argument("log derivative: order must be >= 0");
  if (m == 0) return src;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;

  std::map<PrimePowerKey, cplx> table;
  for (const auto& [key, val] : src.table()) {
    const double w =
        std::pow(key.second * std::log(static_cast<double>(key.first)), m);
    table[key] = sign * w * val;
  }
  ClosedForm ext;
  if (!src.zero_beyond_table()) {
    ext = [inner = src.extension(), m, sign](std::uint64_t p, std::uint32_t k) {
      const double w = std::pow(k * std::log(static_cast<double>(p)), m);
      return sign * w * inner(p, k);
    };
  }
  // (k log p)^m <= C p^{k (theta1 - theta)} with the supremum folded into the
  // constant, keeping the new exponent strictly below 1/2.
  const GrowthCertificate& g = src.growth();
  const double theta1 = (g.b_bound_exp + 0.5) / 2.0;
  const double d = theta1 - g.b_bound_exp;
  const double xstar = std::max(std::log(2.0), m / d);
  const double C = std::pow(xstar, m) * std::exp(-d * xstar) * (1.0 + 1e-9);
  const GrowthCertificate g2(g.a_bound_const * C, g.a_bound_exp + d,
                             g.b_bound_const * C, theta1);
  return CoefficientSource(std::move(table), src.table_limit(), std::move(ext), g2);
}

namespace {

// Accumulates coefficient * pk^{-s} terms through the vector backend in
// chunks, tracking the absolute row and Kahan-compensating across chunks.
class SeriesAccum {
 public:
  SeriesAccum(double sigma, double t) : sigma_(sigma), t_(t) {
    logn_.reserve(kFlush);
    cre_.reserve(kFlush);
    cim_.reserve(kFlush);
  }

  void add(double log_pk, cplx coeff) {
    logn_.push_back(log_pk);
    cre_.push_back(coeff.real());
    cim_.push_back(coeff.imag());
    if (logn_.size() >= kFlush) flush();
  }

  void flush() {
    if (logn_.empty()) return;
    const simd::BlockSum bs = simd::dirichlet_block(
        cre_.data(), cim_.data(), logn_.data(), logn_.size(), sigma_, t_);
    kahan(re_, cre_carry_, bs.re);
    kahan(im_, cim_carry_, bs.im);
    kahan(abs_, cabs_carry_, bs.abs);
    if (!logn_.empty()) max_log_ = std::max(max_log_, *std::max_element(logn_.begin(), logn_.end()));
    count_ += static_cast<double>(logn_.size());
    logn_.clear();
    cre_.clear();
    cim_.clear();
  }

  Cert result() {
    flush();
    const double rel = kEps * (4.0 + 2.0 * std::abs(sigma_) * max_log_) +
                       std::abs(t_) * max_log_ * kEps;
    const double slop = abs_ * rel + sum_slop(abs_, count_);
    return {cplx(re_, im_), slop};
  }

 private:
  static constexpr std::size_t kFlush = 1u << 20;

  static void kahan(double& sum, double& carry, double add) {
    const double y = add - carry, s0 = sum + y;
    carry = (s0 - sum) - y;
    sum = s0;
  }

  double sigma_, t_;
  std::vector<double> logn_, cre_, cim_;
  double re_ = 0, im_ = 0, abs_ = 0;
  double cre_carry_ = 0, cim_carry_ = 0, cabs_carry_ = 0;
  double max_log_ = 0, count_ = 0;
};

// Integral-comparison bound on the dropped region p^k > X of
// sum |b(p^k)| p^{-k sigma}, from whichever growth route converges.
double log_series_tail(const GrowthCertificate& g, double sigma, double X) {
  double k1 = std::numeric_limits<double>::infinity();
  const double ua = sigma - 1.0 - g.a_bound_exp;  // a-route (b(p) = a(p))
  if (ua > 0.0)
    k1 = std::min(k1, g.a_bound_const * std::pow(X, -ua) / ua);
  const double ub = sigma - 1.0 - g.b_bound_exp;  // prime-power route
  if (ub > 0.0)
    k1 = std::min(k1, g.b_bound_const * std::pow(X, -ub) / ub);
  if (!std::isfinite(k1)) return k1;

  double rest = 0.0;
  for (int k = 2; k <= 1200; ++k) {
    const double c = k * (sigma - g.b_bound_exp);
    const double n0 = std::max(2.0, std::ceil(std::pow(X, 1.0 / k)));
    const double term =
        g.b_bound_const *
        (std::pow(n0, -c) + std::pow(n0, 1.0 - c) / (c - 1.0));
    rest += term;
    if (term < 1e-320) break;
  }
  return k1 + rest;
}

}  // namespace

Cert eval_log_L(const CoefficientSource& src, cplx s, double tol, bool* tail_limited) {
  const double sigma = s.real(), t = s.imag();
  if (!(sigma > 1.0)) throw std::domain_error("log L: need Re s > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("log L: tol must be positive");
  tol = std::max(tol, 1e-14);
  const GrowthCertificate& g = src.growth();
  if (!(sigma > 1.0 + std::min(g.a_bound_exp, g.b_bound_exp)))
    throw std::domain_error("log L: growth exponents give no convergent tail here");

  const double x_cap = src.zero_beyond_table()
                           ? static_cast<double>(src.table_limit())
                           : kEvalXCap;
  double X = 64.0;
  for (;;) {
    if (log_series_tail(g, sigma, std::min(X, x_cap)) <= 0.5 * tol || X >= x_cap) break;
    X *= 2.0;
  }
  X = std::min(X, x_cap);
  const double tail = log_series_tail(g, sigma, X);
  if (tail_limited) *tail_limited = !(tail <= tol);

  SeriesAccum accum(sigma, t);
  const std::uint64_t Xi = static_cast<std::uint64_t>(X);
  // table region: every p^k <= min(X, limit) is materialized — walk the map
  for (const auto& [key, bval] : src.table()) {
    if (bval == cplx(0.0)) continue;
    const auto& [p, k] = key;
    long double pkl = 1.0L;
    for (std::uint32_t j = 0; j < k; ++j) pkl *= static_cast<long double>(p);
    if (pkl > static_cast<long double>(Xi)) continue;
    accum.add(static_cast<double>(k) * std::log(static_cast<double>(p)), bval);
  }
  // extension region beyond the table
  if (!src.zero_beyond_table() && Xi > src.table_limit()) {
    const ClosedForm& ext = src.extension();
    constexpr std::uint64_t kBlock = 1u << 24;
    for (std::uint64_t lo = src.table_limit(); lo < Xi; lo += kBlock) {
      const std::uint64_t hi = std::min(Xi, lo + kBlock);
      for (std::uint32_t p : primes_in(lo, hi)) {
        const cplx bv = ext(p, 1);
        if (bv != cplx(0.0)) accum.add(std::log(static_cast<double>(p)), bv);
      }
    }
    for (const PrimePower& q : prime_powers_between(src.table_limit(), Xi)) {
      if (q.k < 2) continue;  // primes were swept above
      const cplx bv = ext(q.p, q.k);
      if (bv != cplx(0.0))
        accum.add(static_cast<double>(q.k) * std::log(static_cast<double>(q.p)), bv);
    }
  }
  Cert out = accum.result();
  out.err += tail;
  return out;
}

Cert eval_dirichlet(const DirichletCoefficients& coeffs, cplx s, double tol,
                    bool* tail_limited) {
  const double sigma = s.real(), t = s.imag();
  const GrowthCertificate& g = coeffs.growth;
  const double u = sigma - 1.0 - g.a_bound_exp;
  if (!(u > 0.0))
    throw std::domain_error("dirichlet sum: need Re s > 1 + coefficient exponent");
  if (!(tol > 0.0)) throw std::invalid_argument("dirichlet sum: tol must be positive");
  tol = std::max(tol, 1e-14);

  const auto tail_at = [&](double N) { return g.a_bound_const * std::pow(N, -u) / u; };
  std::uint64_t N = coeffs.n_max();
  const double target = std::pow(g.a_bound_const / (0.5 * tol * u), 1.0 / u);
  if (std::isfinite(target) && target < static_cast<double>(N))
    N = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(target)));
  const double tail = tail_at(static_cast<double>(N));
  if (tail_limited) *tail_limited = !(tail <= tol);

  SeriesAccum accum(sigma, t);
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (coeffs.a[n] != cplx(0.0)) accum.add(std::log(static_cast<double>(n)), coeffs.a[n]);
  }
  Cert out = accum.result();
  out.err += tail;
  return out;
}

// ---------------------------------------------------------------------------

double kweight(KWeight kw, std::uint32_t k) {
  switch (kw) {
    case KWeight::inv_k:
      return 1.0 / static_cast<double>(k);
    case KWeight::even_inv_k:
      return (k % 2 == 0) ? 2.0 / static_cast<double>(k) : 0.0;
    case KWeight::only_k1:
      return k == 1 ? 1.0 : 0.0;
  }
  return 0.0;
}

RInt AbsTailModel::between(double x, double y, double u, int m) const {
  if (!(x <= y)) throw std::invalid_argument("between: bounds out of order");
  const RInt d = tail(x, u, m) - tail(y, u, m);
  return RInt(std::max(0.0, d.lo), std::max(0.0, d.hi));
}

namespace {

void validate_tail_args(double x, double u, int m, bool need_positive_u) {
  if (!(x >= 0.0) || x > 1e9)
    throw std::invalid_argument("tail model: cut must lie in [0, 1e9]");
  if (need_positive_u ? !(u > 0.0) : !(u >= 0.0))
    throw std::invalid_argument("tail model: exponent offset out of range");
  if (m < 0 || m > 2)
    throw std::invalid_argument("tail model: weight order must be 0, 1 or 2");
}

RInt point_term(double scale, double lp, double c, int m) {
  // scale * (log p)^m * p^{-c} as a tight interval, c = exponent at this power
  double w = scale;
  for (int j = 0; j < m; ++j) w *= lp;
  const double v = w * std::exp(-c * lp);
  return RInt::from_err(v, v * kEps * (6.0 + c * lp));
}

// Exact-profile enclosure of sum over prime powers p^k > x, k >= 2, of
//   scale * kweight(k) (k log p)^m p^{-k(1+u)},  excluding listed primes.
RInt power_part(double x, double u, int m, double scale, KWeight kw,
                const std::vector<std::uint32_t>& excluded) {
  if (kw == KWeight::only_k1) return RInt::point(0.0);
  RInt total = RInt::point(0.0);
  const std::uint64_t X1 =
      std::max(static_cast<std::uint64_t>(std::floor(std::max(x, 0.0))),
               std::uint64_t{100'000});
  // direct region x < p^k <= X1
  for (const PrimePower& q : prime_powers_between(
           static_cast<std::uint64_t>(std::floor(std::max(x, 0.0))), X1)) {
    if (q.k < 2 || contains(excluded, q.p)) continue;
    const double wk = kweight(kw, q.k);
    if (wk == 0.0) continue;
    const double lp = std::log(static_cast<double>(q.p));
    double w = scale * wk;
    for (int j = 0; j < m; ++j) w *= q.k * lp;
    const double c = q.k * (1.0 + u);
    const double v = w * std::exp(-c * lp);
    total = total + RInt::from_err(v, v * kEps * (8.0 + c * lp));
  }
  // analytic region p^k > X1, split per k at the exact integer boundary
  // B = iroot(X1, k): certified prime-zeta tails up to k = 7, then exact terms
  // over the handful of primes <= 200 plus a negligible integral majorant
  for (std::uint32_t k = 2; k <= 7; ++k) {
    const double wk = kweight(kw, k);
    if (wk == 0.0) continue;
    const std::uint64_t B = iroot(X1, k);
    const double uk = static_cast<double>(k) - 1.0 + static_cast<double>(k) * u;
    RInt part = prime_tail(static_cast<double>(B), uk, m, 1e-12);
    double f = scale * wk;
    for (int j = 0; j < m; ++j) f *= k;
    part = f * part;
    for (std::uint32_t p0 : excluded) {
      if (static_cast<std::uint64_t>(p0) > B) {
        const RInt ex =
            point_term(f, std::log(static_cast<double>(p0)), k * (1.0 + u), m);
        part = part - ex;
      }
    }
    total = total + RInt(std::max(0.0, part.lo), std::max(0.0, part.hi));
  }
  static const std::vector<std::uint32_t> kSmallPrimes = prime_sieve(200);
  for (std::uint32_t k = 8; k <= 1200; ++k) {
    const double c = k * (1.0 + u);
    if (scale * std::pow(2.0, -c) < 1e-320) break;
    const double wk = kweight(kw, k);
    if (wk == 0.0) continue;
    const std::uint64_t B = iroot(X1, k);  // always < 200 once k >= 8, X1 <= 1e9
    double f = scale * wk;
    for (int j = 0; j < m; ++j) f *= k;
    RInt part = RInt::point(0.0);
    for (std::uint32_t p : kSmallPrimes) {
      if (p <= B || contains(excluded, p)) continue;
      part = part + point_term(f, std::log(static_cast<double>(p)), c, m);
    }
    const double L0 = std::log(201.0);
    const double cm1 = c - 1.0;
    double integral = std::pow(201.0, -cm1) / cm1;
    if (m == 1) integral = std::pow(201.0, -cm1) * (L0 / cm1 + 1.0 / (cm1 * cm1));
    if (m == 2)
      integral = std::pow(201.0, -cm1) * (L0 * L0 / cm1 + 2.0 * L0 / (cm1 * cm1) +
                                          2.0 / (cm1 * cm1 * cm1));
    double lead = std::pow(201.0, -c);
    for (int j = 0; j < m; ++j) lead *= L0;
    total = total + part + RInt(0.0, f * (lead + integral) * 1.01);
  }
  return total;
}

}  // namespace

DeterministicTailModel::DeterministicTailModel(double scale, KWeight kw,
                                               std::vector<std::uint32_t> excluded)
    : scale_(scale), kw_(kw), excluded_(std::move(excluded)) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("tail model: scale must be positive");
  std::sort(excluded_.begin(), excluded_.end());
}

RInt DeterministicTailModel::tail(double x, double u, int m) const {
  validate_tail_args(x, u, m, true);
  RInt total = power_part(x, u, m, scale_, kw_, excluded_);
  const double w1 = kweight(kw_, 1);
  if (w1 > 0.0) {
    RInt k1 = (scale_ * w1) * prime_tail(x, u, m, 1e-12);
    for (std::uint32_t p0 : excluded_) {
      if (static_cast<double>(p0) > x)
        k1 = k1 - point_term(scale_ * w1, std::log(static_cast<double>(p0)),
                             1.0 + u, m);
    }
    total = total + RInt(std::max(0.0, k1.lo), std::max(0.0, k1.hi));
  }
  return total;
}

RInt DeterministicTailModel::small_bound(double x, double eps, int m) const {
  validate_tail_args(x, eps, m, false);
  RInt total = power_part(1.9, 0.0, m, scale_, kw_, excluded_);
  const double w1 = kweight(kw_, 1);
  if (w1 > 0.0) {
    RInt k1 = (scale_ * w1) * prime_log_power_sum(x, eps, m);
    for (std::uint32_t p0 : excluded_) {
      if (static_cast<double>(p0) <= x)
        k1 = k1 - point_term(scale_ * w1, std::log(static_cast<double>(p0)),
                             1.0 + eps, m);
    }
    total = total + RInt(std::max(0.0, k1.lo), std::max(0.0, k1.hi));
  }
  return total;
}

BoundedTailModel::BoundedTailModel(std::vector<std::pair<std::uint32_t, double>> k1_moduli,
                                   std::uint64_t k1_limit, double k1_scale,
                                   double scale, KWeight kw)
    : k1_(std::move(k1_moduli)),
      k1_limit_(k1_limit),
      k1_scale_(k1_scale),
      scale_(scale),
      kw_(kw) {
  if (!(k1_scale > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("tail model: scales must be positive");
  if (!std::is_sorted(k1_.begin(), k1_.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; }))
    throw std::invalid_argument("tail model: modulus table must be sorted by prime");
  for (const auto& [p, v] : k1_) {
    if (!(v >= 0.0) || !(v <= k1_scale * (1.0 + 1e-9)) || p > k1_limit_)
      throw std::invalid_argument("tail model: modulus table entry out of range");
  }
}

RInt BoundedTailModel::tail(double x, double u, int m) const {
  validate_tail_args(x, u, m, true);
  const RInt powers = power_part(x, u, m, scale_, kw_, {});
  RInt total(0.0, powers.hi);  // k >= 2 moduli are only bounded above

  // exact table part over (x, k1_limit]
  RInt direct = RInt::point(0.0);
  for (auto it = std::upper_bound(
           k1_.begin(), k1_.end(), x,
           [](double v, const auto& e) { return v < static_cast<double>(e.first); });
       it != k1_.end(); ++it) {
    if (it->second == 0.0) continue;
    direct = direct + point_term(it->second, std::log(static_cast<double>(it->first)),
                                 1.0 + u, m);
  }
  // bounded part beyond the table
  const double beyond = std::max(x, static_cast<double>(k1_limit_));
  const RInt far = k1_scale_ * prime_tail(beyond, u, m, 1e-12);
  return total + direct + RInt(0.0, std::max(0.0, far.hi));
}

RInt BoundedTailModel::small_bound(double x, double eps, int m) const {
  validate_tail_args(x, eps, m, false);
  const RInt powers = power_part(1.9, 0.0, m, scale_, kw_, {});
  RInt total(0.0, powers.hi);
  RInt direct = RInt::point(0.0);
  for (const auto& [p, v] : k1_) {
    if (static_cast<double>(p) > x) break;
    if (v == 0.0) continue;
    direct = direct + point_term(v, std::log(static_cast<double>(p)), 1.0 + eps, m);
  }
  total = total + direct;
  if (x > static_cast<double>(k1_limit_)) {
    // table does not reach x: bound the gap by the scale
    const RInt gap = k1_scale_ * (prime_log_power_sum(x, eps, m) -
                                  prime_log_power_sum(static_cast<double>(k1_limit_), eps, m));
    total = total + RInt(0.0, std::max(0.0, gap.hi));
  }
  return total;
}

}  // namespace lvlab

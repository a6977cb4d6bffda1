#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace lvlab {

using cplx = std::complex<double>;

// Every certified bound in this codebase is exact mathematics plus explicit
// floating-point slop charged through kEps-scaled terms.  kEps carries a
// safety factor over machine epsilon so slop formulas can stay simple.
inline constexpr double kEps = 4.0 * std::numeric_limits<double>::epsilon();

// Rounding slop for a chunked sum of n terms whose absolute values add to
// abs_sum.  Accumulation is done in chunks of <= 4096 with a compensated
// reduction across chunks, so per-term error is bounded independent of n.
inline double sum_slop(double abs_sum, double n_terms) {
  (void)n_terms;
  return (4096.0 + 64.0) * kEps * abs_sum;
}

// Complex ball: |true value - v| <= err.
struct Cert {
  cplx v{0.0, 0.0};
  double err = 0.0;

  Cert() = default;
  Cert(cplx value, double e) : v(value), err(e) {}
  explicit Cert(double value) : v(value, 0.0), err(0.0) {}
  explicit Cert(cplx value) : v(value), err(0.0) {}

  double abs_lo() const { return std::max(0.0, std::abs(v) - err); }
  double abs_hi() const { return std::abs(v) + err; }
  bool contains_zero() const { return std::abs(v) <= err; }
};

inline Cert operator+(const Cert& a, const Cert& b) {
  return {a.v + b.v, a.err + b.err + kEps * (std::abs(a.v) + std::abs(b.v))};
}

inline Cert operator-(const Cert& a, const Cert& b) {
  return {a.v - b.v, a.err + b.err + kEps * (std::abs(a.v) + std::abs(b.v))};
}

inline Cert operator-(const Cert& a) { return {-a.v, a.err}; }

inline Cert operator*(const Cert& a, const Cert& b) {
  const double ma = std::abs(a.v), mb = std::abs(b.v);
  return {a.v * b.v, ma * b.err + mb * a.err + a.err * b.err + 4.0 * kEps * ma * mb};
}

inline Cert operator*(double c, const Cert& a) {
  return {c * a.v, std::abs(c) * a.err + kEps * std::abs(c * a.v)};
}

inline Cert operator*(cplx c, const Cert& a) {
  return {c * a.v, std::abs(c) * a.err + 4.0 * kEps * std::abs(c) * std::abs(a.v)};
}

inline Cert operator/(const Cert& a, const Cert& b) {
  const double mb = std::abs(b.v);
  if (mb <= b.err) {
    throw std::domain_error("certified division: denominator ball contains zero");
  }
  const cplx q = a.v / b.v;
  const double err = (a.err + std::abs(q) * b.err) / (mb - b.err) + 4.0 * kEps * std::abs(q);
  return {q, err};
}

// exp over a ball: |e^{v+d} - e^v| <= |e^v| (e^{|d|} - 1).
inline Cert cert_exp(const Cert& a) {
  const cplx e = std::exp(a.v);
  const double me = std::abs(e);
  return {e, me * std::expm1(a.err) + 4.0 * kEps * me};
}

// Principal log over a zero-free ball: |log(v+d) - log v| <= -log(1 - err/|v|).
inline Cert cert_log(const Cert& a) {
  const double m = std::abs(a.v);
  if (m <= a.err) {
    throw std::domain_error("certified log: ball contains zero");
  }
  const double rel = a.err / m;
  return {std::log(a.v), -std::log1p(-rel) + 8.0 * kEps};
}

// sqrt over a zero-free ball (principal branch), via |sqrt(v+d)-sqrt(v)| <= |d| / (|sqrt v| + sqrt(|v|-|d|)).
inline Cert cert_sqrt(const Cert& a) {
  const double m = std::abs(a.v);
  if (m <= a.err) {
    throw std::domain_error("certified sqrt: ball contains zero");
  }
  const cplx r = std::sqrt(a.v);
  const double denom = std::abs(r) + std::sqrt(m - a.err);
  return {r, a.err / denom + 4.0 * kEps * std::abs(r)};
}

// Real interval [lo, hi]; used for the one-sided sum bounds (tails, S-quantities).
struct RInt {
  double lo = 0.0;
  double hi = 0.0;

  RInt() = default;
  RInt(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::logic_error("RInt: lo > hi");
  }
  static RInt point(double x) { return {x, x}; }
  static RInt from_err(double x, double e) { return {x - e, x + e}; }

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool certainly_positive() const { return lo > 0.0; }
};

inline RInt operator+(const RInt& a, const RInt& b) {
  const double s = kEps * (std::abs(a.lo) + std::abs(b.lo) + std::abs(a.hi) + std::abs(b.hi));
  return {a.lo + b.lo - s, a.hi + b.hi + s};
}

inline RInt operator-(const RInt& a, const RInt& b) {
  const double s = kEps * (std::abs(a.lo) + std::abs(b.lo) + std::abs(a.hi) + std::abs(b.hi));
  return {a.lo - b.hi - s, a.hi - b.lo + s};
}

inline RInt operator*(double c, const RInt& a) {
  double x = c * a.lo, y = c * a.hi;
  if (x > y) std::swap(x, y);
  const double s = kEps * (std::abs(x) + std::abs(y));
  return {x - s, y + s};
}

// Product of intervals with non-negative lower ends (all our sums of moduli).
inline RInt mul_nonneg(const RInt& a, const RInt& b) {
  if (a.lo < 0.0 || b.lo < 0.0) throw std::logic_error("mul_nonneg: negative operand");
  const double s = kEps * (1.0 + a.hi * b.hi);
  return {a.lo * b.lo - s, a.hi * b.hi + s};
}

// a <= b certified (worst case over both intervals).
inline bool certainly_le(const RInt& a, const RInt& b) { return a.hi <= b.lo; }

}  // namespace lvlab

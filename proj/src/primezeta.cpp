#include "lvlab/primezeta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lvlab/primes.hpp"
#include "lvlab/simd.hpp"
#include "lvlab/zeta_em.hpp"

namespace lvlab {

namespace {

constexpr int kMoebN = 64;  // expansion length; tail decays like 2^{-n}

// Moebius function by trial division, enough for the short expansion range.
std::array<int, kMoebN + 1> moebius_table() {
  std::array<int, kMoebN + 1> mu{};
  mu[1] = 1;
  for (int n = 2; n <= kMoebN; ++n) {
    int m = n, cnt = 0;
    bool squareful = false;
    for (int d = 2; d * d <= m; ++d) {
      if (m % d == 0) {
        m /= d;
        ++cnt;
        if (m % d == 0) {
          squareful = true;
          break;
        }
      }
    }
    if (squareful) {
      mu[n] = 0;
      continue;
    }
    if (m > 1) ++cnt;
    mu[n] = (cnt % 2 == 0) ? 1 : -1;
  }
  return mu;
}

}  // namespace

Jet2 prime_zeta_jet(double u, int derivs, double tol) {
  if (derivs < 0 || derivs > 2)
    throw std::invalid_argument("prime zeta: derivs must be 0, 1 or 2");
  if (!(u > 0.0) || !std::isfinite(u))
    throw std::domain_error("prime zeta: need Re s > 1");
  if (u < 1e-300)
    throw std::invalid_argument("prime zeta: offset below supported floor");
  if (derivs >= 1 && u < 1e-100)
    throw std::invalid_argument(
        "prime zeta: first derivative needs offset >= 1e-100");
  if (derivs >= 2 && u < 1e-80)
    throw std::invalid_argument(
        "prime zeta: second derivative needs offset >= 1e-80");
  tol = std::max(tol, 1e-15);

  static const std::array<int, kMoebN + 1> mu = moebius_table();

  Cert s0(0.0), s1(0.0), s2(0.0);
  for (int n = 1; n <= kMoebN; ++n) {
    if (mu[n] == 0) continue;
    // offset of n*s from 1; exact for n = 1, where it matters
    const double un = (n - 1) + n * u;
    const Jet2 z = hurwitz_em1p(un, 0.0, 1.0, 0.125 * tol, derivs);
    s0 = s0 + (mu[n] / static_cast<double>(n)) * cert_log(z.f);
    if (derivs >= 1) {
      const Cert rat = z.d1 / z.f;
      s1 = s1 + static_cast<double>(mu[n]) * rat;
      if (derivs >= 2) {
        const Cert rat2 = z.d2 / z.f - rat * rat;
        s2 = s2 + static_cast<double>(mu[n] * n) * rat2;
      }
    }
  }

  // Dropped terms n > kMoebN: |log zeta(ns)| <= 1.3 * 2^{-n} and the two
  // logarithmic-derivative analogues give geometric tails; the kEps terms
  // cover the rounding of the inner abscissas (n - 1) + n u.
  const double t2 = std::ldexp(1.0, -kMoebN);
  Jet2 out;
  out.f = s0;
  out.f.err += t2 + kEps * (1.0 + s0.abs_hi());
  if (derivs >= 1) {
    out.d1 = s1;
    out.d1.err += t2 + 2.0 * kEps * (1.0 + s1.abs_hi());
  }
  if (derivs >= 2) {
    out.d2 = s2;
    out.d2.err += kMoebN * t2 + 4.0 * kEps * (1.0 + s2.abs_hi());
  }
  return out;
}

RInt prime_log_power_sum(double x, double u, int m) {
  if (m < 0 || m > 2)
    throw std::invalid_argument("prime power sum: m must be 0, 1 or 2");
  if (!(u >= 0.0) || !std::isfinite(u))
    throw std::invalid_argument("prime power sum: offset must be >= 0");
  if (!(x >= 0.0) || x > 1.01e9)
    throw std::invalid_argument("prime power sum: bound outside [0, 1e9]");
  const std::uint64_t xi = static_cast<std::uint64_t>(std::floor(x));
  if (xi < 2) return RInt::point(0.0);

  constexpr int kChunk = 4096;
  static thread_local std::vector<double> lg(kChunk), arg(kChunk), ex(kChunk);

  double sum = 0.0, carry = 0.0;
  double n_terms = 0.0;
  constexpr std::uint64_t kBlock = 1u << 24;
  for (std::uint64_t lo = 1; lo <= xi; lo += kBlock) {
    const std::uint64_t hi = std::min<std::uint64_t>(xi, lo + kBlock - 1);
    const std::vector<std::uint32_t> ps = primes_in(lo - 1, hi);
    n_terms += static_cast<double>(ps.size());
    for (std::size_t base = 0; base < ps.size(); base += kChunk) {
      const int cnt = static_cast<int>(std::min<std::size_t>(kChunk, ps.size() - base));
      for (int i = 0; i < cnt; ++i) {
        lg[i] = std::log(static_cast<double>(ps[base + i]));
        arg[i] = -u * lg[i];
      }
      simd::vexp(arg.data(), ex.data(), cnt);
      double part = 0.0;
      for (int i = 0; i < cnt; ++i) {
        double wgt = 1.0;
        for (int j = 0; j < m; ++j) wgt *= lg[i];
        part += ex[i] * wgt / static_cast<double>(ps[base + i]);
      }
      const double y = part - carry, s0 = sum + y;
      carry = (s0 - sum) - y;
      sum = s0;
    }
  }

  const double lmax = std::log(static_cast<double>(xi));
  const double rel = kEps * (8.0 + m + std::min(u * lmax, 710.0));
  const double slop = sum * rel + sum_slop(sum, n_terms);
  return RInt::from_err(sum, slop);
}

RInt prime_tail(double x, double u, int m, double tol) {
  const Jet2 jet = prime_zeta_jet(u, m, tol);
  Cert comp;
  switch (m) {
    case 0: comp = jet.f; break;
    case 1: comp = -jet.d1; break;
    case 2: comp = jet.d2; break;
    default: throw std::invalid_argument("prime tail: m must be 0, 1 or 2");
  }
  const RInt full = RInt::from_err(comp.v.real(), comp.err + std::abs(comp.v.imag()));
  const RInt head = prime_log_power_sum(x, u, m);
  const RInt diff = full - head;
  return RInt(std::max(0.0, diff.lo), std::max(0.0, diff.hi));
}

}  // namespace lvlab

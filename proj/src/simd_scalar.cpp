#include <cmath>

#include "lvlab/simd.hpp"

namespace lvlab::simd::scalar_impl {

namespace {
constexpr std::size_t kChunk = 4096;

inline double clamp_exp_arg(double x) {
  if (x < -708.0) return -708.0;
  if (x > 708.0) return 708.0;
  return x;
}
}  // namespace

void vexp(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(clamp_exp_arg(x[i]));
}

void vsincos(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t) {
  // Chunked accumulation with Kahan compensation across chunk partials; the
  // AVX2 backend mirrors the chunk structure so the two stay bit-comparable
  // to ~chunk*eps.
  double tre = 0, tim = 0, tabs = 0;
  double kre = 0, kim = 0, kabs = 0;  // Kahan carries
  for (std::size_t base = 0; base < n; base += kChunk) {
    const std::size_t m = std::min(kChunk, n - base);
    double pre = 0, pim = 0, pabs = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = logn[base + i];
      const double e = std::exp(clamp_exp_arg(-sigma * x));
      const double ar = cre[base + i];
      const double ai = cim ? cim[base + i] : 0.0;
      double vr, vi;
      if (t == 0.0) {
        vr = ar * e;
        vi = ai * e;
      } else {
        const double ph = t * x;
        const double cph = std::cos(ph), sph = std::sin(ph);
        vr = e * (ar * cph + ai * sph);
        vi = e * (ai * cph - ar * sph);
      }
      pre += vr;
      pim += vi;
      pabs += e * std::sqrt(ar * ar + ai * ai);
    }
    // Kahan add of the chunk partials.
    double y = pre - kre, s0 = tre + y;
    kre = (s0 - tre) - y;
    tre = s0;
    y = pim - kim;
    s0 = tim + y;
    kim = (s0 - tim) - y;
    tim = s0;
    y = pabs - kabs;
    s0 = tabs + y;
    kabs = (s0 - tabs) - y;
    tabs = s0;
  }
  return {tre, tim, tabs};
}

double weighted_sq_sum(const double* x, const double* w, std::size_t n) {
  double tot = 0, carry = 0;
  for (std::size_t base = 0; base < n; base += kChunk) {
    const std::size_t m = std::min(kChunk, n - base);
    double p = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = x[base + i];
      p += (w ? w[base + i] : 1.0) * v * v;
    }
    const double y = p - carry, s0 = tot + y;
    carry = (s0 - tot) - y;
    tot = s0;
  }
  return tot;
}

void grid_scan(const double* logp, const double* tre, const double* tim,
               std::size_t nprimes, double tau0, double step, std::size_t count,
               double eps1, std::vector<std::uint32_t>& hits, double* quality_out) {
  const double e2 = eps1 * eps1;
  for (std::size_t j = 0; j < count; ++j) {
    const double tau = tau0 + static_cast<double>(j) * step;
    double worst = 0.0;
    for (std::size_t p = 0; p < nprimes; ++p) {
      const double ph = tau * logp[p];
      const double cr = std::cos(ph), ci = -std::sin(ph);  // p^{-i tau}
      const double dr = cr - tre[p], di = ci - tim[p];
      const double d2 = dr * dr + di * di;
      if (d2 > worst) worst = d2;
    }
    if (quality_out) quality_out[j] = std::sqrt(worst);
    if (worst < e2) hits.push_back(static_cast<std::uint32_t>(j));
  }
}

}  // namespace lvlab::simd::scalar_impl

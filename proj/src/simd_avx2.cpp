// AVX2 backend.  Compiled with -mavx2 -mfma; only dispatched when cpuid
// reports support.  exp/sincos kernels are the classic Cephes double
// polynomials with Cody-Waite reduction; worst-case absolute error of the
// sincos reduction grows like 4e-24*|x| (callers stay below |x| ~ 2e13).
#include "lvlab/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define LVLAB_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

#include <cmath>
#include <stdexcept>

namespace lvlab::simd::avx2_impl {

bool available() {
#if defined(LVLAB_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if defined(LVLAB_HAVE_AVX2_TU)

namespace {

constexpr std::size_t kChunk = 4096;

inline __m256d fma(__m256d a, __m256d b, __m256d c) { return _mm256_fmadd_pd(a, b, c); }

// --- exp ---------------------------------------------------------------
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0), hi = _mm256_set1_pd(708.0);
  x = _mm256_min_pd(hi, _mm256_max_pd(lo, x));

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = fma(n, _mm256_sub_pd(_mm256_setzero_pd(), c1), x);
  r = fma(n, _mm256_sub_pd(_mm256_setzero_pd(), c2), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = fma(p, rr, _mm256_set1_pd(3.02994407707441961300e-2));
  p = fma(p, rr, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = fma(q, rr, _mm256_set1_pd(2.52448340349684104192e-3));
  q = fma(q, rr, _mm256_set1_pd(2.27265548208155028766e-1));
  q = fma(q, rr, _mm256_set1_pd(2.00000000000000000005e0));
  const __m256d e = fma(_mm256_set1_pd(2.0),
                        _mm256_div_pd(p, _mm256_sub_pd(q, p)),
                        _mm256_set1_pd(1.0));

  // scale by 2^n through the exponent field (n is within [-1022, 1023])
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits = _mm256_add_epi64(_mm256_castpd_si256(e), _mm256_slli_epi64(n64, 52));
  return _mm256_castsi256_pd(bits);
}

// --- sincos ------------------------------------------------------------
inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  const __m256d xs = _mm256_and_pd(x, signmask);  // sign bits of x
  const __m256d ax = _mm256_andnot_pd(signmask, x);

  // y = nearest even multiple of pi/4 below ax (Cephes style)
  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615)));
  const __m256d half_y = _mm256_mul_pd(y, _mm256_set1_pd(0.5));
  const __m256d rem2 = _mm256_sub_pd(y, _mm256_add_pd(_mm256_floor_pd(half_y), _mm256_floor_pd(half_y)));
  const __m256d odd = _mm256_cmp_pd(rem2, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  y = _mm256_add_pd(y, _mm256_and_pd(odd, _mm256_set1_pd(1.0)));

  const __m256d dp1 = _mm256_set1_pd(7.85398125648498535156e-1);
  const __m256d dp2 = _mm256_set1_pd(3.77489470793079817668e-8);
  const __m256d dp3 = _mm256_set1_pd(2.69515142907905952645e-15);
  __m256d z = fma(y, _mm256_sub_pd(_mm256_setzero_pd(), dp1), ax);
  z = fma(y, _mm256_sub_pd(_mm256_setzero_pd(), dp2), z);
  z = fma(y, _mm256_sub_pd(_mm256_setzero_pd(), dp3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  __m256d sp = _mm256_set1_pd(1.58962301576546568060e-10);
  sp = fma(sp, zz, _mm256_set1_pd(-2.50507477628578072866e-8));
  sp = fma(sp, zz, _mm256_set1_pd(2.75573136213857245213e-6));
  sp = fma(sp, zz, _mm256_set1_pd(-1.98412698295895385996e-4));
  sp = fma(sp, zz, _mm256_set1_pd(8.33333333332211858878e-3));
  sp = fma(sp, zz, _mm256_set1_pd(-1.66666666666666307295e-1));
  const __m256d S = fma(_mm256_mul_pd(z, zz), sp, z);

  __m256d cp = _mm256_set1_pd(-1.13585365213876817300e-11);
  cp = fma(cp, zz, _mm256_set1_pd(2.08757008419747316778e-9));
  cp = fma(cp, zz, _mm256_set1_pd(-2.75573141792967388112e-7));
  cp = fma(cp, zz, _mm256_set1_pd(2.48015872888517179954e-5));
  cp = fma(cp, zz, _mm256_set1_pd(-1.38888888888730564116e-3));
  cp = fma(cp, zz, _mm256_set1_pd(4.16666666666665929218e-2));
  __m256d C = fma(_mm256_mul_pd(zz, zz), cp,
                  fma(zz, _mm256_set1_pd(-0.5), _mm256_set1_pd(1.0)));

  // quadrant q = (y mod 8)/2 in {0,1,2,3}
  const __m256d y8 = _mm256_sub_pd(
      y, _mm256_mul_pd(_mm256_set1_pd(8.0),
                       _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125)))));
  const __m256i q = _mm256_cvtepi32_epi64(
      _mm256_cvtpd_epi32(_mm256_mul_pd(y8, _mm256_set1_pd(0.5))));

  const __m256i one = _mm256_set1_epi64x(1), two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sneg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256d cneg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));

  __m256d s = _mm256_blendv_pd(S, C, swap);
  __m256d c = _mm256_blendv_pd(C, S, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(sneg, signmask));
  c = _mm256_xor_pd(c, _mm256_and_pd(cneg, signmask));
  s = _mm256_xor_pd(s, xs);  // sin is odd, cos is even
  s_out = s;
  c_out = c;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d sum2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
}

}  // namespace

void vexp(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i] < -708 ? -708 : (x[i] > 708 ? 708.0 : x[i]));
}

void vsincos(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sv, cv;
    sincos_pd(_mm256_loadu_pd(x + i), sv, cv);
    _mm256_storeu_pd(s + i, sv);
    _mm256_storeu_pd(c + i, cv);
  }
  for (; i < n; ++i) {
    double b[4] = {x[i], 0, 0, 0}, sb[4], cb[4];
    __m256d sv, cv;
    sincos_pd(_mm256_loadu_pd(b), sv, cv);
    _mm256_storeu_pd(sb, sv);
    _mm256_storeu_pd(cb, cv);
    s[i] = sb[0];
    c[i] = cb[0];
  }
}

BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t) {
  alignas(32) static thread_local double buf_e[kChunk];
  alignas(32) static thread_local double buf_arg[kChunk];
  alignas(32) static thread_local double buf_s[kChunk];
  alignas(32) static thread_local double buf_c[kChunk];

  double tre = 0, tim = 0, tabs = 0;
  double kre = 0, kim = 0, kabs = 0;
  for (std::size_t base = 0; base < n; base += kChunk) {
    const std::size_t m = std::min(kChunk, n - base);
    for (std::size_t i = 0; i < m; ++i) buf_arg[i] = -sigma * logn[base + i];
    vexp(buf_arg, buf_e, m);
    if (t != 0.0) {
      for (std::size_t i = 0; i < m; ++i) buf_arg[i] = t * logn[base + i];
      vsincos(buf_arg, buf_s, buf_c, m);
    }
    __m256d pre = _mm256_setzero_pd(), pim = _mm256_setzero_pd(), pabs = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      const __m256d e = _mm256_load_pd(buf_e + i);
      const __m256d ar = _mm256_loadu_pd(cre + base + i);
      const __m256d ai = cim ? _mm256_loadu_pd(cim + base + i) : _mm256_setzero_pd();
      __m256d vr, vi;
      if (t == 0.0) {
        vr = _mm256_mul_pd(ar, e);
        vi = _mm256_mul_pd(ai, e);
      } else {
        const __m256d cph = _mm256_load_pd(buf_c + i);
        const __m256d sph = _mm256_load_pd(buf_s + i);
        vr = _mm256_mul_pd(e, fma(ar, cph, _mm256_mul_pd(ai, sph)));
        vi = _mm256_mul_pd(e, _mm256_sub_pd(_mm256_mul_pd(ai, cph), _mm256_mul_pd(ar, sph)));
      }
      pre = _mm256_add_pd(pre, vr);
      pim = _mm256_add_pd(pim, vi);
      pabs = fma(e, _mm256_sqrt_pd(fma(ar, ar, _mm256_mul_pd(ai, ai))), pabs);
    }
    double sre = hsum(pre), sim = hsum(pim), sabs = hsum(pabs);
    for (; i < m; ++i) {
      const double e = buf_e[i];
      const double ar = cre[base + i], ai = cim ? cim[base + i] : 0.0;
      if (t == 0.0) {
        sre += ar * e;
        sim += ai * e;
      } else {
        sre += e * (ar * buf_c[i] + ai * buf_s[i]);
        sim += e * (ai * buf_c[i] - ar * buf_s[i]);
      }
      sabs += e * std::sqrt(ar * ar + ai * ai);
    }
    double y = sre - kre, s0 = tre + y;
    kre = (s0 - tre) - y;
    tre = s0;
    y = sim - kim;
    s0 = tim + y;
    kim = (s0 - tim) - y;
    tim = s0;
    y = sabs - kabs;
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
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + base + i);
      const __m256d vv = _mm256_mul_pd(v, v);
      acc = w ? fma(_mm256_loadu_pd(w + base + i), vv, acc) : _mm256_add_pd(acc, vv);
    }
    double p = hsum(acc);
    for (; i < m; ++i) {
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
  // Four tau lanes advance together; per prime the lane phasors rotate by
  // e^{-i*4*step*logp} each iteration and are refreshed from exact sincos at
  // every chunk boundary, so rotation drift stays ~1e-12.
  constexpr std::size_t kIters = 1024;  // taus per chunk = 4 * kIters
  std::vector<double> pr(nprimes * 4), pi(nprimes * 4), rr(nprimes), ri(nprimes);
  const double e2 = eps1 * eps1;

  std::size_t j = 0;
  while (j < count) {
    const std::size_t iters = std::min(kIters, (count - j + 3) / 4);
    for (std::size_t p = 0; p < nprimes; ++p) {
      const double w = step * logp[p];
      rr[p] = std::cos(4.0 * w);
      ri[p] = -std::sin(4.0 * w);
      const double base = (tau0 + static_cast<double>(j) * step) * logp[p];
      for (int l = 0; l < 4; ++l) {
        pr[4 * p + l] = std::cos(base + l * w);
        pi[4 * p + l] = -std::sin(base + l * w);
      }
    }
    for (std::size_t it = 0; it < iters && j < count; ++it) {
      __m256d worst = _mm256_setzero_pd();
      for (std::size_t p = 0; p < nprimes; ++p) {
        const __m256d cr = _mm256_loadu_pd(&pr[4 * p]);
        const __m256d ci = _mm256_loadu_pd(&pi[4 * p]);
        const __m256d dr = _mm256_sub_pd(cr, _mm256_set1_pd(tre[p]));
        const __m256d di = _mm256_sub_pd(ci, _mm256_set1_pd(tim[p]));
        worst = _mm256_max_pd(worst, fma(dr, dr, _mm256_mul_pd(di, di)));
        // rotate lanes by 4*step
        const __m256d vr = _mm256_set1_pd(rr[p]), vi = _mm256_set1_pd(ri[p]);
        const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(cr, vr), _mm256_mul_pd(ci, vi));
        const __m256d ni = fma(cr, vi, _mm256_mul_pd(ci, vr));
        _mm256_storeu_pd(&pr[4 * p], nr);
        _mm256_storeu_pd(&pi[4 * p], ni);
      }
      alignas(32) double wbuf[4];
      _mm256_store_pd(wbuf, worst);
      for (int l = 0; l < 4 && j < count; ++l, ++j) {
        if (quality_out) quality_out[j] = std::sqrt(wbuf[l]);
        if (wbuf[l] < e2) hits.push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
}

#else  // !LVLAB_HAVE_AVX2_TU

void vexp(const double*, double*, std::size_t) { throw std::runtime_error("AVX2 backend unavailable"); }
void vsincos(const double*, double*, double*, std::size_t) { throw std::runtime_error("AVX2 backend unavailable"); }
BlockSum dirichlet_block(const double*, const double*, const double*, std::size_t, double, double) {
  throw std::runtime_error("AVX2 backend unavailable");
}
double weighted_sq_sum(const double*, const double*, std::size_t) { throw std::runtime_error("AVX2 backend unavailable"); }
void grid_scan(const double*, const double*, const double*, std::size_t, double, double, std::size_t,
               double, std::vector<std::uint32_t>&, double*) {
  throw std::runtime_error("AVX2 backend unavailable");
}

#endif

}  // namespace lvlab::simd::avx2_impl

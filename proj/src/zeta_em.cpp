#include "lvlab/zeta_em.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lvlab/simd.hpp"

namespace lvlab {

namespace {

constexpr int kMaxK = 20;          // Bernoulli pairs available (B_2 .. B_40)
constexpr int kNCap = 4'000'000;   // head length cap
constexpr double kTMax = 1.05e7;

// gamma_j = B_{2j}/(2j)!, j = 1..20, from the exact Bernoulli rationals.
// Evaluated in long double; a few kEps of relative slop is charged at use.
const std::array<double, kMaxK + 1>& bern_coeffs() {
  static const std::array<double, kMaxK + 1> table = [] {
    const long double num[kMaxK + 1] = {
        0.0L, 1.0L, -1.0L, 1.0L, -1.0L, 5.0L, -691.0L, 7.0L, -3617.0L, 43867.0L,
        -174611.0L, 854513.0L, -236364091.0L, 8553103.0L, -23749461029.0L,
        8615841276005.0L, -7709321041217.0L, 2577687858367.0L,
        -26315271553053477373.0L, 2929993913841559.0L, -261082718496449122051.0L};
    const long double den[kMaxK + 1] = {
        1.0L, 6.0L, 30.0L, 42.0L, 30.0L, 66.0L, 2730.0L, 6.0L, 510.0L, 798.0L,
        330.0L, 138.0L, 2730.0L, 6.0L, 870.0L, 14322.0L, 510.0L, 6.0L,
        1919190.0L, 6.0L, 13530.0L};
    std::array<double, kMaxK + 1> t{};
    long double fact = 1.0L;  // (2j)!
    for (int j = 1; j <= kMaxK; ++j) {
      fact *= (2.0L * j - 1.0L) * (2.0L * j);
      t[j] = static_cast<double>(num[j] / den[j] / fact);
    }
    return t;
  }();
  return table;
}

// Complex jet (value, d/ds, d2/ds2) with certified components.
struct CJet {
  Cert f, d1, d2;
};

CJet jet_mul(const CJet& x, const CJet& y) {
  return {x.f * y.f, x.d1 * y.f + x.f * y.d1,
          x.d2 * y.f + 2.0 * (x.d1 * y.d1) + x.f * y.d2};
}

CJet jet_add(const CJet& x, const CJet& y) {
  return {x.f + y.f, x.d1 + y.d1, x.d2 + y.d2};
}

// w^{-sig - i t} with the phase formed in long double so large t keeps
// absolute phase error around |t| * ln w * 1e-19.
Cert cpow_neg(double w, double sig, double t) {
  const long double lw = logl(static_cast<long double>(w));
  const double L = static_cast<double>(lw);
  const double mag = std::exp(-sig * L);
  double re, im;
  if (t == 0.0) {
    re = mag;
    im = 0.0;
  } else {
    const long double ph = static_cast<long double>(t) * lw;
    re = mag * static_cast<double>(cosl(ph));
    im = -mag * static_cast<double>(sinl(ph));
  }
  const double rel =
      kEps * (3.0 + std::abs(sig) * std::abs(L)) + std::abs(t) * std::abs(L) * 3e-19;
  return {cplx(re, im), mag * rel};
}

struct HeadSums {
  // su[m] = sum over n < N of (n+a)^{-s} (-ln(n+a))^m; ab[m] the matching
  // sum of term moduli.
  cplx su[3];
  double ab[3];
};

HeadSums head_sums(int N, double a, double u, double t, int derivs) {
  constexpr int kChunk = 4096;
  static thread_local std::vector<double> lg(kChunk), arg(kChunk), ex(kChunk),
      sn(kChunk), cs(kChunk);
  const double sig = 1.0 + u;

  double re[3] = {0, 0, 0}, im[3] = {0, 0, 0}, ab[3] = {0, 0, 0};
  double cre[3] = {0, 0, 0}, cim[3] = {0, 0, 0}, cab[3] = {0, 0, 0};  // Kahan carries
  for (int base = 0; base < N; base += kChunk) {
    const int m = std::min(kChunk, N - base);
    for (int i = 0; i < m; ++i) {
      lg[i] = std::log(base + i + a);
      arg[i] = -sig * lg[i];
    }
    simd::vexp(arg.data(), ex.data(), m);
    if (t != 0.0) {
      for (int i = 0; i < m; ++i) arg[i] = t * lg[i];
      simd::vsincos(arg.data(), sn.data(), cs.data(), m);
    }
    double pre[3] = {0, 0, 0}, pim[3] = {0, 0, 0}, pab[3] = {0, 0, 0};
    for (int i = 0; i < m; ++i) {
      double wgt = 1.0;
      const double c = (t != 0.0) ? cs[i] : 1.0;
      const double s = (t != 0.0) ? -sn[i] : 0.0;
      for (int d = 0; d <= derivs; ++d) {
        const double v = ex[i] * wgt;
        pre[d] += v * c;
        pim[d] += v * s;
        pab[d] += std::abs(v);
        wgt *= -lg[i];
      }
    }
    for (int d = 0; d <= derivs; ++d) {
      double y = pre[d] - cre[d], s0 = re[d] + y;
      cre[d] = (s0 - re[d]) - y;
      re[d] = s0;
      y = pim[d] - cim[d];
      s0 = im[d] + y;
      cim[d] = (s0 - im[d]) - y;
      im[d] = s0;
      y = pab[d] - cab[d];
      s0 = ab[d] + y;
      cab[d] = (s0 - ab[d]) - y;
      ab[d] = s0;
    }
  }
  HeadSums out;
  for (int d = 0; d < 3; ++d) {
    out.su[d] = cplx(re[d], im[d]);
    out.ab[d] = ab[d];
  }
  return out;
}

// log |(s)_{2K+1}| together with the relative first/second derivative sums
// h1 = sum 1/|s+i| and h2 = 2 * sum over pairs 1/(|s+i| |s+j|): the bounds
// |P'| <= |P| h1 and |P''| <= |P| h2 for the Pochhammer product P.
struct PochAbs {
  double log_a0;
  double h1, h2;
};

PochAbs poch_abs(double u, double t, int K) {
  PochAbs r{0.0, 0.0, 0.0};
  for (int i = 0; i <= 2 * K; ++i) {
    const double mi = std::hypot(1.0 + u + i, t);
    r.log_a0 += std::log(mi);
    r.h2 += 2.0 * r.h1 / mi;  // pair sum update must precede the h1 update
    r.h1 += 1.0 / mi;
  }
  return r;
}

// Certified upper bounds on the truncation remainder and its first two
// s-derivatives, from |B_{2K+1}({x})| <= 4 (2K+1)! / (2pi)^{2K+1} and the
// closed forms of int_w^inf ln^m x * x^{-c-1} dx with c = sigma + 2K.
void remainder_bounds(double u, double t, int K, double w, int derivs,
                      double out[3]) {
  const double c = (1.0 + u) + 2.0 * K;
  const double L = std::log(w);
  const PochAbs pa = poch_abs(u, t, K);
  const double logpre =
      std::log(4.0) - (2.0 * K + 1.0) * std::log(2.0 * M_PI) + pa.log_a0 - c * L;
  const double i0 = 1.0 / c;
  const double i1 = L / c + 1.0 / (c * c);
  const double i2 = L * L / c + 2.0 * L / (c * c) + 2.0 / (c * c * c);
  const double floor0 = 1e-310;  // keep bounds nonzero through underflow
  out[0] = std::exp(logpre) * i0 * 1.01 + floor0;
  out[1] = out[2] = 0.0;
  if (derivs >= 1) out[1] = std::exp(logpre) * (pa.h1 * i0 + i1) * 1.01 + floor0;
  if (derivs >= 2)
    out[2] = std::exp(logpre) * (pa.h2 * i0 + 2.0 * pa.h1 * i1 + i2) * 1.01 + floor0;
}

}  // namespace

Jet2 hurwitz_em1p(double u, double t, double a, double tol, int derivs) {
  if (!(a > 0.0) || a > 1.0)
    throw std::invalid_argument("hurwitz: offset a must be in (0,1]");
  if (!(std::abs(t) <= kTMax))
    throw std::invalid_argument("hurwitz: |Im s| above backend range");
  if (!(1.0 + u >= -0.55))
    throw std::invalid_argument("hurwitz: Re s below backend range");
  if (u == 0.0 && t == 0.0) throw std::domain_error("hurwitz: pole at s = 1");
  if (derivs < 0 || derivs > 2)
    throw std::invalid_argument("hurwitz: derivs must be 0, 1 or 2");
  tol = std::max(tol, 1e-15);

  // Pick head length N and correction depth K so the remainder meets tol/4.
  int N = static_cast<int>(std::max(32.0, std::ceil(std::abs(t) / 3.0 + 8.0)));
  int K = 1;
  double rb[3] = {0, 0, 0};
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    int bestK = 1;
    for (int k = 1; k <= kMaxK; ++k) {
      double cand[3];
      remainder_bounds(u, t, k, N + a, derivs, cand);
      const double tot = cand[0] + cand[1] + cand[2];
      if (tot < best) {
        best = tot;
        bestK = k;
      }
    }
    K = bestK;
    remainder_bounds(u, t, K, N + a, derivs, rb);
    if (rb[0] + rb[1] + rb[2] <= 0.25 * tol || N >= kNCap) break;
    N = std::min(kNCap, 2 * N);
  }

  const double sig = 1.0 + u;
  // Boundary point w = N + a.  The long double sum is exact for every offset
  // with a reasonable bit length; dw bounds the loss when w must be rounded.
  const long double wl = static_cast<long double>(N) + static_cast<long double>(a);
  const bool wl_exact =
      (wl - static_cast<long double>(N)) == static_cast<long double>(a);
  const double w = static_cast<double>(wl);
  double dw = std::abs(static_cast<double>(wl - static_cast<long double>(w)));
  if (!wl_exact) dw += 2e-19 * w;
  const double L = std::log(w);

  const HeadSums hs = head_sums(N, a, u, t, derivs);
  Cert head[3];
  for (int d = 0; d <= derivs; ++d) {
    double slop = sum_slop(hs.ab[d], N) +
                  hs.ab[d] * (kEps * (4.0 + 2.0 * std::abs(sig) * L) +
                              std::abs(t) * L * kEps);
    // log-weight rounding feeds the derivative rows through (-ln(n+a))^d
    if (d >= 1) slop += d * kEps * (hs.ab[d - 1] + hs.ab[d]);
    head[d] = Cert(hs.su[d], slop);
  }

  // Boundary terms: pole part T = w^{1-s}/(s-1) and the half term w^{-s}/2.
  const cplx delta(u, t);
  const Cert ws = cpow_neg(w, sig, t);
  const Cert invd = Cert(cplx(1.0)) / Cert(delta);
  const Cert T = (w * ws) * invd;
  const Cert factor = Cert(cplx(L, 0.0)) + invd;
  Cert T1(cplx(0.0)), T2(cplx(0.0));
  if (derivs >= 1) T1 = -(T * factor);
  if (derivs >= 2) T2 = T * factor * factor + T * invd * invd;
  const CJet half{0.5 * ws, (-0.5 * L) * ws, (0.5 * L * L) * ws};

  // Correction sum: gamma_j (s)_{2j-1} w^{-s-2j+1}, j = 1..K, as jets.
  CJet bern{Cert(0.0), Cert(0.0), Cert(0.0)};
  CJet poch{Cert(1.0), Cert(0.0), Cert(0.0)};
  const auto& gam = bern_coeffs();
  int next_factor = 0;
  for (int j = 1; j <= K; ++j) {
    const int want = 2 * j - 1;
    while (next_factor < want) {
      const cplx fv(sig + next_factor, t);
      const CJet fac{Cert(fv, kEps * std::abs(fv)), Cert(cplx(1.0)),
                     Cert(cplx(0.0))};
      poch = jet_mul(poch, fac);
      ++next_factor;
    }
    const double wj = std::exp((1.0 - 2.0 * j) * L);
    if (wj == 0.0) break;
    const Cert v = wj * ws;
    const CJet vj{v, (-L) * v, (L * L) * v};
    const Cert g{cplx(gam[j], 0.0), 8.0 * kEps * std::abs(gam[j])};
    CJet term = jet_mul(poch, vj);
    term = {g * term.f, g * term.d1, g * term.d2};
    bern = jet_add(bern, term);
  }

  Jet2 out;
  out.f = head[0] + T + half.f + bern.f;
  out.f.err += rb[0];
  if (derivs >= 1) {
    out.d1 = head[1] + T1 + half.d1 + bern.d1;
    out.d1.err += rb[1];
  }
  if (derivs >= 2) {
    out.d2 = head[2] + T2 + half.d2 + bern.d2;
    out.d2.err += rb[2];
  }

  if (dw > 0.0) {
    // Sensitivity of the boundary terms to the rounding of w, via
    // d/dw [w^{1-s}/(s-1)] = -w^{-s} and crude majorants for the rest.
    const double wsm = std::exp(-sig * L);
    const double extra = (2.0 + std::abs(sig) + std::abs(t) + 2.0 * K) / w;
    out.f.err += dw * wsm * (1.0 + extra);
    if (derivs >= 1) {
      const double lam = L + 2.0 / std::abs(delta);
      out.d1.err += dw * wsm * (lam + (1.0 + L) * extra);
      if (derivs >= 2)
        out.d2.err += dw * wsm * (3.0 * lam * lam + (1.0 + L) * (1.0 + L) * extra);
    }
  }
  return out;
}

Jet2 hurwitz_em(cplx s, double a, double tol, int derivs) {
  return hurwitz_em1p(s.real() - 1.0, s.imag(), a, tol, derivs);
}

Jet2 dirichlet_L_chi4(cplx s, double tol, int derivs) {
  return dirichlet_L_chi4_1p(s.real() - 1.0, s.imag(), tol, derivs);
}

namespace detail {
const std::array<double, kMaxK + 1>& em_correction_coeffs() { return bern_coeffs(); }
}  // namespace detail

Jet2 dirichlet_L_chi4_1p(double u, double t, double tol, int derivs) {
  const Jet2 A = hurwitz_em1p(u, t, 0.25, 0.25 * tol, derivs);
  const Jet2 B = hurwitz_em1p(u, t, 0.75, 0.25 * tol, derivs);
  const double l4 = std::log(4.0);
  const Cert f4 = cpow_neg(4.0, 1.0 + u, t);
  const CJet plane{f4, (-l4) * f4, (l4 * l4) * f4};
  const CJet diff{A.f - B.f, A.d1 - B.d1, A.d2 - B.d2};
  const CJet prod = jet_mul(plane, diff);
  return {prod.f, prod.d1, prod.d2};
}

}  // namespace lvlab

#include "lvlab/zeta_em.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"

using lvlab::cplx;
using lvlab::Cert;
using lvlab::Jet2;

namespace {

// Reference values computed to 30 digits with an independent
// arbitrary-precision evaluator and frozen here.
constexpr double kZeta15 = 2.61237534868548834334856756792;
constexpr double kZeta3 = 1.20205690315959428539973816151;
constexpr double kZetaP2 = -0.937548254315843753702574094568;
constexpr double kZetaPP2 = 1.98928023429890102342085868742;
constexpr double kZetaP15 = -3.93223973743110151070638857841;
const cplx kZeta2p3i(0.798021985146275720622294500725,
                     -0.113744308052938500215913365857);
const cplx kZetaP2p3i(0.140129590117486480246305911956,
                      0.021514678279196658195869305087);
const cplx kZetaPP2p3i(-0.0687306765419778852406108061605,
                       0.0396477338410783067371733998238);
constexpr double kHur15q = 10.2130553604666007388828557102;    // zeta(1.5, 1/4)
constexpr double kHur25tq = 2.49154238551193522445412267963;   // zeta(2.5, 3/4)
const cplx kHurC(-1.61066705947539400907127683398,
                 -1.25872738096983334816777732723);            // zeta(0.5+7i, 1/4)
constexpr double kZeta105 = 20.5808443020370025903406947052;
const cplx kZeta1e4(0.800665107414076598532613446261,
                    -0.389382748900381331068718802995);        // zeta(1.5 + 1e4 i)
const cplx kZeta1e6(0.938077594219722598756706271211,
                    0.389079448260168544999877503182);         // zeta(1.5 + 1e6 i)
constexpr double kCatalan = 0.915965594177219015054603514932;  // L(2, chi_-4)
constexpr double kL15 = 0.864502653461202040362795764298;      // L(1.5, chi_-4)
constexpr double kLp15 = 0.127219934057765225653629014256;     // L'(1.5, chi_-4)
const cplx kL3p2i(1.01546220258929066762382206778,
                  0.0294575205544587217548762046409);          // L(3+2i, chi_-4)
constexpr double kGammaEuler = 0.577215664901532860606512090082;

bool close_certified(const Cert& c, cplx oracle, double extra) {
  return std::abs(c.v - oracle) <= c.err + extra;
}

}  // namespace

TEST_CASE("zeta values on the real axis match frozen references") {
  const Cert z15 = lvlab::zeta_em(cplx(1.5, 0.0), 1e-13);
  CHECK(close_certified(z15, cplx(kZeta15, 0.0), 1e-13));
  CHECK(z15.err < 1e-9);
  CHECK(z15.v.imag() == 0.0);

  const Cert z3 = lvlab::zeta_em(cplx(3.0, 0.0), 1e-13);
  CHECK(close_certified(z3, cplx(kZeta3, 0.0), 1e-13));

  const double pi = std::numbers::pi;
  const Cert z2 = lvlab::zeta_em(cplx(2.0, 0.0), 1e-14);
  CHECK(std::abs(z2.v.real() - pi * pi / 6.0) < 1e-13);
  const Cert z4 = lvlab::zeta_em(cplx(4.0, 0.0), 1e-14);
  CHECK(std::abs(z4.v.real() - pi * pi * pi * pi / 90.0) < 1e-13);

  // zeta(0) = -1/2 exercises the expansion well left of the usual range.
  const Cert z0 = lvlab::zeta_em(cplx(0.0, 0.0), 1e-13);
  CHECK(close_certified(z0, cplx(-0.5, 0.0), 1e-13));
}

TEST_CASE("zeta derivative jets match frozen references") {
  const Jet2 j2 = lvlab::zeta_em_jet(cplx(2.0, 0.0), 1e-13);
  CHECK(close_certified(j2.d1, cplx(kZetaP2, 0.0), 1e-12));
  CHECK(close_certified(j2.d2, cplx(kZetaPP2, 0.0), 1e-12));
  CHECK(j2.d1.err < 1e-8);
  CHECK(j2.d2.err < 1e-7);

  const Jet2 j15 = lvlab::zeta_em_jet(cplx(1.5, 0.0), 1e-13, 1);
  CHECK(close_certified(j15.d1, cplx(kZetaP15, 0.0), 1e-12));

  const Jet2 jc = lvlab::zeta_em_jet(cplx(2.0, 3.0), 1e-13);
  CHECK(close_certified(jc.f, kZeta2p3i, 1e-12));
  CHECK(close_certified(jc.d1, kZetaP2p3i, 1e-12));
  CHECK(close_certified(jc.d2, kZetaPP2p3i, 1e-12));
}

TEST_CASE("jet derivatives are consistent with finite differences") {
  const cplx s(2.3, 1.1);
  const double h = 1e-6;
  const Jet2 jet = lvlab::zeta_em_jet(s, 1e-14);
  const Cert up = lvlab::zeta_em(s + cplx(h, 0.0), 1e-14);
  const Cert dn = lvlab::zeta_em(s - cplx(h, 0.0), 1e-14);
  const cplx fd1 = (up.v - dn.v) / (2.0 * h);
  CHECK(std::abs(fd1 - jet.d1.v) < 1e-7);
  const cplx fd2 = (up.v - 2.0 * jet.f.v + dn.v) / (h * h);
  CHECK(std::abs(fd2 - jet.d2.v) < 1e-3);
}

TEST_CASE("hurwitz offsets match frozen references") {
  const Jet2 a = lvlab::hurwitz_em(cplx(1.5, 0.0), 0.25, 1e-13, 0);
  CHECK(close_certified(a.f, cplx(kHur15q, 0.0), 1e-12));
  const Jet2 b = lvlab::hurwitz_em(cplx(2.5, 0.0), 0.75, 1e-13, 0);
  CHECK(close_certified(b.f, cplx(kHur25tq, 0.0), 1e-12));
  const Jet2 c = lvlab::hurwitz_em(cplx(0.5, 7.0), 0.25, 1e-13, 0);
  CHECK(close_certified(c.f, kHurC, 1e-11));

  // zeta(0, a) = 1/2 - a, including an offset without a short binary form.
  const Jet2 d = lvlab::hurwitz_em(cplx(0.0, 0.0), 0.3, 1e-13, 0);
  CHECK(close_certified(d.f, cplx(0.5 - 0.3, 0.0), 1e-12));
}

TEST_CASE("zeta high on the critical strip edge matches frozen references") {
  const Jet2 a = lvlab::hurwitz_em(cplx(1.5, 1e4), 1.0, 1e-13, 0);
  CHECK(close_certified(a.f, kZeta1e4, 1e-11));
  CHECK(a.f.err < 1e-9);

  const Jet2 b = lvlab::hurwitz_em(cplx(1.5, 1e6), 1.0, 1e-13, 0);
  CHECK(close_certified(b.f, kZeta1e6, 1e-10));
  CHECK(b.f.err < 1e-6);
}

TEST_CASE("conjugation symmetry holds") {
  const Cert p = lvlab::zeta_em(cplx(1.7, 9.3), 1e-13);
  const Cert q = lvlab::zeta_em(cplx(1.7, -9.3), 1e-13);
  CHECK(std::abs(p.v - std::conj(q.v)) <= p.err + q.err + 1e-15);
}

TEST_CASE("series evaluation agrees with a direct partial-sum bracket") {
  // Independent check of sigma = 2.5: direct long double series with an
  // integral bracket for the tail.
  const double sigma = 2.5;
  const int N = 100000;
  long double head = 0.0L;
  for (int n = N; n >= 1; --n) head += powl(static_cast<long double>(n), -2.5L);
  const double tail_lo = std::pow(N + 1.0, 1.0 - sigma) / (sigma - 1.0);
  const double tail_hi = std::pow(static_cast<double>(N), 1.0 - sigma) / (sigma - 1.0);
  const Cert z = lvlab::zeta_em(cplx(sigma, 0.0), 1e-14);
  CHECK(z.v.real() + z.err >= static_cast<double>(head) + tail_lo - 1e-13);
  CHECK(z.v.real() - z.err <= static_cast<double>(head) + tail_hi + 1e-13);
}

TEST_CASE("evaluation close to the pole stays accurate") {
  // Laurent expansion: zeta(1+u) = 1/u + gamma - gamma_1 u + ...
  const Jet2 near = lvlab::hurwitz_em1p(1e-8, 0.0, 1.0, 1e-13, 0);
  CHECK(std::abs((near.f.v.real() - 1e8) - kGammaEuler) < 1e-6);

  // Far below machine epsilon the product u * zeta(1+u) pins to 1.
  const Jet2 tiny = lvlab::hurwitz_em1p(1e-115, 0.0, 1.0, 1e-13, 0);
  CHECK(std::abs(1e-115 * tiny.f.v.real() - 1.0) < 1e-10);
  CHECK(tiny.f.err / std::abs(tiny.f.v) < 1e-9);

  // log zeta(1+u) = -log u + O(u)
  const Jet2 t2 = lvlab::hurwitz_em1p(1e-50, 0.0, 1.0, 1e-13, 0);
  const Cert lg = lvlab::cert_log(t2.f);
  CHECK(std::abs(lg.v.real() - (-std::log(1e-50))) < 1e-11);
  CHECK(std::abs(lg.v.imag()) < 1e-300);

  // The relative certificate must stay tight even at extreme offsets.
  const Jet2 t3 = lvlab::hurwitz_em1p(1e-300, 0.0, 1.0, 1e-13, 0);
  CHECK(t3.f.v.real() > 9.9e299);
  CHECK(t3.f.err / t3.f.v.real() < 1e-9);
}

TEST_CASE("derivative jets near the pole scale like the Laurent terms") {
  // zeta'(1+u) = -1/u^2 + O(1), zeta''(1+u) = 2/u^3 + O(1).
  const double u = 1e-7;
  const Jet2 j = lvlab::hurwitz_em1p(u, 0.0, 1.0, 1e-13, 2);
  CHECK(std::abs(j.d1.v.real() * u * u + 1.0) < 1e-5);
  CHECK(std::abs(j.d2.v.real() * u * u * u - 2.0) < 1e-4);
}

TEST_CASE("mod-4 L function matches frozen references") {
  const Jet2 a = lvlab::dirichlet_L_chi4(cplx(2.0, 0.0), 1e-13);
  CHECK(close_certified(a.f, cplx(kCatalan, 0.0), 1e-12));
  CHECK(a.f.err < 1e-9);

  const Jet2 b = lvlab::dirichlet_L_chi4(cplx(1.5, 0.0), 1e-13, 1);
  CHECK(close_certified(b.f, cplx(kL15, 0.0), 1e-12));
  CHECK(close_certified(b.d1, cplx(kLp15, 0.0), 1e-11));

  const Jet2 c = lvlab::dirichlet_L_chi4(cplx(3.0, 2.0), 1e-13);
  CHECK(close_certified(c.f, kL3p2i, 1e-12));
}

TEST_CASE("correction coefficients match an independent evaluation") {
  // B_{2j}/(2j)! = 2 (-1)^{j+1} zeta(2j) / (2 pi)^{2j}; evaluate zeta(2j)
  // by direct long double summation with an integral tail bracket.
  const auto& tab = lvlab::detail::em_correction_coeffs();
  const long double twopi = 6.283185307179586476925286766559L;
  for (int j = 1; j <= 20; ++j) {
    long double z = 0.0L;
    for (int n = 2000; n >= 1; --n)
      z += powl(static_cast<long double>(n), -2.0L * j);
    const long double tail = powl(2000.0L, 1.0L - 2.0L * j) / (2.0L * j - 1.0L);
    const long double ref =
        2.0L * ((j % 2 == 1) ? 1.0L : -1.0L) * z / powl(twopi, 2.0L * j);
    const double rel_gap = std::abs(static_cast<double>(
        (static_cast<long double>(tab[j]) - ref) / ref));
    CHECK(rel_gap < 1e-9 + static_cast<double>(tail / z));
  }
}

TEST_CASE("input validation rejects out-of-range arguments") {
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(1.0, 0.0), 1.0, 1e-12, 0), std::domain_error);
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(2.0, 0.0), 0.0, 1e-12, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(2.0, 0.0), 1.5, 1e-12, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(2.0, 2e7), 1.0, 1e-12, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(-1.0, 0.0), 1.0, 1e-12, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::hurwitz_em(cplx(2.0, 0.0), 1.0, 1e-12, 3), std::invalid_argument);
}

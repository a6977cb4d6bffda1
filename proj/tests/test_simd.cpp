#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "lvlab/simd.hpp"

using namespace lvlab::simd;

namespace {

// long double reference for the block sum, summed serially
BlockSum naive_block(const std::vector<double>& cre, const std::vector<double>& cim,
                     const std::vector<double>& logn, double sigma, double t, bool with_im) {
  long double sre = 0, sim = 0, sabs = 0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    const long double e = std::exp(static_cast<long double>(-sigma) * logn[i]);
    const long double ar = cre[i], ai = with_im ? cim[i] : 0.0L;
    const long double c = std::cos(static_cast<long double>(t) * logn[i]);
    const long double s = std::sin(static_cast<long double>(t) * logn[i]);
    sre += e * (ar * c + ai * s);
    sim += e * (ai * c - ar * s);
    sabs += e * std::sqrt(ar * ar + ai * ai);
  }
  return {static_cast<double>(sre), static_cast<double>(sim), static_cast<double>(sabs)};
}

}  // namespace

TEST_CASE("vexp matches std::exp across the clamped range") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-700.0, 700.0);
  std::vector<double> x(1003), out(1003);
  for (auto& v : x) v = uni(rng);
  x[0] = 0.0;
  x[1] = -745.0;  // below clamp
  x[2] = 710.0;   // above clamp

  for (auto mode : {Mode::scalar, Mode::avx2}) {
    if (mode == Mode::avx2 && !avx2_impl::available()) continue;
    force(mode);
    vexp(x.data(), out.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xc = std::min(708.0, std::max(-708.0, x[i]));
      const double ref = std::exp(xc);
      CHECK(std::abs(out[i] - ref) <= 5e-15 * ref + 1e-300);
    }
  }
  force(Mode::scalar);
}

TEST_CASE("vsincos matches std across small and large arguments") {
  std::mt19937_64 rng(12);
  std::vector<double> x;
  std::uniform_real_distribution<double> small(-20.0, 20.0), mid(-1e6, 1e6);
  for (int i = 0; i < 400; ++i) x.push_back(small(rng));
  for (int i = 0; i < 400; ++i) x.push_back(mid(rng));
  // phases near the top of the supported range (tau ~ 1e12 times log n)
  std::uniform_real_distribution<double> big(1e10, 2e13);
  for (int i = 0; i < 200; ++i) x.push_back(big(rng) * (i % 2 ? 1 : -1));
  x.push_back(0.0);

  std::vector<double> s(x.size()), c(x.size());
  for (auto mode : {Mode::scalar, Mode::avx2}) {
    if (mode == Mode::avx2 && !avx2_impl::available()) continue;
    force(mode);
    vsincos(x.data(), s.data(), c.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double tol = 1e-13 + 6e-24 * std::abs(x[i]);
      CHECK(std::abs(s[i] - std::sin(x[i])) <= tol);
      CHECK(std::abs(c[i] - std::cos(x[i])) <= tol);
      CHECK(std::abs(s[i] * s[i] + c[i] * c[i] - 1.0) <= 1e-13);
    }
  }
  force(Mode::scalar);
}

TEST_CASE("dirichlet_block: backends agree with each other and a long double oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const std::size_t n = 10007;  // crosses chunk boundaries, odd remainder
  std::vector<double> cre(n), cim(n), logn(n);
  for (std::size_t i = 0; i < n; ++i) {
    cre[i] = coef(rng);
    cim[i] = coef(rng);
    logn[i] = std::log(static_cast<double>(i + 2));
  }

  for (const double t : {0.0, 17.25, 1.0e7}) {
    for (const bool with_im : {true, false}) {
      const double sigma = 1.25;
      const BlockSum ref = naive_block(cre, cim, logn, sigma, t, with_im);
      const double tol = 1e-12 * (std::abs(ref.abs) + 1.0) + 1e-13 * (1.0 + std::abs(t));

      force(Mode::scalar);
      const BlockSum a =
          dirichlet_block(cre.data(), with_im ? cim.data() : nullptr, logn.data(), n, sigma, t);
      CHECK(std::abs(a.re - ref.re) <= tol);
      CHECK(std::abs(a.im - ref.im) <= tol);
      CHECK(std::abs(a.abs - ref.abs) <= tol);

      if (avx2_impl::available()) {
        force(Mode::avx2);
        const BlockSum b =
            dirichlet_block(cre.data(), with_im ? cim.data() : nullptr, logn.data(), n, sigma, t);
        CHECK(std::abs(b.re - a.re) <= tol);
        CHECK(std::abs(b.im - a.im) <= tol);
        CHECK(std::abs(b.abs - a.abs) <= tol);
      }
    }
  }
  force(Mode::scalar);
}

TEST_CASE("weighted_sq_sum: backends agree with a long double oracle") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const std::size_t n = 8193;
  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = coef(rng);
    w[i] = std::abs(coef(rng));
  }
  long double refw = 0, ref1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    refw += static_cast<long double>(w[i]) * x[i] * x[i];
    ref1 += static_cast<long double>(x[i]) * x[i];
  }

  for (auto mode : {Mode::scalar, Mode::avx2}) {
    if (mode == Mode::avx2 && !avx2_impl::available()) continue;
    force(mode);
    CHECK(std::abs(weighted_sq_sum(x.data(), w.data(), n) - static_cast<double>(refw)) <=
          1e-10 * static_cast<double>(refw));
    CHECK(std::abs(weighted_sq_sum(x.data(), nullptr, n) - static_cast<double>(ref1)) <=
          1e-10 * static_cast<double>(ref1));
  }
  force(Mode::scalar);
}

TEST_CASE("grid_scan: backends find identical hit sets") {
  // small synthetic target: phases of tau* = 1234.5, so a hit must appear
  // when the grid walks over tau*
  const std::vector<double> logp = {std::log(2.), std::log(3.), std::log(5.),
                                    std::log(7.), std::log(11.)};
  const double taustar = 1234.5;
  std::vector<double> tre(logp.size()), tim(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) {
    tre[i] = std::cos(taustar * logp[i]);
    tim[i] = -std::sin(taustar * logp[i]);
  }
  const double step = 1e-4, tau0 = 1230.0, eps1 = 0.05;
  const std::size_t count = 100'000;

  force(Mode::scalar);
  std::vector<std::uint32_t> hits_s;
  std::vector<double> q_s(count);
  grid_scan(logp.data(), tre.data(), tim.data(), logp.size(), tau0, step, count, eps1, hits_s,
            q_s.data());
  REQUIRE(!hits_s.empty());
  // the step landing nearest tau* must be a hit
  const auto jstar = static_cast<std::uint32_t>(std::lround((taustar - tau0) / step));
  CHECK(std::find(hits_s.begin(), hits_s.end(), jstar) != hits_s.end());
  CHECK(q_s[jstar] <= 3e-3);

  if (avx2_impl::available()) {
    force(Mode::avx2);
    std::vector<std::uint32_t> hits_v;
    std::vector<double> q_v(count);
    grid_scan(logp.data(), tre.data(), tim.data(), logp.size(), tau0, step, count, eps1, hits_v,
              q_v.data());
    CHECK(hits_v == hits_s);
    for (std::size_t j = 0; j < count; ++j) CHECK(std::abs(q_v[j] - q_s[j]) <= 1e-9);
  }
  force(Mode::scalar);
}

TEST_CASE("runtime dispatch") {
  CHECK((mode_name(active()) == std::string("scalar") ||
         mode_name(active()) == std::string("avx2")));
  force(Mode::scalar);
  CHECK(active() == Mode::scalar);
  if (avx2_impl::available()) {
    force(Mode::avx2);
    CHECK(active() == Mode::avx2);
  }
  force(Mode::scalar);
}

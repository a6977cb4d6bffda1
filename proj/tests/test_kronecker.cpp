#include "lvlab/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lvlab/cassels.hpp"
#include "lvlab/catalog.hpp"
#include "lvlab/primes.hpp"
#include "lvlab/simd.hpp"

using lvlab::arc_measure_fraction;
using lvlab::cplx;
using lvlab::default_grid_step;
using lvlab::density_estimate;
using lvlab::find_tau_grid;
using lvlab::find_tau_lattice;
using lvlab::power_error_bound;
using lvlab::refine_shift;
using lvlab::shift_quality;
using lvlab::ShiftMethod;
using lvlab::ShiftSolution;
using lvlab::ShiftTarget;

namespace {

// Independent long-double evaluation of the worst-case chord distance; the
// oracle for every self-verification check below.
double oracle_quality(const ShiftTarget& t, double tau) {
  long double worst = 0.0L;
  for (std::uint32_t p : t.primes) {
    const long double ang =
        -static_cast<long double>(tau) * std::log(static_cast<long double>(p));
    const cplx chi = t.targets.at(p);
    const long double dre = std::cos(ang) - static_cast<long double>(chi.real());
    const long double dim = std::sin(ang) - static_cast<long double>(chi.imag());
    const long double d = std::sqrt(dre * dre + dim * dim);
    if (d > worst) worst = d;
  }
  return static_cast<double>(worst);
}

ShiftTarget random_target(const std::vector<std::uint32_t>& primes,
                          double epsilon1, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(-3.14159265358979,
                                                3.14159265358979);
  ShiftTarget t;
  t.primes = primes;
  for (std::uint32_t p : primes) {
    const double phi = uphase(rng);
    t.targets[p] = cplx(std::cos(phi), std::sin(phi));
  }
  t.epsilon1 = epsilon1;
  return t;
}

constexpr double kPiOverLog2 = 4.53236014182719380962768294572;

}  // namespace

TEST_CASE("target validation rejects malformed instances") {
  ShiftTarget good = random_target({2, 3, 5}, 0.3, 1);
  CHECK_NOTHROW(lvlab::validate_target(good));

  ShiftTarget t = good;
  t.primes.clear();
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);

  t = good;
  t.primes.push_back(3);
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);

  t = good;
  t.primes.push_back(9);
  t.targets[9] = cplx(1.0, 0.0);
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);

  t = good;
  t.primes.push_back(7);  // no target value assigned
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);

  t = good;
  t.targets[3] = cplx(0.5, 0.0);  // not unimodular
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);

  t = good;
  t.epsilon1 = 0.0;
  CHECK_THROWS_AS(lvlab::validate_target(t), std::invalid_argument);
}

TEST_CASE("shift quality matches the independent oracle") {
  const ShiftTarget t = random_target({2, 3, 5, 7, 11}, 0.3, 7);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> utau(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double tau = utau(rng);
    // the angle tau*log(p) is only known to |tau|*eps in double precision,
    // so the tolerance carries that scale
    CHECK(std::fabs(shift_quality(t, tau) - oracle_quality(t, tau)) <=
          1e-12 + std::fabs(tau) * 5e-16);
  }
}

TEST_CASE("an all-ones target is solved by tau zero") {
  ShiftTarget t;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    t.primes.push_back(p);
    t.targets[p] = cplx(1.0, 0.0);
  }
  t.epsilon1 = 0.1;

  const auto sols = find_tau_grid(t, 10.0);
  REQUIRE(!sols.empty());
  CHECK(sols.front().tau == 0.0);
  CHECK(sols.front().quality == 0.0);

  const auto lat = find_tau_lattice(t, 10.0);
  REQUIRE(lat.solution.has_value());
  CHECK(lat.solution->quality <= 1e-12);
  CHECK(std::fabs(lat.solution->tau) <= 10.0);
}

TEST_CASE("grid plus refinement recovers the sign flip at two to a billionth") {
  ShiftTarget t;
  t.primes = {2};
  t.targets[2] = cplx(-1.0, 0.0);
  t.epsilon1 = 0.5;

  const double step = default_grid_step(t);
  CHECK(step == doctest::Approx(0.5 / (4.0 * std::log(2.0))).epsilon(1e-15));

  const auto sols = find_tau_grid(t, 10.0, step);
  REQUIRE(!sols.empty());
  // every hit self-verifies against the independent oracle
  for (const auto& s : sols) {
    CHECK(s.method == ShiftMethod::grid);
    CHECK(s.quality < t.epsilon1);
    CHECK(oracle_quality(t, s.tau) < t.epsilon1);
    CHECK(s.quality == doctest::Approx(oracle_quality(t, s.tau)).epsilon(1e-12));
  }
  const auto best = *std::min_element(
      sols.begin(), sols.end(),
      [](const ShiftSolution& a, const ShiftSolution& b) {
        return a.quality < b.quality;
      });
  const auto refined = refine_shift(t, best.tau, 2.0 * step);
  CHECK(refined.quality < 1e-12);
  CHECK(std::fabs(refined.tau - kPiOverLog2) < 1e-9);
}

TEST_CASE("grid preconditions enforce the Lipschitz step and the domain cap") {
  ShiftTarget t = random_target({2, 3}, 0.3, 2);
  const double lim = t.epsilon1 / std::log(3.0);
  CHECK_THROWS_AS(find_tau_grid(t, 100.0, lim * 1.01), std::invalid_argument);
  CHECK_NOTHROW(find_tau_grid(t, 100.0, lim * 0.99));
  CHECK_THROWS_AS(find_tau_grid(t, 2e12, lim * 0.5), std::invalid_argument);
  CHECK_THROWS_AS(find_tau_grid(t, 1e12, 1e-4), std::invalid_argument);  // 2^32
  CHECK_THROWS_AS(find_tau_grid(t, -1.0, lim * 0.5), std::invalid_argument);
}

TEST_CASE("random two-prime targets have verified grid hits") {
  const ShiftTarget t = random_target({2, 3}, 0.3, 5);
  const auto sols = find_tau_grid(t, 1e4);
  REQUIRE(!sols.empty());
  for (const auto& s : sols) {
    CHECK(s.quality < 0.3);
    CHECK(oracle_quality(t, s.tau) < 0.3);
    CHECK(s.tau >= 0.0);
    CHECK(s.tau <= 1e4);
  }
}

TEST_CASE("grid hits reflect onto the conjugated target") {
  const ShiftTarget t = random_target({2, 3, 5}, 0.35, 9);
  ShiftTarget conj = t;
  for (auto& [p, chi] : conj.targets) chi = std::conj(chi);

  // pointwise: conjugating the target mirrors the quality profile in tau
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> utau(-1e4, 1e4);
  for (int i = 0; i < 300; ++i) {
    const double tau = utau(rng);
    CHECK(shift_quality(conj, tau) ==
          doctest::Approx(shift_quality(t, -tau)).epsilon(1e-13));
  }

  // and therefore every hit of one target reflects to a hit of the other
  const auto sols = find_tau_grid(t, 2e3);
  REQUIRE(!sols.empty());
  for (const auto& s : sols) CHECK(shift_quality(conj, -s.tau) < t.epsilon1);
  const auto csols = find_tau_grid(conj, 2e3);
  REQUIRE(!csols.empty());
  for (const auto& s : csols) CHECK(shift_quality(t, -s.tau) < conj.epsilon1);

  // on the exactly negated grid the hit sets agree index for index
  const double step = default_grid_step(t);
  std::vector<double> lnp, tre_o, tim_o, tre_c, tim_c;
  for (std::uint32_t p : t.primes) {
    lnp.push_back(std::log(static_cast<double>(p)));
    tre_o.push_back(t.targets.at(p).real());
    tim_o.push_back(t.targets.at(p).imag());
    tre_c.push_back(conj.targets.at(p).real());
    tim_c.push_back(conj.targets.at(p).imag());
  }
  std::vector<std::uint32_t> hits_o, hits_c;
  lvlab::simd::grid_scan(lnp.data(), tre_o.data(), tim_o.data(), lnp.size(),
                         0.0, step, 30000, t.epsilon1, hits_o);
  lvlab::simd::grid_scan(lnp.data(), tre_c.data(), tim_c.data(), lnp.size(),
                         0.0, -step, 30000, t.epsilon1, hits_c);
  CHECK(hits_o == hits_c);
  CHECK(!hits_o.empty());
}

TEST_CASE("single-prime lattice search lands on the closed-form shift") {
  ShiftTarget t;
  t.primes = {2};
  t.targets[2] = cplx(-1.0, 0.0);
  t.epsilon1 = 0.5;

  const auto out = find_tau_lattice(t, 10.0);
  REQUIRE(out.solution.has_value());
  CHECK(out.solution->method == ShiftMethod::lattice);
  CHECK(out.solution->quality < 1e-12);
  CHECK(std::fabs(std::fabs(out.solution->tau) - kPiOverLog2) < 1e-9);

  // window shorter than the first solution: honest not-found, and the best
  // quality matches an exhaustive long-double sweep of the window
  ShiftTarget tight = t;
  tight.epsilon1 = 0.05;
  const auto miss = find_tau_lattice(tight, 2.0);
  CHECK(!miss.solution.has_value());
  double best = 1e300;
  for (double tau = -2.0; tau <= 2.0; tau += 1e-5)
    best = std::min(best, oracle_quality(tight, tau));
  CHECK(miss.best_quality <= best + 1e-6);
  CHECK(miss.best_quality >= best - 1e-6);
  CHECK(std::fabs(miss.best_tau) <= 2.0);
}

TEST_CASE("lattice search is at least as sharp as the grid over one window") {
  const ShiftTarget t = random_target({2, 3, 5}, 0.2, 42);
  const auto lat = find_tau_lattice(t, 100.0);
  REQUIRE(lat.solution.has_value());
  CHECK(std::fabs(lat.solution->tau) <= 100.0);
  CHECK(lat.solution->quality < 0.2);
  CHECK(oracle_quality(t, lat.solution->tau) < 0.2);

  // grid oracle over the same height: the lattice result must not be worse
  const double step = default_grid_step(t);
  double grid_best = 1e300;
  for (double tau = 0.0; tau <= 100.0; tau += step)
    grid_best = std::min(grid_best, oracle_quality(t, tau));
  CHECK(lat.best_quality <= grid_best);
}

TEST_CASE("ten realized construction twists admit a verified shift") {
  const auto ent = lvlab::builtin("zeta");
  const auto& zeta = std::get<lvlab::LFunctionEntry>(ent);
  const auto cfg = lvlab::inv_k_weighted_config(zeta.source, 0, cplx(0.4, 0.3),
                                                0.5, 50, 1.0, 0.05, 3);
  const auto run = lvlab::run_cassels(cfg);

  ShiftTarget t;
  for (const auto& [p, chi] : run.state.chi) {
    if (p <= 50 || t.primes.size() >= 10) continue;
    t.primes.push_back(static_cast<std::uint32_t>(p));
    t.targets[static_cast<std::uint32_t>(p)] = chi;
  }
  REQUIRE(t.primes.size() == 10);
  t.epsilon1 = 0.25;

  const auto out = find_tau_lattice(t, 1e12);
  REQUIRE(out.solution.has_value());
  CHECK(std::fabs(out.solution->tau) <= 1e12);
  CHECK(out.solution->quality < 0.25);
  CHECK(oracle_quality(t, out.solution->tau) < 0.25);

  // determinism: the search is a pure function of the target
  const auto again = find_tau_lattice(t, 1e12);
  REQUIRE(again.solution.has_value());
  CHECK(again.solution->tau == out.solution->tau);
  CHECK(again.best_quality == out.best_quality);
}

TEST_CASE("lattice preconditions bound the prime count and the domain") {
  const ShiftTarget t = random_target({2, 3}, 0.3, 3);
  CHECK_THROWS_AS(find_tau_lattice(t, 2e12), std::invalid_argument);
  CHECK_THROWS_AS(find_tau_lattice(t, 0.0), std::invalid_argument);

  std::vector<std::uint32_t> many;
  for (std::uint64_t p : lvlab::prime_sieve(200)) {
    if (many.size() >= 41) break;
    many.push_back(static_cast<std::uint32_t>(p));
  }
  REQUIRE(many.size() == 41);
  const ShiftTarget big = random_target(many, 1.5, 4);
  CHECK_THROWS_AS(find_tau_lattice(big, 1e6), std::invalid_argument);
}

TEST_CASE("power error bound is k epsilon and transfers to power twists") {
  CHECK(power_error_bound(0.25, 3, 5) == doctest::Approx(0.75));
  CHECK(power_error_bound(0.1, 1, 1) == doctest::Approx(0.1));
  CHECK_THROWS_AS(power_error_bound(0.1, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(power_error_bound(0.1, 6, 5), std::invalid_argument);
  CHECK_THROWS_AS(power_error_bound(-0.1, 1, 5), std::invalid_argument);

  // property: a first-power shift within eps1 keeps every k-th power twist
  // within k*eps1 (1000 random samples)
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> utau(-1e6, 1e6);
  std::uniform_real_distribution<double> uphase(-3.14159265358979,
                                                3.14159265358979);
  const std::uint32_t primes[] = {2, 3, 5, 7, 11, 13};
  const double eps1 = 0.3;
  const double max_angle = 2.0 * std::asin(eps1 / 2.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint32_t p = primes[rng() % 6];
    const double tau = utau(rng);
    // pick a target within the eps1 arc of p^{-i tau}
    const double delta =
        max_angle * 0.999 * (uphase(rng) / 3.14159265358979);
    const double base = -tau * std::log(static_cast<double>(p));
    const cplx chi(std::cos(base + delta), std::sin(base + delta));
    const double first = std::abs(cplx(std::cos(base), std::sin(base)) - chi);
    REQUIRE(first < eps1);
    for (std::uint64_t k = 1; k <= 5; ++k) {
      const cplx pk(std::cos(k * base), std::sin(k * base));
      const cplx chik = std::pow(chi, static_cast<double>(k));
      CHECK(std::abs(pk - chik) < power_error_bound(eps1, k, 5));
      ++checked;
    }
  }
  CHECK(checked == 5000);
}

TEST_CASE("density predictions match the closed-form arc measures") {
  CHECK(arc_measure_fraction(0.3) ==
        doctest::Approx(0.09585473954087375).epsilon(1e-12));
  CHECK(arc_measure_fraction(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(arc_measure_fraction(2.5) == doctest::Approx(1.0).epsilon(1e-15));

  // single prime: empirical density within the confidence interval of the
  // exact arc measure
  ShiftTarget t;
  t.primes = {2};
  t.targets[2] = cplx(-1.0, 0.0);
  t.epsilon1 = 0.3;
  const auto est = density_estimate(t, 1e5, 100000, 0);
  CHECK(est.predicted == doctest::Approx(0.09585473954087375).epsilon(1e-12));
  CHECK(est.ci_lo <= est.predicted);
  CHECK(est.predicted <= est.ci_hi);
  CHECK(est.ci_lo <= est.empirical);
  CHECK(est.empirical <= est.ci_hi);

  // vacuous constraint: every sample qualifies
  ShiftTarget loose = t;
  loose.epsilon1 = 2.5;
  const auto full = density_estimate(loose, 1e5, 1000, 0);
  CHECK(full.empirical == 1.0);
  CHECK(full.predicted == 1.0);
  CHECK(full.hits == 1000);
}

TEST_CASE("four-prime density sits within a factor two of the product") {
  const ShiftTarget t = random_target({2, 3, 5, 7}, 0.5, 3);
  const auto est = density_estimate(t, 1e5, 10000, 0);
  CHECK(est.samples == 10000);
  CHECK(est.predicted ==
        doctest::Approx(6.69585004340685e-4).epsilon(1e-10));
  CHECK(est.empirical >= 0.5 * est.predicted);
  CHECK(est.empirical <= 2.0 * est.predicted);

  // determinism of the sample path
  const auto again = density_estimate(t, 1e5, 10000, 0);
  CHECK(again.hits == est.hits);
  CHECK(again.empirical == est.empirical);
}

TEST_CASE("density is monotone in epsilon on a fixed sample path") {
  ShiftTarget t = random_target({2, 3}, 0.05, 21);
  double prev = -1.0;
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.2, 2.0}) {
    t.epsilon1 = eps;
    const auto est = density_estimate(t, 1e4, 2000, 77);
    CHECK(est.empirical >= prev);
    prev = est.empirical;
  }
  CHECK(prev == 1.0);  // eps = 2 accepts everything

  const auto bad = random_target({2, 3}, 0.3, 21);
  CHECK_THROWS_AS(density_estimate(bad, 1e4, 999, 0), std::invalid_argument);
  CHECK_THROWS_AS(density_estimate(bad, -1.0, 2000, 0), std::invalid_argument);
}

#include "lvlab/primezeta.hpp"

#include <cmath>

#include "doctest.h"

using lvlab::Jet2;
using lvlab::RInt;

namespace {

// Reference values computed to 30 digits with an independent
// arbitrary-precision evaluator and frozen here.
constexpr double kP15 = 0.849562683621566446350893065918;    // P(1.5)
constexpr double kP2 = 0.452247420041065498506543364832;     // P(2)
constexpr double kP3 = 0.174762639299443536423113314666;     // P(3)
constexpr double kPp15 = -1.29571075479160755372288832465;   // P'(1.5)
constexpr double kPpp15 = 3.39503426710922291740481601728;   // P''(1.5)
constexpr double kPnear = 6.59336813335667524659233449816;   // P(1 + 1e-3)
constexpr double kPpnear = -998.669967714838545334433230891;
constexpr double kPppnear = 999997.455116620874369553197148;
constexpr double kPtiny = 8.89475516537603662807912056713;   // P(1.0001)
// Mertens constant minus Euler's constant: the limit of P(1+u) + log u.
constexpr double kMertensGap = -0.315718452053890076851085251473;

const std::uint32_t kPrimes100[] = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                    29, 31, 37, 41, 43, 47, 53, 59, 61,
                                    67, 71, 73, 79, 83, 89, 97};

double check_jet_value(double u, int derivs, double oracle, double extra) {
  const Jet2 jet = lvlab::prime_zeta_jet(u, derivs, 1e-13);
  const lvlab::Cert& c = derivs == 0 ? jet.f : (derivs == 1 ? jet.d1 : jet.d2);
  CHECK(std::abs(c.v.real() - oracle) <= c.err + extra);
  CHECK(std::abs(c.v.imag()) == 0.0);
  return c.err;
}

}  // namespace

TEST_CASE("prime zeta values match frozen references") {
  CHECK(check_jet_value(0.5, 0, kP15, 1e-13) < 1e-9);
  CHECK(check_jet_value(1.0, 0, kP2, 1e-13) < 1e-9);
  CHECK(check_jet_value(2.0, 0, kP3, 1e-13) < 1e-9);
  CHECK(check_jet_value(1e-3, 0, kPnear, 1e-12) < 1e-8);
  CHECK(check_jet_value(1e-4, 0, kPtiny, 1e-12) < 1e-8);
}

TEST_CASE("prime zeta derivatives match frozen references") {
  CHECK(check_jet_value(0.5, 1, kPp15, 1e-12) < 1e-8);
  CHECK(check_jet_value(0.5, 2, kPpp15, 1e-11) < 1e-7);
  CHECK(check_jet_value(1e-3, 1, kPpnear, 1e-8) < 1e-5);
  CHECK(check_jet_value(1e-3, 2, kPppnear, 1e-5) < 1e-2);
}

TEST_CASE("prime zeta near the pole approaches the Mertens gap") {
  const Jet2 jet = lvlab::prime_zeta_jet(1e-40, 0, 1e-13);
  const double shifted = jet.f.v.real() + std::log(1e-40);
  CHECK(std::abs(shifted - kMertensGap) <= jet.f.err + 1e-11);

  // Extreme offsets stay finite and keep a tight relative certificate.
  const Jet2 deep = lvlab::prime_zeta_jet(1e-300, 0, 1e-13);
  CHECK(deep.f.v.real() > 690.0);
  CHECK(deep.f.v.real() < 692.0);
  CHECK(deep.f.err < 1e-9);
}

TEST_CASE("sieved prime sums match a hand-listed oracle") {
  for (int m = 0; m <= 2; ++m) {
    for (double u : {0.0, 0.5, 1.2}) {
      long double want = 0.0L;
      for (std::uint32_t p : kPrimes100) {
        const long double lp = logl(static_cast<long double>(p));
        long double w = 1.0L;
        for (int j = 0; j < m; ++j) w *= lp;
        want += w * expl(-static_cast<long double>(u) * lp) / p;
      }
      const RInt got = lvlab::prime_log_power_sum(100.0, u, m);
      CHECK(got.lo <= static_cast<double>(want) + 1e-15);
      CHECK(got.hi >= static_cast<double>(want) - 1e-15);
      CHECK(got.width() < 1e-9);
      CHECK(std::abs(got.mid() - static_cast<double>(want)) < 1e-13);
    }
  }
}

TEST_CASE("sieved sums respect inclusion and boundary membership") {
  const RInt small = lvlab::prime_log_power_sum(96.9, 0.5, 0);
  const RInt big = lvlab::prime_log_power_sum(97.0, 0.5, 0);
  const double p97 = std::pow(97.0, -1.5);
  CHECK(big.mid() - small.mid() == doctest::Approx(p97).epsilon(1e-12));
  CHECK(lvlab::prime_log_power_sum(1.9, 0.5, 0).width() == 0.0);
}

TEST_CASE("sieve route and series route agree across a tail split") {
  // The two computations share no machinery: one sieves and sums, the other
  // goes through the alternating-series expansion of log zeta.
  const Jet2 full = lvlab::prime_zeta_jet(0.5, 0, 1e-13);
  const RInt head = lvlab::prime_log_power_sum(1e7, 0.5, 0);
  const double gap = full.f.v.real() - head.mid();
  CHECK(gap > 1e-5);   // the tail past 1e7 is genuinely there
  CHECK(gap < 1e-4);   // and is as small as the prime counts say
}

TEST_CASE("tail enclosures are positive, nested and consistent") {
  const RInt t50 = lvlab::prime_tail(50.0, 0.5, 0, 1e-13);
  const RInt t500 = lvlab::prime_tail(500.0, 0.5, 0, 1e-13);
  CHECK(t50.certainly_positive());
  CHECK(t500.certainly_positive());
  CHECK(lvlab::certainly_le(t500, t50));

  // head + tail reproduces the full series value
  const Jet2 full = lvlab::prime_zeta_jet(0.5, 0, 1e-13);
  const RInt head = lvlab::prime_log_power_sum(50.0, 0.5, 0);
  const RInt sum = head + t50;
  CHECK(sum.lo <= full.f.v.real() + full.f.err);
  CHECK(sum.hi >= full.f.v.real() - full.f.err);

  for (int m : {1, 2}) {
    const RInt t = lvlab::prime_tail(100.0, 0.3, m, 1e-12);
    CHECK(t.certainly_positive());
    CHECK(t.width() < 1e-6);
  }
}

TEST_CASE("input validation rejects out-of-range arguments") {
  CHECK_THROWS_AS(lvlab::prime_zeta_jet(0.0, 0, 1e-12), std::domain_error);
  CHECK_THROWS_AS(lvlab::prime_zeta_jet(-0.5, 0, 1e-12), std::domain_error);
  CHECK_THROWS_AS(lvlab::prime_zeta_jet(1e-310, 0, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::prime_zeta_jet(1e-150, 1, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::prime_zeta_jet(1e-90, 2, 1e-12), std::invalid_argument);
  CHECK_NOTHROW(lvlab::prime_zeta_jet(1e-99, 1, 1e-12));
  CHECK_THROWS_AS(lvlab::prime_log_power_sum(100.0, -0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::prime_log_power_sum(2e9, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(lvlab::prime_log_power_sum(100.0, 0.5, 3), std::invalid_argument);
}

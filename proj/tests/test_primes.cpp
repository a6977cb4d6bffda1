#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lvlab/primes.hpp"

using namespace lvlab;

namespace {

// independent single-block sieve used as the oracle
std::vector<std::uint32_t> naive_sieve(std::uint32_t limit) {
  std::vector<bool> comp(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t m = static_cast<std::uint64_t>(i) * i; m <= limit; m += i)
      comp[static_cast<std::size_t>(m)] = true;
  }
  return out;
}

}  // namespace

TEST_CASE("prime_sieve matches the naive oracle and known prime counts") {
  CHECK(prime_sieve(1).empty());
  CHECK(prime_sieve(2) == std::vector<std::uint32_t>{2});
  CHECK(prime_sieve(10).size() == 4);
  CHECK(prime_sieve(100).size() == 25);
  CHECK(prime_sieve(1000).size() == 168);

  const auto got = prime_sieve(3'000'000);  // spans several segments
  CHECK(got == naive_sieve(3'000'000));
  CHECK(prime_sieve(1'000'000).size() == 78498);
}

TEST_CASE("primes_in agrees with filtering the full sieve") {
  const auto all = prime_sieve(2'200'000);
  const std::uint64_t lo = 1'048'000, hi = 2'199'000;  // crosses a segment edge
  std::vector<std::uint32_t> expect;
  for (auto p : all)
    if (p > lo && p <= hi) expect.push_back(p);
  CHECK(primes_in(lo, hi) == expect);
  CHECK(primes_in(0, 10) == std::vector<std::uint32_t>{2, 3, 5, 7});
  CHECK(primes_in(7, 7).empty());
  CHECK(primes_in(89, 97) == std::vector<std::uint32_t>{97});
}

TEST_CASE("prime_powers_between lists every prime power once, sorted") {
  const auto pp = prime_powers_between(1, 100);
  // 25 primes plus 4,8,16,32,64, 9,27,81, 25, 49
  CHECK(pp.size() == 35);
  CHECK(std::is_sorted(pp.begin(), pp.end(),
                       [](const PrimePower& a, const PrimePower& b) { return a.pk < b.pk; }));
  for (const auto& e : pp) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e.k; ++i) v *= e.p;
    CHECK(v == e.pk);
    CHECK(is_prime_u64(e.p));
    CHECK(e.pk > 1);
    CHECK(e.pk <= 100);
  }
  // half-open (lo, hi]: 4 = 2^2 is excluded, 9 = 3^2 is included
  const auto pp2 = prime_powers_between(4, 9);
  REQUIRE(pp2.size() == 4);
  CHECK(pp2[0].pk == 5);
  CHECK(pp2[1].pk == 7);
  CHECK(pp2[2].pk == 8);
  CHECK(pp2[2].k == 3);
  CHECK(pp2[3].pk == 9);
  CHECK(pp2[3].k == 2);
}

TEST_CASE("is_prime_u64 spot checks") {
  CHECK(!is_prime_u64(0));
  CHECK(!is_prime_u64(1));
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(999'983));
  CHECK(!is_prime_u64(999'983ULL * 999'983ULL));
  CHECK(is_prime_u64(4'294'967'311ULL));  // first prime above 2^32
}

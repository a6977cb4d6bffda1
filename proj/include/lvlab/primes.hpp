#pragma once

#include <cstdint>
#include <vector>

namespace lvlab {

// Segmented sieve of Eratosthenes (odd-only bitmap, 2^20-entry segments).
// Returns all primes <= limit in increasing order.  limit must be in [2, 1e9].
std::vector<std::uint32_t> prime_sieve(std::uint64_t limit);

// Primes in (lo, hi], same segment machinery, for block iteration without
// materializing the full range from 2.
std::vector<std::uint32_t> primes_in(std::uint64_t lo, std::uint64_t hi);

// All prime powers p^k in (lo, hi], k >= 1, as (p, k, p^k) triples sorted
// by p^k.
struct PrimePower {
  std::uint32_t p;
  std::uint32_t k;
  std::uint64_t pk;
};
std::vector<PrimePower> prime_powers_between(std::uint64_t lo, std::uint64_t hi);

bool is_prime_u64(std::uint64_t n);  // trial division; fine for n <= ~1e12 in tests

}  // namespace lvlab

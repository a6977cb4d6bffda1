#include "lvlab/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace lvlab {

namespace {

constexpr std::uint64_t kSegment = 1u << 20;

// odd-only base sieve up to sqrt(limit)
std::vector<std::uint32_t> base_primes(std::uint64_t limit) {
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  std::vector<bool> comp(root / 2 + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (comp[i / 2]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t m = i * i; m <= root; m += 2 * i) comp[m / 2] = true;
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> prime_sieve(std::uint64_t limit) {
  if (limit > 1'000'000'000ULL) throw std::invalid_argument("prime_sieve: limit above 1e9");
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  primes.reserve(limit > 100 ? static_cast<std::size_t>(
                                   static_cast<double>(limit) / (std::log(static_cast<double>(limit)) - 1.1))
                             : 32);
  primes.push_back(2);
  if (limit < 3) return primes;

  const auto base = base_primes(limit);
  std::vector<std::uint8_t> seg(kSegment / 2);
  for (std::uint64_t lo = 3; lo <= limit; lo += kSegment) {
    const std::uint64_t hi = std::min(lo + kSegment - 1, limit);
    std::memset(seg.data(), 0, seg.size());
    for (const std::uint32_t p : base) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, ((lo + p - 1) / p) * static_cast<std::uint64_t>(p));
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= hi; m += 2ULL * p) seg[(m - lo) / 2] = 1;
    }
    for (std::uint64_t v = lo; v <= hi; v += 2)
      if (!seg[(v - lo) / 2]) primes.push_back(static_cast<std::uint32_t>(v));
  }
  return primes;
}

std::vector<std::uint32_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  if (hi > 1'000'000'000ULL) throw std::invalid_argument("primes_in: bound above 1e9");
  std::vector<std::uint32_t> out;
  if (hi <= lo || hi < 2) return out;
  auto base = base_primes(hi);
  base.insert(base.begin(), 2);  // this sieve walks every residue, not odds only
  std::vector<std::uint8_t> seg;
  for (std::uint64_t slo = lo + 1; slo <= hi; slo += kSegment) {
    const std::uint64_t shi = std::min(slo + kSegment - 1, hi);
    seg.assign(static_cast<std::size_t>(shi - slo + 1), 0);
    for (const std::uint32_t p : base) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > shi) break;
      for (std::uint64_t m = std::max(pp, ((slo + p - 1) / p) * static_cast<std::uint64_t>(p));
           m <= shi; m += p)
        seg[m - slo] = 1;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(slo, 2); v <= shi; ++v)
      if (!seg[v - slo]) out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<PrimePower> prime_powers_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<PrimePower> out;
  if (hi <= lo) return out;
  for (const std::uint32_t p : primes_in(lo, hi)) out.push_back({p, 1, p});
  // proper powers p^k <= hi need p <= sqrt(hi)
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 2;
  for (const std::uint32_t p : prime_sieve(root)) {
    std::uint64_t pk = static_cast<std::uint64_t>(p) * p;
    for (std::uint32_t k = 2; pk <= hi; ++k) {
      if (pk > lo) out.push_back({p, k, pk});
      if (pk > hi / p) break;
      pk *= p;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.pk < b.pk; });
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace lvlab

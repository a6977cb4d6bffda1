#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lvlab {

using tau_int = __int128;

// Exact tau(1..N) (index 0 unused), N <= 1e6.  The cube of the eta-series is
// sparse (triangular-number exponents); it is squared once directly and twice
// more under two 62-bit NTT primes with CRT recombination.  Every coefficient
// is re-verified against a third, independent prime, so a transform fault or
// out-of-range value throws instead of corrupting the table.
std::vector<tau_int> ramanujan_tau(std::size_t N);

// Disk-cached variant: little-endian length-prefixed records behind a magic
// header and version byte.  Invalid, short, or stale files are recomputed and
// atomically replaced; loaded tables are spot-verified before use.
std::vector<tau_int> ramanujan_tau_cached(std::size_t N, const std::string& path);

}  // namespace lvlab

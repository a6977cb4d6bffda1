#include "lvlab/tau.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace lvlab {

namespace {

// NTT-friendly primes just below 2^62 with known primitive roots.
constexpr std::uint64_t kNttPrime[3] = {
    4179340454199820289ull,  // 29 * 2^57 + 1
    1945555039024054273ull,  // 27 * 2^56 + 1
    2485986994308513793ull,  // 69 * 2^55 + 1
};
constexpr std::uint64_t kNttRoot[3] = {3, 5, 5};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  for (; e; e >>= 1) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
  }
  return r;
}

// In-place iterative radix-2 transform.  Sums stay below 2^63 because the
// primes are below 2^62.
void ntt(std::vector<std::uint64_t>& a, bool invert, std::uint64_t p,
         std::uint64_t g) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = powmod(g, (p - 1) / len, p);
    if (invert) w = powmod(w, p - 2, p);
    for (std::size_t i = 0; i < n; i += len) {
      std::uint64_t wn = 1;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = mulmod(a[i + j + len / 2], wn, p);
        a[i + j] = u + v < p ? u + v : u + v - p;
        a[i + j + len / 2] = u >= v ? u - v : u + p - v;
        wn = mulmod(wn, w, p);
      }
    }
  }
  if (invert) {
    const std::uint64_t ninv = powmod(static_cast<std::uint64_t>(n), p - 2, p);
    for (auto& x : a) x = mulmod(x, ninv, p);
  }
}

// First out_len coefficients of c * c, reduced modulo kNttPrime[which].
std::vector<std::uint64_t> square_mod(const std::vector<tau_int>& c,
                                      std::size_t out_len, int which) {
  const std::uint64_t p = kNttPrime[which];
  const std::uint64_t g = kNttRoot[which];
  std::size_t n = 1;
  while (n < 2 * c.size()) n <<= 1;
  std::vector<std::uint64_t> a(n, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    tau_int v = c[i] % static_cast<tau_int>(p);
    if (v < 0) v += static_cast<tau_int>(p);
    a[i] = static_cast<std::uint64_t>(v);
  }
  ntt(a, false, p, g);
  for (auto& x : a) x = mulmod(x, x, p);
  ntt(a, true, p, g);
  a.resize(out_len);
  return a;
}

// Exact truncated square of a power series with integer coefficients.  Values
// are reconstructed from the first two primes by CRT with symmetric reduction
// (valid while |coefficient| < p0*p1/2 ~ 4e36) and then checked against the
// third prime; any mismatch means overflow or a transform bug.
std::vector<tau_int> square_exact(const std::vector<tau_int>& c,
                                  std::size_t out_len) {
  const auto r0 = square_mod(c, out_len, 0);
  const auto r1 = square_mod(c, out_len, 1);
  const auto r2 = square_mod(c, out_len, 2);
  const std::uint64_t p0 = kNttPrime[0];
  const std::uint64_t p1 = kNttPrime[1];
  const std::uint64_t p2 = kNttPrime[2];
  const std::uint64_t inv01 = powmod(p0 % p1, p1 - 2, p1);
  const unsigned __int128 prod = static_cast<unsigned __int128>(p0) * p1;
  std::vector<tau_int> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::uint64_t rr = r0[i] % p1;
    const std::uint64_t diff = r1[i] >= rr ? r1[i] - rr : r1[i] + p1 - rr;
    const unsigned __int128 x =
        static_cast<unsigned __int128>(p0) * mulmod(diff, inv01, p1) + r0[i];
    const tau_int v = x > prod / 2 ? -static_cast<tau_int>(prod - x)
                                   : static_cast<tau_int>(x);
    tau_int m = v % static_cast<tau_int>(p2);
    if (m < 0) m += static_cast<tau_int>(p2);
    if (static_cast<std::uint64_t>(m) != r2[i]) {
      throw std::logic_error(
          "ramanujan_tau: residue verification failed (coefficient overflow "
          "or transform fault)");
    }
    out[i] = v;
  }
  return out;
}

void check_range(std::size_t N) {
  if (N < 1 || N > 1'000'000) {
    throw std::invalid_argument("ramanujan_tau: N must lie in [1, 1000000]");
  }
}

constexpr char kCacheMagic[5] = {'L', 'V', 'T', 'A', 'U'};
constexpr char kCacheVersion = 1;

bool read_cache(const std::string& path, std::size_t N,
                std::vector<tau_int>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char hdr[6];
  if (!in.read(hdr, 6)) return false;
  if (!std::equal(hdr, hdr + 5, kCacheMagic) || hdr[5] != kCacheVersion) {
    return false;
  }
  std::uint64_t count = 0;
  for (int b = 0; b < 8; ++b) {
    const int byte = in.get();
    if (byte < 0) return false;
    count |= static_cast<std::uint64_t>(byte) << (8 * b);
  }
  if (count < N || count > 1'000'000) return false;
  out.assign(N + 1, 0);
  for (std::size_t n = 1; n <= N; ++n) {
    const int len = in.get();
    const int sign = in.get();
    if (len < 0 || len > 16 || sign < 0 || sign > 1) return false;
    unsigned __int128 mag = 0;
    for (int b = 0; b < len; ++b) {
      const int byte = in.get();
      if (byte < 0) return false;
      mag |= static_cast<unsigned __int128>(byte) << (8 * b);
    }
    out[n] = sign ? -static_cast<tau_int>(mag) : static_cast<tau_int>(mag);
  }
  // Spot checks so a structurally valid but wrong file is rejected.
  if (out[1] != 1) return false;
  if (N >= 2 && out[2] != -24) return false;
  if (N >= 3 && out[3] != 252) return false;
  return true;
}

void write_cache(const std::string& path, const std::vector<tau_int>& table,
                 std::size_t N) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("ramanujan_tau: cannot open " + tmp);
    os.write(kCacheMagic, 5);
    os.put(kCacheVersion);
    const std::uint64_t count = N;
    for (int b = 0; b < 8; ++b) {
      os.put(static_cast<char>((count >> (8 * b)) & 0xFF));
    }
    for (std::size_t n = 1; n <= N; ++n) {
      const bool neg = table[n] < 0;
      unsigned __int128 mag =
          neg ? static_cast<unsigned __int128>(-(table[n] + 1)) + 1
              : static_cast<unsigned __int128>(table[n]);
      int len = 0;
      for (unsigned __int128 m = mag; m; m >>= 8) ++len;
      os.put(static_cast<char>(len));
      os.put(neg ? 1 : 0);
      for (int b = 0; b < len; ++b) {
        os.put(static_cast<char>((mag >> (8 * b)) & 0xFF));
      }
    }
    os.flush();
    if (!os) throw std::runtime_error("ramanujan_tau: cache write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("ramanujan_tau: cache rename failed");
  }
}

}  // namespace

std::vector<tau_int> ramanujan_tau(std::size_t N) {
  check_range(N);
  // eta^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}; keep exponents below N.
  std::vector<std::int64_t> val;
  std::vector<std::size_t> expo;
  for (std::size_t k = 0;; ++k) {
    const std::size_t tri = k * (k + 1) / 2;
    if (tri >= N) break;
    expo.push_back(tri);
    val.push_back(k % 2 == 0 ? static_cast<std::int64_t>(2 * k + 1)
                             : -static_cast<std::int64_t>(2 * k + 1));
  }
  // eta^6 by direct sparse convolution; magnitudes stay far below 2^63.
  std::vector<tau_int> c(N, 0);
  for (std::size_t i = 0; i < expo.size(); ++i) {
    if (2 * expo[i] < N) {
      c[2 * expo[i]] += static_cast<tau_int>(val[i]) * val[i];
    }
    for (std::size_t j = i + 1; j < expo.size(); ++j) {
      const std::size_t e = expo[i] + expo[j];
      if (e >= N) break;
      c[e] += 2 * static_cast<tau_int>(val[i]) * val[j];
    }
  }
  c = square_exact(c, N);  // eta^12
  c = square_exact(c, N);  // eta^24
  // Delta = q * eta^24, so tau(n) is the q^{n-1} coefficient of eta^24.
  std::vector<tau_int> out(N + 1);
  out[0] = 0;
  for (std::size_t n = 1; n <= N; ++n) out[n] = c[n - 1];
  return out;
}

std::vector<tau_int> ramanujan_tau_cached(std::size_t N,
                                          const std::string& path) {
  check_range(N);
  std::vector<tau_int> out;
  if (read_cache(path, N, out)) return out;
  out = ramanujan_tau(N);
  write_cache(path, out, N);
  return out;
}

}  // namespace lvlab

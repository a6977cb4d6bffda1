#include "lvlab/simd.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace lvlab::simd {

namespace {

Mode detect() {
  if (const char* env = std::getenv("LVLAB_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Mode::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!avx2_impl::available()) throw std::runtime_error("LVLAB_SIMD=avx2 but host lacks AVX2");
      return Mode::avx2;
    }
  }
  return avx2_impl::available() ? Mode::avx2 : Mode::scalar;
}

Mode g_mode = detect();

}  // namespace

Mode active() { return g_mode; }

void force(Mode m) {
  if (m == Mode::avx2 && !avx2_impl::available()) {
    throw std::runtime_error("simd::force: AVX2 unavailable on this host");
  }
  g_mode = m;
}

const char* mode_name(Mode m) { return m == Mode::avx2 ? "avx2" : "scalar"; }

void vexp(const double* x, double* out, std::size_t n) {
  g_mode == Mode::avx2 ? avx2_impl::vexp(x, out, n) : scalar_impl::vexp(x, out, n);
}

void vsincos(const double* x, double* s, double* c, std::size_t n) {
  g_mode == Mode::avx2 ? avx2_impl::vsincos(x, s, c, n) : scalar_impl::vsincos(x, s, c, n);
}

BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t) {
  return g_mode == Mode::avx2 ? avx2_impl::dirichlet_block(cre, cim, logn, n, sigma, t)
                              : scalar_impl::dirichlet_block(cre, cim, logn, n, sigma, t);
}

double weighted_sq_sum(const double* x, const double* w, std::size_t n) {
  return g_mode == Mode::avx2 ? avx2_impl::weighted_sq_sum(x, w, n)
                              : scalar_impl::weighted_sq_sum(x, w, n);
}

void grid_scan(const double* logp, const double* tre, const double* tim,
               std::size_t nprimes, double tau0, double step, std::size_t count,
               double eps1, std::vector<std::uint32_t>& hits, double* quality_out) {
  g_mode == Mode::avx2
      ? avx2_impl::grid_scan(logp, tre, tim, nprimes, tau0, step, count, eps1, hits, quality_out)
      : scalar_impl::grid_scan(logp, tre, tim, nprimes, tau0, step, count, eps1, hits, quality_out);
}

}  // namespace lvlab::simd

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lvlab::simd {

// Runtime-dispatched kernel set.  The AVX2 backend is compiled in its own TU
// with -mavx2 and is only reachable when cpuid reports support; the scalar
// backend is the reference semantics the AVX2 path is equivalence-tested
// against.  LVLAB_SIMD=scalar|avx2 in the environment overrides detection.
enum class Mode { scalar, avx2 };

Mode active();
void force(Mode m);      // test hook; throws if the mode is unsupported on this host
const char* mode_name(Mode m);

// out[i] = exp(x[i]).  Arguments are clamped to [-708, 708].
void vexp(const double* x, double* out, std::size_t n);

// s[i] = sin(x[i]), c[i] = cos(x[i]).  |x| up to ~1e9 stays within the
// range-reduction accuracy budget (absolute error < 1e-13).
void vsincos(const double* x, double* s, double* c, std::size_t n);

// Partial sums of a Dirichlet block at s = sigma + i*t:
//   acc   = sum_i (cre_i + i*cim_i) * exp(-sigma * logn_i) * e^{-i t logn_i}
//   abs   = sum_i |c_i| * exp(-sigma * logn_i)
// cim may be null (real coefficients).  Accumulation is chunked (4096) with a
// compensated cross-chunk reduction; both backends share that structure so
// results agree to ~chunk*eps relative.
struct BlockSum {
  double re = 0.0;
  double im = 0.0;
  double abs = 0.0;
};
BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t);

// sum_i w_i * x_i^2 (w may be null => weights of 1); used by the Selberg
// mean-square accumulators.
double weighted_sq_sum(const double* x, const double* w, std::size_t n);

// Scan tau_j = tau0 + j*step for j in [0, count): append j to hits whenever
//   max_p |p^{-i tau_j} - (tre_p + i*tim_p)| < eps1.
// If quality_out is non-null it receives all count quality values (test use).
void grid_scan(const double* logp, const double* tre, const double* tim,
               std::size_t nprimes, double tau0, double step, std::size_t count,
               double eps1, std::vector<std::uint32_t>& hits, double* quality_out = nullptr);

// Backend entry points (exposed for the dispatcher and the equivalence tests).
namespace scalar_impl {
void vexp(const double* x, double* out, std::size_t n);
void vsincos(const double* x, double* s, double* c, std::size_t n);
BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t);
double weighted_sq_sum(const double* x, const double* w, std::size_t n);
void grid_scan(const double* logp, const double* tre, const double* tim,
               std::size_t nprimes, double tau0, double step, std::size_t count,
               double eps1, std::vector<std::uint32_t>& hits, double* quality_out);
}  // namespace scalar_impl

namespace avx2_impl {
bool available();
void vexp(const double* x, double* out, std::size_t n);
void vsincos(const double* x, double* s, double* c, std::size_t n);
BlockSum dirichlet_block(const double* cre, const double* cim, const double* logn,
                         std::size_t n, double sigma, double t);
double weighted_sq_sum(const double* x, const double* w, std::size_t n);
void grid_scan(const double* logp, const double* tre, const double* tim,
               std::size_t nprimes, double tau0, double step, std::size_t count,
               double eps1, std::vector<std::uint32_t>& hits, double* quality_out);
}  // namespace avx2_impl

}  // namespace lvlab::simd

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lvlab/certified.hpp"
#include "lvlab/coeffs.hpp"

namespace lvlab {

enum class EvalBackend { raw_series, euler_maclaurin_composite };

// A single Dirichlet series with its local coefficient data and, for the
// euler_maclaurin_composite backend, a closed-form evaluation built from
// zeta / L factors at (possibly shifted) arguments.
struct LFunctionEntry {
  std::string name;
  CoefficientSource source;
  DirichletCoefficients coeffs;
  EvalBackend backend = EvalBackend::raw_series;
  std::optional<double> expected_kappa;
  double abscissa_abs = 1.0;
  std::function<Cert(cplx, double)> em_eval;
};

struct ComboPart {
  cplx coeff;           // nonzero
  LFunctionEntry entry;
  cplx shift;           // Re >= 0; the part contributes coeff * entry(w + shift)
};

// Linear combination  sum_j c_j E_j(w + eta_j)  in the normalized variable
// w = s - variable_offset, where s is the classical argument of the combined
// function.  Shifted constituents are kept as shift parts (or as shifted
// factors inside a product entry) instead of renormalizing coefficients.
struct ComboEntry {
  std::string name;
  std::vector<ComboPart> parts;
  double variable_offset = 0.0;
  std::optional<double> expected_kappa;  // two-part difference statistic
};

using CatalogEntry = std::variant<LFunctionEntry, ComboEntry>;

// name in {zeta, chi4, delta_norm, zeta_over_zeta2s, euler_zagier_diag,
// epstein_I6, epstein_L24}.  Throws std::out_of_range on an unknown name.
CatalogEntry builtin(const std::string& name);

// delta_norm with a caller-chosen prime-power range; tau values are served
// from the shared on-disk cache.  table_limit in [4096, 1e6].
LFunctionEntry delta_norm_entry(std::uint64_t table_limit);

// $LVLAB_CACHE_DIR/lvlab_tau_cache.bin, or the current directory when the
// environment variable is unset.
std::string tau_cache_path();

Cert evaluate_entry(const LFunctionEntry& e, cplx s, double tol,
                    bool* tail_limited = nullptr);
Cert evaluate_combo(const ComboEntry& e, cplx s, double tol,
                    bool* tail_limited = nullptr);
Cert evaluate_catalog(const CatalogEntry& e, cplx s, double tol,
                      bool* tail_limited = nullptr);

struct KappaEstimate {
  double value = 0.0;  // (1/pi(x)) sum_{p<=x} |a(p)|^2
  std::uint64_t primes_used = 0;
  // Running values of the estimator at log-spaced cutoffs ending at x.
  std::vector<std::pair<std::uint64_t, double>> checkpoints;
};

KappaEstimate kappa_estimate(const LFunctionEntry& e, std::uint64_t x);
// Two-part combos only: the difference sequence a1(p) p^{-eta1} - a2(p) p^{-eta2}.
KappaEstimate kappa_estimate(const ComboEntry& e, std::uint64_t x);
KappaEstimate kappa_estimate(const CatalogEntry& e, std::uint64_t x);

struct PairKappa {
  double value = 0.0;     // (1/pi(x)) sum_{p<=x} |a1(p) - a2(p)|^2
  double sum_sq_1 = 0.0;  // sum |a1(p)|^2 (unnormalized)
  double sum_sq_2 = 0.0;  // sum |a2(p)|^2
  double cross = 0.0;     // Re sum a1(p) conj a2(p)
  std::uint64_t primes_used = 0;
  std::vector<std::pair<std::uint64_t, double>> checkpoints;
};

PairKappa pair_kappa_estimate(const LFunctionEntry& e1,
                              const LFunctionEntry& e2, std::uint64_t x);

// Exact number of primes p in (x, c x] with |b(p)| > p^{-eta}.
std::uint64_t count_large_coeff_primes(const CoefficientSource& src,
                                       std::uint64_t x, double c, double eta);

// sigma0 = 1 + (m/2)(1 + sqrt(1 + 4 k^2 / (m log m))) with m the least prime
// not dividing q: the k-th derivative of a Dirichlet L-function mod q has no
// zeros with Re s > sigma0.
double yildirim_bound(std::uint64_t q, int k);

}  // namespace lvlab

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "lvlab/certified.hpp"

namespace lvlab {

// Effective growth data for one series: |a(n)| <= A0 * n^{eps0} for the
// Dirichlet coefficients and |b(p^k)| <= Ath * p^{k*theta} for the
// exponential (Euler log) coefficients.  theta < 1/2 strictly; construction
// rejects anything else.  These are inputs carried with each catalog entry,
// not inferred.
struct GrowthCertificate {
  double a_bound_const;  // A0
  double a_bound_exp;    // eps0
  double b_bound_const;  // Ath
  double b_bound_exp;    // theta

  GrowthCertificate(double A0, double eps0, double Ath, double theta);
};

using PrimePowerKey = std::pair<std::uint64_t, std::uint32_t>;  // (p, k)
using ClosedForm = std::function<cplx(std::uint64_t, std::uint32_t)>;

// Exponential-side coefficients b(p^k) of log L(s) = sum b(p^k) p^{-ks}.
// A materialized table covers every prime power <= table_limit (validated at
// construction, as is the growth bound over the table).  Beyond the table the
// source either continues by a closed-form rule or is treated as unknown
// ("zero beyond cutoff"): evaluations then charge the growth tail honestly.
class CoefficientSource {
 public:
  CoefficientSource(std::map<PrimePowerKey, cplx> table, std::uint64_t table_limit,
                    ClosedForm extension, GrowthCertificate growth);

  cplx b(std::uint64_t p, std::uint32_t k) const;
  bool tabulated(std::uint64_t p, std::uint32_t k) const;
  std::uint64_t table_limit() const { return table_limit_; }
  bool zero_beyond_table() const { return !extension_; }
  const ClosedForm& extension() const { return extension_; }
  const GrowthCertificate& growth() const { return growth_; }
  const std::map<PrimePowerKey, cplx>& table() const { return table_; }

 private:
  std::map<PrimePowerKey, cplx> table_;
  std::uint64_t table_limit_;
  ClosedForm extension_;
  GrowthCertificate growth_;
};

// Dirichlet-side coefficients a(n), n <= n_max, of the same series.
struct DirichletCoefficients {
  std::vector<cplx> a;  // a[0] unused; a[n] for 1 <= n <= n_max
  GrowthCertificate growth;

  std::uint64_t n_max() const { return a.empty() ? 0 : a.size() - 1; }
};

// Exponentiate: per prime, c_k = (1/k) sum_{j<=k} j b_j c_{k-j}, then fill
// multiplicatively.  Guarantees a(1) = 1 and a(p) = b(p).
DirichletCoefficients b_to_a(const CoefficientSource& src, std::uint64_t n_max);

// Formal-log inverse of b_to_a (test support): recover b(p^k) from a(p^k).
std::map<PrimePowerKey, cplx> a_to_b(const DirichletCoefficients& coeffs);

// Source with coefficients (-1)^m b(p^k) (k log p)^m, whose series evaluates
// to (log L)^{(m)} itself (the sign is the derivative's).  The growth data
// moves to theta1 = (theta + 1/2) / 2 with the weight's supremum folded into
// the constant.
CoefficientSource log_derivative_source(const CoefficientSource& src, int m);

// log L(s) = sum_p sum_k b(p^k) p^{-ks} for Re s > 1, truncated at prime
// powers <= X with the growth-certificate tail charged.  If the needed X
// exceeds what the source can provide (zero beyond cutoff) or the runtime cap,
// the bound stays honest and *tail_limited is set.
Cert eval_log_L(const CoefficientSource& src, cplx s, double tol,
                bool* tail_limited = nullptr);

// sum a(n) n^{-s} for Re s > 1 + eps0, truncated with the tail
// A0 N^{1+eps0-sigma} / (sigma - 1 - eps0) charged to the bound.
Cert eval_dirichlet(const DirichletCoefficients& coeffs, cplx s, double tol,
                    bool* tail_limited = nullptr);

// ---------------------------------------------------------------------------
// Certified absolute sums over prime powers, the quantities the block
// construction compares against.  All results are two-sided enclosures of
//    sum |b(p^k)| (k log p)^m p^{-k(1+u)}
// over the stated index set, m in {0, 1, 2}.

class AbsTailModel {
 public:
  virtual ~AbsTailModel() = default;

  // Index set: all p^k > x (k >= 1).  Requires u > 0.
  virtual RInt tail(double x, double u, int m) const = 0;

  // Index set: x < p^k <= y.
  virtual RInt between(double x, double y, double u, int m) const;

  // sigma-independent small bound: primes p <= x at exponent -(1 + eps)
  // plus every k >= 2 prime power at exponent -k.
  virtual RInt small_bound(double x, double eps, int m) const = 0;
};

// How |b(p^k)| depends on k for the analytic families.
enum class KWeight {
  inv_k,       // 1/k          (log of an Euler product with unimodular roots)
  even_inv_k,  // 2/k, k even  (series in p^{-2s})
  only_k1,     // 1 at k = 1   (linear displays)
};

double kweight(KWeight kw, std::uint32_t k);

// |b(p^k)| = scale * kweight(k) exactly, for all primes outside `excluded`.
class DeterministicTailModel : public AbsTailModel {
 public:
  DeterministicTailModel(double scale, KWeight kw,
                         std::vector<std::uint32_t> excluded = {});
  RInt tail(double x, double u, int m) const override;
  RInt small_bound(double x, double eps, int m) const override;

 private:
  double scale_;
  KWeight kw_;
  std::vector<std::uint32_t> excluded_;
};

// k = 1 moduli |b(p)| known exactly for p <= k1_limit (table) and only
// bounded by k1_scale beyond; k >= 2 bounded by scale * kweight(k).
// Lower bounds beyond the table are 0 — honest, if weak.
class BoundedTailModel : public AbsTailModel {
 public:
  BoundedTailModel(std::vector<std::pair<std::uint32_t, double>> k1_moduli,
                   std::uint64_t k1_limit, double k1_scale, double scale,
                   KWeight kw);
  RInt tail(double x, double u, int m) const override;
  RInt small_bound(double x, double eps, int m) const override;

 private:
  std::vector<std::pair<std::uint32_t, double>> k1_;  // sorted by prime
  std::uint64_t k1_limit_;
  double k1_scale_;
  double scale_;
  KWeight kw_;
};

}  // namespace lvlab

#include "lvlab/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "lvlab/primes.hpp"
#include "lvlab/tau.hpp"
#include "lvlab/zeta_em.hpp"

namespace lvlab {

namespace {

constexpr std::uint64_t kDefaultCoeffRange = 4096;
constexpr std::uint64_t kDefaultDeltaRange = 100000;

double chi4_value(std::uint64_t n) {
  switch (n & 3u) {
    case 1:
      return 1.0;
    case 3:
      return -1.0;
    default:
      return 0.0;
  }
}

// Complete prime-power table over p^k <= limit filled from `rule`, with the
// same rule attached as the extension beyond the table.
CoefficientSource rule_source(std::uint64_t limit, const ClosedForm& rule,
                              const GrowthCertificate& growth) {
  std::map<PrimePowerKey, cplx> table;
  for (const auto p : prime_sieve(limit)) {
    std::uint64_t pk = p;
    for (std::uint32_t k = 1; pk <= limit; ++k) {
      table.emplace(PrimePowerKey{p, k}, rule(p, k));
      if (pk > limit / p) break;
      pk *= p;
    }
  }
  return CoefficientSource(std::move(table), limit, rule, growth);
}

LFunctionEntry make_entry(std::string name, CoefficientSource src,
                          EvalBackend backend,
                          std::optional<double> expected_kappa,
                          double abscissa_abs,
                          std::function<Cert(cplx, double)> em_eval) {
  DirichletCoefficients coeffs = b_to_a(src, kDefaultCoeffRange);
  return LFunctionEntry{std::move(name),    std::move(src),
                        std::move(coeffs),  backend,
                        expected_kappa,     abscissa_abs,
                        std::move(em_eval)};
}

Cert em_zeta(cplx s, double tol) { return zeta_em(s, tol); }
Cert em_chi4(cplx s, double tol) { return dirichlet_L_chi4(s, tol, 0).f; }

const LFunctionEntry& zeta_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t, std::uint32_t k) { return cplx(1.0 / k); },
          GrowthCertificate(1.0, 0.0, 1.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0, em_zeta);
  return e;
}

const LFunctionEntry& chi4_entry() {
  static const LFunctionEntry e = make_entry(
      "chi4",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t p, std::uint32_t k) {
            const double c = chi4_value(p);
            return cplx((k % 2 == 0 ? c * c : c) / k);
          },
          GrowthCertificate(1.0, 0.0, 1.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0, em_chi4);
  return e;
}

const LFunctionEntry& zeta_over_zeta2s_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta_over_zeta2s",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t, std::uint32_t k) {
            return cplx((k % 2 == 0 ? -1.0 : 1.0) / k);
          },
          GrowthCertificate(1.0, 0.0, 1.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0,
      [](cplx s, double tol) {
        return zeta_em(s, tol * 0.5) / zeta_em(2.0 * s, tol * 0.5);
      });
  return e;
}

// zeta(s)^2: coefficients d(n) <= 2 sqrt(n).
const LFunctionEntry& zeta_sq_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta_sq",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t, std::uint32_t k) { return cplx(2.0 / k); },
          GrowthCertificate(2.0, 0.5, 2.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 4.0, 1.0,
      [](cplx s, double tol) {
        const Cert z = zeta_em(s, tol * 0.5);
        return z * z;
      });
  return e;
}

// zeta(2s) as a series in the same variable: the square-indicator series.
const LFunctionEntry& zeta_2s_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta_2s",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t, std::uint32_t k) {
            return cplx(k % 2 == 0 ? 2.0 / k : 0.0);
          },
          GrowthCertificate(1.0, 0.0, 1.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, std::nullopt, 0.5,
      [](cplx s, double tol) { return zeta_em(2.0 * s, tol); });
  return e;
}

// zeta(w+2) L(w, chi_{-4}): prime coefficient chi(p) + p^{-2}.
const LFunctionEntry& chi4_zeta_up2_entry() {
  static const LFunctionEntry e = make_entry(
      "chi4_zeta_up2",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t p, std::uint32_t k) {
            const double c = chi4_value(p);
            const double ck = k % 2 == 0 ? c * c : c;
            return cplx((ck + std::pow(static_cast<double>(p), -2.0 * k)) / k);
          },
          GrowthCertificate(2.0, 0.0, 2.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0,
      [](cplx s, double tol) {
        return zeta_em(s + 2.0, tol * 0.5) * dirichlet_L_chi4(s, tol * 0.5, 0).f;
      });
  return e;
}

// zeta(w) L(w+2, chi_{-4}): prime coefficient 1 + chi(p) p^{-2}.
const LFunctionEntry& zeta_chi4_up2_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta_chi4_up2",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t p, std::uint32_t k) {
            const double c = chi4_value(p);
            const double ck = k % 2 == 0 ? c * c : c;
            return cplx((1.0 + ck * std::pow(static_cast<double>(p), -2.0 * k)) / k);
          },
          GrowthCertificate(2.0, 0.0, 2.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0,
      [](cplx s, double tol) {
        return zeta_em(s, tol * 0.5) * dirichlet_L_chi4(s + 2.0, tol * 0.5, 0).f;
      });
  return e;
}

// zeta(w) zeta(w+11): prime coefficient 1 + p^{-11}.
const LFunctionEntry& zeta_zeta_up11_entry() {
  static const LFunctionEntry e = make_entry(
      "zeta_zeta_up11",
      rule_source(
          kDefaultCoeffRange,
          [](std::uint64_t p, std::uint32_t k) {
            return cplx((1.0 + std::pow(static_cast<double>(p), -11.0 * k)) / k);
          },
          GrowthCertificate(2.0, 0.0, 2.0, 0.0)),
      EvalBackend::euler_maclaurin_composite, 1.0, 1.0,
      [](cplx s, double tol) {
        return zeta_em(s, tol * 0.5) * zeta_em(s + 11.0, tol * 0.5);
      });
  return e;
}

const LFunctionEntry& delta_norm_default() {
  static const LFunctionEntry e = delta_norm_entry(kDefaultDeltaRange);
  return e;
}

}  // namespace

std::string tau_cache_path() {
  const char* dir = std::getenv("LVLAB_CACHE_DIR");
  std::string base = dir && *dir ? dir : ".";
  return base + "/lvlab_tau_cache.bin";
}

LFunctionEntry delta_norm_entry(std::uint64_t table_limit) {
  if (table_limit < kDefaultCoeffRange || table_limit > 1'000'000) {
    throw std::invalid_argument(
        "delta_norm_entry: table_limit must lie in [4096, 1e6]");
  }
  const auto tau = ramanujan_tau_cached(table_limit, tau_cache_path());
  std::map<PrimePowerKey, cplx> table;
  for (const auto p : prime_sieve(table_limit)) {
    const long double ap =
        static_cast<long double>(tau[p]) /
        std::pow(static_cast<long double>(p), 5.5L);
    // b(p^k) = (alpha^k + beta^k)/k with alpha beta = 1, alpha + beta = a(p):
    // s_k = a(p) s_{k-1} - s_{k-2}.
    long double prev = 2.0L, cur = ap;
    std::uint64_t pk = p;
    for (std::uint32_t k = 1; pk <= table_limit; ++k) {
      table.emplace(PrimePowerKey{p, k}, cplx(static_cast<double>(cur) / k));
      const long double next = ap * cur - prev;
      prev = cur;
      cur = next;
      if (pk > table_limit / p) break;
      pk *= p;
    }
  }
  CoefficientSource src(std::move(table), table_limit, nullptr,
                        GrowthCertificate(2.0, 0.5, 2.0, 0.0));
  return make_entry("delta_norm", std::move(src), EvalBackend::raw_series, 1.0,
                    1.0, nullptr);
}

CatalogEntry builtin(const std::string& name) {
  if (name == "zeta") return zeta_entry();
  if (name == "chi4") return chi4_entry();
  if (name == "delta_norm") return delta_norm_default();
  if (name == "zeta_over_zeta2s") return zeta_over_zeta2s_entry();
  if (name == "euler_zagier_diag") {
    return ComboEntry{"euler_zagier_diag",
                      {{cplx(0.5), zeta_sq_entry(), cplx(0.0)},
                       {cplx(-0.5), zeta_2s_entry(), cplx(0.0)}},
                      0.0,
                      4.0};
  }
  if (name == "epstein_I6") {
    return ComboEntry{"epstein_I6",
                      {{cplx(-4.0), chi4_zeta_up2_entry(), cplx(0.0)},
                       {cplx(16.0), zeta_chi4_up2_entry(), cplx(0.0)}},
                      2.0,
                      2.0};
  }
  if (name == "epstein_L24") {
    const double c = 65520.0 / 691.0;
    return ComboEntry{"epstein_L24",
                      {{cplx(c), zeta_zeta_up11_entry(), cplx(0.0)},
                       {cplx(-c), delta_norm_default(), cplx(5.5)}},
                      11.0,
                      1.0};
  }
  throw std::out_of_range("builtin: unknown catalog name '" + name + "'");
}

Cert evaluate_entry(const LFunctionEntry& e, cplx s, double tol,
                    bool* tail_limited) {
  if (e.backend == EvalBackend::euler_maclaurin_composite && e.em_eval) {
    if (tail_limited) *tail_limited = false;
    return e.em_eval(s, tol);
  }
  return eval_dirichlet(e.coeffs, s, tol, tail_limited);
}

Cert evaluate_combo(const ComboEntry& e, cplx s, double tol,
                    bool* tail_limited) {
  if (e.parts.empty()) {
    throw std::invalid_argument("evaluate_combo: combination has no parts");
  }
  const cplx w = s - cplx(e.variable_offset);
  bool any_limited = false;
  Cert acc{cplx(0.0), 0.0};
  for (const auto& part : e.parts) {
    if (part.coeff == cplx(0.0)) {
      throw std::invalid_argument("evaluate_combo: zero part coefficient");
    }
    const double scale = std::max(1.0, std::abs(part.coeff));
    bool limited = false;
    const Cert v = evaluate_entry(part.entry, w + part.shift,
                                  tol / (e.parts.size() * scale), &limited);
    any_limited = any_limited || limited;
    acc = acc + Cert{part.coeff, 0.0} * v;
  }
  if (tail_limited) *tail_limited = any_limited;
  return acc;
}

Cert evaluate_catalog(const CatalogEntry& e, cplx s, double tol,
                      bool* tail_limited) {
  if (const auto* entry = std::get_if<LFunctionEntry>(&e)) {
    return evaluate_entry(*entry, s, tol, tail_limited);
  }
  return evaluate_combo(std::get<ComboEntry>(e), s, tol, tail_limited);
}

namespace {

std::vector<std::uint64_t> log_spaced_cutoffs(std::uint64_t x) {
  constexpr int kPoints = 12;
  const std::uint64_t lo = std::min<std::uint64_t>(100, x);
  std::vector<std::uint64_t> cuts;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(x));
  for (int j = 1; j <= kPoints; ++j) {
    const auto c = static_cast<std::uint64_t>(
        std::llround(std::exp(llo + (lhi - llo) * j / kPoints)));
    if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
  }
  if (cuts.empty() || cuts.back() != x) cuts.push_back(x);
  return cuts;
}

void check_prime_range(const LFunctionEntry& e, std::uint64_t x) {
  if (x < 2) throw std::invalid_argument("kappa_estimate: x below 2");
  if (x > 1'000'000'000) {
    throw std::invalid_argument("kappa_estimate: x above sieve range");
  }
  if (e.source.zero_beyond_table() && x > e.source.table_limit()) {
    throw std::out_of_range("kappa_estimate: x beyond the tabulated primes of " +
                            e.name);
  }
}

// Shared accumulation: running (1/pi) sums of term(p) over primes p <= x.
KappaEstimate accumulate_kappa(const std::vector<std::uint32_t>& primes,
                               std::uint64_t x,
                               const std::function<double(std::uint64_t)>& term) {
  const auto cuts = log_spaced_cutoffs(x);
  KappaEstimate out;
  std::size_t next_cut = 0;
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto p : primes) {
    while (next_cut < cuts.size() && p > cuts[next_cut]) {
      if (count > 0) {
        out.checkpoints.emplace_back(cuts[next_cut], sum / count);
      }
      ++next_cut;
    }
    sum += term(p);
    ++count;
  }
  while (next_cut < cuts.size()) {
    if (count > 0) out.checkpoints.emplace_back(cuts[next_cut], sum / count);
    ++next_cut;
  }
  out.primes_used = count;
  out.value = count > 0 ? sum / count : 0.0;
  return out;
}

cplx effective_prime_coeff(const ComboPart& part, std::uint64_t p) {
  const cplx a = part.entry.source.b(p, 1);
  if (part.shift == cplx(0.0)) return a;
  return a * std::exp(-part.shift * std::log(static_cast<double>(p)));
}

}  // namespace

KappaEstimate kappa_estimate(const LFunctionEntry& e, std::uint64_t x) {
  check_prime_range(e, x);
  const auto primes = prime_sieve(x);
  return accumulate_kappa(primes, x, [&e](std::uint64_t p) {
    return std::norm(e.source.b(p, 1));
  });
}

KappaEstimate kappa_estimate(const ComboEntry& e, std::uint64_t x) {
  if (e.parts.size() != 2) {
    throw std::invalid_argument(
        "kappa_estimate: the difference statistic needs exactly two parts");
  }
  for (const auto& part : e.parts) check_prime_range(part.entry, x);
  const auto primes = prime_sieve(x);
  return accumulate_kappa(primes, x, [&e](std::uint64_t p) {
    return std::norm(effective_prime_coeff(e.parts[0], p) -
                     effective_prime_coeff(e.parts[1], p));
  });
}

KappaEstimate kappa_estimate(const CatalogEntry& e, std::uint64_t x) {
  if (const auto* entry = std::get_if<LFunctionEntry>(&e)) {
    return kappa_estimate(*entry, x);
  }
  return kappa_estimate(std::get<ComboEntry>(e), x);
}

PairKappa pair_kappa_estimate(const LFunctionEntry& e1,
                              const LFunctionEntry& e2, std::uint64_t x) {
  check_prime_range(e1, x);
  check_prime_range(e2, x);
  const auto primes = prime_sieve(x);
  PairKappa out;
  const auto cuts = log_spaced_cutoffs(x);
  std::size_t next_cut = 0;
  double diff_sum = 0.0;
  std::uint64_t count = 0;
  for (const auto p : primes) {
    while (next_cut < cuts.size() && p > cuts[next_cut]) {
      if (count > 0) {
        out.checkpoints.emplace_back(cuts[next_cut], diff_sum / count);
      }
      ++next_cut;
    }
    const cplx a1 = e1.source.b(p, 1);
    const cplx a2 = e2.source.b(p, 1);
    out.sum_sq_1 += std::norm(a1);
    out.sum_sq_2 += std::norm(a2);
    out.cross += (a1 * std::conj(a2)).real();
    diff_sum += std::norm(a1 - a2);
    ++count;
  }
  while (next_cut < cuts.size()) {
    if (count > 0) out.checkpoints.emplace_back(cuts[next_cut], diff_sum / count);
    ++next_cut;
  }
  out.primes_used = count;
  out.value = count > 0 ? diff_sum / count : 0.0;
  return out;
}

std::uint64_t count_large_coeff_primes(const CoefficientSource& src,
                                       std::uint64_t x, double c, double eta) {
  if (x < 1) throw std::invalid_argument("count_large_coeff_primes: x below 1");
  if (!(c > 1.0)) {
    throw std::invalid_argument("count_large_coeff_primes: need c > 1");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("count_large_coeff_primes: need eta > 0");
  }
  const auto hi = static_cast<std::uint64_t>(
      std::floor(static_cast<long double>(c) * x));
  if (hi > 1'000'000'000) {
    throw std::invalid_argument("count_large_coeff_primes: c x above sieve range");
  }
  if (src.zero_beyond_table() && hi > src.table_limit()) {
    throw std::out_of_range(
        "count_large_coeff_primes: c x beyond the tabulated primes");
  }
  std::uint64_t count = 0;
  for (const auto p : primes_in(x, hi)) {
    const double threshold =
        static_cast<double>(std::pow(static_cast<long double>(p),
                                     -static_cast<long double>(eta)));
    if (std::abs(src.b(p, 1)) > threshold) ++count;
  }
  return count;
}

double yildirim_bound(std::uint64_t q, int k) {
  if (q < 1) throw std::invalid_argument("yildirim_bound: q must be positive");
  if (k < 1) throw std::invalid_argument("yildirim_bound: k must be positive");
  std::uint64_t m = 0;
  for (const auto p : prime_sieve(100)) {
    if (q % p != 0) {
      m = p;
      break;
    }
  }
  // The first 25 primes multiply past 2^64, so one of them misses q.
  const double md = static_cast<double>(m);
  const double kk = static_cast<double>(k);
  return 1.0 + 0.5 * md * (1.0 + std::sqrt(1.0 + 4.0 * kk * kk /
                                           (md * std::log(md))));
}

}  // namespace lvlab

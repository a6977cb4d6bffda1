#include "lvlab/cassels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lvlab/annulus.hpp"
#include "lvlab/primes.hpp"
#include "lvlab/primezeta.hpp"

namespace lvlab {
namespace {

constexpr double kTailTol = 1e-12;

// Lowest sigma offset the tail evaluation backend supports for a given
// (log p)^m weight; below it the pole expansion loses its certified error.
double offset_floor(int log_power) {
  if (log_power == 0) return 1e-300;
  if (log_power == 1) return 1e-100;
  return 1e-80;
}

// p^{-k(1+u)} with a certified absolute error bound.  u enters only through
// exp(-k u log p), so offsets far below the spacing of doubles around 1
// degrade gracefully to a factor of 1 within the slop.
struct ValErr {
  double val = 0.0;
  double err = 0.0;
};

ValErr neg_power(std::uint64_t p, std::uint32_t k, double u) {
  const double x =
      static_cast<double>(k) * (1.0 + u) * std::log(static_cast<double>(p));
  const double v = std::exp(-x);
  return {v, v * kEps * (2.0 + x)};
}

cplx unit_pow(cplx c, std::uint32_t k) {
  cplx r(1.0, 0.0);
  for (std::uint32_t i = 0; i < k; ++i) r *= c;
  return r;
}

// Certified enclosure of the starred absolute mass over x < p^k <= y:
// sum of |b(p^k)| p^{-k(1+u)} over prime powers with a large first-power
// coefficient.
RInt starred_abs_between(const CasselsConfig& cfg, double u, std::uint64_t x,
                         std::uint64_t y) {
  double sum = 0.0, err = 0.0;
  double n = 0.0;
  for (const PrimePower& pp : prime_powers_between(x, y)) {
    if (!large_coefficient(cfg.source, pp.p, cfg.epsilon)) continue;
    const double babs = std::abs(cfg.source.b(pp.p, pp.k));
    if (babs == 0.0) continue;
    const ValErr w = neg_power(pp.p, pp.k, u);
    sum += babs * w.val;
    err += babs * (w.err + w.val * kEps);
    n += 1.0;
  }
  err += sum_slop(sum, n);
  return {std::max(0.0, sum - err), sum + err};
}

// Twisted starred head sum_{p^k <= N, p large} chi(p)^k b(p^k) p^{-k(1+u)}.
Cert twisted_head(const CasselsConfig& cfg,
                  const std::map<std::uint64_t, cplx>& chi, double u,
                  std::uint64_t N) {
  cplx acc(0.0, 0.0);
  double abs_acc = 0.0, err = 0.0;
  double n = 0.0;
  for (const PrimePower& pp : prime_powers_between(1, N)) {
    if (!large_coefficient(cfg.source, pp.p, cfg.epsilon)) continue;
    const cplx b = cfg.source.b(pp.p, pp.k);
    const double babs = std::abs(b);
    if (babs == 0.0) continue;
    const auto it = chi.find(pp.p);
    if (it == chi.end())
      throw std::logic_error("twisted head: no twist assigned below the cut");
    const ValErr w = neg_power(pp.p, pp.k, u);
    acc += unit_pow(it->second, pp.k) * b * w.val;
    abs_acc += babs * w.val;
    err += babs * (w.err + w.val * kEps * (2.0 + pp.k));
    n += 1.0;
  }
  err += sum_slop(abs_acc, n);
  return {acc, err};
}

// Work cap for enumerating the small class explicitly.
std::uint64_t small_scan_cap(const CasselsConfig& cfg) {
  if (cfg.source.zero_beyond_table()) return cfg.source.table_limit();
  return std::max<std::uint64_t>(cfg.N1, 100000);
}

// Whether the minorant certifies that every prime beyond the scan cap is in
// the large class: |b(p)| >= c (log p)^m >= c > p^{-epsilon} for c >= 1.
bool no_small_primes_beyond_cap(const CasselsConfig& cfg) {
  return cfg.source.zero_beyond_table() || cfg.minorant.c >= 1.0;
}

// Full local series of every small-class prime:
// sum over small p, k >= 1 of b(p^k) p^{-k(1+u)}.
Cert small_prime_series(const CasselsConfig& cfg, double u) {
  const std::uint64_t cap = small_scan_cap(cfg);
  const GrowthCertificate& g = cfg.source.growth();
  cplx acc(0.0, 0.0);
  double abs_acc = 0.0, err = 0.0;
  double n = 0.0;
  for (std::uint32_t p : prime_sieve(cap)) {
    if (large_coefficient(cfg.source, p, cfg.epsilon)) continue;
    std::uint32_t k = 1;
    for (; k <= 2048; ++k) {
      const cplx b = cfg.source.b(p, k);
      const ValErr w = neg_power(p, k, u);
      const double babs = std::abs(b);
      acc += b * w.val;
      abs_acc += babs * w.val;
      err += babs * (w.err + w.val * kEps);
      n += 1.0;
      if (g.b_bound_const * std::pow(static_cast<double>(p),
                                     (k + 1.0) * (g.b_bound_exp - 1.0)) <
          1e-22)
        break;
    }
    // geometric remainder past the last summed power, using the growth bound
    // |b(p^k)| <= C p^{k theta} with theta < 1/2
    const double r = std::pow(static_cast<double>(p), g.b_bound_exp - 1.0);
    err += g.b_bound_const * std::pow(r, k + 1.0) / (1.0 - r);
  }
  err += sum_slop(abs_acc, n);
  if (!no_small_primes_beyond_cap(cfg)) {
    // unknown small primes past the cap: their first powers are bounded by
    // p^{-(1+epsilon)} and their higher powers by the model mass past cap^2
    err += prime_tail(static_cast<double>(cap), cfg.epsilon, 0, kTailTol).hi;
    const double x2 = std::min(static_cast<double>(cap) * static_cast<double>(cap), 9.0e8);
    err += cfg.tail_model->tail(x2, u, cfg.weight_order).hi;
  }
  return {acc, err};
}

// Sigma-independent bound on the small-class series modulus: first powers of
// small primes at exponent -(1+epsilon) plus the k >= 2 double tail of the
// model profile over all primes.
double small_class_bound(const CasselsConfig& cfg) {
  const std::uint64_t cap = small_scan_cap(cfg);
  double sum = 0.0;
  double n = 0.0;
  for (std::uint32_t p : prime_sieve(cap)) {
    if (large_coefficient(cfg.source, p, cfg.epsilon)) continue;
    sum += std::pow(static_cast<double>(p), -(1.0 + cfg.epsilon));
    n += 1.0;
  }
  double out = sum + sum_slop(sum, n);
  if (!no_small_primes_beyond_cap(cfg))
    out += prime_tail(static_cast<double>(cap), cfg.epsilon, 0, kTailTol).hi;
  out += cfg.tail_model->small_bound(0.0, cfg.epsilon, cfg.weight_order).hi;
  return out;
}

// Certified lower bound of the starred tail past N from the minorant profile
// (first powers only; higher powers can only add mass).
double starred_tail_lower(const CasselsConfig& cfg, double u, std::uint64_t N) {
  if (!(cfg.minorant.c > 0.0)) return 0.0;
  const RInt t = prime_tail(static_cast<double>(N), u, cfg.minorant.log_power,
                            kTailTol);
  const RInt scaled = cfg.minorant.c * t;
  return std::max(0.0, scaled.lo);
}

// Two-sided enclosure of the starred tail past N.
RInt starred_tail(const CasselsConfig& cfg, double u, std::uint64_t N) {
  const double lo = starred_tail_lower(cfg, u, N);
  const double hi = cfg.tail_model->tail(static_cast<double>(N), u,
                                         cfg.weight_order).hi;
  if (lo > hi)
    throw std::invalid_argument(
        "starred tail: minorant lower bound exceeds the tail model upper "
        "bound; the config's profiles are inconsistent");
  return {lo, hi};
}

std::uint64_t block_size(double c0, std::uint64_t N) {
  return static_cast<std::uint64_t>(std::floor(c0 * static_cast<double>(N)));
}

// Cut after `levels` certificate levels starting from N1.
std::uint64_t final_cut(const CasselsConfig& cfg) {
  std::uint64_t N = cfg.N1;
  for (int j = 1; j < cfg.max_blocks; ++j) {
    const std::uint64_t M = block_size(cfg.c0, N);
    if (N > (std::uint64_t{1} << 40) - M)
      throw std::invalid_argument("config: cut overflows the supported range");
    N += M;
  }
  return N;
}

void validate_config(const CasselsConfig& cfg) {
  if (!cfg.tail_model)
    throw std::invalid_argument("config: tail model is required");
  if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta))
    throw std::invalid_argument("config: delta must be positive");
  if (!(cfg.c0 > 0.0) || !std::isfinite(cfg.c0))
    throw std::invalid_argument("config: c0 must be positive");
  if (static_cast<double>(cfg.N1) <= (1.0 + cfg.c0) * (1.0 + cfg.c0))
    throw std::invalid_argument(
        "config: starting cut N1 must exceed (1 + c0)^2 so block powers stay "
        "below already-twisted primes");
  if (block_size(cfg.c0, cfg.N1) < 1)
    throw std::invalid_argument("config: c0 * N1 < 1 gives an empty block");
  const double theta = cfg.source.growth().b_bound_exp;
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < (0.5 - theta) / 2.0))
    throw std::invalid_argument(
        "config: epsilon must lie in (0, (1/2 - theta)/2) so the fresh-mass "
        "ratio grows like N^{1/2 - theta - 2 epsilon}");
  if (cfg.max_blocks < 1)
    throw std::invalid_argument("config: need at least the base level");
  if (!(cfg.chain_constant > 0.0) || cfg.chain_constant > 0.2)
    throw std::invalid_argument("config: chain constant outside (0, 0.2]");
  if (cfg.weight_order < 0 || cfg.weight_order > 2)
    throw std::invalid_argument("config: weight order outside {0, 1, 2}");
  if (cfg.minorant.log_power < 0 || cfg.minorant.log_power > 2)
    throw std::invalid_argument("config: minorant log power outside {0, 1, 2}");
  if (!(cfg.minorant.c >= 0.0) || !std::isfinite(cfg.minorant.c))
    throw std::invalid_argument("config: minorant coefficient must be >= 0");
  if (!std::isfinite(std::abs(cfg.z)))
    throw std::invalid_argument("config: target must be finite");

  const std::uint64_t last = final_cut(cfg);
  if (cfg.source.zero_beyond_table() && last > cfg.source.table_limit()) {
    std::ostringstream msg;
    msg << "config: coefficients are tabulated only to "
        << cfg.source.table_limit() << " but the run reaches cut " << last
        << "; reduce max_blocks or supply a closed-form source";
    throw std::invalid_argument(msg.str());
  }
  if (last > 100'000'000)
    throw std::invalid_argument("config: final cut exceeds the supported range");

  if (cfg.minorant.c > 0.0) {
    // the minorant claims every prime past N1 is large with
    // |b(p)| >= c (log p)^m; verify it on the enumerable range
    const std::uint64_t hi =
        std::max<std::uint64_t>(last, std::min<std::uint64_t>(
                                          cfg.source.table_limit(), 100000));
    for (std::uint32_t p : primes_in(cfg.N1, hi)) {
      const double babs = std::abs(cfg.source.b(p, 1));
      const double want =
          cfg.minorant.c *
          std::pow(std::log(static_cast<double>(p)),
                   static_cast<double>(cfg.minorant.log_power));
      if (babs < want * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "config: tail minorant violated at p = " << p << " (|b(p)| = "
            << babs << " < " << want << ")";
        throw std::invalid_argument(msg.str());
      }
      if (!large_coefficient(cfg.source, p, cfg.epsilon)) {
        std::ostringstream msg;
        msg << "config: minorant claims all primes past N1 are large, but p = "
            << p << " is small at epsilon = " << cfg.epsilon;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

BlockCertificate certify_level(const CasselsConfig& cfg,
                               const std::map<std::uint64_t, cplx>& chi,
                               double u, int level, std::uint64_t N,
                               const Cert& small, const RInt& tail) {
  BlockCertificate cert;
  cert.j = level;
  const Cert dev = twisted_head(cfg, chi, u, N) + small - Cert(cfg.z);
  cert.lhs = {dev.abs_lo(), dev.abs_hi()};
  cert.rhs = cfg.chain_constant * tail;
  cert.holds = certainly_le(cert.lhs, cert.rhs);
  cert.margin = cert.rhs.lo - cert.lhs.hi;
  return cert;
}

}  // namespace

bool large_coefficient(const CoefficientSource& source, std::uint64_t p,
                       double epsilon) {
  return std::abs(source.b(p, 1)) >
         std::pow(static_cast<double>(p), -epsilon);
}

cplx block_target(cplx lambda, double s3_lo) {
  const double a = std::abs(lambda);
  if (a == 0.0) return cplx(0.0, 0.0);
  if (a <= s3_lo) return -lambda;
  return -(s3_lo / a) * lambda;
}

CasselsConfig inv_k_weighted_config(const CoefficientSource& base, int m,
                                    cplx z, double delta, std::uint64_t N1,
                                    double c0, double epsilon, int max_blocks) {
  if (m < 0 || m > 2)
    throw std::invalid_argument("config: weight order outside {0, 1, 2}");
  CasselsConfig cfg{
      .z = z,
      .delta = delta,
      .N1 = N1,
      .c0 = c0,
      .epsilon = epsilon,
      .max_blocks = max_blocks,
      .source = log_derivative_source(base, m),
      .tail_model =
          std::make_shared<DeterministicTailModel>(1.0, KWeight::inv_k),
      .weight_order = m,
      .minorant = {1.0, m},
      .chain_constant = 1e-2,
  };
  // the wiring above is only sound for the exact profile
  // |b(p^k)| = (1/k) (k log p)^m; verify it against the table
  for (const auto& [key, val] : cfg.source.table()) {
    const auto& [p, k] = key;
    const double wk = std::pow(
        k * std::log(static_cast<double>(p)), static_cast<double>(m));
    const double want = wk / static_cast<double>(k);
    if (std::abs(std::abs(val) - want) > 1e-9 * (1.0 + want)) {
      std::ostringstream msg;
      msg << "config: source is not (1/k)(k log p)^m weighted at p = " << p
          << ", k = " << k;
      throw std::invalid_argument(msg.str());
    }
  }
  return cfg;
}

double choose_sigma_offset(const CasselsConfig& cfg) {
  validate_config(cfg);
  const double S0 = small_class_bound(cfg);
  const double zmod = std::abs(cfg.z);
  const double margin = std::max(1e-6, 1e-4 * (1.0 + zmod));

  const auto feasible = [&](double u) {
    const double lhs = starred_abs_between(cfg, u, 1, cfg.N1).hi + zmod + S0;
    const double rhs =
        cfg.chain_constant * starred_tail_lower(cfg, u, cfg.N1) *
        (1.0 - 2.0 * kEps);
    return rhs >= lhs + margin;
  };

  const double floor_u = offset_floor(cfg.minorant.log_power);
  const double u_max = cfg.delta * (1.0 - 1e-9);
  if (u_max < floor_u) {
    std::ostringstream msg;
    msg << "no admissible sigma: the window (1, 1 + " << cfg.delta
        << ") lies below the evaluation floor u = " << floor_u
        << " of the starred first-power tail bound";
    throw CasselsInfeasibleError(msg.str());
  }
  if (feasible(u_max)) return u_max;
  if (!feasible(floor_u)) {
    const double got = starred_tail_lower(cfg, floor_u, cfg.N1);
    const double need =
        (starred_abs_between(cfg, floor_u, 1, cfg.N1).hi + zmod + S0) /
        cfg.chain_constant;
    std::ostringstream msg;
    msg << "no admissible sigma: the certified lower bound of the starred "
           "first-power tail sum_{p > "
        << cfg.N1 << "} |b(p)| p^{-(1+u)} tops out at " << got
        << " (offset floor u = " << floor_u << "), but the head-plus-target "
        << "mass needs " << need
        << "; this tail is the limiting term (shrink N1 or the target)";
    throw CasselsInfeasibleError(msg.str());
  }

  double t_good = std::log(floor_u);
  double t_bad = std::log(u_max);
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (t_good + t_bad);
    if (feasible(std::exp(mid)))
      t_good = mid;
    else
      t_bad = mid;
  }
  return std::exp(t_good);
}

std::pair<CasselsState, BlockCertificate> initial_state(
    const CasselsConfig& cfg, double sigma_u) {
  validate_config(cfg);
  if (!(sigma_u > 0.0) || !(sigma_u < cfg.delta))
    throw std::invalid_argument("initial state: sigma offset outside (0, delta)");

  CasselsState st;
  st.j = 1;
  st.Nj = cfg.N1;
  st.Mj = block_size(cfg.c0, cfg.N1);
  st.sigma_u = sigma_u;
  for (std::uint32_t p : prime_sieve(cfg.N1)) st.chi[p] = cplx(1.0, 0.0);
  st.S0 = small_class_bound(cfg);

  const Cert small = small_prime_series(cfg, sigma_u);
  const RInt tail = starred_tail(cfg, sigma_u, cfg.N1);
  BlockCertificate cert =
      certify_level(cfg, st.chi, sigma_u, 1, cfg.N1, small, tail);
  cert.s3_over_s2 = 0.0;
  cert.ratio_ok = true;

  const Cert dev = twisted_head(cfg, st.chi, sigma_u, cfg.N1) + small - Cert(cfg.z);
  st.Lambda = dev;
  st.S1 = cert.lhs;
  st.S2 = RInt::point(0.0);
  st.S3 = RInt::point(0.0);
  st.S4 = tail;
  return {std::move(st), cert};
}

std::pair<CasselsState, BlockCertificate> block_step(const CasselsState& state,
                                                     const CasselsConfig& cfg) {
  validate_config(cfg);
  if (state.j < 1 || state.Nj < cfg.N1 || state.chi.empty())
    throw std::invalid_argument("block step: state is not initialized");
  if (state.Mj < 1)
    throw std::invalid_argument("block step: empty block");
  const double u = state.sigma_u;
  const std::uint64_t Nj = state.Nj;
  const std::uint64_t Nn = Nj + state.Mj;
  if (cfg.source.zero_beyond_table() && Nn > cfg.source.table_limit())
    throw std::invalid_argument("block step: block exceeds the tabulated range");

  CasselsState st;
  st.j = state.j + 1;
  st.Nj = Nn;
  st.Mj = block_size(cfg.c0, Nn);
  st.sigma_u = u;
  st.chi = state.chi;
  st.S0 = state.S0;

  // classify the block
  std::vector<std::uint64_t> fresh;  // large primes entering at first power
  for (const PrimePower& pp : prime_powers_between(Nj, Nn)) {
    if (!large_coefficient(cfg.source, pp.p, cfg.epsilon)) continue;
    if (pp.k == 1) {
      st.setA.push_back({pp.p, 1});
      fresh.push_back(pp.p);
    } else {
      if (st.chi.find(pp.p) == st.chi.end())
        throw std::logic_error(
            "block step: higher power of an untwisted prime inside the block");
      st.setB.push_back({pp.p, pp.k});
    }
  }

  // certified S-quantities
  const Cert small = small_prime_series(cfg, u);
  const Cert s1c = twisted_head(cfg, st.chi, u, Nj) + small - Cert(cfg.z);
  st.S1 = {s1c.abs_lo(), s1c.abs_hi()};

  cplx bsum(0.0, 0.0);
  {
    double abs2 = 0.0, err2 = 0.0, n2 = 0.0;
    double berr = 0.0;
    for (const auto& [p, k] : st.setB) {
      const cplx b = cfg.source.b(p, k);
      const double babs = std::abs(b);
      const ValErr w = neg_power(p, k, u);
      bsum += unit_pow(st.chi.at(p), k) * b * w.val;
      abs2 += babs * w.val;
      err2 += babs * (w.err + w.val * kEps);
      berr += babs * (w.err + w.val * kEps * (2.0 + k));
      n2 += 1.0;
    }
    err2 += sum_slop(abs2, n2);
    berr += sum_slop(abs2, n2);
    st.S2 = {std::max(0.0, abs2 - err2), abs2 + err2};
    st.Lambda = s1c + Cert(bsum, berr);
  }

  double s3_abs = 0.0;
  std::vector<cplx> radii;
  radii.reserve(fresh.size());
  {
    double err3 = 0.0, n3 = 0.0;
    for (std::uint64_t p : fresh) {
      const cplx b = cfg.source.b(p, 1);
      const double babs = std::abs(b);
      const ValErr w = neg_power(p, 1, u);
      radii.push_back(b * w.val);
      s3_abs += babs * w.val;
      err3 += babs * (w.err + w.val * kEps);
      n3 += 1.0;
    }
    err3 += sum_slop(s3_abs, n3);
    st.S3 = {std::max(0.0, s3_abs - err3), s3_abs + err3};
  }
  st.S4 = starred_tail(cfg, u, Nn);

  // certified fresh-mass ratio: (1 - c) S3 >= (1 + c) S2, i.e.
  // S3/S2 >= (1+c)/(1-c), which is S2 - S3 <= -c (S2 + S3)
  const double c = cfg.chain_constant;
  const bool ratio_ok = (1.0 - c) * st.S3.lo * (1.0 - 2.0 * kEps) >=
                        (1.0 + c) * st.S2.hi * (1.0 + 2.0 * kEps);
  if (!ratio_ok) {
    std::ostringstream msg;
    msg << "block (" << Nj << ", " << Nn << "]: certified fresh first-power "
        << "mass S3 >= " << st.S3.lo << " does not dominate the block's "
        << "higher-power mass S2 <= " << st.S2.hi << " by the required factor "
        << (1.0 + c) / (1.0 - c)
        << "; enlarge the starting cut N1 or the block growth c0";
    throw BlockTooSmallError(msg.str());
  }
  const double s3_over_s2 =
      st.S2.hi > 0.0 ? st.S3.lo / st.S2.hi
                     : std::numeric_limits<double>::infinity();

  // steer: pick the block target and solve the fresh phases
  const cplx z0 = block_target(st.Lambda.v, st.S3.lo);
  try {
    const RadiiSet rs(radii);
    const double tol = 1e-10 * std::max(1.0, st.S3.hi);
    const std::vector<cplx> phases = decompose(rs, z0, tol);
    for (std::size_t i = 0; i < phases.size(); ++i)
      st.chi[fresh[rs.original_indices()[i]]] = phases[i];
  } catch (const UnreachableError& e) {
    std::ostringstream msg;
    msg << "block (" << Nj << ", " << Nn << "]: target z0 = (" << z0.real()
        << ", " << z0.imag() << ") with |z0| = " << std::abs(z0)
        << " escaped the reachable annulus [" << e.interval().inner << ", "
        << e.interval().outer << "] of " << radii.size()
        << " fresh radii (|Lambda| = " << std::abs(st.Lambda.v)
        << ", S3 = [" << st.S3.lo << ", " << st.S3.hi << "]): " << e.what();
    throw ConstructionFailureError(msg.str());
  } catch (const std::runtime_error& e) {
    std::ostringstream msg;
    msg << "block (" << Nj << ", " << Nn << "]: phase solve failed: "
        << e.what();
    throw ConstructionFailureError(msg.str());
  }

  BlockCertificate cert =
      certify_level(cfg, st.chi, u, st.j, Nn, small, st.S4);
  cert.s3_over_s2 = s3_over_s2;
  cert.ratio_ok = ratio_ok;
  return {std::move(st), cert};
}

CasselsRun run_cassels(const CasselsConfig& cfg) {
  const double u = choose_sigma_offset(cfg);
  auto [state, cert] = initial_state(cfg, u);
  CasselsRun run;
  run.sigma_u = u;
  run.certificates.push_back(cert);
  while (state.j < cfg.max_blocks) {
    auto [next, next_cert] = block_step(state, cfg);
    state = std::move(next);
    run.certificates.push_back(next_cert);
  }
  run.residual = run.certificates.back().lhs;
  run.residual_bound =
      (1.0 + cfg.chain_constant) * state.S4.hi * (1.0 + 4.0 * kEps);
  run.state = std::move(state);
  return run;
}

}  // namespace lvlab

#include "lvlab/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lvlab/primes.hpp"
#include "lvlab/simd.hpp"

namespace lvlab {
namespace {

using ld = long double;
using i128 = __int128;

constexpr ld kPi = 3.14159265358979323846264338327950288L;
constexpr double kUnimodularTol = 1e-9;

struct Phases {
  std::vector<double> lnp;  // log p, in the order of target.primes
  std::vector<double> tre;  // Re chi(p)
  std::vector<double> tim;  // Im chi(p)
  std::vector<double> phi;  // arg chi(p)
};

Phases unpack(const ShiftTarget& target) {
  Phases ph;
  for (std::uint32_t p : target.primes) {
    const cplx chi = target.targets.at(p);
    ph.lnp.push_back(std::log(static_cast<double>(p)));
    ph.tre.push_back(chi.real());
    ph.tim.push_back(chi.imag());
    ph.phi.push_back(std::arg(chi));
  }
  return ph;
}

double quality_at(const Phases& ph, double tau) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ph.lnp.size(); ++i) {
    const double ang = -tau * ph.lnp[i];
    const double dre = std::cos(ang) - ph.tre[i];
    const double dim = std::sin(ang) - ph.tim[i];
    worst = std::max(worst, std::hypot(dre, dim));
  }
  return worst;
}

// Local minimization of quality_at: coarse scan of the window, then golden
// section inside the best pocket.  quality_at is a max of smooth arcs, so it
// is only piecewise smooth; the scan locates the pocket and the golden
// section is reliable within it.
double sharpen(const Phases& ph, double tau0, double radius) {
  const int npts = 512;
  double best_q = quality_at(ph, tau0);
  double best_t = tau0;
  for (int i = 0; i <= npts; ++i) {
    const double t = tau0 - radius + 2.0 * radius * i / npts;
    const double q = quality_at(ph, t);
    if (q < best_q) {
      best_q = q;
      best_t = t;
    }
  }
  double a = best_t - 2.0 * radius / npts;
  double c = best_t + 2.0 * radius / npts;
  const double g = 0.6180339887498949;
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  double f1 = quality_at(ph, x1), f2 = quality_at(ph, x2);
  for (int it = 0; it < 140; ++it) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = quality_at(ph, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = quality_at(ph, x2);
    }
  }
  const double xb = f1 < f2 ? x1 : x2;
  return std::min(f1, f2) < best_q ? xb : best_t;
}

// Lattice basis with an exact integer record of the row operations, so that
// the multipliers of the generator and target rows can be read off reduced
// rows without float round-off.  Long-double LLL in the style of Cohen's
// Algorithm 2.6.3 with incremental Gram-Schmidt bookkeeping.
struct Lattice {
  int n = 0, dim = 0;
  std::vector<std::vector<ld>> b;
  std::vector<std::vector<i128>> coef;

  void init(int n_, int dim_) {
    n = n_;
    dim = dim_;
    b.assign(n, std::vector<ld>(dim, 0));
    coef.assign(n, std::vector<i128>(n, 0));
    for (int i = 0; i < n; ++i) coef[i][i] = 1;
  }

  ld dot(const std::vector<ld>& x, const std::vector<ld>& y) const {
    ld s = 0;
    for (int k = 0; k < dim; ++k) s += x[k] * y[k];
    return s;
  }

  // Reduce with delta = 0.99.  Returns false if the Gram-Schmidt data
  // degenerated (precision loss); the basis is then left partially reduced,
  // which only costs candidate quality, never soundness.
  bool reduce() {
    std::vector<std::vector<ld>> mu(n, std::vector<ld>(n, 0));
    std::vector<ld> B(n, 0);
    std::vector<ld> c(n, 0);
    int kmax = 0;
    B[0] = dot(b[0], b[0]);
    if (!(B[0] > 0)) return false;

    auto arrive = [&](int k) -> bool {
      for (int j = 0; j < k; ++j) {
        ld s = dot(b[k], b[j]);
        for (int i = 0; i < j; ++i) s -= mu[j][i] * c[i];
        c[j] = s;
        if (!(B[j] > 0)) return false;
        mu[k][j] = s / B[j];
      }
      ld s = dot(b[k], b[k]);
      for (int j = 0; j < k; ++j) s -= mu[k][j] * c[j];
      B[k] = s;
      return B[k] > 0;
    };

    auto red = [&](int k, int l) {
      if (std::fabs(static_cast<double>(mu[k][l])) <= 0.5) return;
      const ld r = std::round(mu[k][l]);
      if (std::fabs(static_cast<double>(r)) > 9.2e18) return;  // int64 guard
      const long long ri = static_cast<long long>(r);
      for (int col = 0; col < dim; ++col) b[k][col] -= r * b[l][col];
      for (int col = 0; col < n; ++col) coef[k][col] -= static_cast<i128>(ri) * coef[l][col];
      for (int i = 0; i < l; ++i) mu[k][i] -= r * mu[l][i];
      mu[k][l] -= r;
    };

    int k = 1;
    long guard = 0;
    while (k < n) {
      if (++guard > 2000000) return false;
      if (k > kmax) {
        kmax = k;
        if (!arrive(k)) return false;
      }
      red(k, k - 1);
      if (B[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
        std::swap(b[k], b[k - 1]);
        std::swap(coef[k], coef[k - 1]);
        const ld m = mu[k][k - 1];
        const ld Bn = B[k] + m * m * B[k - 1];
        if (!(Bn > 0)) return false;
        mu[k][k - 1] = m * B[k - 1] / Bn;
        B[k] = B[k - 1] * B[k] / Bn;
        B[k - 1] = Bn;
        for (int j = 0; j < k - 1; ++j) std::swap(mu[k][j], mu[k - 1][j]);
        for (int i = k + 1; i <= kmax; ++i) {
          const ld t = mu[i][k];
          mu[i][k] = mu[i][k - 1] - m * t;
          mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
        }
        k = std::max(k - 1, 1);
      } else {
        for (int l = k - 2; l >= 0; --l) red(k, l);
        ++k;
      }
    }
    return true;
  }

  // Orthogonalized copy of the reduced basis, for nearest-plane rounding.
  void orthogonalize(std::vector<std::vector<ld>>& bs, std::vector<ld>& B) const {
    bs.assign(n, std::vector<ld>(dim, 0));
    B.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (int j = 0; j < i; ++j) {
        const ld d = B[j] > 0 ? dot(b[i], bs[j]) / B[j] : 0;
        for (int k = 0; k < dim; ++k) bs[i][k] -= d * bs[j][k];
      }
      B[i] = dot(bs[i], bs[i]);
    }
  }

  // Babai nearest-plane against the (reduced) basis: integer coefficients of
  // a lattice point close to t.  With an RNG, rounds each plane coordinate
  // up or down at random (Klein-style) to sample diverse nearby points.
  std::vector<i128> nearest(const std::vector<std::vector<ld>>& bs,
                            const std::vector<ld>& B, const std::vector<ld>& t,
                            std::mt19937_64* rng = nullptr) const {
    std::vector<ld> v = t;
    std::vector<i128> out(n, 0);
    for (int i = n - 1; i >= 0; --i) {
      const ld proj = B[i] > 0 ? dot(v, bs[i]) / B[i] : 0;
      if (std::fabs(static_cast<double>(proj)) > 9.2e18) continue;
      long long r = static_cast<long long>(std::llround(static_cast<double>(proj)));
      if (rng) {
        const double fl = std::floor(static_cast<double>(proj));
        const double frac = static_cast<double>(proj) - fl;
        const double u =
            static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
        r = static_cast<long long>(fl) + (u < frac ? 1 : 0);
      }
      for (int k = 0; k < dim; ++k) v[k] -= static_cast<ld>(r) * b[i][k];
      for (int j = 0; j < n; ++j) out[j] += static_cast<i128>(r) * coef[i][j];
    }
    return out;
  }
};

bool i128_fits_i64(i128 x) {
  return x <= static_cast<i128>(std::numeric_limits<long long>::max()) &&
         x >= static_cast<i128>(std::numeric_limits<long long>::min());
}

}  // namespace

void validate_target(const ShiftTarget& target) {
  if (target.primes.empty())
    throw std::invalid_argument("shift target: empty prime list");
  std::vector<std::uint32_t> sorted = target.primes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("shift target: duplicate prime");
  for (std::uint32_t p : sorted) {
    if (!is_prime_u64(p)) {
      std::ostringstream os;
      os << "shift target: " << p << " is not prime";
      throw std::invalid_argument(os.str());
    }
    auto it = target.targets.find(p);
    if (it == target.targets.end()) {
      std::ostringstream os;
      os << "shift target: no target value for prime " << p;
      throw std::invalid_argument(os.str());
    }
    if (std::fabs(std::abs(it->second) - 1.0) > kUnimodularTol) {
      std::ostringstream os;
      os << "shift target: target for prime " << p << " has modulus "
         << std::abs(it->second) << ", not unimodular";
      throw std::invalid_argument(os.str());
    }
  }
  if (!(target.epsilon1 > 0.0) || !std::isfinite(target.epsilon1))
    throw std::invalid_argument("shift target: epsilon1 must be positive and finite");
}

double shift_quality(const ShiftTarget& target, double tau) {
  double worst = 0.0;
  for (std::uint32_t p : target.primes) {
    const double ang = -tau * std::log(static_cast<double>(p));
    const cplx diff = cplx(std::cos(ang), std::sin(ang)) - target.targets.at(p);
    worst = std::max(worst, std::abs(diff));
  }
  return worst;
}

double default_grid_step(const ShiftTarget& target) {
  validate_target(target);
  const double maxlnp =
      std::log(static_cast<double>(*std::max_element(target.primes.begin(), target.primes.end())));
  return target.epsilon1 / (4.0 * maxlnp);
}

std::vector<ShiftSolution> find_tau_grid(const ShiftTarget& target, double T,
                                         double step) {
  validate_target(target);
  if (!(T > 0.0) || T > kMaxTauDomain)
    throw std::invalid_argument("grid search: T must lie in (0, 1e12]");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("grid search: step must be positive");
  const double maxlnp =
      std::log(static_cast<double>(*std::max_element(target.primes.begin(), target.primes.end())));
  if (step * maxlnp > target.epsilon1 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "grid search: step " << step << " is coarser than epsilon1 / log p_max = "
       << target.epsilon1 / maxlnp
       << "; a solution window could fall between grid points";
    throw std::invalid_argument(os.str());
  }
  const double count_d = std::floor(T / step) + 1.0;
  if (count_d > 4294967295.0)
    throw std::invalid_argument(
        "grid search: more than 2^32 - 1 grid points; raise step or lower T");
  const std::uint64_t count = static_cast<std::uint64_t>(count_d);

  const Phases ph = unpack(target);
  std::vector<ShiftSolution> out;
  std::vector<std::uint32_t> hits;
  const std::uint64_t chunk = 1u << 20;
  for (std::uint64_t base = 0; base < count; base += chunk) {
    const std::uint64_t cnt = std::min<std::uint64_t>(chunk, count - base);
    const double tau0 = static_cast<double>(base) * step;
    hits.clear();
    simd::grid_scan(ph.lnp.data(), ph.tre.data(), ph.tim.data(), ph.lnp.size(),
                    tau0, step, static_cast<std::size_t>(cnt), target.epsilon1,
                    hits);
    for (std::uint32_t j : hits) {
      const double tau = tau0 + static_cast<double>(j) * step;
      const double q = shift_quality(target, tau);
      if (q < target.epsilon1)
        out.push_back(ShiftSolution{tau, q, ShiftMethod::grid});
    }
  }
  return out;
}

std::vector<ShiftSolution> find_tau_grid(const ShiftTarget& target, double T) {
  return find_tau_grid(target, T, default_grid_step(target));
}

ShiftSolution refine_shift(const ShiftTarget& target, double tau0,
                           double radius) {
  validate_target(target);
  if (!std::isfinite(tau0) || !(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("refine: tau0 and radius must be finite, radius > 0");
  const Phases ph = unpack(target);
  const double t = sharpen(ph, tau0, radius);
  return ShiftSolution{t, shift_quality(target, t), ShiftMethod::grid};
}

LatticeOutcome find_tau_lattice(const ShiftTarget& target, double max_height) {
  validate_target(target);
  if (target.primes.size() > 40)
    throw std::invalid_argument("lattice search: at most 40 primes");
  if (!(max_height > 0.0) || max_height > kMaxTauDomain)
    throw std::invalid_argument("lattice search: max_height must lie in (0, 1e12]");

  const Phases ph = unpack(target);
  const int d = static_cast<int>(ph.lnp.size());
  const double eps1 = target.epsilon1;
  const double maxlnp = *std::max_element(ph.lnp.begin(), ph.lnp.end());
  const double arc_tol = 2.0 * std::asin(std::min(1.0, eps1 / 2.0));

  LatticeOutcome out;
  out.best_quality = std::numeric_limits<double>::infinity();
  auto consider = [&](double tau) {
    if (!std::isfinite(tau) || std::fabs(tau) > max_height) return;
    const double q = shift_quality(target, tau);
    if (q < out.best_quality) {
      out.best_quality = q;
      out.best_tau = tau;
    }
  };
  consider(0.0);

  const double h0 = eps1 / (8.0 * maxlnp);
  const double span_steps = 2.0 * max_height / h0;
  if (d == 1) {
    // One prime: the solutions are exactly tau = (2 pi m - phi) / log p, so
    // pick the admissible m closest to zero, or the nearest out-of-window one
    // when the window is shorter than a period.
    const double lnp = ph.lnp[0], phi = ph.phi[0];
    const double two_pi = 2.0 * static_cast<double>(kPi);
    const double mlo = std::ceil((-max_height * lnp + phi) / two_pi);
    const double mhi = std::floor((max_height * lnp + phi) / two_pi);
    const double m0 = std::round(phi / two_pi);
    for (double m : {std::min(std::max(m0, mlo), mhi), mlo, mhi}) {
      const double tau = (two_pi * m - phi) / lnp;
      consider(tau);
      consider(sharpen(ph, tau, 2.0 * h0));
    }
    consider(max_height);
    consider(-max_height);
  } else if (span_steps <= 4.0e6) {
    // Exhaustive path: the whole window fits in a few million resolution
    // steps, so scan it outright and polish the best pocket.
    const std::uint64_t count = static_cast<std::uint64_t>(span_steps) + 2;
    const std::uint64_t chunk = 1u << 20;
    std::vector<std::uint32_t> hits;
    std::vector<double> qual;
    double coarse_q = std::numeric_limits<double>::infinity();
    double coarse_t = 0.0;
    for (std::uint64_t base = 0; base < count; base += chunk) {
      const std::uint64_t cnt = std::min<std::uint64_t>(chunk, count - base);
      const double tau0 = -max_height + static_cast<double>(base) * h0;
      hits.clear();
      qual.assign(cnt, 0.0);
      simd::grid_scan(ph.lnp.data(), ph.tre.data(), ph.tim.data(), ph.lnp.size(),
                      tau0, h0, static_cast<std::size_t>(cnt), 0.0, hits,
                      qual.data());
      for (std::uint64_t j = 0; j < cnt; ++j) {
        if (qual[j] < coarse_q) {
          coarse_q = qual[j];
          coarse_t = tau0 + static_cast<double>(j) * h0;
        }
      }
    }
    consider(coarse_t);
    consider(sharpen(ph, coarse_t, 2.0 * h0));
  } else {
    // Reduction path: simultaneous diophantine approximation, the scale swept
    // over powers of two, every candidate re-verified through consider().
    // Candidates within a parameter set are ranked by raw quality and only
    // the best few are polished.
    const int kPolish = 8;
    for (int hdiv : {8, 32}) {
      const double h = eps1 / (hdiv * maxlnp);
      const ld amax = static_cast<ld>(max_height / h);
      for (int e = 8; e <= 48 && !(out.best_quality < eps1); e += 2) {
        const ld S = std::pow(2.0L, static_cast<ld>(e));
        for (double wfac : {0.3, 1.0, 0.1}) {
          for (double Wfac : {0.7, 0.35, 1.4}) {
            std::vector<double> cand;
            std::vector<double> periods;  // short almost-periods of the window
            auto push_tau = [&](double tau) {
              if (std::isfinite(tau) && std::fabs(tau) <= max_height)
                cand.push_back(tau);
            };

            Lattice kan;  // Kannan embedding: generator + wraps + target row
            kan.init(d + 2, d + 2);
            const ld w_a =
                S * static_cast<ld>(arc_tol) / amax * static_cast<ld>(wfac);
            const ld W = S * static_cast<ld>(arc_tol) * static_cast<ld>(Wfac) *
                         std::sqrt(static_cast<ld>(d));
            for (int i = 0; i < d; ++i)
              kan.b[0][i] = S * static_cast<ld>(h) * static_cast<ld>(ph.lnp[i]);
            kan.b[0][d] = w_a;
            for (int j = 0; j < d; ++j) kan.b[1 + j][j] = S * 2.0L * kPi;
            for (int i = 0; i < d; ++i)
              kan.b[d + 1][i] = S * static_cast<ld>(ph.phi[i]);
            kan.b[d + 1][d + 1] = W;
            if (kan.reduce()) {
              for (int r = 0; r < kan.n; ++r) {
                const i128 m = kan.coef[r][d + 1];
                i128 a = kan.coef[r][0];
                if (!i128_fits_i64(a)) continue;
                const double tau = static_cast<double>(
                    static_cast<ld>(h) * static_cast<ld>(static_cast<long long>(a)));
                if (m == 0 && tau != 0.0)
                  periods.push_back(tau);
                else if (m == 1)
                  push_tau(tau);
                else if (m == -1)
                  push_tau(-tau);
              }
            }

            Lattice hom;  // homogeneous part, for Babai nearest-plane
            hom.init(d + 1, d + 1);
            for (int i = 0; i < d; ++i)
              hom.b[0][i] = S * static_cast<ld>(h) * static_cast<ld>(ph.lnp[i]);
            hom.b[0][d] = w_a;
            for (int j = 0; j < d; ++j) hom.b[1 + j][j] = S * 2.0L * kPi;
            if (hom.reduce()) {
              std::vector<std::vector<ld>> bs;
              std::vector<ld> B;
              hom.orthogonalize(bs, B);
              std::vector<ld> t(d + 1, 0);
              for (int i = 0; i < d; ++i) t[i] = -S * static_cast<ld>(ph.phi[i]);
              const std::vector<i128> cf = hom.nearest(bs, B, t);
              if (i128_fits_i64(cf[0]))
                push_tau(static_cast<double>(
                    static_cast<ld>(h) *
                    static_cast<ld>(static_cast<long long>(cf[0]))));
              // diversify with randomized nearest-plane roundings,
              // deterministically seeded per parameter set
              std::mt19937_64 rng(static_cast<std::uint64_t>(e) * 1000003u +
                                  static_cast<std::uint64_t>(hdiv) * 131u +
                                  static_cast<std::uint64_t>(wfac * 10) * 17u +
                                  static_cast<std::uint64_t>(Wfac * 100));
              for (int s = 0; s < 24; ++s) {
                const std::vector<i128> cs = hom.nearest(bs, B, t, &rng);
                if (i128_fits_i64(cs[0]))
                  push_tau(static_cast<double>(
                      static_cast<ld>(h) *
                      static_cast<ld>(static_cast<long long>(cs[0]))));
              }
              for (int r = 0; r < hom.n && periods.size() < 6; ++r) {
                if (!i128_fits_i64(hom.coef[r][0])) continue;
                const double tp = static_cast<double>(
                    static_cast<ld>(h) *
                    static_cast<ld>(static_cast<long long>(hom.coef[r][0])));
                if (tp != 0.0) periods.push_back(tp);
              }
            }

            // widen each candidate by a small neighborhood of almost-periods:
            // tau + k * T_a changes every phase only slightly when T_a is a
            // good period, often enough to hop into the true pocket
            const std::size_t ncand0 = cand.size();
            for (std::size_t ci = 0; ci < ncand0; ++ci)
              for (double tp : periods)
                for (int kk : {-2, -1, 1, 2})
                  push_tau(cand[ci] + kk * tp);

            std::vector<std::pair<double, double>> ranked;  // (quality, tau)
            ranked.reserve(cand.size());
            for (double tau : cand) ranked.emplace_back(quality_at(ph, tau), tau);
            std::sort(ranked.begin(), ranked.end());
            const std::size_t top =
                std::min<std::size_t>(ranked.size(), kPolish);
            for (std::size_t ci = 0; ci < top; ++ci) {
              consider(ranked[ci].second);
              consider(sharpen(ph, ranked[ci].second, 8.0 * h));
            }
            if (out.best_quality < eps1) break;
          }
          if (out.best_quality < eps1) break;
        }
      }
      if (out.best_quality < eps1) break;
    }
  }

  if (out.best_quality < eps1)
    out.solution =
        ShiftSolution{out.best_tau, out.best_quality, ShiftMethod::lattice};
  return out;
}

double power_error_bound(double epsilon1, std::uint64_t k, std::uint64_t M) {
  if (!(epsilon1 > 0.0) || !std::isfinite(epsilon1))
    throw std::invalid_argument("power bound: epsilon1 must be positive and finite");
  if (k < 1 || k > M)
    throw std::invalid_argument("power bound: need 1 <= k <= M");
  return static_cast<double>(k) * epsilon1;
}

double arc_measure_fraction(double epsilon1) {
  if (!(epsilon1 > 0.0)) return 0.0;
  return 2.0 * std::asin(std::min(epsilon1, 2.0) / 2.0) / kPi;
}

DensityEstimate density_estimate(const ShiftTarget& target, double T,
                                 std::uint64_t samples, std::uint64_t seed) {
  validate_target(target);
  if (samples < 1000)
    throw std::invalid_argument("density estimate: need at least 1000 samples");
  if (!(T > 0.0) || T > kMaxTauDomain)
    throw std::invalid_argument("density estimate: T must lie in (0, 1e12]");

  const Phases ph = unpack(target);
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    // top-53-bit mapping: identical across platforms, unlike
    // std::uniform_real_distribution
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (quality_at(ph, u * T) < target.epsilon1) ++hits;
  }

  DensityEstimate est;
  est.hits = hits;
  est.samples = samples;
  est.empirical = static_cast<double>(hits) / static_cast<double>(samples);
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(samples);
  const double phat = est.empirical;
  const double denom = 1.0 + z * z / n;
  const double center = (phat + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
  est.ci_lo = std::max(0.0, center - half);
  est.ci_hi = std::min(1.0, center + half);
  est.predicted = 1.0;
  for (std::size_t i = 0; i < ph.lnp.size(); ++i)
    est.predicted *= arc_measure_fraction(target.epsilon1);
  return est;
}

}  // namespace lvlab

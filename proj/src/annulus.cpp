#include "lvlab/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace lvlab {
namespace {

constexpr double kBoundarySlack = 1e-12;

// Inner radius reachable by the first m radii of a sorted set.
double prefix_inner(const RadiiSet& rs, std::size_t m) {
  if (m == 0) return 0.0;
  double largest = std::abs(rs.radii()[m - 1]);
  return std::max(largest - rs.prefix_sums()[m - 1], 0.0);
}

}  // namespace

RadiiSet::RadiiSet(std::vector<cplx> radii) {
  if (radii.empty()) throw std::domain_error("RadiiSet: empty radii set");
  perm_.resize(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) perm_[j] = j;
  std::stable_sort(perm_.begin(), perm_.end(), [&radii](std::size_t a, std::size_t b) {
    return std::abs(radii[a]) < std::abs(radii[b]);
  });
  radii_.resize(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) radii_[j] = radii[perm_[j]];
  prefix_.resize(radii_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t j = 0; j < radii_.size(); ++j) {
    double mod = std::abs(radii_[j]);
    if (mod == 0.0) throw std::invalid_argument("RadiiSet: zero radius");
    prefix_[j + 1] = prefix_[j] + mod;
  }
}

AnnulusInterval reachable_interval(const RadiiSet& radii) {
  std::size_t n = radii.size();
  return {prefix_inner(radii, n), radii.prefix_sums()[n]};
}

std::vector<cplx> decompose(const RadiiSet& radii, cplx z, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("decompose: tol must be positive");
  AnnulusInterval full = reachable_interval(radii);
  double zmod = std::abs(z);
  if (zmod < full.inner - kBoundarySlack || zmod > full.outer + kBoundarySlack) {
    std::ostringstream msg;
    msg << "decompose: target modulus " << zmod << " outside reachable annulus ["
        << full.inner << ", " << full.outer << "]";
    throw UnreachableError(z, full, msg.str());
  }

  std::size_t n = radii.size();
  std::vector<cplx> c(n);
  cplx target = z;
  for (std::size_t j = n; j-- > 0;) {
    double rad = std::abs(radii.radii()[j]);
    // Remaining-target modulus must stay reachable by the first j radii and
    // attainable from the current target by a step of modulus rad.
    double child_lo = prefix_inner(radii, j);
    double child_hi = radii.prefix_sums()[j];
    double tm = std::abs(target);
    double lo = std::max(child_lo, std::abs(tm - rad));
    double hi = std::min(child_hi, tm + rad);
    if (lo > hi) {
      if (lo > hi + 1e-9 * std::max(1.0, full.outer))
        throw std::logic_error("decompose: feasible interval lost during peeling");
      lo = hi = 0.5 * (lo + hi);
    }
    double rho = 0.5 * (lo + hi);
    double alpha = tm > 0.0 ? std::arg(target) : 0.0;
    double beta = 0.0;
    if (tm > 0.0) {
      // Half-angle form of the law of cosines: stable where the triangle
      // degenerates (beta near 0 or pi), which is exactly the final
      // aim-at-target step; acos of the assembled cosine would lose half the
      // digits there.  atan2 keeps sin(beta) >= 0.
      double diff = tm - rad;
      double sum = tm + rad;
      double opp = std::max(0.0, (rho - diff) * (rho + diff));
      double adj = std::max(0.0, (sum - rho) * (sum + rho));
      beta = 2.0 * std::atan2(std::sqrt(opp), std::sqrt(adj));
    }
    cplx step = std::polar(rad, alpha + beta);
    c[j] = step / radii.radii()[j];
    target -= step;
  }

  cplx recon = 0.0;
  for (std::size_t j = 0; j < n; ++j) recon += c[j] * radii.radii()[j];
  if (std::abs(recon - z) > tol) {
    std::ostringstream msg;
    msg << "decompose: residual " << std::abs(recon - z) << " exceeds tol " << tol;
    throw std::runtime_error(msg.str());
  }
  return c;
}

}  // namespace lvlab

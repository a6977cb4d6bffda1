#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "lvlab/certified.hpp"

namespace lvlab {

// Nonzero complex radii sorted by nondecreasing modulus, with the prefix sums
// of the moduli.
class RadiiSet {
 public:
  // Sorts the input; throws std::domain_error when empty and
  // std::invalid_argument on a zero radius.
  explicit RadiiSet(std::vector<cplx> radii);

  const std::vector<cplx>& radii() const { return radii_; }
  // prefix_sums()[j] = |r_1| + ... + |r_j|; index 0 holds 0.
  const std::vector<double>& prefix_sums() const { return prefix_; }
  // radii()[i] is the constructor argument at position original_indices()[i]
  // (stable under equal moduli), so callers can map results computed in
  // sorted order back onto their own labelling.
  const std::vector<std::size_t>& original_indices() const { return perm_; }
  std::size_t size() const { return radii_.size(); }

 private:
  std::vector<cplx> radii_;
  std::vector<double> prefix_;
  std::vector<std::size_t> perm_;
};

// Reachable moduli of sum_j c_j r_j over unimodular c_j: the closed annulus
// inner <= |z| <= outer with inner = max(|r_n| - R_{n-1}, 0), outer = R_n.
struct AnnulusInterval {
  double inner = 0.0;
  double outer = 0.0;
};

AnnulusInterval reachable_interval(const RadiiSet& radii);

// Raised when a decomposition target lies outside the reachable annulus.
class UnreachableError : public std::domain_error {
 public:
  UnreachableError(cplx target, AnnulusInterval interval, std::string what)
      : std::domain_error(std::move(what)), target_(target), interval_(interval) {}
  cplx target() const { return target_; }
  AnnulusInterval interval() const { return interval_; }

 private:
  cplx target_;
  AnnulusInterval interval_;
};

// Unimodular c_j (aligned with radii.radii() order) with
// |sum_j c_j r_j - z| <= tol.  Peels radii from the largest: each step aims
// the remaining target's modulus at the midpoint of the feasible range
// (two-circle intersection), breaking the phase ambiguity toward the
// non-negative-sine branch relative to the target direction.  Boundary
// membership is accepted with 1e-12 absolute slack.
std::vector<cplx> decompose(const RadiiSet& radii, cplx z, double tol);

}  // namespace lvlab

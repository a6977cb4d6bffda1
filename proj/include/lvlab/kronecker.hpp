#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lvlab/certified.hpp"

namespace lvlab {

// Simultaneous multiplicative shifts: find real tau such that the phases
// p^{-i tau} land near prescribed unimodular targets chi(p) at finitely many
// primes at once.  Quality of a shift is the worst-case chord distance
//
//     quality(tau) = max_p |p^{-i tau} - chi(p)|,
//
// and a shift "solves" a target when quality(tau) < epsilon1.  Solutions are
// guaranteed to exist for any epsilon1 > 0 because the log-primes are linearly
// independent over the rationals, but the smallest solution height grows like
// the reciprocal of the product of the per-prime arc measures.

struct ShiftTarget {
  std::vector<std::uint32_t> primes;      // distinct primes, nonempty
  std::map<std::uint32_t, cplx> targets;  // one unimodular target per prime
  double epsilon1 = 0.0;                  // strict quality threshold, > 0
};

// Throws std::invalid_argument unless: primes is a nonempty list of distinct
// primes, every prime has a target, every target is unimodular to 1e-9, and
// epsilon1 is positive and finite.
void validate_target(const ShiftTarget& target);

// max_p |p^{-i tau} - chi(p)|, evaluated directly in scalar arithmetic.  This
// is the sole arbiter of solution-hood: every search path re-checks its
// candidates against this function.
double shift_quality(const ShiftTarget& target, double tau);

enum class ShiftMethod { grid, lattice };

struct ShiftSolution {
  double tau = 0.0;
  double quality = 0.0;  // achieved shift_quality(tau), < epsilon1
  ShiftMethod method = ShiftMethod::grid;
};

// Search domain cap: |tau| never exceeds this in either search method.
inline constexpr double kMaxTauDomain = 1e12;

// Recommended grid spacing, epsilon1 / (4 log p_max).  quality() is Lipschitz
// in tau with constant log p_max, so this spacing oversamples the threshold
// crossing fourfold.
double default_grid_step(const ShiftTarget& target);

// Scan tau = 0, step, 2*step, ... up to T and return every grid point whose
// re-verified quality is below epsilon1.
//
// Preconditions (std::invalid_argument): 0 < T <= kMaxTauDomain, and
// step <= epsilon1 / log p_max -- any coarser and a solution interval could
// straddle two grid points without either one qualifying.  The number of grid
// points T/step must fit in 32 bits.
//
// Completeness: quality is Lipschitz with constant log p_max, so every
// interval of solutions of width >= 2*step contains a returned grid point.
// Each hit reported by the vectorized scan is re-evaluated with
// shift_quality before being returned; hits within float error of the
// threshold may be dropped by that re-check.
std::vector<ShiftSolution> find_tau_grid(const ShiftTarget& target, double T,
                                         double step);
std::vector<ShiftSolution> find_tau_grid(const ShiftTarget& target, double T);

// Local quality refinement: scan a fixed lattice of points in
// [tau0 - radius, tau0 + radius], then golden-section into the best pocket.
// Returns the best shift found (not necessarily below epsilon1; check the
// quality field).  Useful for polishing a grid hit to the bottom of its
// basin, where the quality typically decays to the evaluation noise floor.
ShiftSolution refine_shift(const ShiftTarget& target, double tau0,
                           double radius);

struct LatticeOutcome {
  // Present iff a verified solution (quality < epsilon1, |tau| <= max_height)
  // was found.
  std::optional<ShiftSolution> solution;
  // Best quality achieved over all candidates considered, found or not.
  double best_quality = 0.0;
  double best_tau = 0.0;
};

// Lattice-reduction search for a shift of height |tau| <= max_height.
//
// Preconditions (std::invalid_argument): 1 <= |primes| <= 40 and
// 0 < max_height <= kMaxTauDomain.
//
// Small heights (up to ~4e6 resolution steps) are searched exhaustively at
// resolution epsilon1 / (8 log p_max) and polished, so the reported best
// quality is essentially the true minimum over the window.  Larger heights
// use simultaneous diophantine approximation: LLL reduction of the scaled
// lattice spanned by (h log p_1, ..., h log p_d) and the 2*pi wrap vectors,
// with the target phases arg chi(p) embedded as an extra row, the scale swept
// over powers of two.  The reduction is a heuristic and may miss; every
// candidate it produces is re-verified with shift_quality, so a returned
// solution is always genuine and a miss is reported as not-found with the
// best quality achieved.
LatticeOutcome find_tau_lattice(const ShiftTarget& target, double max_height);

// Worst-case quality transfer to prime powers: if quality(tau) < epsilon1
// for the first-power targets, then |p^{-i k tau} - chi(p)^k| < k * epsilon1
// for every 1 <= k <= M (unimodular telescoping).  Returns k * epsilon1.
// Throws std::invalid_argument unless 1 <= k <= M.
double power_error_bound(double epsilon1, std::uint64_t k, std::uint64_t M);

// Fraction of the unit circle within chord distance epsilon1 of a fixed
// point: 2 asin(min(epsilon1, 2) / 2) / pi.  This is the per-prime factor of
// the heuristic solution density (independent of the target's phase).
double arc_measure_fraction(double epsilon1);

struct DensityEstimate {
  double empirical = 0.0;   // hit fraction among the sampled tau
  double ci_lo = 0.0;       // 95% Wilson confidence interval for the
  double ci_hi = 0.0;       //   underlying hit probability
  double predicted = 0.0;   // product of per-prime arc-measure fractions
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of the density of solutions in [0, T]: samples
// uniform tau values (deterministic given seed) and counts those with
// quality < epsilon1.  The predicted density treats the per-prime phases as
// independent uniform angles, which is the almost-periodicity heuristic; the
// estimate reports both so they can be compared.  On a fixed (seed, T,
// samples) path the empirical fraction is nondecreasing in epsilon1.
//
// Preconditions (std::invalid_argument): samples >= 1000,
// 0 < T <= kMaxTauDomain.
DensityEstimate density_estimate(const ShiftTarget& target, double T,
                                 std::uint64_t samples,
                                 std::uint64_t seed = 0);

}  // namespace lvlab

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lvlab/certified.hpp"
#include "lvlab/coeffs.hpp"

namespace lvlab {

// Block-by-block selection of unimodular twists chi(p) steering the twisted
// series  sum_{p, k} chi(p)^k b(p^k) p^{-k sigma}  toward a prescribed target
// z at a sigma slightly above the abscissa of absolute convergence.
//
// Primes are classified by their first-power coefficient: p is "large" when
// |b(p)| > p^{-epsilon}.  Only large primes enter the steering sums (the
// "starred" sums below); the small primes' full local series rides along as a
// fixed side term whose modulus is bounded by the sigma-independent S0.  Each
// level j carries the certified display
//     |head*(N_j) - z + small|  <=  chain_constant * tail*(N_j),
// where head*(N) twists prime powers p^k <= N and tail*(N) is the absolute
// starred mass beyond N.  A block step extends the twist assignment from N_j
// to N_{j+1} = N_j + M_j while re-establishing the display one level up.

// Certified lower profile |b(p)| >= c * (log p)^log_power for every prime
// beyond the starting cut (checked against tabulated coefficients and carried
// by the closed-form rule past them).  It drives the lower bound of the
// starred tail; when c >= 1 it also certifies that no prime beyond the
// scanned range can fall in the small class.  c = 0 disables the lower bound
// (the run is then reported infeasible rather than wrongly certified).
struct TailMinorant {
  double c = 1.0;
  int log_power = 0;
};

struct CasselsConfig {
  cplx z;                    // prescribed value of the twisted series
  double delta = 0.5;        // admissible window: sigma - 1 in (0, delta)
  std::uint64_t N1 = 50;     // starting cut; must exceed (1 + c0)^2
  double c0 = 1.0;           // block growth: M_j = floor(c0 * N_j)
  double epsilon = 0.05;     // small/large classification cut exponent
  int max_blocks = 1;        // certificate levels produced (level 1 = base)
  CoefficientSource source;  // b(p^k); derivative weights already folded in
  std::shared_ptr<const AbsTailModel> tail_model;  // upper profile of |b|
  int weight_order = 0;      // (k log p)^m slot forwarded to the tail model
  TailMinorant minorant;
  double chain_constant = 1e-2;  // display constant on both sides of the chain
};

// Config for sources with the exact profile |b(p^k)| = (1/k) (k log p)^m,
// i.e. the m-th log-derivative weighting of an Euler product whose local
// logarithms have unit-modulus first coefficients (zeta, real characters).
// Wires source, tail model, weight order, and minorant consistently and
// validates the profile against the tabulated coefficients.
CasselsConfig inv_k_weighted_config(const CoefficientSource& base, int m,
                                    cplx z, double delta, std::uint64_t N1,
                                    double c0, double epsilon, int max_blocks);

struct CasselsState {
  int j = 0;                  // levels certified so far (1 = base display)
  std::uint64_t Nj = 0;       // current cut: twists are assigned below Nj
  std::uint64_t Mj = 0;       // next block is (Nj, Nj + Mj]
  double sigma_u = 0.0;       // sigma - 1 (kept as an offset; see below)
  std::map<std::uint64_t, cplx> chi;  // assigned unimodular twists
  Cert Lambda;                // last computed steering deviation
  RInt S1, S2, S3, S4;        // last block's certified quantities
  double S0 = 0.0;            // sigma-independent small-class bound
  std::vector<PrimePowerKey> setA;  // last block's fresh first powers
  std::vector<PrimePowerKey> setB;  // last block's higher powers
};

struct BlockCertificate {
  int j = 0;          // level: the display below is at cut N_j
  RInt lhs;           // |head*(N_j) - z + small|
  RInt rhs;           // chain_constant * tail*(N_j)
  bool holds = false;      // lhs.hi <= rhs.lo (certified comparison)
  double margin = 0.0;     // rhs.lo - lhs.hi
  double s3_over_s2 = 0.0;  // fresh-mass ratio recorded by the producing step
  bool ratio_ok = true;     // certified (1-c) S3 >= (1+c) S2
};

struct CasselsRun {
  CasselsState state;
  std::vector<BlockCertificate> certificates;  // levels 1 .. max_blocks
  RInt residual;          // |head*(N_J) - z + small| at the final level
  double residual_bound;  // (1 + chain_constant) * tail*(N_J) upper bound
  double sigma_u;
};

// No admissible sigma: even at the evaluation floor the certified tail lower
// bound cannot dominate the head-plus-target mass.  what() names the
// limiting tail term.
class CasselsInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The certified fresh first-power mass S3 of a block fails to dominate the
// block's higher-power mass S2; what() advises enlarging N1 or c0.
class BlockTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The block target fell outside the reachable annulus of the fresh radii
// (or the phase solve could not meet its tolerance); what() carries the
// diagnostics.
class ConstructionFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The small/large classification cut: |b(p)| > p^{-epsilon}.
bool large_coefficient(const CoefficientSource& source, std::uint64_t p,
                       double epsilon);

// The block target z0 for steering deviation Lambda given the certified
// fresh-mass lower bound s3_lo: full cancellation -Lambda when it fits,
// otherwise the farthest reachable point -s3_lo * Lambda / |Lambda| along
// the cancelling direction, and 0 when Lambda is already 0.
cplx block_target(cplx lambda, double s3_lo);

// Largest admissible sigma offset u = sigma - 1 in (0, delta) whose certified
// base display  head*(N1) + |z| + S0 <= chain_constant * tail*(N1)  holds
// with a working margin.  Returned as the *offset*: feasible offsets shrink
// far below the spacing of doubles around 1 (u ~ 1e-121 is typical), so
// 1 + u would round to exactly 1.  All evaluation keeps u separate and uses
// p^{-k(1+u)} = p^{-k} exp(-k u log p).  Throws CasselsInfeasibleError when
// even the floor offset 1e-300 fails.
double choose_sigma_offset(const CasselsConfig& config);

// Base level: twists chi = 1 on every prime <= N1 (the display holds for any
// assignment there) and the level-1 certificate.
std::pair<CasselsState, BlockCertificate> initial_state(
    const CasselsConfig& config, double sigma_u);

// One block: classify (Nj, Nj+Mj], form the steering deviation Lambda, pick
// the block target, solve the phases through the annulus decomposition, and
// certify the display at the new cut.  Throws BlockTooSmallError when the
// certified ratio check fails and ConstructionFailureError when the target
// cannot be reached.
std::pair<CasselsState, BlockCertificate> block_step(
    const CasselsState& state, const CasselsConfig& config);

// choose_sigma_offset + initial_state + (max_blocks - 1) block steps.
CasselsRun run_cassels(const CasselsConfig& config);

}  // namespace lvlab

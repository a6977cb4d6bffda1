#pragma once

#include <cstdint>
#include <vector>

#include "lvlab/certified.hpp"
#include "lvlab/zeta_em.hpp"

namespace lvlab {

// P(s) = sum_p p^{-s} and its first two derivatives at real s = 1 + u, u > 0,
// through the Moebius expansion P(s) = sum_n mu(n)/n * log zeta(ns).  The
// n = 1 term is evaluated with the pole handled in expm1 form, so u may be as
// small as ~1e-300; derivatives pick up 1/u^2 and 1/u^3 scale terms, which
// caps the supported floor at u >= 1e-100 (derivs >= 1) / 1e-80 (derivs = 2)
// to stay clear of double underflow.
//   sum_p (log p)^m p^{-(1+u)} = (-1)^m P^{(m)}(1+u),  m = derivs slot used.
Jet2 prime_zeta_jet(double u, int derivs, double tol);

// Certified enclosure of sum_{p <= x} (log p)^m p^{-(1+u)} for m in {0,1,2},
// by sieved direct summation (chunked, slop-charged).
RInt prime_log_power_sum(double x, double u, int m);

// Enclosure of the full tail sum_{p > x} (log p)^m p^{-(1+u)} via the
// difference of prime_zeta_jet and prime_log_power_sum.
RInt prime_tail(double x, double u, int m, double tol);

}  // namespace lvlab

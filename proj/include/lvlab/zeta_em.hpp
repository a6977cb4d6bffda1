#pragma once

#include <array>
#include <complex>

#include "lvlab/certified.hpp"

namespace lvlab {

// Value and first two s-derivatives as certified balls.
struct Jet2 {
  Cert f;
  Cert d1;
  Cert d2;
};

// Hurwitz zeta sum_{n>=0} (n+a)^{-s} by Euler-Maclaurin with an explicit
// remainder bound (periodic-Bernoulli Fourier bound), valid on
// Re(s) + 2K > 0 for the internal Bernoulli depth K; handles s arbitrarily
// close to the pole at s = 1 (the pole offset sigma - 1 is carried exactly,
// so values stay fully accurate in relative terms down to offsets ~1e-300).
//   a in (0, 1];  |Im s| <= 1e7;  derivs in {0, 1, 2}.
// The d1/d2 slots of the result are only meaningful up to `derivs`.
Jet2 hurwitz_em(cplx s, double a, double tol, int derivs);

// Same function with s = (1 + u) + i t given by its exact offset from the
// pole.  Required when u is below machine epsilon (a cplx argument would
// round 1 + u to 1); hurwitz_em forwards here with u = Re(s) - 1, which is
// exact for Re(s) in [1/2, 2] and accurate elsewhere.
Jet2 hurwitz_em1p(double u, double t, double a, double tol, int derivs);

inline Cert zeta_em(cplx s, double tol) { return hurwitz_em(s, 1.0, tol, 0).f; }
inline Cert zeta_em_deriv(cplx s, double tol) { return hurwitz_em(s, 1.0, tol, 1).d1; }
inline Jet2 zeta_em_jet(cplx s, double tol, int derivs = 2) { return hurwitz_em(s, 1.0, tol, derivs); }

// Dirichlet L for the nontrivial character mod 4, via
//   L(s, chi_{-4}) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4)).
Jet2 dirichlet_L_chi4(cplx s, double tol, int derivs = 0);

// Same with s = (1 + u) + i t given by its exact offset from sigma = 1.
Jet2 dirichlet_L_chi4_1p(double u, double t, double tol, int derivs = 0);

namespace detail {
// The correction coefficients B_{2j}/(2j)!, j = 0..20 (index 0 unused),
// exposed so the test suite can cross-check the hardcoded table against an
// independently computed route.
const std::array<double, 21>& em_correction_coeffs();
}  // namespace detail

}  // namespace lvlab

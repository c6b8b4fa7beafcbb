#pragma once

#include "specanom/common.hpp"

namespace specanom {

/// Γ(z) and 1/Γ(z) for complex z (Lanczos, g = 7, with reflection).
cplx gamma(cplx z);
cplx rgamma(cplx z);

/// B_{2k}/(2k)! for k = 1..20.
double bernoulli_even_over_factorial(int k);

/// Hurwitz zeta ζ(s, a) = Σ_{n≥0} (n + a)^{-s}, continued to s ≠ 1, a > 0.
/// Shifts the summation start to N ≈ 16 + |s| and closes with a high-order
/// Euler–Maclaurin remainder.
cplx hurwitz_zeta(cplx s, double a);

/// ∂ζ(s, a)/∂s.
cplx hurwitz_zeta_ds(cplx s, double a);

/// Σ_{n≥0} (n + x0)^{-s} (log(n + x0))^k for k ∈ {0, 1} and large x0 using
/// only the Euler–Maclaurin remainder at x0 with `order` Bernoulli terms.
/// Accurate when x0 ≫ |s|; intended for the tails of long head sums.
cplx euler_maclaurin_tail(cplx s, double x0, int log_degree, int order);

}  // namespace specanom

/// @file special.hpp
/// Hurwitz zeta by Euler-Maclaurin summation, Dirichlet L-functions of
/// periodic characters, and the complex log-gamma function.
#pragma once

#include <functional>

#include "ntcheck/arith.hpp"

namespace ntcheck {

/// A value together with an estimate of its truncation error.
struct Estimate {
    cplx value{0.0, 0.0};
    double error = 0.0;
};

/// zeta(s, a) = sum_{n >= 0} (n + a)^{-s}, 0 < a <= 1, s != 1.
/// Analytic continuation to all s != 1.
Estimate hurwitz_zeta(cplx s, double a);

Estimate riemann_zeta(cplx s);

/// L(s, chi) = m^{-s} sum_{a=1}^{m} chi(a) zeta(s, a/m) for chi periodic mod m.
Estimate dirichlet_l(cplx s, const std::function<int(i64)>& chi, i64 modulus);

/// log Gamma(z) for Re z > 0, continuous along horizontal lines (principal
/// branch at real z > 0).
cplx log_gamma(cplx z);

/// Bernoulli numbers B_{2k}, k = 0..20.
double bernoulli_2k(int k);

}  // namespace ntcheck

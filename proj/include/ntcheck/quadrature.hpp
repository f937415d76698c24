/// @file quadrature.hpp
/// Adaptive Gauss-Kronrod quadrature with oscillation-aware initial panels,
/// nested 2-d integration, Gauss-Legendre rules and Chebyshev interpolation.
#pragma once

#include <functional>
#include <vector>

#include "ntcheck/arith.hpp"

namespace ntcheck {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 400000;
    /// Upper bound for |phase'| on the interval; 0 disables the initial split.
    double max_frequency = 0.0;
    /// Initial panels are no wider than one local wavelength over this.
    double panels_per_wavelength = 6.0;
    int min_panels = 1;
};

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

using RealToComplex = std::function<cplx(double)>;

/// Globally adaptive GK21 on [a, b]. Never throws on non-convergence; the
/// flag and the achieved error estimate are returned instead.
QuadResult integrate(const RealToComplex& f, double a, double b, const QuadOptions& opts = {});

/// Iterated integral of f(x, y) over [ax, bx] x [ay, by]: outer in y, inner
/// in x. inner_frequency(y), when given, bounds |d phase / dx| for that y.
QuadResult integrate_2d(const std::function<cplx(double, double)>& f, double ax, double bx, double ay,
                        double by, const QuadOptions& outer, const QuadOptions& inner,
                        const std::function<double(double)>& inner_frequency = {});

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached, thread safe).
const GaussRule& gauss_legendre(int n);

/// Polynomial interpolant through n + 1 Chebyshev points of the second kind
/// on [a, b], evaluated in barycentric form.
class ChebyshevInterpolant {
public:
    ChebyshevInterpolant() = default;
    ChebyshevInterpolant(const RealToComplex& f, double a, double b, int n);

    cplx operator()(double x) const;
    double lower() const { return a_; }
    double upper() const { return b_; }
    /// Largest magnitude among the top eight Chebyshev coefficients; small
    /// values mean f is resolved.
    double tail_coefficient() const { return tail_; }

private:
    double a_ = 0.0, b_ = 1.0, tail_ = 0.0;
    std::vector<double> t_;  // nodes on [-1, 1]
    std::vector<cplx> values_;
};

}  // namespace ntcheck

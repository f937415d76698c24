/// @file poisson.hpp
/// Two-dimensional Poisson summation in residue classes mod c:
///
///   sum_{m,n} S(m^2, n^2; c) e_c(2mn) F(m, n)
///     = c^{-2} sum_{k,l} T(-k, l; c) Fhat(-k/c, l/c),
///
/// with Fhat(xi) = int F(v) e(-v . xi) dv. Split m = x + c u, n = y + c v
/// with (x, y) mod c, apply Poisson to the (u, v) sum and collect
/// sum_{x,y} S(x^2, y^2; c) e_c(2xy + kx + ly) = T(k, l; c); the k -> -k
/// relabelling gives the form above.
#pragma once

#include <string>
#include <vector>

#include "ntcheck/arith.hpp"
#include "ntcheck/oscillatory.hpp"

namespace ntcheck {

/// amp * exp(-(v - mu)' Sigma^{-1} (v - mu) / 2) * e(omega . v).
struct GaussianTerm {
    cplx amp{1.0, 0.0};
    double mu[2] = {0.0, 0.0};
    double sigma[3] = {1.0, 0.0, 1.0};  ///< Sigma_xx, Sigma_xy, Sigma_yy
    double omega[2] = {0.0, 0.0};
};

/// Finite sum of Gaussian terms with a closed-form Fourier transform.
struct TestFunction {
    std::vector<GaussianTerm> terms;

    /// Throws PreconditionError unless every Sigma is positive definite.
    void validate() const;
    cplx operator()(double x, double y) const;
    cplx fourier(double xi, double eta) const;

    TestFunction scaled(cplx a) const;
    TestFunction operator+(const TestFunction& o) const;
    /// F conj composed with (x, y) -> (-x, y); conjugates both sides.
    TestFunction conj_reflected() const;
};

/// Shape i in {0, 1, 2} of the standard family, widths scaled to c so that
/// both lattice sums stay near sqrt(c) terms per direction.
TestFunction standard_shape(int i, i64 c);

/// Box [k_lo, k_hi] x [l_lo, l_hi] of summation indices.
struct Box {
    i64 x_lo = 0, x_hi = -1, y_lo = 0, y_hi = -1;
    i64 count() const { return x_hi < x_lo || y_hi < y_lo ? 0 : (x_hi - x_lo + 1) * (y_hi - y_lo + 1); }
};

/// Lattice boxes outside which every term is below exp(-tail_exponent)
/// times its amplitude.
Box direct_box(const TestFunction& F, double tail_exponent = 40.0);
Box dual_box(const TestFunction& F, i64 c, double tail_exponent = 40.0);

/// Largest box size accepted by either side.
inline constexpr i64 kPoissonMaxTerms = 16'000'000;

enum class TSource { Closed, Oracle };

/// Requires c = 2^j c_o with j >= 4. An empty box means automatic truncation.
cplx direct_side(i64 c, const TestFunction& F, Box box = {});
cplx dual_side(i64 c, const TestFunction& F, TSource src = TSource::Closed, Box box = {});

struct PoissonCase {
    i64 c = 16;
    int shape = 0;
    cplx direct, dual;
    double rel_err = 0.0;
    Box direct_box, dual_box;
};

PoissonCase poisson_case(i64 c, int shape, TSource src = TSource::Closed);

// ---- K+ weighted version at toy scale ----

struct OffDiagonalConfig {
    double T = 100.0, Delta = 20.0, U = 0.0;
    double N = 50.0;
    std::vector<i64> moduli = {16};
    /// Dual sum over |k|, |l| <= kappa c.
    double kappa = 1.0;
    /// Gauss-Legendre nodes per unit length for I(k, l, c).
    int nodes_per_unit = 20;
    /// Chebyshev degree for K+ on the needed x range.
    int kplus_degree = 160;
    /// Multiplies the window; 0 gives the trivial case.
    double window_scale = 1.0;
};

struct OffDiagonalRow {
    i64 c = 0;
    cplx direct, dual, dual_half;  ///< dual_half: |k|, |l| <= kappa c / 2
    double rel_err = 0.0;
    double truncation_change = 0.0;  ///< |dual - dual_half| / |dual|
    double kplus_tail = 0.0;         ///< Chebyshev tail of the K+ interpolant
};

struct OffDiagonalReport {
    std::vector<OffDiagonalRow> rows;
    double max_rel_err = 0.0;
    bool quadrature_ok = true;
};

/// W(x, y) = w(x/N) w(y/N) (y/x)^{iU} K+(4 pi x y / c). The m,n side sums
/// S(m^2, n^2; c) e_c(2mn) W(m, n); the k,l side sums
/// c^{-2} T(-k, l; c) I(k, l, c) with I(k, l, c) = int W(x, y) e_c(kx - ly).
OffDiagonalReport off_diagonal_demo(const OffDiagonalConfig& cfg);

}  // namespace ntcheck

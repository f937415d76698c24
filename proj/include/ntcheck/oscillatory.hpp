/// @file oscillatory.hpp
/// Oscillatory integrals: the double integral I(A, B, U, eps, N), its
/// stationary points and phase expansions in both regimes, the spectral
/// weight h with its Bessel-side window g and kernel K+, a Mellin-transform
/// surrogate, and the v-integral stationary point.
#pragma once

#include <memory>
#include <vector>

#include "ntcheck/quadrature.hpp"

namespace ntcheck {

// ---- Windows ----

/// exp(-1 / (1 - t^2)) on (-1, 1), zero elsewhere.
double bump(double t);
/// bump(2x - 3): smooth, supported on [1, 2].
double unit_window(double x);
/// j-th derivative of unit_window, j <= 10, by Taylor-jet arithmetic.
double unit_window_derivative(double x, int j);
/// sup |unit_window^{(j)}| for j <= 6 (frozen constants).
double unit_window_derivative_bound(int j);
/// Integral of unit_window over [1, 2].
double unit_window_mass();
/// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

// ---- I(A, B, U, eps, N) ----

struct OscParams {
    double A = 0.0, B = 0.0;
    double U = 1.0;
    double eps = 1.0;
    double N = 1.0;

    /// Throws PreconditionError unless U >= 0, eps >= 0 and N >= 1.
    void validate() const;
    /// -U log x + U log y + A x - B y + eps x y.
    double phase(double x, double y) const;
};

/// Integral over [N, 2N]^2 of exp(i phase) w(x/N) w(y/N).
QuadResult i_integral(const OscParams& p, double rel_tol = 1e-8);

enum class Regime { UDominant, EpsDominant };

const char* to_string(Regime r);

struct StationaryPoint {
    double x0 = 0.0, y0 = 0.0;
    double phase = 0.0;             ///< phase(x0, y0)
    Regime regime = Regime::UDominant;
    double delta = 0.0;             ///< eps U / (A B), or U eps / |A B| in the eps regime
    double scaled_x = 0.0, scaled_y = 0.0;
    double residual = 0.0;          ///< |grad phase| relative to the gradient scale
};

/// eps N^2 / U, the regime selector (infinite when U = 0).
double regime_ratio(const OscParams& p);

/// Relevant critical point of the phase. Throws GuardBandError for
/// 1/3 < eps N^2 / U < 3 and DomainError if the signs of A, B admit no
/// critical point in the regime.
StationaryPoint stationary_point(const OscParams& p);

/// Scaled critical points: regime 1 returns r0 = x0 y0, regime 2 x0.
double regime1_r0(double delta);
double regime2_x0(double delta);
double regime2_y0(double delta);

/// Scaled phase at the critical point as a function of delta:
/// regime 1  log((1 + d r0)/(1 - d r0)) - d r0,
/// regime 2  -(1 + sqrt(1 + 4 d^2))/2 + d log(y0/x0).
cplx scaled_phase(Regime r, cplx delta);

struct PhaseTaylor {
    std::vector<double> series;  ///< power series coefficients a_0..a_n
    std::vector<double> c;       ///< regime 1: a_{2j+1}; regime 2: a_{2j}; j <= J
    double value = 0.0;          ///< scaled_phase at delta
    double remainder = 0.0;      ///< value minus the truncated expansion
    double remainder_bound = 0.0;
};

/// Taylor data of the scaled phase from a Cauchy integral on |delta| = 1/4.
/// Throws PreconditionError for |delta| > 0.3.
PhaseTaylor phase_taylor(Regime r, double delta, int J);

// ---- Spectral weight, g window and K+ ----

/// (t^2 + 1/4)/T^2 (exp(-(t-T)^2/D^2) + exp(-(t+T)^2/D^2)).
double spectral_weight_h(double t, double T, double Delta);

/// One-branch transform g(y) = (1/(Delta T)) int exp(-2 i (y/Delta)(t - T))
/// f(t) dt with f(t) = t tanh(pi t)(t^2 + 1/4)/T^2 exp(-(t-T)^2/Delta^2).
/// Then int exp(-2ivt) t tanh(pi t) h(t) dt
///   = Delta T (exp(-2ivT) g(Delta v) + exp(2ivT) conj(g(Delta v))).
class GWindow {
public:
    GWindow(double T, double Delta);

    double T() const { return T_; }
    double Delta() const { return Delta_; }
    /// Interpolated value; zero for |y| beyond support().
    cplx operator()(double y) const;
    /// Direct quadrature of the defining integral.
    cplx exact(double y) const;
    /// |g| < 1e-30 |g(0)| beyond this.
    double support() const { return Y_; }

private:
    double T_, Delta_, Y_;
    ChebyshevInterpolant interp_;
};

/// Smooth v-window: 1 on [lo, hi], tapering to 0 over [lo - taper, lo] and
/// [hi, hi + taper]. taper = 0 means no window.
struct VWindow {
    double lo = 0.0, hi = 0.0, taper = 0.0;
    double operator()(double v) const;
};

/// K+(x) = int exp(i x (cosh v - 1) - 2 i v T) g(Delta v) W(v) dv.
QuadResult k_plus(double x, const GWindow& g, const VWindow& w = {}, double abs_tol = 1e-13);

// ---- Mellin surrogate ----

struct MellinReport {
    double X = 0.0;
    double recon_max_err = 0.0;    ///< relative to sup |f|
    double t_lo = 0.0, t_hi = 0.0; ///< t range kept in the inverse integral
    double peak = 0.0;             ///< max |f~(-it)|
    double outside_ratio = 0.0;    ///< max |f~| for -t outside [X/4, 8X], over peak
    double wrong_sign_max = 0.0;   ///< max |f~(-it)| for t >= 10 X
    double scaled_min = 0.0, scaled_max = 0.0;  ///< |f~| X^{1/2} on -t in [1.25X, 1.75X]
};

/// f(x) = exp(-i x) w(x/X) and its Mellin transform on the imaginary axis.
class MellinSurrogate {
public:
    explicit MellinSurrogate(double X, int s_nodes = 4096);
    /// f~(-it) = int f(x) x^{-it - 1} dx by the trapezoid rule in log x.
    cplx transform(double t) const;
    cplx f(double x) const;
    /// Round trip on the given x grid.
    MellinReport report(const std::vector<double>& x_grid) const;

private:
    double X_, s0_, h_;
    std::vector<cplx> F_;  // f(e^s) on the uniform s grid
};

// ---- v-integral ----

struct VIntegralPoint {
    double v0 = 0.0;
    double phase = 0.0;        ///< -2 v0 T - 2 t log v0 + t v0^2 / 6
    double cubic_coeff = 0.0;  ///< (v0 + t/T) T^3 / t^3
    double phase_coeff = 0.0;  ///< (phase - 2t + 2t log(|t|/T)) T^2 / t^3
};

/// Root of -2T - 2t/v + t v / 3 = 0 near -t/T. Requires t < 0 and
/// |t| <= T^{0.95}.
VIntegralPoint v_integral_point(double t, double T);

// ---- Parameter bookkeeping ----

/// Scales attached to a dyadic block (N, C) for given T, Delta, U.
struct SpectralWeightParams {
    double T = 1.0, Delta = 1.0, U = 0.0, N = 1.0, C = 1.0;

    void validate() const;
    double n_max() const;          ///< max(U, 1)^{1/2} T
    double c_lower() const;        ///< N^2 / T^2
    double c_upper() const;        ///< N^2 / (Delta T)
    bool c_in_range() const;
    double V0() const;             ///< T C / N^2
    double P() const;              ///< C T^2 / N^2
    double K_large_u() const;      ///< C U / N
    double K_small_u() const;      ///< C^2 T^2 / N^3
    double Phi_large_u() const;    ///< N C^{1/2} / U
    double Phi_small_u() const;    ///< N^3 / (C^{1/2} T^2)
    double x_scale() const;        ///< 4 pi N^2 / C
};

}  // namespace ntcheck

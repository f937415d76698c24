#include "ntcheck/oscillatory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {

constexpr int kJetOrder = 10;

// sup |bump^{(j)}| on (-1, 1), j = 0..6, from 40-digit arithmetic.
constexpr std::array<double, 7> kBumpDerivSup = {
    0.36787944117144232, 0.79842975183359954, 7.7497049416941454, 186.3999213188283,
    8315.8900708955872, 596357.77862717147, 81474753.530693032};
constexpr double kBumpMass = 0.44399381616807943782;

}  // namespace

double bump(double t) {
    if (!(std::abs(t) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double unit_window(double x) { return bump(2.0 * x - 3.0); }

double unit_window_derivative(double x, int j) {
    if (j < 0 || j > kJetOrder) throw PreconditionError("unit_window_derivative: order out of range");
    const double t0 = 2.0 * x - 3.0;
    if (!(std::abs(t0) < 1.0)) return 0.0;
    // Taylor jets in h of q = 1 - (t0 + h)^2, r = 1/q, then exp(-r).
    std::array<double, kJetOrder + 1> r{}, e{};
    const double q0 = 1.0 - t0 * t0, q1 = -2.0 * t0, q2 = -1.0;
    r[0] = 1.0 / q0;
    for (int n = 1; n <= j; ++n) {
        double s = q1 * r[std::size_t(n - 1)];
        if (n >= 2) s += q2 * r[std::size_t(n - 2)];
        r[std::size_t(n)] = -s / q0;
    }
    e[0] = std::exp(-r[0]);
    for (int n = 1; n <= j; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += k * -r[std::size_t(k)] * e[std::size_t(n - k)];
        e[std::size_t(n)] = s / n;
    }
    return std::tgamma(j + 1.0) * e[std::size_t(j)] * std::ldexp(1.0, j);
}

double unit_window_derivative_bound(int j) {
    if (j < 0 || j > 6) throw PreconditionError("unit_window_derivative_bound: j must be in [0, 6]");
    return std::ldexp(kBumpDerivSup[std::size_t(j)], j);
}

double unit_window_mass() { return 0.5 * kBumpMass; }

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// ---- I(A, B, U, eps, N) ----

void OscParams::validate() const {
    if (!(U >= 0.0)) throw PreconditionError("OscParams: U must be >= 0");
    if (!(eps >= 0.0)) throw PreconditionError("OscParams: eps must be >= 0");
    if (!(N >= 1.0)) throw PreconditionError("OscParams: N must be >= 1");
    if (!std::isfinite(A) || !std::isfinite(B)) throw PreconditionError("OscParams: A, B must be finite");
}

double OscParams::phase(double x, double y) const {
    return -U * std::log(x) + U * std::log(y) + A * x - B * y + eps * x * y;
}

QuadResult i_integral(const OscParams& p, double rel_tol) {
    p.validate();
    const double N = p.N;
    auto f = [&p, N](double x, double y) {
        const double w = unit_window(x / N) * unit_window(y / N);
        if (w == 0.0) return cplx(0.0, 0.0);
        return std::polar(w, p.phase(x, y));
    };
    auto x_freq = [&p, N](double y) {
        const double base = p.A + p.eps * y;
        return std::max(std::abs(base - p.U / N), std::abs(base - p.U / (2 * N)));
    };
    double y_freq = 0.0;
    for (double x : {N, 2 * N})
        for (double y : {N, 2 * N}) y_freq = std::max(y_freq, std::abs(p.U / y - p.B + p.eps * x));
    QuadOptions outer, inner;
    outer.abs_tol = 1e-11 * N * N;
    outer.rel_tol = rel_tol;
    outer.max_frequency = y_freq;
    outer.min_panels = 8;
    inner.abs_tol = 1e-12 * N;
    inner.rel_tol = rel_tol * 1e-2;
    inner.min_panels = 8;
    return integrate_2d(f, N, 2 * N, N, 2 * N, outer, inner, x_freq);
}

const char* to_string(Regime r) { return r == Regime::UDominant ? "U-dominant" : "eps-dominant"; }

double regime_ratio(const OscParams& p) {
    if (p.U == 0.0) return INFINITY;
    return p.eps * p.N * p.N / p.U;
}

double regime1_r0(double delta) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * delta * delta)); }
double regime2_x0(double delta) { return (1.0 - 2.0 * delta + std::sqrt(1.0 + 4.0 * delta * delta)) / 2.0; }
double regime2_y0(double delta) { return (1.0 + 2.0 * delta + std::sqrt(1.0 + 4.0 * delta * delta)) / 2.0; }

StationaryPoint stationary_point(const OscParams& p) {
    p.validate();
    const double rho = regime_ratio(p);
    StationaryPoint sp;
    if (rho > 1.0 / 3.0 && rho < 3.0)
        throw GuardBandError("stationary_point: eps N^2 / U in the guard band (1/3, 3)");
    if (rho <= 1.0 / 3.0) {
        if (!(p.A > 0 && p.B > 0)) throw DomainError("stationary_point: U-dominant regime needs A, B > 0");
        sp.regime = Regime::UDominant;
        sp.delta = p.eps * p.U / (p.A * p.B);
        const double r0 = regime1_r0(sp.delta);
        sp.scaled_x = 1.0 - sp.delta * r0;
        sp.scaled_y = 1.0 + sp.delta * r0;
        sp.x0 = p.U / p.A * sp.scaled_x;
        sp.y0 = p.U / p.B * sp.scaled_y;
    } else {
        if (!(p.A < 0 && p.B > 0 && p.eps > 0))
            throw DomainError("stationary_point: eps-dominant regime needs A < 0 < B");
        sp.regime = Regime::EpsDominant;
        sp.delta = p.U * p.eps / (-p.A * p.B);
        sp.scaled_x = regime2_x0(sp.delta);
        sp.scaled_y = regime2_y0(sp.delta);
        sp.x0 = p.B / p.eps * sp.scaled_x;
        sp.y0 = -p.A / p.eps * sp.scaled_y;
    }
    sp.phase = p.phase(sp.x0, sp.y0);
    const double gx = -p.U / sp.x0 + p.A + p.eps * sp.y0;
    const double gy = p.U / sp.y0 - p.B + p.eps * sp.x0;
    const double scale = std::max({std::abs(p.A), std::abs(p.B), p.U / sp.x0, p.eps * sp.y0, 1e-300});
    sp.residual = std::hypot(gx, gy) / scale;
    return sp;
}

cplx scaled_phase(Regime r, cplx d) {
    const cplx root = std::sqrt(1.0 + 4.0 * d * d);
    if (r == Regime::UDominant) {
        const cplx dr = d * 2.0 / (1.0 + root);
        return std::log(1.0 + dr) - std::log(1.0 - dr) - dr;
    }
    const cplx x0 = (1.0 - 2.0 * d + root) / 2.0, y0 = (1.0 + 2.0 * d + root) / 2.0;
    return -(1.0 + root) / 2.0 + d * (std::log(y0) - std::log(x0));
}

PhaseTaylor phase_taylor(Regime r, double delta, int J) {
    if (!(std::abs(delta) <= 0.3)) throw PreconditionError("phase_taylor: |delta| must be <= 0.3");
    if (J < 0 || J > 10) throw PreconditionError("phase_taylor: J must be in [0, 10]");
    constexpr int M = 64;
    constexpr double rho = 0.25;
    const int nmax = 2 * J + 4;
    PhaseTaylor out;
    std::vector<cplx> samples(M);
    for (int k = 0; k < M; ++k) samples[std::size_t(k)] = scaled_phase(r, std::polar(rho, kTwoPi * k / M));
    for (int n = 0; n <= nmax; ++n) {
        cplx a = 0.0;
        for (int k = 0; k < M; ++k) a += samples[std::size_t(k)] * std::polar(1.0, -kTwoPi * n * k / M);
        out.series.push_back((a / double(M)).real() / std::pow(rho, n));
    }
    for (int j = 0; j <= J; ++j)
        out.c.push_back(out.series[std::size_t(r == Regime::UDominant ? 2 * j + 1 : 2 * j)]);

    out.value = scaled_phase(r, delta).real();
    double trunc = 0.0;
    for (int j = 0; j <= J; ++j)
        trunc += out.c[std::size_t(j)] * std::pow(delta, r == Regime::UDominant ? 2 * j + 1 : 2 * j);
    out.remainder = out.value - trunc;

    // Cauchy estimate on |delta| = R inside the disc of analyticity.
    constexpr double R = 0.4;
    double MR = 0.0;
    for (int k = 0; k < 256; ++k) MR = std::max(MR, std::abs(scaled_phase(r, std::polar(R, kTwoPi * k / 256))));
    const int n0 = r == Regime::UDominant ? 2 * J + 3 : 2 * J + 2;
    const double q = std::abs(delta) / R;
    out.remainder_bound = 1.1 * MR * std::pow(q, n0) / (1.0 - q);
    return out;
}

// ---- Spectral weight, g window, K+ ----

double spectral_weight_h(double t, double T, double Delta) {
    if (!(T >= 1.0 && Delta >= 1.0)) throw PreconditionError("spectral_weight_h: T, Delta must be >= 1");
    const double a = (t - T) / Delta, b = (t + T) / Delta;
    return (t * t + 0.25) / (T * T) * (std::exp(-a * a) + std::exp(-b * b));
}

GWindow::GWindow(double T, double Delta) : T_(T), Delta_(Delta), Y_(9.0) {
    if (!(T >= 1.0 && Delta >= 1.0 && Delta <= T))
        throw PreconditionError("GWindow: needs 1 <= Delta <= T");
    interp_ = ChebyshevInterpolant([this](double y) { return exact(y); }, -Y_, Y_, 160);
}

cplx GWindow::exact(double y) const {
    const double T = T_, D = Delta_;
    auto f = [T, D, y](double t) {
        const double a = (t - T) / D;
        const double amp = t * std::tanh(kPi * t) * (t * t + 0.25) / (T * T) * std::exp(-a * a);
        return std::polar(amp, -2.0 * y * a);
    };
    QuadOptions o;
    o.abs_tol = 1e-15 * D * T;
    o.rel_tol = 1e-14;
    o.max_frequency = 2.0 * std::abs(y) / D;
    o.min_panels = 16;
    return integrate(f, T - 10.0 * D, T + 10.0 * D, o).value / (D * T);
}

cplx GWindow::operator()(double y) const {
    if (std::abs(y) >= Y_) return 0.0;
    return interp_(y);
}

double VWindow::operator()(double v) const {
    if (taper <= 0.0) return 1.0;
    return smooth_step((v - (lo - taper)) / taper) * smooth_step(((hi + taper) - v) / taper);
}

QuadResult k_plus(double x, const GWindow& g, const VWindow& w, double abs_tol) {
    if (!(x > 0.0)) throw PreconditionError("k_plus: x must be positive");
    double a = -g.support() / g.Delta(), b = -a;
    if (w.taper > 0.0) {
        if (!(w.hi >= w.lo)) throw PreconditionError("k_plus: window needs lo <= hi");
        a = std::max(a, w.lo - w.taper);
        b = std::min(b, w.hi + w.taper);
    }
    QuadResult out;
    if (!(b > a)) return out;
    const double T = g.T(), D = g.Delta();
    auto f = [&](double v) {
        const double s = std::sinh(0.5 * v);
        const double wt = w(v);
        if (wt == 0.0) return cplx(0.0, 0.0);
        return wt * g(D * v) * std::polar(1.0, 2.0 * x * s * s - 2.0 * v * T);
    };
    QuadOptions o;
    o.abs_tol = abs_tol;
    o.rel_tol = 1e-10;
    o.max_frequency = x * std::sinh(std::max(std::abs(a), std::abs(b))) + 2.0 * T;
    o.min_panels = 16;
    return integrate(f, a, b, o);
}

// ---- Mellin surrogate ----

MellinSurrogate::MellinSurrogate(double X, int s_nodes) : X_(X) {
    if (!(X >= 10.0)) throw PreconditionError("MellinSurrogate: X must be >= 10");
    if (s_nodes < 64) throw PreconditionError("MellinSurrogate: too few nodes");
    s0_ = std::log(X);
    h_ = std::log(2.0) / s_nodes;
    F_.resize(std::size_t(s_nodes + 1));
    for (int k = 0; k <= s_nodes; ++k) F_[std::size_t(k)] = f(std::exp(s0_ + k * h_));
}

cplx MellinSurrogate::f(double x) const { return unit_window(x / X_) * std::polar(1.0, -x); }

cplx MellinSurrogate::transform(double t) const {
    // Trapezoid in s = log x; the integrand vanishes at both ends.
    CompensatedComplexSum acc;
    const cplx step = std::polar(1.0, -t * h_);
    cplx z;
    for (std::size_t k = 0; k < F_.size(); ++k) {
        if (k % 256 == 0) z = std::polar(1.0, -t * (s0_ + double(k) * h_));
        acc.add(F_[k] * z);
        z *= step;
    }
    return h_ * acc.value();
}

MellinReport MellinSurrogate::report(const std::vector<double>& x_grid) const {
    MellinReport rep;
    rep.X = X_;
    const GaussRule& rule = gauss_legendre(16);
    constexpr double kPanel = 2.0;
    constexpr double kStop = 1e-13;
    std::vector<double> ts, ws;
    std::vector<cplx> vals;
    const double centre = -1.5 * X_;
    rep.peak = std::abs(transform(centre));
    for (int dir : {-1, 1}) {
        int quiet = 0;
        for (int b = 0; quiet < 8 && b < 200000; ++b) {
            const double lo = dir > 0 ? centre + b * kPanel : centre - (b + 1) * kPanel;
            double block_max = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = lo + 0.5 * kPanel * (rule.nodes[i] + 1.0);
                const cplx v = transform(t);
                ts.push_back(t);
                ws.push_back(0.5 * kPanel * rule.weights[i]);
                vals.push_back(v);
                block_max = std::max(block_max, std::abs(v));
            }
            rep.peak = std::max(rep.peak, block_max);
            quiet = block_max < kStop * rep.peak ? quiet + 1 : 0;
            if (dir > 0)
                rep.t_hi = lo + kPanel;
            else
                rep.t_lo = lo;
        }
    }
    rep.scaled_min = INFINITY;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i], m = std::abs(vals[i]);
        if (-t < X_ / 4 || -t > 8 * X_) rep.outside_ratio = std::max(rep.outside_ratio, m / rep.peak);
        if (t >= 10 * X_) rep.wrong_sign_max = std::max(rep.wrong_sign_max, m);
        if (-t >= 1.25 * X_ && -t <= 1.75 * X_) {
            rep.scaled_min = std::min(rep.scaled_min, m * std::sqrt(X_));
            rep.scaled_max = std::max(rep.scaled_max, m * std::sqrt(X_));
        }
    }
    const double sup_f = std::exp(-1.0);
    for (double x : x_grid) {
        const double lx = std::log(x);
        CompensatedComplexSum acc;
        for (std::size_t i = 0; i < ts.size(); ++i) acc.add(ws[i] * vals[i] * std::polar(1.0, ts[i] * lx));
        const cplx rec = acc.value() / kTwoPi;
        rep.recon_max_err = std::max(rep.recon_max_err, std::abs(rec - f(x)) / sup_f);
    }
    return rep;
}

// ---- v-integral ----

VIntegralPoint v_integral_point(double t, double T) {
    if (!(T >= 1.0)) throw PreconditionError("v_integral_point: T must be >= 1");
    if (!(t < 0.0)) throw DomainError("v_integral_point: needs t < 0");
    if (-t > std::pow(T, 0.95)) throw DomainError("v_integral_point: |t| exceeds the T^{0.95} guard");
    VIntegralPoint out;
    const double z = 2.0 * t * t / (3.0 * T * T);
    out.v0 = -2.0 * t / (T * (1.0 + std::sqrt(1.0 + z)));
    out.phase = -2.0 * out.v0 * T - 2.0 * t * std::log(out.v0) + t * out.v0 * out.v0 / 6.0;
    const double r = t / T;
    out.cubic_coeff = (out.v0 + r) / (r * r * r);
    out.phase_coeff = (out.phase - 2.0 * t + 2.0 * t * std::log(-t / T)) * T * T / (t * t * t);
    return out;
}

// ---- Parameter bookkeeping ----

void SpectralWeightParams::validate() const {
    if (!(T >= 1.0 && Delta >= 1.0 && Delta <= T)) throw PreconditionError("SpectralWeightParams: needs 1 <= Delta <= T");
    if (!(U >= 0.0 && N >= 1.0 && C > 0.0)) throw PreconditionError("SpectralWeightParams: needs U >= 0, N >= 1, C > 0");
}

double SpectralWeightParams::n_max() const { return std::sqrt(std::max(U, 1.0)) * T; }
double SpectralWeightParams::c_lower() const { return N * N / (T * T); }
double SpectralWeightParams::c_upper() const { return N * N / (Delta * T); }
bool SpectralWeightParams::c_in_range() const { return C >= c_lower() && C <= c_upper(); }
double SpectralWeightParams::V0() const { return T * C / (N * N); }
double SpectralWeightParams::P() const { return C * T * T / (N * N); }
double SpectralWeightParams::K_large_u() const { return C * U / N; }
double SpectralWeightParams::K_small_u() const { return C * C * T * T / (N * N * N); }
double SpectralWeightParams::Phi_large_u() const {
    if (!(U > 0.0)) throw DomainError("Phi_large_u: needs U > 0");
    return N * std::sqrt(C) / U;
}
double SpectralWeightParams::Phi_small_u() const { return N * N * N / (std::sqrt(C) * T * T); }
double SpectralWeightParams::x_scale() const { return 4.0 * kPi * N * N / C; }

}  // namespace ntcheck

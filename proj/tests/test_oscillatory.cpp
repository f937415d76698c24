#include "doctest.h"

#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"
#include "ntcheck/oscillatory.hpp"

using namespace ntcheck;

namespace {

// Cardinal cubic B-spline on [0, 4].
double bspline3(double x) {
    if (x <= 0 || x >= 4) return 0.0;
    if (x < 1) return x * x * x / 6;
    if (x < 2) return (-3 * x * x * x + 12 * x * x - 12 * x + 4) / 6;
    if (x < 3) return (3 * x * x * x - 24 * x * x + 60 * x - 44) / 6;
    const double u = 4 - x;
    return u * u * u / 6;
}

}  // namespace

TEST_CASE("quadrature: rules and closed forms") {
    for (int n : {1, 5, 16, 40}) {
        const auto& r = gauss_legendre(n);
        for (int d = 0; d < 2 * n; ++d) {
            double s = 0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
            REQUIRE(std::abs(s - (d % 2 ? 0.0 : 2.0 / (d + 1))) < 1e-13);
        }
    }
    auto poly = integrate([](double x) { return cplx(std::pow(x, 31), 0); }, 0, 1);
    CHECK(std::abs(poly.value - 1.0 / 32) < 1e-15);

    // Fresnel integral with a widening Gaussian: int e^{i x^2 - x^2/L^2} = sqrt(pi / (1/L^2 - i)).
    for (double L : {3.0, 10.0, 30.0}) {
        QuadOptions o;
        o.max_frequency = 2 * 12 * L;
        auto r = integrate([L](double x) { return std::exp(cplx(-1.0 / (L * L), 1.0) * x * x); }, -12 * L, 12 * L, o);
        const cplx exact = std::sqrt(kPi / cplx(1.0 / (L * L), -1.0));
        REQUIRE(std::abs(r.value - exact) < 1e-10);
    }
    CHECK(std::abs(std::sqrt(kPi / cplx(1e-8, -1.0)) - std::sqrt(kPi) * std::polar(1.0, kPi / 4)) < 1e-7);

    // Polynomial window: int e^{iUx} B3(x) dx = e^{2iU} (sin(U/2)/(U/2))^4.
    for (double U : {0.7, 5.0, 40.0, 300.0}) {
        QuadOptions o;
        o.max_frequency = U;
        o.min_panels = 4;
        auto r = integrate([U](double x) { return bspline3(x) * std::polar(1.0, U * x); }, 0, 4, o);
        const double sinc = std::sin(U / 2) / (U / 2);
        const cplx exact = std::polar(std::pow(sinc, 4), 2 * U);
        REQUIRE(std::abs(r.value - exact) < 1e-12);
        // Decay beyond the smoothness order of the window.
        REQUIRE(std::abs(r.value) <= std::pow(2.0 / U, 4) + 1e-12);
    }
}

TEST_CASE("unit window") {
    auto r = integrate([](double x) { return cplx(unit_window(x), 0); }, 1, 2);
    CHECK(std::abs(r.value.real() - unit_window_mass()) < 1e-13);
    CHECK(unit_window(1.0) == 0.0);
    CHECK(unit_window(1.5) == doctest::Approx(std::exp(-1.0)));
    // Jets against central differences.
    for (double x : {1.1, 1.37, 1.5, 1.81}) {
        for (int j = 0; j < 5; ++j) {
            const double h = 1e-5;
            const double fd = (unit_window_derivative(x + h, j) - unit_window_derivative(x - h, j)) / (2 * h);
            const double d = unit_window_derivative(x, j + 1);
            REQUIRE(std::abs(fd - d) <= 1e-5 * std::max(1.0, std::abs(d)));
        }
    }
    // Frozen sup bounds against a fine scan.
    for (int j = 0; j <= 6; ++j) {
        double m = 0;
        for (int k = 1; k < 200000; ++k) m = std::max(m, std::abs(unit_window_derivative(1.0 + k / 200000.0, j)));
        REQUIRE(m <= unit_window_derivative_bound(j) * (1 + 1e-12));
        REQUIRE(m >= unit_window_derivative_bound(j) * (1 - 1e-4));
    }
    CHECK(smooth_step(-1) == 0.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(2) == 1.0);
}

TEST_CASE("stationary points") {
    OscParams p{1.0, 1.0, 100.0, 1e-4, 100.0};  // eps N^2 / U = 0.01
    auto sp = stationary_point(p);
    CHECK(sp.regime == Regime::UDominant);
    CHECK(sp.residual < 1e-10);
    CHECK(regime1_r0(0.1) == doctest::Approx(0.990195).epsilon(1e-6));
    CHECK(std::abs(regime2_x0(0.1) - 0.909902) < 1e-6);
    CHECK(std::abs(regime2_y0(0.1) - 1.109902) < 1e-6);
    CHECK(regime2_x0(0.0) == 1.0);

    OscParams q{-1.0, 1.0, 1.0, 0.01, 100.0};  // ratio 100
    auto s2 = stationary_point(q);
    CHECK(s2.regime == Regime::EpsDominant);
    CHECK(s2.residual < 1e-10);
    CHECK(std::abs(s2.delta - 0.01) < 1e-15);
    // Phase at the critical point through the scaled form.
    const double pred = q.U * std::log(-q.A / q.B) + (-q.A * q.B / q.eps) * scaled_phase(Regime::EpsDominant, s2.delta).real();
    CHECK(std::abs(s2.phase - pred) < 1e-9 * std::abs(pred));
    const double pred1 = p.U * std::log(p.A / p.B) + p.U * scaled_phase(Regime::UDominant, sp.delta).real();
    CHECK(std::abs(sp.phase - pred1) < 1e-9 * std::max(1.0, std::abs(pred1)));

    CHECK_THROWS_AS(stationary_point(OscParams{1, 1, 100, 0.01, 100}), GuardBandError);
    CHECK_THROWS_AS(stationary_point(OscParams{-1, 1, 100, 1e-4, 100}), DomainError);
}

TEST_CASE("phase Taylor expansions") {
    auto t1 = phase_taylor(Regime::UDominant, 0.1, 1);
    CHECK(std::abs(t1.c[0] - 1.0) < 1e-12);
    CHECK(std::abs(t1.c[1] + 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(t1.remainder) <= t1.remainder_bound);
    auto t1h = phase_taylor(Regime::UDominant, 0.05, 1);
    const double ratio = t1.remainder / t1h.remainder;
    CHECK(ratio == doctest::Approx(32.0).epsilon(0.2));
    CHECK(phase_taylor(Regime::UDominant, 0.0, 2).value == 0.0);

    auto t2 = phase_taylor(Regime::EpsDominant, 0.1, 3);
    for (std::size_t n = 1; n < t2.series.size(); n += 2) CHECK(std::abs(t2.series[n]) < 1e-9);
    CHECK(std::abs(t2.c[0] + 1.0) < 1e-12);
    CHECK(std::abs(t2.remainder) <= t2.remainder_bound);
    for (double d : {0.05, 0.2, 0.3})
        CHECK(std::abs(scaled_phase(Regime::EpsDominant, d) - scaled_phase(Regime::EpsDominant, -d)) < 1e-14);
    CHECK_THROWS_AS(phase_taylor(Regime::UDominant, 0.31, 1), PreconditionError);
}

TEST_CASE("I integral magnitudes") {
    // Zero phase: product of window masses.
    auto r0 = i_integral(OscParams{0, 0, 0, 0, 10});
    const double m = unit_window_mass() * 10;
    CHECK(std::abs(r0.value - m * m) < 1e-9 * m * m);

    const double N = 100, U = 100, eps = 0.1 * U / (N * N);
    const double a = U / (1.5 * N);
    auto in = i_integral(OscParams{a, a, U, eps, N});
    const double scaled = std::abs(in.value) * U / (N * N);
    CHECK(scaled > 0.1);
    CHECK(scaled < 10);
    auto out = i_integral(OscParams{4 * U / N, 4 * U / N, U, eps, N});
    CHECK(std::abs(out.value) <= 1e-3 * std::abs(in.value));
}

TEST_CASE("spectral weight h") {
    const double T = 100, D = 10;
    CHECK(spectral_weight_h(T, T, D) == doctest::Approx((T * T + 0.25) / (T * T) * (1 + std::exp(-4 * T * T / (D * D)))));
    for (double t = -300; t <= 300; t += 7.3) {
        REQUIRE(spectral_weight_h(t, T, D) == spectral_weight_h(-t, T, D));
        REQUIRE(spectral_weight_h(t, T, D) > 0);
        REQUIRE(spectral_weight_h(t, T, D) <= 2 * (t * t + 0.25) / (T * T));
    }
}

TEST_CASE("g window") {
    GWindow g(100, 10);
    // Hermitian symmetry and decay.
    for (double y : {0.3, 1.0, 2.5, 4.0}) {
        REQUIRE(std::abs(g(-y) - std::conj(g(y))) < 1e-12);
        REQUIRE(std::abs(g(y) - g.exact(y)) < 1e-12);
    }
    CHECK(std::abs(g(10)) <= 1e-4 * std::abs(g(0)));
    CHECK(std::abs(g.exact(10)) <= 1e-4 * std::abs(g(0)));
    // v = 0: int t tanh(pi t) h(t) dt = 2 Delta T g(0).
    QuadOptions o;
    o.abs_tol = 1e-12;
    auto lhs = integrate([](double t) { return cplx(t * std::tanh(kPi * t) * spectral_weight_h(t, 100, 10), 0); }, -250, 250, o);
    CHECK(std::abs(lhs.value - 2000.0 * g(0)) < 1e-9 * std::abs(lhs.value));
    // Identity at v != 0.
    for (double v : {0.013, 0.05, 0.11}) {
        QuadOptions q;
        q.abs_tol = 1e-12;
        q.max_frequency = 2 * v;
        auto num = integrate([v](double t) { return std::polar(t * std::tanh(kPi * t) * spectral_weight_h(t, 100, 10), -2 * v * t); },
                             -250, 250, q);
        const cplx gv = g(10 * v);
        const cplx rhs = 1000.0 * (std::polar(1.0, -200 * v) * gv + std::polar(1.0, 200 * v) * std::conj(gv));
        REQUIRE(std::abs(num.value - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
    }
    CHECK_THROWS_AS(GWindow(10, 20), PreconditionError);
}

TEST_CASE("K+ localisation") {
    const double T = 100, D = 10;
    GWindow g(T, D);
    double mx = 0;
    for (double x = D * T; x <= 10 * D * T; x *= 1.25) mx = std::max(mx, std::abs(k_plus(x, g).value));
    const double small = std::abs(k_plus(D * T / 10, g).value);
    CHECK(small <= 1e-3 * mx);

    // x >> T^2: mass within |v| <= 8 T^{1/4} x^{-1/2}.
    const double x = 1e6, V = 8 * std::pow(T, 0.25) / std::sqrt(x);
    auto narrow = k_plus(x, g, VWindow{-V, V, V});
    auto wide = k_plus(x, g, VWindow{-4 * V, 4 * V, V});
    CHECK(std::abs(narrow.value - wide.value) <= 1e-8 * std::abs(wide.value));

    // Mass at v of size V0 = 4 pi T / x.
    for (double xx : {2000.0, 4000.0}) {
        const double V0 = 4 * kPi * T / xx;
        auto full = k_plus(xx, g);
        auto local = k_plus(xx, g, VWindow{V0 / 10, 10 * V0, V0 / 20});
        REQUIRE(std::abs(local.value) >= 0.9 * std::abs(full.value));
    }
}

TEST_CASE("Mellin surrogate") {
    MellinSurrogate m(50);
    std::vector<double> xs;
    for (double x = 40; x <= 110; x += 1.7) xs.push_back(x);
    auto rep = m.report(xs);
    CHECK(rep.recon_max_err <= 1e-6);
    CHECK(rep.scaled_min >= 0.1);
    CHECK(rep.scaled_max <= 10);
    MellinSurrogate m100(100);
    CHECK(std::abs(m100.transform(1000)) < 1e-8);
    CHECK(std::abs(m100.transform(3000)) < 1e-8);
    // Trapezoid convergence in log x.
    MellinSurrogate coarse(50, 2048);
    for (double t : {-75.0, -300.0, 20.0}) CHECK(std::abs(coarse.transform(t) - m.transform(t)) < 1e-13);
    CHECK_THROWS_AS(MellinSurrogate(5), PreconditionError);
}

TEST_CASE("v integral point") {
    auto p = v_integral_point(-10, 100);
    CHECK(std::abs(p.v0 - 0.09983388658482283) < 1e-14);
    CHECK(std::abs(-2 * 100 - 2 * -10 / p.v0 + -10 * p.v0 / 3) < 1e-10);
    CHECK(p.cubic_coeff == doctest::Approx(1.0 / 6).epsilon(1e-2));
    CHECK(p.phase_coeff == doctest::Approx(1.0 / 6).epsilon(1e-2));
    // Halving t scales the cubic correction by 1/8.
    for (double t : {-20.0, -8.0}) {
        const double c1 = v_integral_point(t, 100).v0 + t / 100, c2 = v_integral_point(t / 2, 100).v0 + t / 200;
        REQUIRE(c2 / c1 == doctest::Approx(0.125).epsilon(0.05));
    }
    CHECK(std::abs(v_integral_point(-1e-3, 100).v0 - 1e-5) < 1e-12);
    CHECK_THROWS_AS(v_integral_point(5, 100), DomainError);
    CHECK_THROWS_AS(v_integral_point(-90, 100), DomainError);
}

TEST_CASE("spectral parameters") {
    SpectralWeightParams s{100, 10, 50, 2000, 1000};
    s.validate();
    CHECK(s.V0() == doctest::Approx(100.0 * 1000 / (2000.0 * 2000)));
    CHECK(s.P() == doctest::Approx(1000.0 * 1e4 / 4e6));
    CHECK(s.Phi_small_u() == doctest::Approx(8e9 / (std::sqrt(1000.0) * 1e4)));
    CHECK(s.c_in_range());
    CHECK(s.x_scale() == doctest::Approx(4 * kPi * 4e6 / 1000));
    CHECK_THROWS_AS((SpectralWeightParams{10, 20, 0, 1, 1}.validate()), PreconditionError);
}

#include "doctest.h"

#include <cmath>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"
#include "ntcheck/poisson.hpp"
#include "ntcheck/quadrature.hpp"

using namespace ntcheck;

TEST_CASE("gaussian transform matches quadrature") {
    for (int shape = 0; shape < 3; ++shape) {
        const TestFunction F = standard_shape(shape, 16);
        const auto& g = F.terms[0];
        const double r = 9.0 * std::sqrt(std::max(g.sigma[0], g.sigma[2]));
        for (auto [xi, eta] : {std::pair{0.0, 0.0}, {0.1, -0.05}, {-0.2, 0.15}}) {
            QuadOptions o;
            o.abs_tol = 1e-14;
            o.rel_tol = 1e-13;
            o.max_frequency = kTwoPi * (std::abs(xi) + std::abs(g.omega[0]) + std::abs(g.omega[1]) + std::abs(eta));
            o.min_panels = 8;
            auto val = integrate_2d([&](double x, double y) { return F(x, y) * e_of(-(x * xi + y * eta)); },
                                    g.mu[0] - r, g.mu[0] + r, g.mu[1] - r, g.mu[1] + r, o, o);
            CHECK(rel_err(val.value, F.fourier(xi, eta)) < 1e-10);
        }
    }
}

TEST_CASE("poisson trivial cases") {
    const TestFunction zero;
    CHECK(direct_side(16, zero) == cplx(0.0));
    CHECK(dual_side(16, zero) == cplx(0.0));
    CHECK_THROWS_AS(direct_side(24, standard_shape(0, 24)), PreconditionError);
    CHECK_THROWS_AS(dual_side(8, standard_shape(0, 8)), PreconditionError);
    CHECK_THROWS_AS(standard_shape(3, 16), PreconditionError);

    // Narrow bump between lattice points: every term is below e^{-50}.
    GaussianTerm g;
    g.mu[0] = g.mu[1] = 0.5;
    g.sigma[0] = g.sigma[2] = 0.0025;
    TestFunction F{{g}};
    CHECK(std::abs(direct_side(48, F, Box{-2, 3, -2, 3})) < 48 * 48 * 1e-21);
}

TEST_CASE("poisson exactness across moduli and shapes") {
    for (i64 c : {16, 48, 80, 112})
        for (int shape = 0; shape < 3; ++shape) {
            const PoissonCase pc = poisson_case(c, shape);
            CAPTURE(c);
            CAPTURE(shape);
            CHECK(std::abs(pc.direct) > 1e-3);
            CHECK(pc.rel_err < 1e-8);
        }
}

TEST_CASE("closed and oracle T give the same dual side") {
    for (i64 c : {16, 48, 80, 112})
        for (int shape = 0; shape < 3; ++shape) {
            const TestFunction F = standard_shape(shape, c);
            const cplx a = dual_side(c, F, TSource::Closed), b = dual_side(c, F, TSource::Oracle);
            CHECK(rel_err(a, b) < 1e-10);
        }
}

TEST_CASE("poisson linearity and conjugation") {
    Rng rng(11);
    for (i64 c : {16, 80}) {
        const TestFunction F1 = standard_shape(1, c), F2 = standard_shape(2, c);
        const cplx a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
        const TestFunction mix = F1.scaled(a) + F2.scaled(b);
        const cplx lin_direct = a * direct_side(c, F1) + b * direct_side(c, F2);
        const cplx lin_dual = a * dual_side(c, F1) + b * dual_side(c, F2);
        CHECK(rel_err(direct_side(c, mix), lin_direct) < 1e-12);
        CHECK(rel_err(dual_side(c, mix), lin_dual) < 1e-12);
        CHECK(rel_err(direct_side(c, mix), dual_side(c, mix)) < 1e-8);

        const TestFunction Fc = F1.conj_reflected();
        CHECK(rel_err(direct_side(c, Fc), std::conj(direct_side(c, F1))) < 1e-12);
        CHECK(rel_err(dual_side(c, Fc), std::conj(dual_side(c, F1))) < 1e-10);
    }
}

TEST_CASE("off-diagonal demo with K+ weights") {
    OffDiagonalConfig cfg;
    cfg.T = 100;
    cfg.Delta = 20;
    cfg.U = 0;
    cfg.N = 50;
    cfg.moduli = {16};
    const OffDiagonalReport rep = off_diagonal_demo(cfg);
    REQUIRE(rep.rows.size() == 1);
    const auto& row = rep.rows[0];
    CHECK(rep.quadrature_ok);
    CHECK(std::abs(row.direct) > 0.0);
    CHECK(row.rel_err < 1e-4);
    CHECK(row.truncation_change < 1e-6);

    cfg.window_scale = 0.0;
    const OffDiagonalReport zero = off_diagonal_demo(cfg);
    CHECK(zero.rows[0].direct == cplx(0.0));
    CHECK(zero.rows[0].dual == cplx(0.0));
}

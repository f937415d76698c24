#include "ntcheck/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "ntcheck/charsums.hpp"
#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {

double det(const GaussianTerm& g) { return g.sigma[0] * g.sigma[2] - g.sigma[1] * g.sigma[1]; }

void require_modulus(i64 c) {
    if (c < 16 || c % 16 != 0) throw PreconditionError("poisson: need c = 2^j c_o with j >= 4");
}

void require_size(const Box& b) {
    if (b.count() > kPoissonMaxTerms) throw PreconditionError("poisson: truncation box too large");
}

// S(a, b; c) for squares a, b mod c, filled on demand.
class SquareKloosterman {
public:
    explicit SquareKloosterman(i64 c) : c_(c), roots_(c), index_(std::size_t(c), -1) {
        for (i64 x = 0; x < c; ++x) {
            const auto s = std::size_t(mulmod(x, x, c));
            if (index_[s] < 0) index_[s] = int(squares_++);
        }
        for (i64 t = 1; t < c; ++t)
            if (gcd(t, c) == 1) units_.push_back({t, mod_inverse(t, c)});
        table_.assign(std::size_t(squares_ * squares_), cplx(NAN, 0.0));
    }

    // S(m^2, n^2; c) e_c(2mn)
    cplx weight(i64 m, i64 n) {
        const i64 a = mulmod(mod(m, c_), mod(m, c_), c_), b = mulmod(mod(n, c_), mod(n, c_), c_);
        cplx& s = table_[std::size_t(index_[std::size_t(a)] * squares_ + index_[std::size_t(b)])];
        if (std::isnan(s.real())) {
            CompensatedComplexSum acc;
            for (auto [t, tb] : units_) acc.add(roots_.at((a * t + b * tb) % c_));
            s = acc.value();
        }
        return s * roots_(2 * mulmod(mod(m, c_), mod(n, c_), c_));
    }

private:
    i64 c_;
    UnitRoots roots_;
    std::vector<int> index_;
    i64 squares_ = 0;
    std::vector<std::pair<i64, i64>> units_;
    std::vector<cplx> table_;
};

class TTable {
public:
    TTable(i64 c, TSource src) : c_(c), src_(src), fm_(factor_modulus(c)) {
        if (src == TSource::Oracle && c > kTOracleMaxModulus)
            throw PreconditionError("poisson: oracle T limited to c <= 4096");
    }
    cplx operator()(i64 a, i64 b) const {
        return (src_ == TSource::Closed ? t_sum_closed(a, b, fm_) : t_sum_oracle(a, b, c_)).value;
    }

private:
    i64 c_;
    TSource src_;
    FactoredModulus fm_;
};

Box box_union(const Box& a, const Box& b) {
    if (a.count() == 0) return b;
    if (b.count() == 0) return a;
    return {std::min(a.x_lo, b.x_lo), std::max(a.x_hi, b.x_hi), std::min(a.y_lo, b.y_lo),
            std::max(a.y_hi, b.y_hi)};
}

}  // namespace

void TestFunction::validate() const {
    for (const auto& g : terms)
        if (!(g.sigma[0] > 0 && g.sigma[2] > 0 && det(g) > 0))
            throw PreconditionError("TestFunction: covariance not positive definite");
}

cplx TestFunction::operator()(double x, double y) const {
    cplx s = 0.0;
    for (const auto& g : terms) {
        const double dx = x - g.mu[0], dy = y - g.mu[1];
        const double q = (g.sigma[2] * dx * dx - 2.0 * g.sigma[1] * dx * dy + g.sigma[0] * dy * dy) / det(g);
        s += g.amp * std::exp(-0.5 * q) * e_of(g.omega[0] * x + g.omega[1] * y);
    }
    return s;
}

cplx TestFunction::fourier(double xi, double eta) const {
    cplx s = 0.0;
    for (const auto& g : terms) {
        const double d1 = xi - g.omega[0], d2 = eta - g.omega[1];
        const double q = g.sigma[0] * d1 * d1 + 2.0 * g.sigma[1] * d1 * d2 + g.sigma[2] * d2 * d2;
        s += g.amp * kTwoPi * std::sqrt(det(g)) * std::exp(-2.0 * kPi * kPi * q) *
             e_of(-(d1 * g.mu[0] + d2 * g.mu[1]));
    }
    return s;
}

TestFunction TestFunction::scaled(cplx a) const {
    TestFunction out = *this;
    for (auto& g : out.terms) g.amp *= a;
    return out;
}

TestFunction TestFunction::operator+(const TestFunction& o) const {
    TestFunction out = *this;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    return out;
}

TestFunction TestFunction::conj_reflected() const {
    TestFunction out = *this;
    for (auto& g : out.terms) {
        g.amp = std::conj(g.amp);
        g.mu[0] = -g.mu[0];
        g.sigma[1] = -g.sigma[1];
        g.omega[1] = -g.omega[1];  // conj flips both signs, the reflection restores the first
    }
    return out;
}

TestFunction standard_shape(int i, i64 c) {
    if (c < 1) throw PreconditionError("standard_shape: c must be positive");
    const double s = std::max(1.0, 0.4 * std::sqrt(double(c)));
    const double s2 = s * s;
    GaussianTerm g;
    switch (i) {
        case 0:  // isotropic, centred at (c, c) for small c
            g.mu[0] = g.mu[1] = c <= 64 ? double(c) : 0.5;
            g.sigma[0] = g.sigma[2] = s2;
            break;
        case 1:
            g.amp = {0.6, -0.8};
            g.mu[0] = 0.5 * s;
            g.mu[1] = -0.3 * s;
            g.sigma[0] = 1.5 * s2;
            g.sigma[1] = 0.4 * s2;
            g.sigma[2] = 0.8 * s2;
            g.omega[0] = 0.13;
            g.omega[1] = -0.21;
            break;
        case 2:
            g.amp = {-0.3, 1.1};
            g.mu[0] = -0.7 * s;
            g.mu[1] = 1.3 * s;
            g.sigma[0] = 0.7 * s2;
            g.sigma[1] = -0.3 * s2;
            g.sigma[2] = 1.2 * s2;
            g.omega[0] = 0.37;
            g.omega[1] = 0.05;
            break;
        default:
            throw PreconditionError("standard_shape: index must be 0, 1 or 2");
    }
    return {{g}};
}

Box direct_box(const TestFunction& F, double tail_exponent) {
    Box out;
    for (const auto& g : F.terms) {
        const double rx = std::sqrt(2.0 * tail_exponent * g.sigma[0]);
        const double ry = std::sqrt(2.0 * tail_exponent * g.sigma[2]);
        out = box_union(out, {i64(std::floor(g.mu[0] - rx)), i64(std::ceil(g.mu[0] + rx)),
                              i64(std::floor(g.mu[1] - ry)), i64(std::ceil(g.mu[1] + ry))});
    }
    return out;
}

Box dual_box(const TestFunction& F, i64 c, double tail_exponent) {
    // xi = -k/c, eta = l/c; the marginal decay of d' Sigma d in d1 is
    // d1^2 det / Sigma_yy.
    Box out;
    const double cc = double(c);
    for (const auto& g : F.terms) {
        const double r1 = std::sqrt(tail_exponent * g.sigma[2] / det(g)) / (kPi * std::sqrt(2.0));
        const double r2 = std::sqrt(tail_exponent * g.sigma[0] / det(g)) / (kPi * std::sqrt(2.0));
        out = box_union(out, {i64(std::floor(-cc * (g.omega[0] + r1))), i64(std::ceil(-cc * (g.omega[0] - r1))),
                              i64(std::floor(cc * (g.omega[1] - r2))), i64(std::ceil(cc * (g.omega[1] + r2)))});
    }
    return out;
}

cplx direct_side(i64 c, const TestFunction& F, Box box) {
    require_modulus(c);
    F.validate();
    if (F.terms.empty()) return 0.0;
    if (box.count() == 0) box = direct_box(F);
    require_size(box);
    SquareKloosterman S(c);
    CompensatedComplexSum acc;
    for (i64 m = box.x_lo; m <= box.x_hi; ++m)
        for (i64 n = box.y_lo; n <= box.y_hi; ++n) {
            const cplx f = F(double(m), double(n));
            if (f != 0.0) acc.add(S.weight(m, n) * f);
        }
    return acc.value();
}

cplx dual_side(i64 c, const TestFunction& F, TSource src, Box box) {
    require_modulus(c);
    F.validate();
    if (F.terms.empty()) return 0.0;
    if (box.count() == 0) box = dual_box(F, c);
    require_size(box);
    TTable T(c, src);
    const double cc = double(c);
    CompensatedComplexSum acc;
    for (i64 k = box.x_lo; k <= box.x_hi; ++k)
        for (i64 l = box.y_lo; l <= box.y_hi; ++l) {
            const cplx fh = F.fourier(-double(k) / cc, double(l) / cc);
            if (fh == 0.0) continue;
            const cplx t = T(-k, l);
            if (t != 0.0) acc.add(t * fh);
        }
    return acc.value() / (cc * cc);
}

PoissonCase poisson_case(i64 c, int shape, TSource src) {
    PoissonCase out;
    out.c = c;
    out.shape = shape;
    const TestFunction F = standard_shape(shape, c);
    out.direct_box = direct_box(F);
    out.dual_box = dual_box(F, c);
    out.direct = direct_side(c, F, out.direct_box);
    out.dual = dual_side(c, F, src, out.dual_box);
    out.rel_err = rel_err(out.dual, out.direct);
    return out;
}

OffDiagonalReport off_diagonal_demo(const OffDiagonalConfig& cfg) {
    if (!(cfg.N >= 4.0 && cfg.N <= 400.0)) throw PreconditionError("off_diagonal_demo: need 4 <= N <= 400");
    if (!(cfg.T <= 200.0)) throw PreconditionError("off_diagonal_demo: need T <= 200");
    if (cfg.moduli.empty() || cfg.moduli.size() > 20)
        throw PreconditionError("off_diagonal_demo: between 1 and 20 moduli");
    if (!(cfg.kappa > 0.0) || cfg.nodes_per_unit < 4 || cfg.kplus_degree < 8)
        throw PreconditionError("off_diagonal_demo: bad resolution settings");
    const GWindow g(cfg.T, cfg.Delta);
    const double N = cfg.N, U = cfg.U;
    const i64 m_lo = i64(std::ceil(N)), m_hi = i64(std::floor(2.0 * N));

    // Composite Gauss-Legendre nodes on [N, 2N], one panel per unit length.
    const int panels = std::max(1, int(std::ceil(N)));
    const GaussRule& gl = gauss_legendre(cfg.nodes_per_unit);
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p) {
        const double a = N + N * p / panels, h = 0.5 * N / panels;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            nodes.push_back(a + h * (1.0 + gl.nodes[i]));
            weights.push_back(h * gl.weights[i]);
        }
    }

    OffDiagonalReport rep;
    for (i64 c : cfg.moduli) {
        require_modulus(c);
        const double cc = double(c);
        OffDiagonalRow row;
        row.c = c;

        bool ok = true;
        const double x_lo = 4.0 * kPi * N * N / cc, x_hi = 16.0 * kPi * N * N / cc;
        const ChebyshevInterpolant kp(
            [&](double x) {
                QuadResult r = k_plus(x, g, {}, 1e-13);
                ok = ok && r.converged;
                return r.value;
            },
            x_lo, x_hi, cfg.kplus_degree);
        double kp_max = 0.0;
        for (int i = 0; i <= 64; ++i) kp_max = std::max(kp_max, std::abs(kp(x_lo + (x_hi - x_lo) * i / 64.0)));
        row.kplus_tail = kp_max > 0 ? kp.tail_coefficient() / kp_max : 0.0;
        rep.quadrature_ok = rep.quadrature_ok && ok && row.kplus_tail < 1e-8;

        auto W = [&](double x, double y) -> cplx {
            const double w = cfg.window_scale * unit_window(x / N) * unit_window(y / N);
            if (w == 0.0) return 0.0;
            return w * std::polar(1.0, U * (std::log(y) - std::log(x))) *
                   kp(std::clamp(4.0 * kPi * x * y / cc, x_lo, x_hi));
        };

        SquareKloosterman S(c);
        CompensatedComplexSum direct;
        for (i64 m = m_lo; m <= m_hi; ++m)
            for (i64 n = m_lo; n <= m_hi; ++n) {
                const cplx wv = W(double(m), double(n));
                if (wv != 0.0) direct.add(S.weight(m, n) * wv);
            }
        row.direct = direct.value();

        // I(k, l, c) for |k|, |l| <= K, separated as x-transform then y-transform.
        const i64 K = std::max<i64>(1, i64(std::ceil(cfg.kappa * cc)));
        const std::size_t nn = nodes.size(), nk = std::size_t(2 * K + 1);
        std::vector<cplx> grid(nn * nn);
        for (std::size_t j = 0; j < nn; ++j)
            for (std::size_t i = 0; i < nn; ++i) grid[j * nn + i] = weights[i] * weights[j] * W(nodes[i], nodes[j]);
        std::vector<cplx> A(nk * nn);  // A[k][j] = sum_i grid[j][i] e_c(k x_i)
        std::vector<cplx> ex(nn);
        for (std::size_t kk = 0; kk < nk; ++kk) {
            const double k = double(i64(kk) - K);
            for (std::size_t i = 0; i < nn; ++i) ex[i] = e_of(k * nodes[i] / cc);
            for (std::size_t j = 0; j < nn; ++j) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < nn; ++i) s += grid[j * nn + i] * ex[i];
                A[kk * nn + j] = s;
            }
        }
        const TTable T(c, TSource::Closed);
        CompensatedComplexSum dual, half;
        for (std::size_t ll = 0; ll < nk; ++ll) {
            const i64 l = i64(ll) - K;
            for (std::size_t j = 0; j < nn; ++j) ex[j] = e_of(-double(l) * nodes[j] / cc);
            for (std::size_t kk = 0; kk < nk; ++kk) {
                const i64 k = i64(kk) - K;
                const cplx t = T(-k, l);
                if (t == 0.0) continue;
                cplx I = 0.0;
                for (std::size_t j = 0; j < nn; ++j) I += A[kk * nn + j] * ex[j];
                dual.add(t * I);
                if (2 * std::abs(k) <= K && 2 * std::abs(l) <= K) half.add(t * I);
            }
        }
        row.dual = dual.value() / (cc * cc);
        row.dual_half = half.value() / (cc * cc);
        const double scale = std::max(std::abs(row.direct), std::abs(row.dual));
        row.rel_err = scale > 0 ? std::abs(row.direct - row.dual) / scale : 0.0;
        row.truncation_change = scale > 0 ? std::abs(row.dual - row.dual_half) / scale : 0.0;
        rep.max_rel_err = std::max(rep.max_rel_err, row.rel_err);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace ntcheck

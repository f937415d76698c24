#include "ntcheck/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "ntcheck/errors.hpp"
#include "ntcheck/numeric.hpp"

namespace ntcheck {

namespace {

// Kronrod abscissae and weights; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const RealToComplex& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx k = kWgk[10] * fc, g = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * kXgk[std::size_t(i)];
        const cplx s = f(c - dx) + f(c + dx);
        k += kWgk[std::size_t(i)] * s;
        if (i % 2 == 1) g += kWg[std::size_t(i / 2)] * s;
    }
    k *= h;
    g *= h;
    return {a, b, k, std::abs(k - g)};
}

}  // namespace

QuadResult integrate(const RealToComplex& f, double a, double b, const QuadOptions& opts) {
    QuadResult out;
    if (a == b) return out;
    if (!(std::isfinite(a) && std::isfinite(b))) throw PreconditionError("integrate: infinite limits");
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    long n0 = opts.min_panels;
    if (opts.max_frequency > 0) {
        const double waves = (b - a) * opts.max_frequency / kTwoPi;
        n0 = std::max<long>(n0, static_cast<long>(std::ceil(waves * opts.panels_per_wavelength)));
    }
    n0 = std::min<long>(n0, opts.max_panels);

    std::priority_queue<Panel> heap;
    double total_err = 0.0;
    cplx total = 0.0;
    for (long i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * double(i) / double(n0);
        const double hi = i + 1 == n0 ? b : a + (b - a) * double(i + 1) / double(n0);
        Panel p = gk21(f, lo, hi);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    out.evaluations = 21 * n0;
    long panels = n0;
    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (panels >= opts.max_panels) {
            out.converged = false;
            break;
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        heap.pop();
        Panel l = gk21(f, worst.a, mid), r = gk21(f, mid, worst.b);
        out.evaluations += 42;
        ++panels;
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed drift from the running updates.
    CompensatedComplexSum acc;
    double err = 0.0;
    while (!heap.empty()) {
        acc.add(heap.top().value);
        err += heap.top().error;
        heap.pop();
    }
    out.value = sign * acc.value();
    out.error = err;
    return out;
}

QuadResult integrate_2d(const std::function<cplx(double, double)>& f, double ax, double bx, double ay,
                        double by, const QuadOptions& outer, const QuadOptions& inner,
                        const std::function<double(double)>& inner_frequency) {
    long evals = 0;
    double inner_err = 0.0;
    bool ok = true;
    auto g = [&](double y) {
        QuadOptions o = inner;
        if (inner_frequency) o.max_frequency = inner_frequency(y);
        QuadResult r = integrate([&](double x) { return f(x, y); }, ax, bx, o);
        evals += r.evaluations;
        inner_err = std::max(inner_err, r.error);
        ok = ok && r.converged;
        return r.value;
    };
    QuadResult r = integrate(g, ay, by, outer);
    r.evaluations = evals;
    r.error += inner_err * std::abs(by - ay);
    r.converged = r.converged && ok;
    return r;
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 1000) throw PreconditionError("gauss_legendre: n out of range");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.nodes.resize(std::size_t(n));
    rule.weights.resize(std::size_t(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[std::size_t(i)] = -x;
        rule.nodes[std::size_t(n - 1 - i)] = x;
        rule.weights[std::size_t(i)] = rule.weights[std::size_t(n - 1 - i)] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

ChebyshevInterpolant::ChebyshevInterpolant(const RealToComplex& f, double a, double b, int n) : a_(a), b_(b) {
    if (n < 2 || !(b > a)) throw PreconditionError("ChebyshevInterpolant: need n >= 2 and a < b");
    t_.resize(std::size_t(n + 1));
    values_.resize(std::size_t(n + 1));
    for (int j = 0; j <= n; ++j) {
        t_[std::size_t(j)] = std::cos(kPi * j / n);
        values_[std::size_t(j)] = f(0.5 * (a + b) + 0.5 * (b - a) * t_[std::size_t(j)]);
    }
    // Chebyshev coefficients by the cosine sum; only the top few are kept.
    double top = 0.0;
    for (int k = std::max(0, n - 7); k <= n; ++k) {
        cplx c = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            c += w * values_[std::size_t(j)] * std::cos(kPi * double(k) * j / n);
        }
        top = std::max(top, std::abs(c) * 2.0 / n);
    }
    tail_ = top;
}

cplx ChebyshevInterpolant::operator()(double x) const {
    if (x < a_ || x > b_) throw PreconditionError("ChebyshevInterpolant: argument outside interval");
    const double t = (2.0 * x - a_ - b_) / (b_ - a_);
    cplx num = 0.0;
    double den = 0.0;
    const std::size_t n = t_.size() - 1;
    for (std::size_t j = 0; j <= n; ++j) {
        const double d = t - t_[j];
        if (d == 0.0) return values_[j];
        double w = (j % 2 ? -1.0 : 1.0) / d;
        if (j == 0 || j == n) w *= 0.5;
        num += w * values_[j];
        den += w;
    }
    return num / den;
}

}  // namespace ntcheck

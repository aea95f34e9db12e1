// numerics.hpp — shared numerical kernels: Gauss–Legendre rules, adaptive
// panel quadrature, an embedded Dormand–Prince 5(4) integrator, and a
// counter-based RNG for reproducible per-sample seeds.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace liewave {

// ── Gauss–Legendre rules on [-1, 1] ─────────────────────────────────────────

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes via Newton iteration on P_n, started from the Chebyshev estimate.
// Exact for polynomials of degree <= 2n-1; weights sum to 2.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n and P_n' by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// ── Adaptive quadrature ──────────────────────────────────────────────────────
// Bisects panels until the GL15 value is stable under splitting. Handles
// integrable endpoint behavior as long as the caller substitutes away
// genuine singularities first (all internal callers do).

namespace detail {

inline const GaussLegendre& gl15() {
    static const GaussLegendre rule = gauss_legendre(15);
    return rule;
}

template <typename F>
double gl15_panel(F&& f, double a, double b) {
    const auto& rule = gl15();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

template <typename F>
double adapt_rec(F&& f, double a, double b, double whole, double tol, int depth,
                 long& budget) {
    const double mid = 0.5 * (a + b);
    const double left = gl15_panel(f, a, mid);
    const double right = gl15_panel(f, mid, b);
    const double err = std::abs(left + right - whole);
    // Noise floor: once the split disagrees by no more than the roundoff of
    // the panel sums, further bisection only burns time (the integrands here
    // are single-signed, so |left| + |right| tracks the panel's |f| mass).
    const double noise =
        64.0 * std::numeric_limits<double>::epsilon() *
        (std::abs(left) + std::abs(right) + std::abs(whole));
    budget -= 2;
    if (err <= std::max(tol, noise) || depth >= 48 || budget <= 0 ||
        !(b - a > std::numeric_limits<double>::epsilon() * std::abs(mid)))
        return left + right;
    return adapt_rec(f, a, mid, left, 0.5 * tol, depth + 1, budget) +
           adapt_rec(f, mid, b, right, 0.5 * tol, depth + 1, budget);
}

} // namespace detail

template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-13) {
    if (!(b > a)) return 0.0;
    const double whole = detail::gl15_panel(f, a, b);
    const double scale = std::max(std::abs(whole), 1e-30);
    long budget = 400000;  // panel evaluations, not a tolerance knob
    return detail::adapt_rec(f, a, b, whole, tol * scale, 0, budget);
}

// ── Dormand–Prince 5(4) with PI step control ─────────────────────────────────
// Small fixed-dimension explicit integrator; used by oracle computations
// that need ~1e-12 relative accuracy on smooth stretches.

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double initial_dt = 1e-4;
    double max_dt = std::numeric_limits<double>::infinity();
    std::uint64_t max_steps = 50'000'000;
};

// Integrates y' = f(t, y) from t0 while stop(t, y) is false; returns the
// state at the first accepted step where stop() became true. The caller
// refines the stopping event afterwards if it needs the crossing itself.
template <typename F, typename Stop>
std::pair<double, std::vector<double>>
integrate_dopri5(F&& f, double t0, std::vector<double> y, Stop&& stop,
                 const OdeOptions& opt = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th-order embedded weights (for the error estimate, via b - bhat)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n),
        ynew(n);
    double t = t0;
    double h = opt.initial_dt;
    double err_prev = 1.0;
    f(t, y, k1);
    for (std::uint64_t step = 0; step < opt.max_steps; ++step) {
        if (stop(t, y)) return {t, y};
        h = std::min(h, opt.max_dt);

        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                a54 * k4[i]);
        f(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / n);

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err)) {
                // Blow-up territory: retreat rather than accept.
                h *= 0.25;
                continue;
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            const double fac =
                0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
            h *= std::min(5.0, std::max(0.2, fac));
            err_prev = std::max(err, 1e-10);
        } else {
            h *= std::max(0.1, 0.9 * std::pow(err, -1.0 / 5.0));
        }
    }
    throw std::runtime_error("integrate_dopri5: step budget exhausted");
}

// ── Reproducible RNG ─────────────────────────────────────────────────────────

// splitmix64: used both as a generator and to derive independent per-sample
// seeds from (master seed, index) without correlation.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, 1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    // standard normal via Box–Muller (deterministic across platforms)
    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    mix.next();
    return mix.next();
}

} // namespace liewave

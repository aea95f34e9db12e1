// wigner.hpp — SU(2) group elements and irreducible representation matrices.
//
// Conventions (fixed once, used everywhere):
//   * An element is g = [[a, b], [-conj(b), conj(a)]] with |a|^2 + |b|^2 = 1.
//   * zyz Euler angles: g(alpha, beta, gamma) = e^{-i alpha Jz} e^{-i beta Jy}
//     e^{-i gamma Jz} with alpha in [0, 2pi), beta in [0, pi], gamma in
//     [0, 4pi); the 4pi range in gamma covers the double sheet needed by the
//     half-integer (spinorial) representations.
//   * Spins are labelled by the doubled integer j2 = 2*l, so l = 1/2 is j2 = 1;
//     row r of a (j2+1) x (j2+1) matrix carries the weight m = (j2 - 2r)/2
//     (weights descending).
//   * D^l(alpha,beta,gamma)_{m'm} = e^{-i m' alpha} d^l_{m'm}(beta) e^{-i m gamma},
//     which for l = 1/2 reproduces the element matrix itself.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace liewave {

using cplx = std::complex<double>;

struct EulerAngles {
    double alpha;  // [0, 2pi)
    double beta;   // [0, pi]
    double gamma;  // [0, 4pi)
};

struct Su2Element {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};

    static Su2Element identity() { return {}; }

    static Su2Element from_euler(const EulerAngles& e) {
        const double c = std::cos(0.5 * e.beta), s = std::sin(0.5 * e.beta);
        Su2Element g;
        g.a = std::polar(c, -0.5 * (e.alpha + e.gamma));
        g.b = -std::polar(s, -0.5 * (e.alpha - e.gamma));
        return g;
    }

    Su2Element operator*(const Su2Element& o) const {
        Su2Element r;
        r.a = a * o.a - b * std::conj(o.b);
        r.b = a * o.b + b * std::conj(o.a);
        return r;
    }

    Su2Element inverse() const { return {std::conj(a), -b}; }

    // Unique Euler triple in the canonical ranges. At the poles (beta = 0 or
    // pi) only one angle combination is determined; the other is set to zero
    // sheet-consistently.
    EulerAngles to_euler() const {
        constexpr double two_pi = 2.0 * M_PI, four_pi = 4.0 * M_PI;
        auto wrap = [](double x, double period) {
            double r = std::fmod(x, period);
            return r < 0 ? r + period : r;
        };
        const double beta = 2.0 * std::atan2(std::abs(b), std::abs(a));
        double alpha, gamma;
        if (std::abs(b) < 1e-14) {
            const double sum = wrap(-2.0 * std::arg(a), four_pi);  // alpha+gamma
            alpha = wrap(sum, two_pi);
            gamma = wrap(sum - alpha, four_pi);
        } else if (std::abs(a) < 1e-14) {
            const double dif = wrap(-2.0 * std::arg(-b), four_pi);  // alpha-gamma
            alpha = wrap(dif, two_pi);
            gamma = wrap(alpha - dif, four_pi);
        } else {
            const double sum = wrap(-2.0 * std::arg(a), four_pi);
            const double dif = wrap(-2.0 * std::arg(-b), four_pi);
            alpha = wrap(0.5 * (sum + dif), two_pi);
            gamma = wrap(0.5 * (sum - dif), four_pi);
            // The half-angle split leaves a 2pi sheet ambiguity in gamma;
            // settle it by reconstructing the larger matrix entry.
            const cplx a_rec = std::polar(std::cos(0.5 * beta),
                                          -0.5 * (alpha + gamma));
            const cplx ref = std::abs(a) >= std::abs(b) ? a_rec * std::conj(a)
                                                        : (-std::polar(std::sin(0.5 * beta),
                                                                       -0.5 * (alpha - gamma))) *
                                                              std::conj(b);
            if (ref.real() < 0.0) gamma = wrap(gamma + two_pi, four_pi);
        }
        return {alpha, beta, gamma};
    }
};

namespace detail {

inline double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (n < 0 || n > 170) throw std::domain_error("factorial: out of range");
    return table[static_cast<std::size_t>(n)];
}

} // namespace detail

// Wigner small-d matrix d^l(beta) for l = j2/2, weights descending.
inline Eigen::MatrixXd wigner_d(int j2, double beta) {
    if (j2 < 0) throw std::invalid_argument("wigner_d: negative spin label");
    const int dim = j2 + 1;
    const double ch = std::cos(0.5 * beta), sh = std::sin(0.5 * beta);
    Eigen::MatrixXd d(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const int mp2 = j2 - 2 * r;  // doubled weight m'
        for (int c = 0; c < dim; ++c) {
            const int m2 = j2 - 2 * c;
            // integers l+m', l-m', l+m, l-m
            const int lpmp = (j2 + mp2) / 2, lmmp = (j2 - mp2) / 2;
            const int lpm = (j2 + m2) / 2, lmm = (j2 - m2) / 2;
            const int dm = (mp2 - m2) / 2;  // m' - m, an integer
            const double pref =
                std::sqrt(detail::factorial(lpmp) * detail::factorial(lmmp) *
                          detail::factorial(lpm) * detail::factorial(lmm));
            const int s_min = std::max(0, -dm);
            const int s_max = std::min(lpm, lmmp);
            double sum = 0.0;
            for (int s = s_min; s <= s_max; ++s) {
                const double denom = detail::factorial(lpm - s) *
                                     detail::factorial(s) *
                                     detail::factorial(dm + s) *
                                     detail::factorial(lmmp - s);
                const double sign = ((dm + s) % 2 == 0) ? 1.0 : -1.0;
                sum += sign *
                       std::pow(ch, j2 - dm - 2 * s) *
                       std::pow(sh, dm + 2 * s) / denom;
            }
            d(r, c) = pref * sum;
        }
    }
    return d;
}

// Full representation matrix D^l(g) evaluated from Euler angles.
inline Eigen::MatrixXcd wigner_D(int j2, const EulerAngles& e) {
    const int dim = j2 + 1;
    const Eigen::MatrixXd d = wigner_d(j2, e.beta);
    Eigen::MatrixXcd D(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const double mp = 0.5 * (j2 - 2 * r);
        const cplx row_phase = std::polar(1.0, -mp * e.alpha);
        for (int c = 0; c < dim; ++c) {
            const double m = 0.5 * (j2 - 2 * c);
            D(r, c) = row_phase * d(r, c) * std::polar(1.0, -m * e.gamma);
        }
    }
    return D;
}

inline Eigen::MatrixXcd wigner_D(int j2, const Su2Element& g) {
    return wigner_D(j2, g.to_euler());
}

} // namespace liewave

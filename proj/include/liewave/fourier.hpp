// fourier.hpp — group Fourier transform between grid samples and
// representation-side coefficient matrices, plus the Plancherel, Sobolev and
// L^q norms built on it.
//
// analyze:    f_hat(xi) = sum_i w_i f(x_i) xi(x_i)^*
// synthesize: f(x_i)    = sum_xi d_xi tr(xi(x_i) f_hat(xi))
//
// Both are direct summations against the sampled representations; the torus
// path factorizes the sum dimension by dimension (identical values, fewer
// operations). L^q norms are quadrature norms on the grid — the only
// approximate quantity in this header; everything else is exact up to
// roundoff for band-limited data.

#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "liewave/group.hpp"
#include "liewave/numerics.hpp"

namespace liewave {

struct GridField {
    std::shared_ptr<const Group> group;
    Eigen::VectorXcd values;

    static GridField zero(std::shared_ptr<const Group> g) {
        GridField f;
        f.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g->grid.size()));
        f.group = std::move(g);
        return f;
    }
};

struct SpectralField {
    std::shared_ptr<const Group> group;
    std::vector<Eigen::MatrixXcd> coeffs;  // one d_xi x d_xi matrix per mode

    static SpectralField zero(std::shared_ptr<const Group> g) {
        SpectralField f;
        f.coeffs.reserve(g->mode_count());
        for (const Mode& m : g->modes)
            f.coeffs.push_back(Eigen::MatrixXcd::Zero(m.dim, m.dim));
        f.group = std::move(g);
        return f;
    }

    void check_complete() const {
        if (!group || coeffs.size() != group->mode_count())
            throw std::invalid_argument("SpectralField: missing mode matrix");
        for (std::size_t m = 0; m < coeffs.size(); ++m)
            if (coeffs[m].rows() != group->modes[m].dim ||
                coeffs[m].cols() != group->modes[m].dim)
                throw std::invalid_argument("SpectralField: matrix shape mismatch");
    }
};

namespace detail {

// One separable contraction step. Input layout: slowest axis = the axis being
// transformed (size S), remaining axes flattened to R (fastest). Output has
// the new axis rotated to the fastest position, so after processing all
// dimensions in order the layout returns to dimension-0-slowest.
inline void contract_axis(const std::vector<cplx>& in, std::vector<cplx>& out,
                          const Eigen::MatrixXcd& E, std::size_t S, std::size_t R) {
    const std::size_t N = static_cast<std::size_t>(E.rows());
    out.assign(R * N, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < S; ++k)
        for (std::size_t x = 0; x < N; ++x) {
            const cplx e = E(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k));
            const cplx* src = in.data() + k * R;
            cplx* dst = out.data() + x;  // stride N over r
            for (std::size_t r = 0; r < R; ++r) dst[r * N] += e * src[r];
        }
}

inline Eigen::MatrixXcd torus_phase_table(int npts, int kmax, double sign) {
    Eigen::MatrixXcd E(npts, 2 * kmax + 1);
    for (int x = 0; x < npts; ++x)
        for (int k = -kmax; k <= kmax; ++k)
            E(x, k + kmax) = std::polar(1.0, sign * k * (2.0 * M_PI * x / npts));
    return E;
}

} // namespace detail

inline GridField synthesize(const SpectralField& F) {
    F.check_complete();
    const Group& g = *F.group;
    GridField out = GridField::zero(F.group);
    if (g.spec.kind == GroupKind::Torus) {
        const int n = g.spec.torus_dim;
        const int kmax = g.torus_kmax();
        const int npts = g.torus_points_per_dim();
        const std::size_t box = static_cast<std::size_t>(2 * kmax + 1);
        std::size_t box_total = 1;
        for (int d = 0; d < n; ++d) box_total *= box;
        std::vector<cplx> buf(box_total, cplx{0.0, 0.0});
        for (std::size_t m = 0; m < g.modes.size(); ++m) {
            std::size_t flat = 0;
            for (int c : g.modes[m].index) flat = flat * box + static_cast<std::size_t>(c + kmax);
            buf[flat] = F.coeffs[m](0, 0);
        }
        const Eigen::MatrixXcd E = detail::torus_phase_table(npts, kmax, +1.0);
        std::vector<cplx> next;
        std::size_t S = box, R = box_total / box;
        for (int d = 0; d < n; ++d) {
            detail::contract_axis(buf, next, E, S, R);
            buf.swap(next);
            // remaining untransformed axes shrink by one; transformed axes grow
            R = buf.size() / (d + 1 < n ? box : static_cast<std::size_t>(npts));
            S = d + 1 < n ? box : static_cast<std::size_t>(npts);
        }
        for (std::size_t i = 0; i < buf.size(); ++i)
            out.values(static_cast<Eigen::Index>(i)) = buf[i];
    } else {
        for (std::size_t m = 0; m < g.modes.size(); ++m) {
            const int d = g.modes[m].dim;
            const Eigen::MatrixXcd ct = F.coeffs[m].transpose();
            const Eigen::Map<const Eigen::VectorXcd> h(ct.data(), d * d);
            out.values.noalias() +=
                static_cast<double>(d) * (g.rep_flat[m].transpose() * h);
        }
    }
    return out;
}

inline SpectralField analyze(const GridField& f) {
    if (!f.group || f.values.size() != static_cast<Eigen::Index>(f.group->grid.size()))
        throw std::invalid_argument("analyze: field does not match the grid");
    const Group& g = *f.group;
    SpectralField out = SpectralField::zero(f.group);
    if (g.spec.kind == GroupKind::Torus) {
        const int n = g.spec.torus_dim;
        const int kmax = g.torus_kmax();
        const int npts = g.torus_points_per_dim();
        const std::size_t box = static_cast<std::size_t>(2 * kmax + 1);
        std::vector<cplx> buf(f.values.data(), f.values.data() + f.values.size());
        const Eigen::MatrixXcd E = detail::torus_phase_table(npts, kmax, -1.0).transpose().eval();
        // E above is (box x npts) after transpose; contract_axis wants (new x old)
        std::vector<cplx> next;
        std::size_t S = static_cast<std::size_t>(npts), R = buf.size() / S;
        for (int d = 0; d < n; ++d) {
            detail::contract_axis(buf, next, E, S, R);
            buf.swap(next);
            R = buf.size() / (d + 1 < n ? static_cast<std::size_t>(npts) : box);
            S = d + 1 < n ? static_cast<std::size_t>(npts) : box;
        }
        double wtotal = 1.0;
        for (int d = 0; d < n; ++d) wtotal /= npts;
        for (std::size_t m = 0; m < g.modes.size(); ++m) {
            std::size_t flat = 0;
            for (int c : g.modes[m].index) flat = flat * box + static_cast<std::size_t>(c + kmax);
            out.coeffs[m](0, 0) = wtotal * buf[flat];
        }
    } else {
        const Eigen::Map<const Eigen::VectorXd> w(g.grid.weights.data(),
                                                  static_cast<Eigen::Index>(g.grid.weights.size()));
        const Eigen::VectorXcd wf = w.cast<cplx>().cwiseProduct(f.values);
        for (std::size_t m = 0; m < g.modes.size(); ++m) {
            const int d = g.modes[m].dim;
            const Eigen::VectorXcd acc = g.rep_flat[m].conjugate() * wf;
            out.coeffs[m] =
                Eigen::Map<const Eigen::MatrixXcd>(acc.data(), d, d).transpose();
        }
    }
    return out;
}

// ── Norms ────────────────────────────────────────────────────────────────────

// sqrt( sum_xi d_xi ||f_hat(xi)||_HS^2 ) — the L^2 norm read off the
// coefficient side.
inline double plancherel_norm(const SpectralField& F) {
    F.check_complete();
    double s = 0.0;
    for (std::size_t m = 0; m < F.coeffs.size(); ++m)
        s += F.group->modes[m].dim * F.coeffs[m].squaredNorm();
    return std::sqrt(s);
}

struct SobolevNorm {
    double homogeneous;  // || (-L)^{s/2} f ||_{L^2}
    double full;         // || f ||_{L^2} + homogeneous
};

inline SobolevNorm sobolev_norm(const SpectralField& F, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("sobolev_norm: s must be > 0");
    F.check_complete();
    double hom = 0.0;
    for (std::size_t m = 0; m < F.coeffs.size(); ++m)
        hom += F.group->modes[m].dim *
               std::pow(F.group->modes[m].eigenvalue, s) * F.coeffs[m].squaredNorm();
    const double h = std::sqrt(hom);
    return {h, plancherel_norm(F) + h};
}

// Quadrature L^q norm on the grid; q = infinity gives the grid sup norm.
inline double lq_norm(const GridField& f, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
    if (std::isinf(q)) {
        double mx = 0.0;
        for (Eigen::Index i = 0; i < f.values.size(); ++i)
            mx = std::max(mx, std::abs(f.values(i)));
        return mx;
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
        s += f.group->grid.weights[static_cast<std::size_t>(i)] *
             std::pow(std::abs(f.values(i)), q);
    return std::pow(s, 1.0 / q);
}

inline double sup_norm(const GridField& f) {
    return lq_norm(f, std::numeric_limits<double>::infinity());
}

// ── Random band-limited fields ───────────────────────────────────────────────

// Complex Gaussian coefficients with an eigenvalue-decaying envelope
// (1 + lambda^2)^{-decay/2}; not reality-symmetrized.
inline SpectralField random_spectral_field(std::shared_ptr<const Group> group,
                                           std::uint64_t seed, double decay = 0.0) {
    SplitMix64 rng(seed);
    SpectralField F = SpectralField::zero(std::move(group));
    for (std::size_t m = 0; m < F.coeffs.size(); ++m) {
        const double env =
            std::pow(1.0 + F.group->modes[m].eigenvalue, -0.5 * decay);
        for (Eigen::Index r = 0; r < F.coeffs[m].rows(); ++r)
            for (Eigen::Index c = 0; c < F.coeffs[m].cols(); ++c)
                F.coeffs[m](r, c) = env * cplx{rng.gaussian(), rng.gaussian()};
    }
    return F;
}

// Real-valued random field: draw, push to the grid, keep the real part,
// transform back. Exact for band-limited fields, so the result satisfies the
// backend's conjugation symmetry to roundoff.
inline SpectralField random_real_field(std::shared_ptr<const Group> group,
                                       std::uint64_t seed, double decay = 0.0) {
    SpectralField F = random_spectral_field(std::move(group), seed, decay);
    GridField f = synthesize(F);
    f.values = f.values.real().cast<cplx>();
    return analyze(f);
}

// Largest deviation from the reality symmetry. Torus: |conj(c_k) - c_{-k}|;
// SU(2): grid-side imaginary part after synthesis.
inline double reality_defect(const SpectralField& F) {
    F.check_complete();
    if (F.group->spec.kind == GroupKind::Torus) {
        double mx = 0.0;
        for (std::size_t m = 0; m < F.coeffs.size(); ++m) {
            std::vector<int> neg = F.group->modes[m].index;
            for (int& c : neg) c = -c;
            const auto pos = F.group->find_mode(neg);
            if (!pos) continue;
            mx = std::max(mx, std::abs(std::conj(F.coeffs[m](0, 0)) -
                                       F.coeffs[*pos](0, 0)));
        }
        return mx;
    }
    const GridField f = synthesize(F);
    double mx = 0.0;
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
        mx = std::max(mx, std::abs(f.values(i).imag()));
    return mx;
}

} // namespace liewave

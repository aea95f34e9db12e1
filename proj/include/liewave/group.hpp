// group.hpp — concrete unitary-dual backends for the compact groups T^n and
// SU(2): mode enumeration up to a band limit on the Laplace–Beltrami
// eigenvalue, quadrature grids for the normalized Haar measure, and sampled
// representation matrices.
//
// Normalizations:
//   * T^n: modes are integer vectors k with eigenvalue |k|^2 and the 1x1
//     representation e^{i k.x}; the grid is the uniform product grid with
//     equal weights (trapezoid rule, exact for trigonometric polynomials).
//   * SU(2): modes are spins l = j2/2 with dimension j2+1 and eigenvalue
//     l(l+1) (bi-invariant metric fixed so the Casimir acts as l(l+1));
//     the grid is uniform in alpha on [0,2pi) and gamma on [0,4pi) with
//     Gauss–Legendre nodes in cos(beta). Haar weight: glw / (2 Na Ng).
//   * Grid sizes are the minimal ones that integrate products of
//     `product_degree` band-limited representation entries exactly, doubled
//     as a safety margin for non-polynomial integrands.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/numerics.hpp"
#include "liewave/wigner.hpp"

namespace liewave {

enum class GroupKind { Torus, SU2 };

struct GroupSpec {
    GroupKind kind = GroupKind::Torus;
    int torus_dim = 1;        // n for Torus(n); ignored for SU2
    double band_limit = 0.0;  // maximal admitted lambda_xi^2
    int product_degree = 2;   // # band-limited factors integrated exactly
    int grid_refine = 1;      // extra uniform grid refinement (diagnostics)

    int topological_dim() const {
        return kind == GroupKind::Torus ? torus_dim : 3;
    }
    std::string backend_name() const {
        return kind == GroupKind::Torus ? "T" + std::to_string(torus_dim)
                                        : "SU2";
    }
    void validate() const {
        if (kind == GroupKind::Torus && torus_dim < 1)
            throw std::invalid_argument("GroupSpec: Torus(n) requires n >= 1");
        if (band_limit < 0.0)
            throw std::invalid_argument("GroupSpec: band_limit must be >= 0");
        if (product_degree < 2)
            throw std::invalid_argument("GroupSpec: product_degree must be >= 2");
        if (grid_refine < 1)
            throw std::invalid_argument("GroupSpec: grid_refine must be >= 1");
    }
};

// One equivalence class of irreducible unitary representations. The index is
// the integer vector k for the torus and {j2} with j2 = 2l for SU(2)
// (half-integer spins stored doubled).
struct Mode {
    std::vector<int> index;
    int dim = 1;
    double eigenvalue = 0.0;

    bool is_trivial() const { return eigenvalue == 0.0; }
};

struct QuadratureGrid {
    std::vector<std::vector<double>> points;  // angle coordinates per point
    std::vector<double> weights;              // sum to 1 (normalized Haar)
    std::size_t size() const { return points.size(); }
};

namespace detail {

constexpr double kBandEps = 1e-9;

inline std::vector<Mode> enumerate_torus_modes(int n, double band) {
    const int kmax = static_cast<int>(std::floor(std::sqrt(band + kBandEps)));
    std::vector<Mode> modes;
    std::vector<int> k(static_cast<std::size_t>(n), -kmax);
    while (true) {
        double e = 0.0;
        for (int c : k) e += static_cast<double>(c) * c;
        if (e <= band + kBandEps) modes.push_back({k, 1, e});
        int d = n - 1;
        while (d >= 0 && k[static_cast<std::size_t>(d)] == kmax) {
            k[static_cast<std::size_t>(d)] = -kmax;
            --d;
        }
        if (d < 0) break;
        ++k[static_cast<std::size_t>(d)];
    }
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
        return a.index < b.index;
    });
    return modes;
}

inline std::vector<Mode> enumerate_su2_modes(double band) {
    std::vector<Mode> modes;
    for (int j2 = 0;; ++j2) {
        const double e = 0.25 * j2 * (j2 + 2);  // l(l+1) with l = j2/2
        if (e > band + kBandEps) break;
        modes.push_back({{j2}, j2 + 1, e});
    }
    return modes;
}

} // namespace detail

inline std::vector<Mode> enumerate_modes(const GroupSpec& spec) {
    spec.validate();
    return spec.kind == GroupKind::Torus
               ? detail::enumerate_torus_modes(spec.torus_dim, spec.band_limit)
               : detail::enumerate_su2_modes(spec.band_limit);
}

inline QuadratureGrid build_grid(const GroupSpec& spec) {
    spec.validate();
    QuadratureGrid grid;
    if (spec.kind == GroupKind::Torus) {
        const int n = spec.torus_dim;
        const int kmax =
            static_cast<int>(std::floor(std::sqrt(spec.band_limit + detail::kBandEps)));
        const int pts = 2 * (spec.product_degree * kmax + 1) * spec.grid_refine;
        std::size_t total = 1;
        for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(pts);
        grid.points.reserve(total);
        grid.weights.assign(total, 1.0 / static_cast<double>(total));
        std::vector<int> ix(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < total; ++i) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d)
                x[static_cast<std::size_t>(d)] =
                    2.0 * M_PI * ix[static_cast<std::size_t>(d)] / pts;
            grid.points.push_back(std::move(x));
            int d = n - 1;
            while (d >= 0 && ++ix[static_cast<std::size_t>(d)] == pts) {
                ix[static_cast<std::size_t>(d)] = 0;
                --d;
            }
        }
    } else {
        int j2max = 0;
        for (const Mode& m : detail::enumerate_su2_modes(spec.band_limit))
            j2max = std::max(j2max, m.index[0]);
        const int pj = spec.product_degree * j2max;
        const int na = 2 * ((pj + 1) / 2 + 1) * spec.grid_refine;
        const int ng = 2 * (pj + 1) * spec.grid_refine;
        const int nb = 2 * ((pj + 1) / 2 / 2 + 1) * spec.grid_refine;
        const GaussLegendre gl = gauss_legendre(nb);
        grid.points.reserve(static_cast<std::size_t>(na) * nb * ng);
        grid.weights.reserve(grid.points.capacity());
        for (int ia = 0; ia < na; ++ia) {
            const double alpha = 2.0 * M_PI * ia / na;
            for (int ib = 0; ib < nb; ++ib) {
                const double beta = std::acos(gl.nodes[static_cast<std::size_t>(ib)]);
                const double wb = gl.weights[static_cast<std::size_t>(ib)];
                for (int ig = 0; ig < ng; ++ig) {
                    const double gamma = 4.0 * M_PI * ig / ng;
                    grid.points.push_back({alpha, beta, gamma});
                    grid.weights.push_back(wb / (2.0 * na * ng));
                }
            }
        }
    }
    return grid;
}

// Immutable backend aggregate: spec + enumerated modes + grid + (for SU(2))
// the representation matrices sampled on the grid in flattened layout
// rep_flat[m] of shape (d^2, grid), column i = vec(xi(x_i)) column-major.
// Safe to share read-only across workers.
class Group {
public:
    GroupSpec spec;
    std::vector<Mode> modes;
    QuadratureGrid grid;
    std::vector<Eigen::MatrixXcd> rep_flat;  // SU(2) only; empty for torus

    static std::shared_ptr<const Group> make(const GroupSpec& spec) {
        auto g = std::make_shared<Group>();
        g->spec = spec;
        g->modes = enumerate_modes(spec);
        g->grid = build_grid(spec);
        if (spec.kind == GroupKind::SU2) g->build_su2_samples();
        for (std::size_t m = 0; m < g->modes.size(); ++m)
            g->index_of_[g->modes[m].index] = m;
        return g;
    }

    std::size_t mode_count() const { return modes.size(); }
    int topological_dim() const { return spec.topological_dim(); }
    std::string backend_name() const { return spec.backend_name(); }

    std::optional<std::size_t> find_mode(const std::vector<int>& index) const {
        auto it = index_of_.find(index);
        if (it == index_of_.end()) return std::nullopt;
        return it->second;
    }

    // Representation matrix of `mode` at an arbitrary group element given in
    // grid coordinates (angles for T^n, zyz Euler angles for SU(2)).
    Eigen::MatrixXcd representation_at(const Mode& mode,
                                       const std::vector<double>& point) const {
        if (spec.kind == GroupKind::Torus) {
            double phase = 0.0;
            for (std::size_t d = 0; d < point.size(); ++d)
                phase += mode.index[d] * point[d];
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::polar(1.0, phase);
            return m;
        }
        return wigner_D(mode.index[0], EulerAngles{point[0], point[1], point[2]});
    }

    // Same grid geometry with substituted weights; exists so validation
    // harnesses can exercise their failure detection on a corrupted backend.
    static std::shared_ptr<const Group> clone_with_weights(
        const Group& src, std::vector<double> weights) {
        if (weights.size() != src.grid.weights.size())
            throw std::invalid_argument("clone_with_weights: size mismatch");
        auto g = std::make_shared<Group>(src);
        g->grid.weights = std::move(weights);
        return g;
    }

    std::shared_ptr<const Group> refined(int factor) const {
        GroupSpec s = spec;
        s.grid_refine *= factor;
        return make(s);
    }

    // torus helpers used by the separable transform kernels
    int torus_points_per_dim() const {
        return spec.kind == GroupKind::Torus
                   ? 2 * (spec.product_degree * torus_kmax() + 1) * spec.grid_refine
                   : 0;
    }
    int torus_kmax() const {
        return static_cast<int>(
            std::floor(std::sqrt(spec.band_limit + detail::kBandEps)));
    }

private:
    std::map<std::vector<int>, std::size_t> index_of_;

    void build_su2_samples() {
        rep_flat.resize(modes.size());
        const std::size_t npts = grid.size();
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const int d = modes[m].dim;
            rep_flat[m].resize(d * d, static_cast<Eigen::Index>(npts));
            for (std::size_t i = 0; i < npts; ++i) {
                const auto& pt = grid.points[i];
                const Eigen::MatrixXcd D =
                    wigner_D(modes[m].index[0], EulerAngles{pt[0], pt[1], pt[2]});
                rep_flat[m].col(static_cast<Eigen::Index>(i)) =
                    Eigen::Map<const Eigen::VectorXcd>(D.data(), d * d);
            }
        }
    }
};

// Sampled representation matrices, one per grid point.
inline std::vector<Eigen::MatrixXcd> sample_representation(const Group& group,
                                                           const Mode& mode) {
    const auto pos = group.find_mode(mode.index);
    if (!pos || mode.eigenvalue > group.spec.band_limit + detail::kBandEps)
        throw std::invalid_argument(
            "sample_representation: mode outside the enumerated band");
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(group.grid.size());
    if (group.spec.kind == GroupKind::SU2) {
        const Eigen::MatrixXcd& flat = group.rep_flat[*pos];
        const int d = mode.dim;
        for (std::size_t i = 0; i < group.grid.size(); ++i)
            out.push_back(Eigen::Map<const Eigen::MatrixXcd>(
                flat.col(static_cast<Eigen::Index>(i)).data(), d, d));
    } else {
        for (const auto& pt : group.grid.points)
            out.push_back(group.representation_at(mode, pt));
    }
    return out;
}

} // namespace liewave

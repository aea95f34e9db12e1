// gn.hpp — empirical check of the Gagliardo–Nirenberg interpolation
// inequality ||f||_{L^q} <= C ||f||_{H^1}^theta ||f||_{L^2}^{1-theta} with
// theta(n, q) = n (1/2 - 1/q), over random band-limited fields. The constant
// is not derived; the sweep records the observed maxima and how they move
// under band-limit refinement.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "liewave/fourier.hpp"

namespace liewave {

// Interpolation exponent; admissible for n >= 3, 2 <= q <= 2n/(n-2) — the
// same window as the local-existence restriction p <= n/(n-2) with q = 2p.
inline double gn_theta(int n, double q) {
    if (n < 3)
        throw std::invalid_argument("gn_theta: requires topological dimension n >= 3");
    if (!(q >= 2.0) || q > 2.0 * n / (n - 2) + 1e-12)
        throw std::invalid_argument(
            "gn_theta: admissibility requires 2 <= q <= 2n/(n-2)");
    return n * (0.5 - 1.0 / q);
}

struct GNReport {
    int n = 0;
    double q = 0.0;
    double theta = 0.0;
    int samples = 0;
    double max_ratio = 0.0;
    std::uint64_t argmax_seed = 0;
    double band_limit = 0.0;
    std::string backend;
    std::vector<double> ratios;  // full distribution, one entry per sample
};

// Draws `samples` random real fields with eigenvalue-decaying coefficients
// and reports the largest observed ratio ||f||_q / (||f||_{H^1}^theta
// ||f||_2^{1-theta}).
inline GNReport gn_ratio_sweep(const std::shared_ptr<const Group>& group,
                               double q, int samples, std::uint64_t seed,
                               double decay = 1.0) {
    const int n = group->topological_dim();
    GNReport rep;
    rep.n = n;
    rep.q = q;
    rep.theta = gn_theta(n, q);
    rep.samples = samples;
    rep.band_limit = group->spec.band_limit;
    rep.backend = group->backend_name();
    rep.ratios.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        const std::uint64_t sample_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
        const SpectralField F = random_real_field(group, sample_seed, decay);
        const GridField f = synthesize(F);
        const double lq = lq_norm(f, q);
        const double l2 = plancherel_norm(F);
        const double h1 = sobolev_norm(F, 1.0).full;
        if (!(l2 > 0.0)) continue;
        const double ratio =
            lq / (std::pow(h1, rep.theta) * std::pow(l2, 1.0 - rep.theta));
        rep.ratios.push_back(ratio);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax_seed = sample_seed;
        }
    }
    return rep;
}

} // namespace liewave

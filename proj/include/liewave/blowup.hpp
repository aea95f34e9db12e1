// blowup.hpp — zero-mode functional U0(t) = mean of u, the discrete Jensen
// and second-difference identities along trajectories, an independent
// comparison-ODE oracle for the blow-up time of U'' = |U|^p, numerical
// lifespan detection, and log-log scaling fits of T(epsilon).
//
// The oracle computes the blow-up time two unrelated ways and insists they
// agree: (a) adaptive integration with an asymptotic tail hand-off once
// U >= 1e10, and (b) the energy-reduction quadrature
//   T* = \int_{U0}^\infty dU / sqrt(V0^2 + 2 (U^{p+1} - U0^{p+1}) / (p+1)).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/numerics.hpp"
#include "liewave/solver.hpp"

namespace liewave {

// ── Zero-mode series ─────────────────────────────────────────────────────────

struct ZeroModeSeries {
    std::vector<double> times;
    std::vector<double> values;  // U0(t)
    std::vector<double> derivs;  // U0'(t)
};

inline ZeroModeSeries zero_mode_series(const Trajectory& traj) {
    ZeroModeSeries z;
    z.times.reserve(traj.samples.size());
    z.values.reserve(traj.samples.size());
    z.derivs.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        z.times.push_back(s.time);
        z.values.push_back(s.zero_mode);
        z.derivs.push_back(s.zero_mode_dt);
    }
    return z;
}

// Discrete zero-mode identities along a trajectory, via the nonuniform
// three-point second difference D2 of U0:
//   Jensen:   D2 U0 >= |U0|^p - tol,
//   identity: |D2 U0 - quadrature(|u|^p)| <= tol.
// The tolerance is the truncation-error scale of the stencil on the
// comparison dynamics U'' ~ |U|^p, with both the O(h^2) U'''' term and the
// O(h+ - h-) U''' term that a varying step leaves behind:
//   tol = C [ h^2 max(1, |U0|^{2p-1}) + |h+ - h-| max(1, |U0|^{(3p+1)/2}) ].
// Reported defects are normalized by that scale, so `pass` means the
// normalized defect stays below C.
struct ZeroModeCheck {
    double max_jensen_defect = 0.0;    // (|U0|^p - D2) / scale, max over t
    double max_identity_defect = 0.0;  // |D2 - Q| / scale, max over t
    double tolerance_constant = 0.0;
    bool pass_jensen = true;
    bool pass_identity = true;
};

inline ZeroModeCheck check_zero_mode_identities(const Trajectory& traj,
                                                double C = 50.0) {
    ZeroModeCheck chk;
    chk.tolerance_constant = C;
    const auto& s = traj.samples;
    const double p = traj.p;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        // the recorded step sizes, not differences of absolute times: near
        // blow-up dt can sit at the roundoff floor of t itself
        const double hm = s[i].dt;
        const double hp = s[i + 1].dt;
        if (!(hm > 0.0) || !(hp > 0.0)) continue;
        const double d2 = 2.0 *
                          ((s[i + 1].zero_mode - s[i].zero_mode) / hp -
                           (s[i].zero_mode - s[i - 1].zero_mode) / hm) /
                          (hm + hp);
        const double u0 = std::abs(s[i].zero_mode);
        const double h = std::max(hm, hp);
        const double scale =
            h * h * std::max(1.0, std::pow(u0, 2.0 * p - 1.0)) +
            std::abs(hp - hm) * std::max(1.0, std::pow(u0, 0.5 * (3.0 * p + 1.0)));
        chk.max_jensen_defect =
            std::max(chk.max_jensen_defect,
                     (std::pow(u0, p) - d2) / scale);
        chk.max_identity_defect =
            std::max(chk.max_identity_defect,
                     std::abs(d2 - s[i].nonlinear_mass) / scale);
    }
    chk.pass_jensen = chk.max_jensen_defect <= C;
    chk.pass_identity = chk.max_identity_defect <= C;
    return chk;
}

// ── Comparison ODE oracle ────────────────────────────────────────────────────

namespace detail {

inline void kato_check_inputs(double p, double U0, double V0) {
    if (!(p > 1.0)) throw std::invalid_argument("kato: p must be > 1");
    if (U0 < 0.0 || V0 < 0.0)
        throw std::invalid_argument("kato: initial data must be nonnegative");
}

// Pivot between the tau-substituted head integral and the power-substituted
// tail; any value > U0 on the problem's natural scale works.
inline double kato_pivot(double p, double U0, double V0) {
    const double vscale = std::pow(0.5 * (p + 1.0) * V0 * V0, 1.0 / (p + 1.0));
    return std::max({1.0, 2.0 * U0, 2.0 * vscale});
}

} // namespace detail

// Energy-reduction quadrature for the time the solution of U'' = |U|^p,
// U(0) = U0 >= 0, U'(0) = V0 >= 0 (not both zero) needs to reach `level`
// (level = +inf gives the blow-up time itself).
inline double kato_time_to_level(double p, double U0, double V0,
                                 double level = std::numeric_limits<double>::infinity()) {
    detail::kato_check_inputs(p, U0, V0);
    if (U0 == 0.0 && V0 == 0.0)
        throw std::invalid_argument("kato_time_to_level: trivial data never move");
    if (level <= U0) return 0.0;

    const double c = 2.0 / (p + 1.0);
    const double U0p1 = std::pow(U0, p + 1.0);
    const double B = std::min(detail::kato_pivot(p, U0, V0), level);

    // head: U = U0 + tau^2 removes the V0 = 0 inverse-sqrt endpoint; the
    // excess U^{p+1} - U0^{p+1} is computed via expm1/log1p so it keeps full
    // relative precision even when U0 is large and V0^2 is tiny
    const double tau_max = std::sqrt(B - U0);
    const double head = integrate_adaptive(
        [&](double tau) {
            const double excess =
                U0 > 0.0
                    ? U0p1 * std::expm1((p + 1.0) * std::log1p(tau * tau / U0))
                    : std::pow(tau, 2.0 * (p + 1.0));
            return 2.0 * tau / std::sqrt(V0 * V0 + c * excess);
        },
        0.0, tau_max);

    if (level <= B) return head;

    // tail: U = B s^{-2/(p-1)}; all powers expressed in r = s^{2/(p-1)} in
    // [0,1], so nothing overflows as s -> 0
    const double s_lo =
        std::isinf(level) ? 0.0 : std::pow(B / level, 0.5 * (p - 1.0));
    const double pref = (2.0 / (p - 1.0)) * std::pow(B, -0.5 * (p - 1.0));
    const double a = V0 * V0 / std::pow(B, p + 1.0);
    const double d = U0p1 / std::pow(B, p + 1.0);
    const double tail = integrate_adaptive(
        [&](double s) {
            const double q = std::pow(s, 2.0 * (p + 1.0) / (p - 1.0));
            return pref / std::sqrt(a * q + c * (1.0 - d * q));
        },
        s_lo, 1.0);
    return head + tail;
}

inline double kato_blowup_time_quadrature(double p, double U0, double V0) {
    return kato_time_to_level(p, U0, V0);
}

// Adaptive integration of (U, V) with rate-matched error control; once
// U >= 1e10 the remaining time is the leading-order blow-up asymptote
// 2 U / ((p-1) V), whose relative bias is O(U^{-(p+1)}).
inline double kato_blowup_time_ode(double p, double U0, double V0) {
    detail::kato_check_inputs(p, U0, V0);
    if (U0 == 0.0 && V0 == 0.0)
        throw std::invalid_argument("kato_blowup_time_ode: trivial data never move");
    constexpr double switch_level = 1e10;
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-30;
    opt.initial_dt = 1e-6;
    auto rhs = [p](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = std::pow(std::abs(y[0]), p);
    };
    auto [t, y] = integrate_dopri5(
        rhs, 0.0, {U0, V0},
        [](double, const std::vector<double>& y) { return y[0] >= switch_level; },
        opt);
    return t + 2.0 * y[0] / ((p - 1.0) * y[1]);
}

struct KatoOutcome {
    bool blows_up = false;
    double t_star = std::numeric_limits<double>::infinity();
};

// Blow-up time of the comparison ODE, computed both ways; the two results
// must agree to 1e-8 (relative) or the call refuses to return a number.
inline KatoOutcome kato_blowup_time(double p, double U_init, double V_init) {
    detail::kato_check_inputs(p, U_init, V_init);
    if (U_init == 0.0 && V_init == 0.0) return {false, std::numeric_limits<double>::infinity()};
    const double quad = kato_blowup_time_quadrature(p, U_init, V_init);
    const double ode = kato_blowup_time_ode(p, U_init, V_init);
    if (std::abs(quad - ode) > 1e-8 * std::max(std::abs(quad), std::abs(ode)))
        throw std::runtime_error(
            "kato_blowup_time: integration and quadrature disagree beyond 1e-8");
    return {true, quad};
}

// The constant C_p in T*(p, 0, eps) = C_p eps^{-(p-1)/(p+1)}; by the
// substitution U = eps^{2/(p+1)} W this is exactly T*(p, 0, 1).
inline double kato_velocity_constant(double p) {
    return kato_blowup_time_quadrature(p, 0.0, 1.0);
}

// ── Lifespan detection ───────────────────────────────────────────────────────

struct LifespanRecord {
    double epsilon = 0.0;
    double p = 0.0;
    std::string profile;
    double detected_T = 0.0;
    double threshold = 0.0;
    std::string dt_policy;
    bool resolved = false;
    bool u1_zero = false;
    // threshold-sensitivity: relative move of detected_T when the threshold
    // is raised 100x (NaN when the trajectory never reached 100x threshold)
    double stability_shift = std::numeric_limits<double>::quiet_NaN();
    bool threshold_stable = false;
};

namespace detail {

// Log-linear interpolated first crossing of the sup-norm series.
inline std::optional<double> sup_crossing(const std::vector<StepDiagnostics>& s,
                                          double threshold) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = s[i].sup;
        if (v >= threshold || !std::isfinite(v)) {
            if (i == 0) return s[0].time;
            const double prev = s[i - 1].sup;
            if (!(prev > 0.0) || !std::isfinite(v) || v <= prev) return s[i].time;
            const double f = (std::log(threshold) - std::log(prev)) /
                             (std::log(v) - std::log(prev));
            return s[i - 1].time + f * (s[i].time - s[i - 1].time);
        }
    }
    return std::nullopt;
}

} // namespace detail

// First time the grid sup norm exceeds `threshold`, or nullopt ("no blow-up
// before t_end"). Under-resolved runs (spectral tail above 1e-6) are still
// reported but carry resolved = false.
inline std::optional<LifespanRecord> detect_lifespan(const Trajectory& traj,
                                                     double threshold = 1e8) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("detect_lifespan: threshold must be > 0");
    const auto cross = detail::sup_crossing(traj.samples, threshold);
    if (!cross) return std::nullopt;
    LifespanRecord rec;
    rec.epsilon = traj.epsilon;
    rec.p = traj.p;
    rec.profile = traj.profile_id;
    rec.detected_T = *cross;
    rec.threshold = threshold;
    rec.dt_policy = traj.dt_policy_id;
    rec.u1_zero = traj.u1_zero;
    const auto cross_hi = detail::sup_crossing(traj.samples, 100.0 * threshold);
    double horizon = traj.samples.back().time;
    if (cross_hi) {
        rec.stability_shift = (*cross_hi - *cross) / *cross;
        rec.threshold_stable = std::abs(rec.stability_shift) < 0.01;
        horizon = *cross_hi;
    }
    rec.resolved = traj.max_tail_fraction(horizon) <= 1e-6;
    return rec;
}

// ── Scaling fits ─────────────────────────────────────────────────────────────

inline double predicted_lifespan_exponent(double p, bool u1_zero) {
    return u1_zero ? -0.5 * (p - 1.0) : -(p - 1.0) / (p + 1.0);
}

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;        // log T at log eps = 0
    double residual = 0.0;         // rms residual in log T
    double predicted_exponent = 0.0;
    int points = 0;
};

// Least squares of log T against log eps over a homogeneous record set; all
// records must be resolved, share (p, profile, dt policy, threshold) and span
// at least four decades of eps.
inline ScalingFit fit_lifespan_scaling(const std::vector<LifespanRecord>& records) {
    if (records.size() < 4)
        throw std::invalid_argument("fit_lifespan_scaling: need >= 4 records");
    double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
    for (const auto& r : records) {
        if (r.p != records[0].p || r.profile != records[0].profile ||
            r.dt_policy != records[0].dt_policy ||
            r.threshold != records[0].threshold ||
            r.u1_zero != records[0].u1_zero)
            throw std::invalid_argument(
                "fit_lifespan_scaling: mixed-configuration record set");
        if (!r.resolved)
            throw std::invalid_argument(
                "fit_lifespan_scaling: unresolved record in fit input");
        if (!(r.epsilon > 0.0) || !(r.detected_T > 0.0))
            throw std::invalid_argument("fit_lifespan_scaling: degenerate record");
        emin = std::min(emin, r.epsilon);
        emax = std::max(emax, r.epsilon);
    }
    if (std::log10(emax / emin) < 3.999)
        throw std::invalid_argument(
            "fit_lifespan_scaling: records span fewer than 4 resolved decades");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(records.size());
    for (const auto& r : records) {
        const double x = std::log(r.epsilon), y = std::log(r.detected_T);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ScalingFit fit;
    fit.points = static_cast<int>(records.size());
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (const auto& r : records) {
        const double res = std::log(r.detected_T) -
                           (fit.intercept + fit.slope * std::log(r.epsilon));
        rss += res * res;
    }
    fit.residual = std::sqrt(rss / n);
    fit.predicted_exponent =
        predicted_lifespan_exponent(records[0].p, records[0].u1_zero);
    return fit;
}

} // namespace liewave

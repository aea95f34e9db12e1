// solver.hpp — mild-solution machinery for u_tt - L u = |u|^p: pseudospectral
// nonlinearity, one exact-linear-flow step with trapezoidal Duhamel treatment
// of the forcing (order 2), the trajectory integrator with per-step
// diagnostics and blow-up stopping, and a Picard iteration diagnostic for the
// contraction mapping on X(T).
//
// Scheme (per step of size h, mode-wise; F = coefficients of |u|^p):
//   u+   = G0(h) u + G1(h) ut + (h/2) G1(h) F(t)
//   ut+  = -lam^2 G1(h) u + G0(h) ut + (h/2) [G0(h) F(t) + F(t+h)]
// The G1(0) = 0 endpoint makes the u-update explicit; on the zero mode this
// is the Stoermer–Verlet update, so the zero-mode column of a spatially
// constant run solves U'' = U^p to second order.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liewave/propagator.hpp"

namespace liewave {

// ── Initial data profiles ────────────────────────────────────────────────────
// Textual ids, reproduced verbatim in reports:
//   zero | constant(a) | cosine(k) | lowest-nontrivial |
//   random(seed,decay) | perturbed(a,delta,k)
// "lowest-nontrivial" is the real part of the first entry of the smallest
// nontrivial representation; "perturbed" is a(1 + delta cos(k x_1)) on the
// torus and a(1 + delta * lowest-nontrivial) on SU(2).
struct Profile {
    enum class Kind { Zero, Constant, Cosine, LowestNontrivial, Random, Perturbed };
    Kind kind = Kind::Zero;
    double a = 0.0;      // constant / perturbed amplitude
    double delta = 0.0;  // perturbed relative amplitude
    int k = 1;           // cosine / perturbed wavenumber
    std::uint64_t seed = 0;
    double decay = 1.0;
    std::string text = "zero";

    static Profile parse(const std::string& s);
    bool is_zero() const { return kind == Kind::Zero || (kind == Kind::Constant && a == 0.0); }

    SpectralField materialize(const std::shared_ptr<const Group>& g) const;
};

namespace detail {

inline SpectralField lowest_nontrivial_field(const std::shared_ptr<const Group>& g) {
    SpectralField F = SpectralField::zero(g);
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t m = 0; m < g->modes.size(); ++m)
        if (!g->modes[m].is_trivial()) {
            pick = m;
            found = true;
            break;
        }
    if (!found)
        throw std::invalid_argument("profile: no nontrivial mode inside band limit");
    F.coeffs[pick](0, 0) = 1.0;
    GridField f = synthesize(F);
    f.values = f.values.real().cast<cplx>();
    SpectralField R = analyze(f);
    // normalize to unit sup so perturbation amplitudes are interpretable
    const double s = sup_norm(synthesize(R));
    for (auto& c : R.coeffs) c /= s;
    return R;
}

} // namespace detail

inline Profile Profile::parse(const std::string& s) {
    auto args_of = [&](std::size_t open) {
        if (s.back() != ')')
            throw std::invalid_argument("profile: expected ')' in '" + s + "'");
        std::vector<double> vals;
        std::size_t pos = open + 1;
        while (pos < s.size() - 1) {
            std::size_t next = s.find(',', pos);
            if (next == std::string::npos || next > s.size() - 1) next = s.size() - 1;
            vals.push_back(std::stod(s.substr(pos, next - pos)));
            pos = next + 1;
        }
        return vals;
    };
    Profile p;
    p.text = s;
    if (s == "zero") {
        p.kind = Kind::Zero;
        return p;
    }
    if (s == "lowest-nontrivial") {
        p.kind = Kind::LowestNontrivial;
        return p;
    }
    const std::size_t open = s.find('(');
    const std::string head = s.substr(0, open);
    if (open == std::string::npos)
        throw std::invalid_argument("profile: unknown id '" + s + "'");
    const auto args = args_of(open);
    if (head == "constant" && args.size() == 1) {
        p.kind = Kind::Constant;
        p.a = args[0];
    } else if (head == "cosine" && args.size() == 1) {
        p.kind = Kind::Cosine;
        p.k = static_cast<int>(args[0]);
    } else if (head == "random" && args.size() == 2) {
        p.kind = Kind::Random;
        p.seed = static_cast<std::uint64_t>(args[0]);
        p.decay = args[1];
    } else if (head == "perturbed" && args.size() == 3) {
        p.kind = Kind::Perturbed;
        p.a = args[0];
        p.delta = args[1];
        p.k = static_cast<int>(args[2]);
    } else {
        throw std::invalid_argument("profile: unknown id '" + s + "'");
    }
    return p;
}

inline SpectralField Profile::materialize(
    const std::shared_ptr<const Group>& g) const {
    SpectralField F = SpectralField::zero(g);
    switch (kind) {
        case Kind::Zero:
            break;
        case Kind::Constant:
            F.coeffs[0](0, 0) = a;
            break;
        case Kind::Cosine: {
            if (g->spec.kind != GroupKind::Torus)
                throw std::invalid_argument("profile cosine(k): torus only");
            std::vector<int> kp(static_cast<std::size_t>(g->spec.torus_dim), 0);
            kp[0] = k;
            std::vector<int> km = kp;
            km[0] = -k;
            const auto ip = g->find_mode(kp), im = g->find_mode(km);
            if (!ip || !im)
                throw std::invalid_argument("profile cosine(k): k beyond band limit");
            F.coeffs[*ip](0, 0) = 0.5;
            F.coeffs[*im](0, 0) = 0.5;
            break;
        }
        case Kind::LowestNontrivial:
            F = detail::lowest_nontrivial_field(g);
            break;
        case Kind::Random:
            F = random_real_field(g, seed, decay);
            break;
        case Kind::Perturbed: {
            Profile base;
            if (g->spec.kind == GroupKind::Torus) {
                base.kind = Kind::Cosine;
                base.k = k;
            } else {
                base.kind = Kind::LowestNontrivial;
            }
            F = base.materialize(g);
            for (auto& c : F.coeffs) c *= a * delta;
            F.coeffs[0](0, 0) += a;
            break;
        }
    }
    return F;
}

// ── Solver configuration ─────────────────────────────────────────────────────

struct DtPolicy {
    enum class Kind { Fixed, Adaptive } kind = Kind::Adaptive;
    double dt0 = 1e-2;

    // dt = dt0 / max(1, sup^{(p-1)/2}): keeps the local blow-up timescale of
    // the comparison ODE resolved by a fixed number of steps per e-fold.
    double step(double sup, double p) const {
        if (kind == Kind::Fixed) return dt0;
        const double rate = std::pow(std::max(sup, 0.0), 0.5 * (p - 1.0));
        return dt0 / std::max(1.0, rate);
    }
    std::string id() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s(%.17g)",
                      kind == Kind::Fixed ? "fixed" : "adaptive", dt0);
        return buf;
    }
};

struct SolverConfig {
    std::shared_ptr<const Group> group;
    double p = 2.0;
    double epsilon = 1.0;
    Profile u0_profile;
    Profile u1_profile;
    DtPolicy dt;
    double t_end = 1.0;
    double dealias_margin = 1.0;
    bool guard = true;                // local-existence admissibility check
    bool nonlinearity_enabled = true; // test hook: off reproduces the free flow
    double stop_threshold = std::numeric_limits<double>::infinity();
    int state_stride = 0;             // 0: keep no snapshots; s: every s-th step
    bool measure_aliasing = false;    // compare |u|^p analysis on a finer grid
    int aliasing_stride = 16;
    std::uint64_t max_steps = 5'000'000;

    // Admissible range from the local existence theory: n >= 3 and
    // p <= n/(n-2). Blow-up runs may disable the guard (only p > 1 needed).
    void validate() const {
        if (!group) throw std::invalid_argument("SolverConfig: no group");
        if (!(p > 1.0)) throw std::invalid_argument("SolverConfig: p must be > 1");
        if (!(epsilon > 0.0) && !(u0_profile.is_zero() && u1_profile.is_zero()))
            throw std::invalid_argument("SolverConfig: epsilon must be > 0");
        if (!(dt.dt0 > 0.0)) throw std::invalid_argument("SolverConfig: dt0 must be > 0");
        if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be > 0");
        if (!(dealias_margin >= 1.0))
            throw std::invalid_argument("SolverConfig: dealias_margin must be >= 1");
        if (guard) {
            const int n = group->topological_dim();
            if (n < 3 || p > static_cast<double>(n) / (n - 2) + 1e-12)
                throw std::invalid_argument(
                    "SolverConfig: local existence guard requires n >= 3 and "
                    "p <= n/(n-2); pass --no-guard for blow-up runs");
        }
    }
};

// Grid sized for the configured nonlinearity: products of ceil((p+1)*margin)
// band-limited factors integrate exactly (the dealiasing rule; exact for
// integer p with margin 1, oversampled and measured otherwise).
inline int product_degree_for(double p, double dealias_margin) {
    return std::max(2, static_cast<int>(std::ceil((p + 1.0) * dealias_margin - 1e-9)));
}

// ── Nonlinearity and stepping ────────────────────────────────────────────────

// Pseudospectral |u|^p: synthesize, apply pointwise, analyze back. The result
// is band-limited by construction (analysis truncates at the band limit).
inline SpectralField apply_nonlinearity(const SpectralField& u, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("apply_nonlinearity: p must be > 1");
    GridField g = synthesize(u);
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
        g.values(i) = std::pow(std::abs(g.values(i)), p);
    return analyze(g);
}

namespace detail {

// One scheme step given the already-analyzed forcing at the current time.
// Returns the new state; `forcing_new` receives F(t+h) for reuse.
inline WaveState step_with_forcing(const WaveState& state, double h, double p,
                                   const SpectralField& forcing_now,
                                   bool nonlinear, SpectralField* forcing_new,
                                   GridField* grid_new) {
    WaveState next = state;
    next.time = state.time + h;
    const auto& modes = state.u.group->modes;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const double lam2 = modes[m].eigenvalue;
        const auto [g0, g1] = propagator_factors(h, lam2);
        next.u.coeffs[m] = g0 * state.u.coeffs[m] + g1 * state.ut.coeffs[m];
        next.ut.coeffs[m] =
            -lam2 * g1 * state.u.coeffs[m] + g0 * state.ut.coeffs[m];
        if (nonlinear) {
            next.u.coeffs[m] += 0.5 * h * g1 * forcing_now.coeffs[m];
            next.ut.coeffs[m] += 0.5 * h * g0 * forcing_now.coeffs[m];
        }
    }
    GridField gv = synthesize(next.u);
    SpectralField fnew;
    if (nonlinear) {
        GridField gp = gv;
        for (Eigen::Index i = 0; i < gp.values.size(); ++i)
            gp.values(i) = std::pow(std::abs(gp.values(i)), p);
        fnew = analyze(gp);
        for (std::size_t m = 0; m < modes.size(); ++m)
            next.ut.coeffs[m] += 0.5 * h * fnew.coeffs[m];
    } else {
        fnew = SpectralField::zero(state.u.group);
    }
    if (forcing_new) *forcing_new = std::move(fnew);
    if (grid_new) *grid_new = std::move(gv);
    return next;
}

} // namespace detail

// Single public step (recomputes the forcing at the current state).
inline WaveState step(const WaveState& state, double dt, double p,
                      bool nonlinearity_enabled = true) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    state.check();
    SpectralField f0 = nonlinearity_enabled ? apply_nonlinearity(state.u, p)
                                            : SpectralField::zero(state.u.group);
    return detail::step_with_forcing(state, dt, p, f0, nonlinearity_enabled,
                                     nullptr, nullptr);
}

// ── Trajectories ─────────────────────────────────────────────────────────────

struct StepDiagnostics {
    double time = 0.0;
    double dt = 0.0;              // step that produced this sample (0 at t=0)
    double sup = 0.0;             // grid sup norm of u
    double l2 = 0.0;              // Plancherel L^2 norm of u
    double h1_homog = 0.0;        // homogeneous H^1 norm of u
    double energy = 0.0;          // linear energy functional
    double zero_mode = 0.0;       // U0(t): mean of u
    double zero_mode_dt = 0.0;    // U0'(t): mean of u_t
    double nonlinear_mass = 0.0;  // quadrature of |u|^p
    double tail_fraction = 0.0;   // Plancherel mass in the top eigenvalue decade
    double aliasing = -1.0;       // measured aliasing residual (-1: not measured)
};

struct Trajectory {
    enum class Outcome { ReachedEnd, BlowUpStop, StepBudget };
    Outcome outcome = Outcome::ReachedEnd;
    std::vector<StepDiagnostics> samples;  // dense, one row per accepted step
    std::vector<WaveState> states;         // thinned snapshots (state_stride)
    int state_stride = 0;
    double p = 0.0;
    double epsilon = 0.0;
    std::string profile_id;     // "u0=<id>;u1=<id>"
    std::string dt_policy_id;
    bool u1_zero = false;
    std::shared_ptr<const Group> group;

    double max_tail_fraction(double up_to_time =
                                 std::numeric_limits<double>::infinity()) const {
        double mx = 0.0;
        for (const auto& s : samples) {
            if (s.time > up_to_time) break;
            mx = std::max(mx, s.tail_fraction);
        }
        return mx;
    }
};

namespace detail {

inline double tail_fraction_of(const SpectralField& u) {
    const double band = u.group->spec.band_limit;
    if (band <= 0.0) return 0.0;
    double total = 0.0, top = 0.0;
    for (std::size_t m = 0; m < u.coeffs.size(); ++m) {
        const double mass = u.group->modes[m].dim * u.coeffs[m].squaredNorm();
        total += mass;
        if (u.group->modes[m].eigenvalue > band / 10.0) top += mass;
    }
    return total > 0.0 ? top / total : 0.0;
}

inline StepDiagnostics diagnostics_of(const WaveState& st, double dt,
                                      const GridField& grid_u,
                                      const SpectralField& forcing,
                                      double aliasing) {
    StepDiagnostics d;
    d.time = st.time;
    d.dt = dt;
    d.sup = sup_norm(grid_u);
    d.l2 = plancherel_norm(st.u);
    d.h1_homog = sobolev_norm(st.u, 1.0).homogeneous;
    d.energy = linear_energy(st);
    d.zero_mode = st.u.coeffs[0](0, 0).real();
    d.zero_mode_dt = st.ut.coeffs[0](0, 0).real();
    d.nonlinear_mass = forcing.coeffs[0](0, 0).real();
    d.tail_fraction = tail_fraction_of(st.u);
    d.aliasing = aliasing;
    return d;
}

} // namespace detail

// Repeated stepping until t_end, the sup-norm stop threshold, or the step
// budget. Blow-up (threshold crossing) is a distinguished outcome, not an
// error; diagnostics are recorded at every accepted step.
inline Trajectory integrate(const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.p = cfg.p;
    traj.epsilon = cfg.epsilon;
    traj.profile_id = "u0=" + cfg.u0_profile.text + ";u1=" + cfg.u1_profile.text;
    traj.dt_policy_id = cfg.dt.id();
    traj.u1_zero = cfg.u1_profile.is_zero();
    traj.group = cfg.group;
    traj.state_stride = cfg.state_stride;

    WaveState st = WaveState::zero(cfg.group);
    st.u = cfg.u0_profile.materialize(cfg.group);
    st.ut = cfg.u1_profile.materialize(cfg.group);
    for (auto& c : st.u.coeffs) c *= cfg.epsilon;
    for (auto& c : st.ut.coeffs) c *= cfg.epsilon;

    std::shared_ptr<const Group> fine;  // lazy refined grid for aliasing checks
    auto measure_aliasing = [&](const WaveState& s,
                                const SpectralField& forcing) -> double {
        if (!cfg.measure_aliasing) return -1.0;
        if (!fine) fine = cfg.group->refined(2);
        SpectralField uf = s.u;
        uf.group = fine;
        GridField gf = synthesize(uf);
        for (Eigen::Index i = 0; i < gf.values.size(); ++i)
            gf.values(i) = std::pow(std::abs(gf.values(i)), cfg.p);
        SpectralField ff = analyze(gf);
        double num = 0.0, den = 0.0;
        for (std::size_t m = 0; m < forcing.coeffs.size(); ++m) {
            num += fine->modes[m].dim *
                   (ff.coeffs[m] - forcing.coeffs[m]).squaredNorm();
            den += fine->modes[m].dim * ff.coeffs[m].squaredNorm();
        }
        return den > 0.0 ? std::sqrt(num / den) : 0.0;
    };

    GridField grid_u = synthesize(st.u);
    SpectralField forcing = cfg.nonlinearity_enabled
                                ? apply_nonlinearity(st.u, cfg.p)
                                : SpectralField::zero(cfg.group);
    traj.samples.push_back(detail::diagnostics_of(
        st, 0.0, grid_u, forcing, measure_aliasing(st, forcing)));
    if (cfg.state_stride > 0) traj.states.push_back(st);

    std::uint64_t step_no = 0;
    while (true) {
        const double sup = traj.samples.back().sup;
        if (!std::isfinite(sup) || sup >= cfg.stop_threshold) {
            traj.outcome = Trajectory::Outcome::BlowUpStop;
            return traj;
        }
        if (st.time >= cfg.t_end * (1.0 - 1e-14)) {
            traj.outcome = Trajectory::Outcome::ReachedEnd;
            return traj;
        }
        if (step_no >= cfg.max_steps) {
            traj.outcome = Trajectory::Outcome::StepBudget;
            return traj;
        }
        double h = std::min(cfg.dt.step(sup, cfg.p), cfg.t_end - st.time);
        SpectralField fnew;
        GridField gnew;
        st = detail::step_with_forcing(st, h, cfg.p, forcing,
                                       cfg.nonlinearity_enabled, &fnew, &gnew);
        forcing = std::move(fnew);
        grid_u = std::move(gnew);
        ++step_no;
        const bool measure = cfg.measure_aliasing &&
                             (step_no % static_cast<std::uint64_t>(
                                            std::max(1, cfg.aliasing_stride)) == 0);
        traj.samples.push_back(detail::diagnostics_of(
            st, h, grid_u, forcing, measure ? measure_aliasing(st, forcing) : -1.0));
        if (cfg.state_stride > 0 &&
            step_no % static_cast<std::uint64_t>(cfg.state_stride) == 0)
            traj.states.push_back(st);
    }
}

// ── Picard iteration diagnostic ──────────────────────────────────────────────
// Mirrors the fixed-point operator N u = linear part + \int_0^t G1(t-s)|u|^p ds
// on a uniform time lattice over [0, T], reporting X(T) norms of the iterates
// and the empirical contraction ratios of successive differences.

struct ContractionReport {
    double T = 0.0;
    double epsilon = 0.0;
    int time_nodes = 0;
    std::vector<double> xnorms;      // ||u_m||_{X(T)}
    std::vector<double> diff_norms;  // ||u_{m+1} - u_m||_{X(T)}
    std::vector<double> ratios;      // diff_m / diff_{m-1}
    bool contracted = false;         // all ratios finite and < 1
    bool diverged = false;           // "no contraction at this (epsilon, T)"
};

inline ContractionReport picard_diagnostic(const SolverConfig& cfg, double T,
                                           int iterations, int time_nodes = 48) {
    if (!(T > 0.0) || iterations < 1)
        throw std::invalid_argument("picard_diagnostic: bad T or iteration count");
    {
        const int n = cfg.group->topological_dim();
        if (n < 3 || cfg.p > static_cast<double>(n) / (n - 2) + 1e-12)
            throw std::invalid_argument(
                "picard_diagnostic: requires n >= 3 and p <= n/(n-2)");
    }
    const int M = time_nodes;
    const double dt = T / M;
    const auto& g = cfg.group;

    WaveState init = WaveState::zero(g);
    init.u = cfg.u0_profile.materialize(g);
    init.ut = cfg.u1_profile.materialize(g);
    for (auto& c : init.u.coeffs) c *= cfg.epsilon;
    for (auto& c : init.ut.coeffs) c *= cfg.epsilon;

    std::vector<WaveState> lin(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j)
        lin[static_cast<std::size_t>(j)] = evolve_linear(init, dt * j);

    auto xnorm_of = [](const std::vector<WaveState>& u) {
        double mx = 0.0;
        for (const auto& s : u)
            mx = std::max(mx, plancherel_norm(s.u) +
                                  sobolev_norm(s.u, 1.0).homogeneous +
                                  plancherel_norm(s.ut));
        return mx;
    };
    auto diff_norm = [&](const std::vector<WaveState>& a,
                         const std::vector<WaveState>& b) {
        double mx = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            WaveState d = a[j];
            for (std::size_t m = 0; m < d.u.coeffs.size(); ++m) {
                d.u.coeffs[m] -= b[j].u.coeffs[m];
                d.ut.coeffs[m] -= b[j].ut.coeffs[m];
            }
            mx = std::max(mx, plancherel_norm(d.u) +
                                  sobolev_norm(d.u, 1.0).homogeneous +
                                  plancherel_norm(d.ut));
        }
        return mx;
    };

    // Nu(t_j) = lin(t_j) + trapezoid_{s_i <= t_j} G1(t_j - s_i) F_i (G0 for ut)
    auto apply_N = [&](const std::vector<WaveState>& u) {
        std::vector<SpectralField> F(u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            F[j] = apply_nonlinearity(u[j].u, cfg.p);
        std::vector<WaveState> out = lin;
        for (int j = 1; j <= M; ++j) {
            auto& st = out[static_cast<std::size_t>(j)];
            for (int i = 0; i <= j; ++i) {
                const double wq = (i == 0 || i == j) ? 0.5 * dt : dt;
                const double tau = dt * (j - i);
                for (std::size_t m = 0; m < st.u.coeffs.size(); ++m) {
                    const auto [g0, g1] =
                        propagator_factors(tau, g->modes[m].eigenvalue);
                    st.u.coeffs[m] += wq * g1 * F[static_cast<std::size_t>(i)].coeffs[m];
                    st.ut.coeffs[m] += wq * g0 * F[static_cast<std::size_t>(i)].coeffs[m];
                }
            }
        }
        return out;
    };

    ContractionReport rep;
    rep.T = T;
    rep.epsilon = cfg.epsilon;
    rep.time_nodes = M;

    std::vector<WaveState> prev = lin;
    rep.xnorms.push_back(xnorm_of(prev));
    std::vector<double> diffs;
    std::vector<WaveState> cur;
    const double scale0 = std::max(rep.xnorms[0], 1e-300);
    for (int m = 0; m < iterations; ++m) {
        cur = apply_N(prev);
        const double xn = xnorm_of(cur);
        const double dn = diff_norm(cur, prev);
        rep.xnorms.push_back(xn);
        rep.diff_norms.push_back(dn);
        if (!std::isfinite(xn) || xn > 1e6 * scale0) {
            rep.diverged = true;
            break;
        }
        prev.swap(cur);
    }
    for (std::size_t m = 1; m < rep.diff_norms.size(); ++m)
        rep.ratios.push_back(rep.diff_norms[m] /
                             std::max(rep.diff_norms[m - 1], 1e-300));
    rep.contracted = !rep.diverged && !rep.ratios.empty();
    for (double r : rep.ratios)
        if (!(r < 1.0) || !std::isfinite(r)) rep.contracted = false;
    return rep;
}

} // namespace liewave

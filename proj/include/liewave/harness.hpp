// harness.hpp — the experiment drivers behind the CLI: the one-command
// verification suite, single simulations with CSV/JSON output, lifespan
// sweeps with scaling fits, and GN ratio reports. Everything returns plain
// structs so the acceptance tests can drive the same code paths the CLI does.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "liewave/blowup.hpp"
#include "liewave/config.hpp"
#include "liewave/gn.hpp"
#include "liewave/io.hpp"

namespace liewave {

// ── Verification checks ──────────────────────────────────────────────────────

struct CheckResult {
    std::string name;
    std::string backend;
    bool pass = false;
    double observed = 0.0;   // worst observed deviation / ratio
    double tolerance = 0.0;
    std::string detail;
};

inline CheckResult check_roundtrip(const std::shared_ptr<const Group>& g,
                                   int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const SpectralField F =
            random_spectral_field(g, derive_seed(seed, static_cast<std::uint64_t>(s)), 0.5);
        const SpectralField back = analyze(synthesize(F));
        for (std::size_t m = 0; m < F.coeffs.size(); ++m)
            worst = std::max(worst,
                             (F.coeffs[m] - back.coeffs[m]).cwiseAbs().maxCoeff());
    }
    return {"transform_roundtrip", g->backend_name(), worst <= 1e-10, worst, 1e-10, ""};
}

inline CheckResult check_plancherel(const std::shared_ptr<const Group>& g,
                                    int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const SpectralField F =
            random_spectral_field(g, derive_seed(seed ^ 0xabcd, static_cast<std::uint64_t>(s)), 0.5);
        const double coeff_side = plancherel_norm(F);
        const double grid_side = lq_norm(synthesize(F), 2.0);
        worst = std::max(worst, std::abs(coeff_side - grid_side) /
                                    std::max(1.0, coeff_side));
    }
    return {"plancherel", g->backend_name(), worst <= 1e-10, worst, 1e-10, ""};
}

inline CheckResult check_schur(const std::shared_ptr<const Group>& g) {
    std::vector<std::vector<Eigen::MatrixXcd>> samples;
    for (const auto& mode : g->modes)
        samples.push_back(sample_representation(*g, mode));
    double worst = 0.0;
    for (std::size_t ma = 0; ma < g->modes.size(); ++ma)
        for (std::size_t mb = ma; mb < g->modes.size(); ++mb)
            for (int i = 0; i < g->modes[ma].dim; ++i)
                for (int j = 0; j < g->modes[ma].dim; ++j)
                    for (int k = 0; k < g->modes[mb].dim; ++k)
                        for (int l = 0; l < g->modes[mb].dim; ++l) {
                            cplx acc{0.0, 0.0};
                            for (std::size_t pt = 0; pt < g->grid.size(); ++pt)
                                acc += g->grid.weights[pt] * samples[ma][pt](i, j) *
                                       std::conj(samples[mb][pt](k, l));
                            const double expected =
                                (ma == mb && i == k && j == l)
                                    ? 1.0 / g->modes[ma].dim
                                    : 0.0;
                            worst = std::max(worst, std::abs(acc - expected));
                        }
    return {"schur_orthogonality", g->backend_name(), worst <= 1e-10, worst, 1e-10, ""};
}

inline CheckResult check_l2_estimates(const std::shared_ptr<const Group>& g,
                                      int samples, double t_max,
                                      std::uint64_t seed) {
    const EstimateReport rep = verify_l2_estimates(samples, t_max, g, seed);
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, r.max_ratio);
    return {"l2_estimates", g->backend_name(), worst <= 1.0 + 1e-10, worst,
            1.0 + 1e-10, ""};
}

inline CheckResult check_energy_conservation(const std::shared_ptr<const Group>& g,
                                             int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const WaveState st =
            random_wave_state(g, derive_seed(seed ^ 0x77, static_cast<std::uint64_t>(s)));
        const double e0 = linear_energy(st);
        for (double t : {0.7, 3.1, 9.9})
            worst = std::max(worst, std::abs(linear_energy(evolve_linear(st, t)) - e0) /
                                        std::max(1.0, e0));
    }
    return {"energy_conservation", g->backend_name(), worst <= 1e-10, worst, 1e-10, ""};
}

inline CheckResult check_cocycle(const std::shared_ptr<const Group>& g,
                                 int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const WaveState st =
            random_wave_state(g, derive_seed(seed ^ 0xc0c, static_cast<std::uint64_t>(s)));
        for (auto [a, b] : {std::pair{0.4, 1.9}, {2.3, 5.1}}) {
            const WaveState two = evolve_linear(evolve_linear(st, a), b);
            const WaveState one = evolve_linear(st, a + b);
            for (std::size_t m = 0; m < st.u.coeffs.size(); ++m) {
                worst = std::max(worst, (two.u.coeffs[m] - one.u.coeffs[m])
                                            .cwiseAbs()
                                            .maxCoeff());
                worst = std::max(worst, (two.ut.coeffs[m] - one.ut.coeffs[m])
                                            .cwiseAbs()
                                            .maxCoeff());
            }
        }
    }
    return {"cocycle", g->backend_name(), worst <= 1e-10, worst, 1e-10, ""};
}

inline CheckResult check_zero_mode_run() {
    GroupSpec spec;
    spec.kind = GroupKind::Torus;
    spec.torus_dim = 1;
    spec.band_limit = 4.0;
    spec.product_degree = 3;
    SolverConfig cfg;
    cfg.group = Group::make(spec);
    cfg.p = 2.0;
    cfg.epsilon = 0.5;
    cfg.u0_profile = Profile::parse("constant(1)");
    cfg.u1_profile = Profile::parse("constant(1)");
    cfg.guard = false;
    cfg.t_end = 1e6;
    cfg.dt = {DtPolicy::Kind::Adaptive, 0.005};
    cfg.stop_threshold = 1e8;
    const Trajectory traj = integrate(cfg);
    const ZeroModeCheck chk = check_zero_mode_identities(traj);
    const double worst = std::max(chk.max_jensen_defect, chk.max_identity_defect);
    return {"zero_mode_identities", "T1", chk.pass_jensen && chk.pass_identity,
            worst, chk.tolerance_constant, "normalized defect"};
}

inline CheckResult check_oracle_agreement() {
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 5.0})
        for (double eps : {1e-4, 1e-2, 1.0})
            for (bool velocity : {true, false}) {
                const double U0 = velocity ? 0.0 : eps;
                const double V0 = velocity ? eps : 0.0;
                const double q = kato_blowup_time_quadrature(p, U0, V0);
                const double o = kato_blowup_time_ode(p, U0, V0);
                worst = std::max(worst, std::abs(q - o) / q);
            }
    return {"kato_oracle_agreement", "-", worst <= 1e-8, worst, 1e-8, ""};
}

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The full invariant suite over the three stock backends.
inline VerifyReport run_verification(const RunConfig& rc) {
    VerifyReport rep;
    auto torus = [&](int n, double band) {
        GroupSpec s;
        s.kind = GroupKind::Torus;
        s.torus_dim = n;
        s.band_limit = band;
        return Group::make(s);
    };
    auto su2 = [&](double band) {
        GroupSpec s;
        s.kind = GroupKind::SU2;
        s.band_limit = band;
        return Group::make(s);
    };
    const int ns = rc.verify_samples;
    const std::uint64_t seed = rc.seed;

    const auto t1 = torus(1, 16.0), t3 = torus(3, 16.0);
    const auto t3small = torus(3, 4.0), s2 = su2(6.0);
    for (const auto& g : {t1, t3, s2}) {
        rep.checks.push_back(check_roundtrip(g, ns, seed));
        rep.checks.push_back(check_plancherel(g, ns, seed));
    }
    for (const auto& g : {t1, t3small, s2})
        rep.checks.push_back(check_schur(g));
    for (const auto& g : {t1, t3, s2}) {
        rep.checks.push_back(check_l2_estimates(g, ns, rc.verify_t_max, seed));
        rep.checks.push_back(check_energy_conservation(g, std::min(ns, 20), seed));
        rep.checks.push_back(check_cocycle(g, std::min(ns, 20), seed));
    }
    rep.checks.push_back(check_zero_mode_run());
    rep.checks.push_back(check_oracle_agreement());
    return rep;
}

// ── Lifespan sweeps ──────────────────────────────────────────────────────────

struct SweepResult {
    std::vector<LifespanRecord> records;       // one per epsilon, run order
    std::vector<ZeroModeCheck> zero_checks;    // one per PDE record (empty for oracle)
    std::vector<int> excluded;                 // indices left out of the fit
    std::optional<ScalingFit> fit;
    std::string refusal;                       // nonempty when the fit is refused
};

namespace detail {

inline LifespanRecord oracle_record(const RunConfig& rc,
                                    const std::shared_ptr<const Group>& g,
                                    double eps) {
    const Profile p0 = Profile::parse(rc.u0), p1 = Profile::parse(rc.u1);
    const double U0 = eps * p0.materialize(g).coeffs[0](0, 0).real();
    const double V0 = eps * p1.materialize(g).coeffs[0](0, 0).real();
    LifespanRecord rec;
    rec.epsilon = eps;
    rec.p = rc.p;
    rec.profile = "u0=" + rc.u0 + ";u1=" + rc.u1;
    rec.detected_T = kato_blowup_time_quadrature(rc.p, U0, V0);
    rec.threshold = rc.threshold;
    rec.dt_policy = "oracle";
    rec.resolved = true;
    rec.u1_zero = p1.is_zero();
    rec.threshold_stable = true;
    rec.stability_shift = 0.0;
    return rec;
}

} // namespace detail

inline SweepResult run_lifespan_sweep(const RunConfig& rc) {
    if (rc.sweep_points < 2 || !(rc.sweep_eps_min > 0.0) ||
        !(rc.sweep_eps_max > rc.sweep_eps_min))
        throw std::invalid_argument("sweep: bad epsilon range");
    const auto group = rc.make_group();
    const int n = rc.sweep_points;
    std::vector<double> eps(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        eps[static_cast<std::size_t>(i)] =
            std::exp(std::log(rc.sweep_eps_min) +
                     (std::log(rc.sweep_eps_max) - std::log(rc.sweep_eps_min)) *
                         i / (n - 1));

    std::vector<std::optional<LifespanRecord>> slots(static_cast<std::size_t>(n));
    std::vector<std::optional<ZeroModeCheck>> zslots(static_cast<std::size_t>(n));
    auto run_one = [&](int i) {
        const double e = eps[static_cast<std::size_t>(i)];
        if (rc.oracle_only) {
            slots[static_cast<std::size_t>(i)] = detail::oracle_record(rc, group, e);
            return;
        }
        SolverConfig cfg = rc.make_solver_config(group);
        cfg.epsilon = e;
        cfg.stop_threshold = 100.0 * rc.threshold;
        const Trajectory traj = integrate(cfg);
        const auto rec = detect_lifespan(traj, rc.threshold);
        if (!rec) return;  // no blow-up before t_end
        slots[static_cast<std::size_t>(i)] = *rec;
        zslots[static_cast<std::size_t>(i)] = check_zero_mode_identities(traj);
    };

    const int nworkers = std::max(1, std::min(rc.workers, n));
    if (nworkers == 1) {
        for (int i = 0; i < n; ++i) run_one(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }

    SweepResult out;
    std::vector<LifespanRecord> fit_input;
    for (int i = 0; i < n; ++i) {
        if (!slots[static_cast<std::size_t>(i)]) {
            out.excluded.push_back(i);
            continue;
        }
        out.records.push_back(*slots[static_cast<std::size_t>(i)]);
        if (zslots[static_cast<std::size_t>(i)])
            out.zero_checks.push_back(*zslots[static_cast<std::size_t>(i)]);
        if (slots[static_cast<std::size_t>(i)]->resolved)
            fit_input.push_back(*slots[static_cast<std::size_t>(i)]);
        else
            out.excluded.push_back(i);
    }
    double span = 0.0;
    if (!fit_input.empty()) {
        double lo = fit_input.front().epsilon, hi = lo;
        for (const auto& r : fit_input) {
            lo = std::min(lo, r.epsilon);
            hi = std::max(hi, r.epsilon);
        }
        span = std::log10(hi / lo);
    }
    if (fit_input.size() < 4 || span < 3.999) {
        out.refusal = "fit refused: resolved records cover " +
                      std::to_string(span) + " decades (< 4) across " +
                      std::to_string(fit_input.size()) + " points";
        return out;
    }
    out.fit = fit_lifespan_scaling(fit_input);
    return out;
}

// ── Commands (file emission + exit codes) ────────────────────────────────────

namespace detail {

inline void write_sidecar(const RunConfig& rc, const std::string& name) {
    write_text(std::filesystem::path(rc.out_dir) / (name + "_config.json"),
               resolved_config_json(rc).dump(2) + "\n");
}

} // namespace detail

inline int cmd_verify(RunConfig rc) {
    rc.command = "verify";
    const VerifyReport rep = run_verification(rc);
    CsvWriter csv(std::filesystem::path(rc.out_dir) / "verify_report.csv",
                  {"name", "backend", "pass", "observed", "tolerance"});
    for (const auto& c : rep.checks) {
        csv.write_row({c.name, c.backend, c.pass ? "1" : "0", fmt17(c.observed),
                       fmt17(c.tolerance)});
        std::printf("[%s] %-22s %-4s observed %.3e  tolerance %.3e\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.backend.c_str(),
                    c.observed, c.tolerance);
    }
    // per-estimate detail rows for the linear L2-L2 sweep
    CsvWriter est(std::filesystem::path(rc.out_dir) / "l2_estimates.csv",
                  {"name", "backend", "max_ratio", "argmax_time", "seed"});
    for (auto kind : {GroupKind::Torus, GroupKind::SU2}) {
        GroupSpec s;
        s.kind = kind;
        s.torus_dim = 1;
        s.band_limit = kind == GroupKind::Torus ? 16.0 : 6.0;
        const EstimateReport er = verify_l2_estimates(
            rc.verify_samples, rc.verify_t_max, Group::make(s), rc.seed);
        for (const auto& row : er.rows)
            est.write_row({row.name, er.backend, fmt17(row.max_ratio),
                           fmt17(row.argmax_time), std::to_string(er.seed)});
    }
    detail::write_sidecar(rc, "verify");
    return rep.all_pass() ? 0 : 1;
}

inline int cmd_simulate(RunConfig rc) {
    rc.command = "simulate";
    const auto group = rc.make_group();
    SolverConfig cfg = rc.make_solver_config(group);
    if (std::isfinite(rc.threshold)) cfg.stop_threshold = 100.0 * rc.threshold;
    const bool snapshots = rc.format == "csv+json" && rc.snapshot_every > 0;
    cfg.state_stride = snapshots ? rc.snapshot_every : 0;
    const Trajectory traj = integrate(cfg);

    CsvWriter csv(std::filesystem::path(rc.out_dir) / "trajectory.csv",
                  {"time", "dt", "sup", "l2", "h1_homog", "energy", "u0_mean",
                   "u0t_mean", "nonlinear_mass", "tail_fraction", "aliasing"});
    const std::size_t stride = static_cast<std::size_t>(std::max(1, rc.record_every));
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (i % stride != 0 && i + 1 != traj.samples.size()) continue;
        const auto& s = traj.samples[i];
        csv.write_row({fmt17(s.time), fmt17(s.dt), fmt17(s.sup), fmt17(s.l2),
                       fmt17(s.h1_homog), fmt17(s.energy), fmt17(s.zero_mode),
                       fmt17(s.zero_mode_dt), fmt17(s.nonlinear_mass),
                       fmt17(s.tail_fraction), fmt17(s.aliasing)});
    }
    if (snapshots) {
        char name[64];
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            std::snprintf(name, sizeof name, "snapshot_%06zu.json", i);
            write_snapshot(std::filesystem::path(rc.out_dir) / "snapshots" / name,
                           traj.states[i].time, traj.states[i].u, traj.states[i].ut);
        }
    }
    if (traj.outcome == Trajectory::Outcome::BlowUpStop) {
        const auto rec = detect_lifespan(traj, rc.threshold);
        if (rec) {
            CsvWriter lcsv(std::filesystem::path(rc.out_dir) / "lifespan.csv",
                           {"epsilon", "p", "profile", "detected_T", "threshold",
                            "dt_policy", "resolved", "slope", "predicted_exponent",
                            "residual"});
            lcsv.write_row({fmt17(rec->epsilon), fmt17(rec->p), rec->profile,
                            fmt17(rec->detected_T), fmt17(rec->threshold),
                            rec->dt_policy, rec->resolved ? "1" : "0", "", "", ""});
            std::printf("blow-up detected before t_end: T = %.10g (threshold %.3g, %s)\n",
                        rec->detected_T, rec->threshold,
                        rec->resolved ? "resolved" : "UNDER-RESOLVED");
        }
    } else {
        std::printf("run completed to t = %.10g without blow-up\n",
                    traj.samples.back().time);
    }
    detail::write_sidecar(rc, "simulate");
    return 0;
}

inline int cmd_lifespan_sweep(RunConfig rc) {
    rc.command = "lifespan-sweep";
    const SweepResult res = run_lifespan_sweep(rc);
    CsvWriter csv(std::filesystem::path(rc.out_dir) / "lifespan_records.csv",
                  {"epsilon", "p", "profile", "detected_T", "threshold",
                   "dt_policy", "resolved", "slope", "predicted_exponent",
                   "residual"});
    for (const auto& r : res.records)
        csv.write_row({fmt17(r.epsilon), fmt17(r.p), r.profile,
                       fmt17(r.detected_T), fmt17(r.threshold), r.dt_policy,
                       r.resolved ? "1" : "0", "", "", ""});
    if (res.fit) {
        const auto& f = *res.fit;
        csv.write_row({"", fmt17(res.records.front().p),
                       res.records.front().profile, "", "",
                       res.records.front().dt_policy, "", fmt17(f.slope),
                       fmt17(f.predicted_exponent), fmt17(f.residual)});
        std::printf("fit: slope %.6f  predicted %.6f  |diff| %.2e  residual %.2e\n",
                    f.slope, f.predicted_exponent,
                    std::abs(f.slope - f.predicted_exponent), f.residual);
    }
    for (int i : res.excluded)
        std::printf("excluded from fit: point %d (unresolved or no blow-up)\n", i);
    detail::write_sidecar(rc, "sweep");
    if (!res.refusal.empty()) {
        std::printf("%s\n", res.refusal.c_str());
        return 1;
    }
    return 0;
}

inline int cmd_gn(RunConfig rc) {
    rc.command = "gn";
    const int n = rc.kind == GroupKind::Torus ? rc.torus_dim : 3;
    gn_theta(n, rc.gn_q);  // admissibility gate; throws the guard message
    CsvWriter csv(std::filesystem::path(rc.out_dir) / "gn_report.csv",
                  {"n", "q", "theta", "samples", "max_ratio", "argmax_seed",
                   "band_limit"});
    for (double band : rc.gn_band_limits) {
        GroupSpec spec;
        spec.kind = rc.kind;
        spec.torus_dim = rc.torus_dim;
        spec.band_limit = band;
        const auto group = Group::make(spec);
        const GNReport rep =
            gn_ratio_sweep(group, rc.gn_q, rc.gn_samples, rc.seed, rc.gn_decay);
        csv.write_row({std::to_string(rep.n), fmt17(rep.q), fmt17(rep.theta),
                       std::to_string(rep.samples), fmt17(rep.max_ratio),
                       std::to_string(rep.argmax_seed), fmt17(rep.band_limit)});
        std::printf("gn %s band %.6g: theta %.6f  max ratio %.6f over %d samples\n",
                    rep.backend.c_str(), rep.band_limit, rep.theta, rep.max_ratio,
                    rep.samples);
    }
    detail::write_sidecar(rc, "gn");
    return 0;
}

} // namespace liewave

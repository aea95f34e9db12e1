// Harness-level behavior: configuration parsing with unknown-key rejection
// and line-precise errors, byte-identical reruns including from the resolved
// sidecar, fault detection on a corrupted quadrature, oracle-fed sweeps, and
// the GN admissibility gate.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <liewave/harness.hpp>

using namespace liewave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "liewave_tests" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("config parsing") {
    SECTION("full round trip through the resolved form") {
        RunConfig c;
        c.command = "simulate";
        c.kind = GroupKind::SU2;
        c.band_limit = 2.0;
        c.p = 3.0;
        c.u0 = "perturbed(1,1e-6,1)";
        c.dt_policy = "fixed";
        c.dt0 = 0.25;
        c.seed = 99;
        c.gn_band_limits = {4.0, 8.0};
        const RunConfig back =
            parse_config_text(resolved_config_json(c).dump());
        REQUIRE(back.kind == GroupKind::SU2);
        REQUIRE(back.band_limit == 2.0);
        REQUIRE(back.p == 3.0);
        REQUIRE(back.u0 == "perturbed(1,1e-6,1)");
        REQUIRE(back.dt_policy == "fixed");
        REQUIRE(back.dt0 == 0.25);
        REQUIRE(back.seed == 99);
        REQUIRE(back.gn_band_limits == std::vector<double>{4.0, 8.0});
    }
    SECTION("unknown keys are rejected with their path") {
        REQUIRE_THROWS_WITH(parse_config_text(R"({"solvr": {}})"),
                            Catch::Matchers::ContainsSubstring("solvr"));
        REQUIRE_THROWS_WITH(parse_config_text(R"({"solver": {"dt": 0.1}})"),
                            Catch::Matchers::ContainsSubstring("solver.dt"));
        REQUIRE_THROWS_WITH(parse_config_text(R"({"group": {"bandlimit": 4}})"),
                            Catch::Matchers::ContainsSubstring("group.bandlimit"));
    }
    SECTION("parse errors carry line and column") {
        REQUIRE_THROWS_WITH(parse_config_text("{\n  \"seed\": 1,\n  oops\n}"),
                            Catch::Matchers::ContainsSubstring("line 3"));
    }
    SECTION("enumerations are validated") {
        REQUIRE_THROWS_AS(parse_config_text(R"({"group": {"kind": "so3"}})"),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(parse_config_text(R"({"solver": {"dt_policy": "euler"}})"),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(parse_config_text(R"({"output": {"format": "xml"}})"),
                          std::invalid_argument);
    }
}

TEST_CASE("simulate command output") {
    RunConfig rc;
    rc.kind = GroupKind::Torus;
    rc.torus_dim = 1;
    rc.band_limit = 4.0;
    rc.p = 2.0;
    rc.epsilon = 0.3;
    rc.u0 = "cosine(1)";
    rc.u1 = "zero";
    rc.guard = false;
    rc.nonlinearity = false;  // free flow: energy column must stay constant
    rc.dt_policy = "fixed";
    rc.dt0 = 0.02;
    rc.t_end = 2.0;
    rc.threshold = std::numeric_limits<double>::infinity();
    rc.format = "csv+json";
    rc.snapshot_every = 25;

    SECTION("linear run: constant energy column, snapshots, sidecar") {
        const fs::path dir = fresh_dir("simulate_linear");
        rc.out_dir = dir.string();
        REQUIRE(cmd_simulate(rc) == 0);

        const std::string csv = slurp(dir / "trajectory.csv");
        std::stringstream lines(csv);
        std::string header;
        std::getline(lines, header);
        REQUIRE(header ==
                "time,dt,sup,l2,h1_homog,energy,u0_mean,u0t_mean,nonlinear_mass,"
                "tail_fraction,aliasing");
        double e0 = -1.0;
        std::string row;
        int rows = 0;
        while (std::getline(lines, row)) {
            std::stringstream cells(row);
            std::string cell;
            for (int c = 0; c <= 5; ++c) std::getline(cells, cell, ',');
            const double e = std::stod(cell);
            if (e0 < 0) e0 = e;
            REQUIRE(std::abs(e - e0) <= 1e-10 * e0);
            ++rows;
        }
        REQUIRE(rows == 101);
        REQUIRE(fs::exists(dir / "snapshots" / "snapshot_000004.json"));
        REQUIRE(fs::exists(dir / "simulate_config.json"));
    }
    SECTION("determinism: identical config gives byte-identical output") {
        const fs::path d1 = fresh_dir("det_a"), d2 = fresh_dir("det_b");
        rc.u0 = "random(7,1)";
        rc.nonlinearity = true;
        rc.snapshot_every = 0;
        rc.format = "csv";
        rc.out_dir = d1.string();
        REQUIRE(cmd_simulate(rc) == 0);
        rc.out_dir = d2.string();
        REQUIRE(cmd_simulate(rc) == 0);
        REQUIRE(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
    }
    SECTION("rerunning from the resolved sidecar reproduces the output") {
        const fs::path d1 = fresh_dir("sidecar_a"), d2 = fresh_dir("sidecar_b");
        rc.nonlinearity = true;
        rc.out_dir = d1.string();
        REQUIRE(cmd_simulate(rc) == 0);
        RunConfig again = parse_config_text(slurp(d1 / "simulate_config.json"));
        again.out_dir = d2.string();
        REQUIRE(cmd_simulate(again) == 0);
        REQUIRE(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
    }
    SECTION("blow-up run emits a lifespan record matching the oracle") {
        const fs::path dir = fresh_dir("simulate_blowup");
        rc.out_dir = dir.string();
        rc.nonlinearity = true;
        rc.u0 = "constant(1)";
        rc.u1 = "constant(1)";
        rc.epsilon = 0.5;
        rc.dt_policy = "adaptive";
        rc.dt0 = 0.005;
        rc.t_end = 100.0;
        rc.threshold = 1e6;
        rc.format = "csv";
        rc.snapshot_every = 0;
        REQUIRE(cmd_simulate(rc) == 0);
        const std::string csv = slurp(dir / "lifespan.csv");
        std::stringstream lines(csv);
        std::string header, row;
        std::getline(lines, header);
        std::getline(lines, row);
        std::stringstream cells(row);
        std::string cell;
        for (int c = 0; c <= 3; ++c) std::getline(cells, cell, ',');
        const double detected = std::stod(cell);
        const double oracle = kato_time_to_level(2.0, 0.5, 0.5, 1e6);
        REQUIRE(std::abs(detected - oracle) <= 1e-3 * oracle);
    }
}

TEST_CASE("verification suite and fault injection") {
    SECTION("a small verification pass succeeds on all backends") {
        RunConfig rc;
        rc.verify_samples = 5;
        rc.verify_t_max = 6.0;
        const VerifyReport rep = run_verification(rc);
        for (const auto& c : rep.checks) {
            INFO(c.name << " (" << c.backend << "): observed " << c.observed);
            REQUIRE(c.pass);
        }
    }
    SECTION("corrupted quadrature weights fail the plancherel check by name") {
        GroupSpec spec;
        spec.kind = GroupKind::SU2;
        spec.band_limit = 2.0;
        const auto good = Group::make(spec);
        auto weights = good->grid.weights;
        weights[3] *= 1.0 + 1e-3;
        const auto bad = Group::clone_with_weights(*good, weights);
        const CheckResult res = check_plancherel(bad, 5, 17);
        REQUIRE_FALSE(res.pass);
        REQUIRE(res.backend == "SU2");
        REQUIRE(res.name == "plancherel");
        REQUIRE(check_plancherel(good, 5, 17).pass);
    }
}

TEST_CASE("verify command writes its reports") {
    RunConfig rc;
    rc.verify_samples = 5;
    rc.verify_t_max = 4.0;
    const fs::path dir = fresh_dir("verify_cmd");
    rc.out_dir = dir.string();
    REQUIRE(cmd_verify(rc) == 0);
    const std::string rep = slurp(dir / "verify_report.csv");
    REQUIRE(rep.find("name,backend,pass,observed,tolerance") == 0);
    REQUIRE(rep.find("kato_oracle_agreement") != std::string::npos);
    const std::string est = slurp(dir / "l2_estimates.csv");
    REQUIRE(est.find("name,backend,max_ratio,argmax_time,seed") == 0);
    REQUIRE(est.find("L2((-L)^1/2 u)") != std::string::npos);
    REQUIRE(fs::exists(dir / "verify_config.json"));
}

TEST_CASE("lifespan sweep command") {
    RunConfig rc;
    rc.kind = GroupKind::Torus;
    rc.torus_dim = 1;
    rc.band_limit = 4.0;
    rc.p = 2.0;
    rc.u0 = "zero";
    rc.u1 = "constant(1)";
    rc.guard = false;
    rc.dt0 = 0.01;
    rc.t_end = 1e5;
    rc.threshold = 1e6;
    rc.sweep_eps_min = 1e-4;
    rc.sweep_eps_max = 1.0;
    rc.sweep_points = 8;

    SECTION("oracle-fed sweep nails the exponent") {
        rc.oracle_only = true;
        const SweepResult res = run_lifespan_sweep(rc);
        REQUIRE(res.refusal.empty());
        REQUIRE(res.fit.has_value());
        REQUIRE(res.fit->predicted_exponent == Catch::Approx(-1.0 / 3.0));
        REQUIRE(std::abs(res.fit->slope - res.fit->predicted_exponent) <= 1e-6);
    }
    SECTION("PDE sweep reproduces the exponent within tolerance") {
        rc.sweep_points = 5;  // fewer points, same 4-decade span
        const SweepResult res = run_lifespan_sweep(rc);
        REQUIRE(res.refusal.empty());
        REQUIRE(res.fit.has_value());
        REQUIRE(std::abs(res.fit->slope + 1.0 / 3.0) <= 0.1 / 3.0);
        REQUIRE(res.zero_checks.size() == res.records.size());
        for (const auto& z : res.zero_checks) {
            REQUIRE(z.pass_jensen);
            REQUIRE(z.pass_identity);
        }
    }
    SECTION("narrow ranges refuse the fit and the command reports it") {
        rc.oracle_only = true;
        rc.sweep_eps_min = 1e-2;
        const fs::path dir = fresh_dir("sweep_refused");
        rc.out_dir = dir.string();
        const SweepResult res = run_lifespan_sweep(rc);
        REQUIRE_FALSE(res.refusal.empty());
        REQUIRE(cmd_lifespan_sweep(rc) == 1);
        REQUIRE(fs::exists(dir / "lifespan_records.csv"));
    }
}

TEST_CASE("gn command") {
    RunConfig rc;
    rc.kind = GroupKind::Torus;
    rc.torus_dim = 3;
    rc.gn_q = 4.0;
    rc.gn_samples = 10;
    rc.gn_band_limits = {4.0};

    SECTION("writes the report with the exact theta") {
        const fs::path dir = fresh_dir("gn_ok");
        rc.out_dir = dir.string();
        REQUIRE(cmd_gn(rc) == 0);
        const std::string csv = slurp(dir / "gn_report.csv");
        REQUIRE(csv.find("n,q,theta,samples,max_ratio,argmax_seed,band_limit") == 0);
        REQUIRE(csv.find("0.75") != std::string::npos);
    }
    SECTION("inadmissible q is rejected with the guard message") {
        rc.gn_q = 7.0;
        REQUIRE_THROWS_WITH(cmd_gn(rc),
                            Catch::Matchers::ContainsSubstring("2n/(n-2)"));
    }
    SECTION("boundary q on SU2 runs with theta 1") {
        rc.kind = GroupKind::SU2;
        rc.gn_q = 6.0;
        rc.gn_band_limits = {3.75};
        const fs::path dir = fresh_dir("gn_su2");
        rc.out_dir = dir.string();
        REQUIRE(cmd_gn(rc) == 0);
        const std::string csv = slurp(dir / "gn_report.csv");
        REQUIRE(csv.find(",1,") != std::string::npos);  // theta = 1 column
    }
}

TEST_CASE("sweeps are deterministic across worker counts") {
    RunConfig rc;
    rc.kind = GroupKind::Torus;
    rc.torus_dim = 1;
    rc.band_limit = 4.0;
    rc.p = 2.0;
    rc.u0 = "zero";
    rc.u1 = "constant(1)";
    rc.guard = false;
    rc.dt0 = 0.02;
    rc.t_end = 1e5;
    rc.threshold = 1e6;
    rc.sweep_eps_min = 1e-4;
    rc.sweep_eps_max = 1.0;
    rc.sweep_points = 5;
    rc.workers = 1;
    const SweepResult seq = run_lifespan_sweep(rc);
    rc.workers = 3;
    const SweepResult par = run_lifespan_sweep(rc);
    REQUIRE(seq.records.size() == par.records.size());
    for (std::size_t i = 0; i < seq.records.size(); ++i) {
        REQUIRE(seq.records[i].epsilon == par.records[i].epsilon);
        REQUIRE(seq.records[i].detected_T == par.records[i].detected_T);
    }
    REQUIRE(seq.fit->slope == par.fit->slope);
}

TEST_CASE("analyze rejects fields that do not match their grid") {
    GroupSpec spec;
    spec.kind = GroupKind::Torus;
    spec.torus_dim = 1;
    spec.band_limit = 4.0;
    const auto g = Group::make(spec);
    GridField f = GridField::zero(g);
    f.values.conservativeResize(f.values.size() - 1);
    REQUIRE_THROWS_AS(analyze(f), std::invalid_argument);
}

TEST_CASE("shipped example configs parse") {
    for (const char* name :
         {"blowup_sweep_t1.json", "simulate_blowup_su2.json", "gn_t3.json"}) {
        const fs::path p = fs::path(LIEWAVE_SOURCE_DIR) / "configs" / name;
        INFO(p.string());
        REQUIRE_NOTHROW(load_config_file(p.string()));
    }
}

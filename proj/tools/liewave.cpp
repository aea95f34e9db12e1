// liewave — configuration-driven harness for the group-spectral wave solver.
//
//   liewave verify         [--config cfg.json] [--seed N] [--workers N] [--out DIR]
//   liewave simulate        --config cfg.json  [--no-guard] [...]
//   liewave lifespan-sweep  --config cfg.json  [--oracle-only] [--no-guard] [...]
//   liewave gn             [--config cfg.json] [...]
//
// Command-line flags override scalar configuration fields only; everything
// else comes from the JSON config. Each command writes its fully resolved
// configuration next to its outputs.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include <liewave/harness.hpp>

int main(int argc, char** argv) {
    CLI::App app{"spectral wave solver and blow-up experiment harness on compact groups"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_dir;
    bool oracle_only = false;
    bool no_guard = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration file");
        sub->add_option("--seed", seed, "override the run seed");
        sub->add_option("--workers", workers, "override worker count");
        sub->add_option("--out", out_dir, "override the output directory");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    add_common(verify);
    CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory");
    add_common(simulate);
    simulate->add_flag("--no-guard", no_guard,
                       "disable the local-existence admissibility check");
    CLI::App* sweep =
        app.add_subcommand("lifespan-sweep", "lifespan records over an epsilon sweep");
    add_common(sweep);
    sweep->add_flag("--oracle-only", oracle_only,
                    "generate records from the comparison ODE instead of the PDE");
    sweep->add_flag("--no-guard", no_guard,
                    "disable the local-existence admissibility check");
    CLI::App* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg ratio sweep");
    add_common(gn);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        liewave::RunConfig rc;
        if (!config_path.empty()) rc = liewave::load_config_file(config_path);
        if (sub->count("--seed")) rc.seed = seed;
        if (sub->count("--workers")) rc.workers = workers;
        if (sub->count("--out")) rc.out_dir = out_dir;
        if (oracle_only) rc.oracle_only = true;
        if (no_guard) rc.guard = false;

        if (verify->parsed()) return liewave::cmd_verify(rc);
        if (simulate->parsed()) return liewave::cmd_simulate(rc);
        if (sweep->parsed()) return liewave::cmd_lifespan_sweep(rc);
        if (gn->parsed()) return liewave::cmd_gn(rc);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

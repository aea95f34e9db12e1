// config.hpp — run configuration: a single JSON file drives every command.
// Unknown keys are rejected with their JSON path; parse errors are reported
// with line and column. Every command writes the fully resolved
// configuration next to its outputs, and re-running from that sidecar
// reproduces the outputs byte for byte.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "liewave/solver.hpp"

namespace liewave {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;  // verify | simulate | lifespan-sweep | gn

    // group
    GroupKind kind = GroupKind::Torus;
    int torus_dim = 1;
    double band_limit = 16.0;

    // solver
    double p = 2.0;
    double epsilon = 0.5;
    std::string u0 = "constant(1)";
    std::string u1 = "constant(1)";
    std::string dt_policy = "adaptive";
    double dt0 = 0.01;
    double t_end = 10.0;
    double dealias_margin = 1.0;
    bool guard = true;
    bool nonlinearity = true;
    double threshold = 1e8;
    bool measure_aliasing = false;

    // output
    std::string out_dir = "out";
    std::string format = "csv";  // csv | csv+json
    int snapshot_every = 0;      // spectral snapshots every N steps (0: none)
    int record_every = 1;        // CSV rows every N steps

    std::uint64_t seed = 1;
    int workers = 1;

    // lifespan sweep
    double sweep_eps_min = 1e-4;
    double sweep_eps_max = 1.0;
    int sweep_points = 8;
    bool oracle_only = false;

    // gn
    double gn_q = 4.0;
    int gn_samples = 500;
    std::vector<double> gn_band_limits = {16.0, 64.0};
    double gn_decay = 1.0;

    // verify
    int verify_samples = 100;
    double verify_t_max = 10.0;

    std::shared_ptr<const Group> make_group() const {
        GroupSpec spec;
        spec.kind = kind;
        spec.torus_dim = torus_dim;
        spec.band_limit = band_limit;
        spec.product_degree = product_degree_for(p, dealias_margin);
        return Group::make(spec);
    }

    SolverConfig make_solver_config(std::shared_ptr<const Group> group) const {
        SolverConfig cfg;
        cfg.group = std::move(group);
        cfg.p = p;
        cfg.epsilon = epsilon;
        cfg.u0_profile = Profile::parse(u0);
        cfg.u1_profile = Profile::parse(u1);
        cfg.dt.kind = dt_policy == "fixed" ? DtPolicy::Kind::Fixed
                                           : DtPolicy::Kind::Adaptive;
        cfg.dt.dt0 = dt0;
        cfg.t_end = t_end;
        cfg.dealias_margin = dealias_margin;
        cfg.guard = guard;
        cfg.nonlinearity_enabled = nonlinearity;
        cfg.measure_aliasing = measure_aliasing;
        return cfg;
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::string& path,
                           std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + path + key + "'");
    }
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void read_kind(const nlohmann::json& j, const char* key, GroupKind& out) {
    if (!j.contains(key)) return;
    const std::string s = j.at(key).get<std::string>();
    if (s == "torus") out = GroupKind::Torus;
    else if (s == "su2") out = GroupKind::SU2;
    else throw std::invalid_argument("config: group.kind must be 'torus' or 'su2'");
}

// threshold admits "inf" (JSON has no infinity literal)
inline void read_threshold(const nlohmann::json& j, const char* key, double& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") {
            out = std::numeric_limits<double>::infinity();
            return;
        }
        throw std::invalid_argument("config: solver.threshold string must be 'inf'");
    }
    out = v.get<double>();
}

inline std::pair<int, int> line_col_of(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

inline RunConfig parse_config_json(const nlohmann::json& j) {
    RunConfig c;
    detail::reject_unknown(j, "", {"command", "group", "solver", "output", "seed",
                                   "workers", "sweep", "gn", "verify"});
    detail::read_key(j, "command", c.command);
    detail::read_key(j, "seed", c.seed);
    detail::read_key(j, "workers", c.workers);
    if (j.contains("group")) {
        const auto& g = j.at("group");
        detail::reject_unknown(g, "group.", {"kind", "dim", "band_limit"});
        detail::read_kind(g, "kind", c.kind);
        detail::read_key(g, "dim", c.torus_dim);
        detail::read_key(g, "band_limit", c.band_limit);
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        detail::reject_unknown(
            s, "solver.",
            {"p", "epsilon", "u0", "u1", "dt_policy", "dt0", "t_end",
             "dealias_margin", "guard", "nonlinearity", "threshold",
             "measure_aliasing"});
        detail::read_key(s, "p", c.p);
        detail::read_key(s, "epsilon", c.epsilon);
        detail::read_key(s, "u0", c.u0);
        detail::read_key(s, "u1", c.u1);
        detail::read_key(s, "dt_policy", c.dt_policy);
        detail::read_key(s, "dt0", c.dt0);
        detail::read_key(s, "t_end", c.t_end);
        detail::read_key(s, "dealias_margin", c.dealias_margin);
        detail::read_key(s, "guard", c.guard);
        detail::read_key(s, "nonlinearity", c.nonlinearity);
        detail::read_threshold(s, "threshold", c.threshold);
        detail::read_key(s, "measure_aliasing", c.measure_aliasing);
        if (c.dt_policy != "fixed" && c.dt_policy != "adaptive")
            throw std::invalid_argument(
                "config: solver.dt_policy must be 'fixed' or 'adaptive'");
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown(o, "output.",
                               {"dir", "format", "snapshot_every", "record_every"});
        detail::read_key(o, "dir", c.out_dir);
        detail::read_key(o, "format", c.format);
        detail::read_key(o, "snapshot_every", c.snapshot_every);
        detail::read_key(o, "record_every", c.record_every);
        if (c.format != "csv" && c.format != "csv+json")
            throw std::invalid_argument(
                "config: output.format must be 'csv' or 'csv+json'");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        detail::reject_unknown(s, "sweep.",
                               {"eps_min", "eps_max", "points", "oracle_only"});
        detail::read_key(s, "eps_min", c.sweep_eps_min);
        detail::read_key(s, "eps_max", c.sweep_eps_max);
        detail::read_key(s, "points", c.sweep_points);
        detail::read_key(s, "oracle_only", c.oracle_only);
    }
    if (j.contains("gn")) {
        const auto& g = j.at("gn");
        detail::reject_unknown(g, "gn.", {"q", "samples", "band_limits", "decay"});
        detail::read_key(g, "q", c.gn_q);
        detail::read_key(g, "samples", c.gn_samples);
        detail::read_key(g, "band_limits", c.gn_band_limits);
        detail::read_key(g, "decay", c.gn_decay);
    }
    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        detail::reject_unknown(v, "verify.", {"samples", "t_max"});
        detail::read_key(v, "samples", c.verify_samples);
        detail::read_key(v, "t_max", c.verify_t_max);
    }
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_col_of(text, e.byte);
        throw std::invalid_argument("config: parse error at line " +
                                    std::to_string(line) + ", column " +
                                    std::to_string(col) + ": " + e.what());
    }
    return parse_config_json(j);
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// Fully resolved form, every field explicit; parses back to an identical
// configuration.
inline ordered_json resolved_config_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["group"] = {{"kind", c.kind == GroupKind::Torus ? "torus" : "su2"},
                  {"dim", c.torus_dim},
                  {"band_limit", c.band_limit}};
    j["solver"] = {{"p", c.p},
                   {"epsilon", c.epsilon},
                   {"u0", c.u0},
                   {"u1", c.u1},
                   {"dt_policy", c.dt_policy},
                   {"dt0", c.dt0},
                   {"t_end", c.t_end},
                   {"dealias_margin", c.dealias_margin},
                   {"guard", c.guard},
                   {"nonlinearity", c.nonlinearity},
                   {"threshold", std::isfinite(c.threshold)
                                    ? ordered_json(c.threshold)
                                    : ordered_json("inf")},
                   {"measure_aliasing", c.measure_aliasing}};
    j["output"] = {{"dir", c.out_dir},
                   {"format", c.format},
                   {"snapshot_every", c.snapshot_every},
                   {"record_every", c.record_every}};
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["sweep"] = {{"eps_min", c.sweep_eps_min},
                  {"eps_max", c.sweep_eps_max},
                  {"points", c.sweep_points},
                  {"oracle_only", c.oracle_only}};
    j["gn"] = {{"q", c.gn_q},
               {"samples", c.gn_samples},
               {"band_limits", c.gn_band_limits},
               {"decay", c.gn_decay}};
    j["verify"] = {{"samples", c.verify_samples}, {"t_max", c.verify_t_max}};
    return j;
}

} // namespace liewave

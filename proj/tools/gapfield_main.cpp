#include <gapfield/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace gapfield;

namespace {

struct Cli {
    std::string config_path;
    std::string eps, eps_list, p, a, solver, nodes, seed, out, only, probe, grid_n,
        grid_box, threads;
    bool record = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value lines)");
        cmd->add_option("--epsilon", eps, "gap width");
        cmd->add_option("--eps-list", eps_list, "comma-separated gap widths");
        cmd->add_option("--p", p, "emitter height p2 (location (0, p2))");
        cmd->add_option("--a", a, "dipole direction a1,a2 (normalized)");
        cmd->add_option("--solver", solver, "bem | series | both");
        cmd->add_option("--nodes", nodes, "bem nodes per circle (0: schedule)");
        cmd->add_option("--seed", seed, "seed for the randomized suites");
        cmd->add_option("--out", out, "output path");
        cmd->add_option("--only", only, "comma-separated check ids");
        cmd->add_option("--probe", probe, "probe point x1,x2 for solve");
        cmd->add_option("--grid-n", grid_n, "fieldmap grid points per axis");
        cmd->add_option("--grid-box", grid_box, "fieldmap box x1min,x1max,x2min,x2max");
        cmd->add_option("--threads", threads, "sweep parallelism (0: hardware)");
        cmd->add_flag("--record", record, "record envelopes instead of asserting");
    }

    RunConfig build(CLI::App* cmd) const {
        RunConfig rc;
        if (cmd->count("--config")) rc = parse_config_file(config_path);
        auto set = [&](const char* flag, const char* key, const std::string& v) {
            if (cmd->count(flag)) apply_key_value(rc, key, v);
        };
        set("--epsilon", "epsilon", eps);
        set("--eps-list", "eps_list", eps_list);
        set("--p", "p", p);
        set("--a", "a", a);
        set("--solver", "solver", solver);
        set("--nodes", "nodes", nodes);
        set("--seed", "seed", seed);
        set("--out", "out", out);
        set("--only", "only", only);
        set("--probe", "probe", probe);
        set("--grid-n", "grid_n", grid_n);
        set("--grid-box", "grid_box", grid_box);
        set("--threads", "threads", threads);
        if (cmd->count("--record")) apply_key_value(rc, "record", "1");
        return rc;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapfield: dipole field between two close circular conductors"};
    app.require_subcommand(1);

    Cli cli;
    CLI::App* solve = app.add_subcommand("solve", "single-configuration summary");
    CLI::App* fieldmap = app.add_subcommand("fieldmap", "field map CSV over a grid");
    CLI::App* sweep = app.add_subcommand("sweep", "epsilon sweep CSV");
    CLI::App* verify = app.add_subcommand("verify", "estimate-verification JSON report");
    for (CLI::App* c : {solve, fieldmap, sweep, verify}) cli.attach(c);

    CLI11_PARSE(app, argc, argv);
    CLI::App* cmd = app.get_subcommands().front();

    try {
        const RunConfig rc = cli.build(cmd);
        if (cmd == solve) return run_solve(rc, std::cout);
        if (cmd == fieldmap) return run_fieldmap(rc);
        if (cmd == sweep) return run_sweep(rc);
        return run_verify_cmd(rc, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// pruw: storage planning and protocol simulation for private read-update-write
// over storage-constrained databases.
//
//   pruw plan <config.json> [--out plan.json]
//   pruw simulate <config.json> [--sessions N] [--probe]
//   pruw sweep [--k-range a:b:step] [--p-range a:b:step] [--csv out.csv]
//
// PRUW_LOG=quiet|info|debug controls chatter on stdout.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "pruw/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"PRUW planner and simulator for heterogeneous storage-constrained databases"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* plan_cmd = app.add_subcommand("plan", "compute a storage plan and emit it as JSON");
    plan_cmd->add_option("config", config_path, "scenario config (JSON)")->required();
    plan_cmd->add_option("--out", out_path, "write the plan to a file instead of stdout");

    std::string sim_config;
    std::uint64_t sessions = 0;
    bool probe = false;
    auto* sim_cmd = app.add_subcommand("simulate", "install a plan and run full sessions");
    sim_cmd->add_option("config", sim_config, "scenario config (JSON)")->required();
    sim_cmd->add_option("--sessions", sessions, "number of read-update-write sessions");
    sim_cmd->add_flag("--probe", probe, "run the privacy/security probes as well");

    std::string k_range, p_range, csv_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate C1/C2 costs over a (k, p) grid");
    sweep_cmd->add_option("--k-range", k_range, "k values as a, a:b or a:b:step");
    sweep_cmd->add_option("--p-range", p_range, "p values as a, a:b or a:b:step");
    sweep_cmd->add_option("--csv", csv_path, "write CSV to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) {
            pruw::ScenarioConfig cfg = pruw::load_config(config_path);
            return pruw::cmd_plan(cfg, out_path, std::cout, std::cerr);
        }
        if (sim_cmd->parsed()) {
            pruw::ScenarioConfig cfg = pruw::load_config(sim_config);
            std::optional<std::uint64_t> override;
            if (sessions > 0) override = sessions;
            return pruw::cmd_simulate(cfg, override, probe, std::cout, std::cerr);
        }
        if (sweep_cmd->parsed())
            return pruw::cmd_sweep(k_range, p_range, csv_path, std::cout, std::cerr);
    } catch (const pruw::Error& e) {
        std::cerr << e.what() << "\n";
        return pruw::exit_code_for(e);
    }
    return 1;
}

#include "flcontract/cli.hpp"

#include "flcontract/config.hpp"
#include "flcontract/errors.hpp"
#include "flcontract/feasibility.hpp"
#include "flcontract/output.hpp"
#include "flcontract/simulator.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace flcontract {

namespace {

namespace fs = std::filesystem;

constexpr const char* kLogEnv = "FLCONTRACT_LOG";

struct Invocation {
    std::string command;
    std::string config_path;
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> tolerance_override;
    std::size_t oracle_grid = 200;
    bool echo_config = false;
};

void configure_logging() {
    auto logger = spdlog::get("flcontract");
    if (!logger) {
        logger = spdlog::stderr_logger_mt("flcontract");
        logger->set_pattern("[%l] %v");
    }
    spdlog::set_default_logger(logger);
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv(kLogEnv)) {
        level = spdlog::level::from_str(env);
    }
    spdlog::set_level(level);
}

int cmd_solve(const ScenarioConfig& config, const fs::path& out) {
    const auto report = run_scenario(config);
    write_menu_csv(out / "menu.csv", report.types, report.menu);
    write_utilities_csv(out / "utilities.csv", report, config.utility_types);
    write_feasibility_txt(out / "feasibility.txt", report);
    fmt::print("types={} profit={} lambda={} ironed_segments={} feasible={}\n",
               report.types.size(), format_value(report.expected_profit),
               format_value(report.menu.budget_multiplier_lambda),
               report.menu.ironed_segments.size(), report.all_ok() ? "yes" : "no");
    return report.all_ok() ? kExitOk : kExitInfeasible;
}

int cmd_verify(const ScenarioConfig& config, const fs::path& out) {
    const auto report = run_scenario(config);
    write_feasibility_txt(out / "feasibility.txt", report);
    write_scenario_csv(out / "scenario.csv", report);
    write_baselines_csv(out / "baselines.csv", report);
    fmt::print("{}", describe(report.feasibility));
    fmt::print("selection: {}\n", report.selection_ok() ? "PASS" : "FAIL");
    fmt::print("expected_profit={} realized_profit={} owners={}\n",
               format_value(report.expected_profit), format_value(report.realized_profit),
               config.owner_count());
    fmt::print("stackelberg symmetric={} asymmetric={}\n",
               format_value(report.symmetric.publisher_profit),
               format_value(report.asymmetric.publisher_profit));
    return report.all_ok() ? kExitOk : kExitInfeasible;
}

int cmd_sweep_accuracy(const ScenarioConfig& config, const fs::path& out) {
    const std::vector<double> limits =
        config.accuracy_upper_limits.value_or(std::vector<double>{0.98, 0.93, 0.88, 0.83, 0.78});
    const auto rows = accuracy_sweep(config, limits);
    write_accuracy_sweep_csv(out / "sweep_accuracy.csv", rows);
    bool ok = true;
    for (const auto& row : rows) {
        fmt::print("upper_limit={} profit={}\n", format_value(row.upper_limit),
                   format_value(row.expected_profit));
        ok = ok && row.feasible;
    }
    return ok ? kExitOk : kExitInfeasible;
}

int cmd_sweep_types(const ScenarioConfig& config, const fs::path& out) {
    const std::vector<std::size_t> counts =
        config.type_counts.value_or(std::vector<std::size_t>{2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto rows = type_count_sweep(config, counts);
    write_type_sweep_csv(out / "sweep_types.csv", rows);
    bool ok = true;
    for (const auto& row : rows) {
        fmt::print("M={} contract={} symmetric={} asymmetric={}\n", row.type_count,
                   format_value(row.contract_profit), format_value(row.symmetric_profit),
                   format_value(row.asymmetric_profit));
        ok = ok && row.feasible;
    }
    return ok ? kExitOk : kExitInfeasible;
}

int cmd_oracle_check(const ScenarioConfig& config, const fs::path& out, std::size_t grid_size) {
    const auto types = build_types(config);
    const auto menu = solve(types, config.params, config.solver_tolerance);
    const auto oracle = brute_force_solve(types, config.params, grid_size);
    const auto grid = oracle_grid(types, config.params, grid_size);
    std::vector<double> f;
    for (const auto& item : menu.items) {
        f.push_back(item.cpu_freq_f);
    }
    const double bound = grid_resolution_bound(f, types, config.params, grid);
    const double gap = menu.publisher_profit - oracle.publisher_profit;

    {
        std::ofstream csv(out / "oracle.csv", std::ios::binary | std::ios::trunc);
        if (!csv) {
            throw std::runtime_error("cannot write oracle.csv");
        }
        csv << "type,solver_f,solver_R,oracle_f,oracle_R\n";
        for (std::size_t n = 0; n < types.size(); ++n) {
            csv << (n + 1) << ',' << format_value(menu.items[n].cpu_freq_f) << ','
                << format_value(menu.items[n].reward_R) << ','
                << format_value(oracle.items[n].cpu_freq_f) << ','
                << format_value(oracle.items[n].reward_R) << '\n';
        }
    }
    const bool solver_ok = check_menu(menu.items, types, config.params).all_ok();
    const bool oracle_ok = check_menu(oracle.items, types, config.params).all_ok();
    const bool agree = gap >= -kFeasibilityTolerance && gap <= std::max(kFeasibilityTolerance, bound);
    fmt::print("solver_profit={} oracle_profit={} gap={} grid_bound={} agree={}\n",
               format_value(menu.publisher_profit), format_value(oracle.publisher_profit),
               format_value(gap), format_value(bound), agree ? "yes" : "no");
    return solver_ok && oracle_ok && agree ? kExitOk : kExitInfeasible;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    configure_logging();

    CLI::App app{"Optimal contract menus for federated-learning data owners"};
    app.require_subcommand(1);
    Invocation inv;
    auto add_common = [&inv](CLI::App* sub) {
        sub->add_option("--config", inv.config_path, "Scenario JSON document")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", inv.output_dir, "Output directory (created if missing)");
        sub->add_option("--seed", inv.seed_override, "Override the scenario seed");
        sub->add_option("--tol", inv.tolerance_override, "Override the solver tolerance");
        sub->add_flag("--echo-config", inv.echo_config,
                      "Also write the fully-resolved config to config.json");
    };
    for (const char* name : {"solve", "verify", "sweep-accuracy", "sweep-types"}) {
        add_common(app.add_subcommand(name)->callback([&inv, name] { inv.command = name; }));
    }
    auto* oracle = app.add_subcommand("oracle-check", "Compare the solver with the grid oracle");
    add_common(oracle);
    oracle->add_option("--grid", inv.oracle_grid, "Oracle grid points per type")
        ->check(CLI::Range(std::size_t{50}, std::size_t{2000}));
    oracle->callback([&inv] { inv.command = "oracle-check"; });
    app.get_subcommand("solve")->description("Solve the menu; write menu, utilities, feasibility");
    app.get_subcommand("verify")->description("Solve, simulate owners and run the baselines");
    app.get_subcommand("sweep-accuracy")->description("Profit versus upper accuracy limit");
    app.get_subcommand("sweep-types")->description("Profit versus number of types, with baselines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    ScenarioConfig config;
    try {
        config = parse_config(inv.config_path);
        if (inv.seed_override) {
            config.seed = *inv.seed_override;
        }
        if (inv.tolerance_override) {
            config.solver_tolerance = *inv.tolerance_override;
        }
        config.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const fs::path out = inv.output_dir;
        fs::create_directories(out);
        if (inv.echo_config) {
            std::ofstream echo(out / "config.json", std::ios::binary | std::ios::trunc);
            echo << config_to_json(config);
        }
        if (inv.command == "solve") {
            return cmd_solve(config, out);
        }
        if (inv.command == "verify") {
            return cmd_verify(config, out);
        }
        if (inv.command == "sweep-accuracy") {
            return cmd_sweep_accuracy(config, out);
        }
        if (inv.command == "sweep-types") {
            return cmd_sweep_types(config, out);
        }
        return cmd_oracle_check(config, out, inv.oracle_grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace flcontract

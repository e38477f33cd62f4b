#include "flcontract/output.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace flcontract {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
    }
}

} // namespace

std::string format_value(double value) {
    // -0 and 0 must render identically for byte-stable output.
    if (value == 0.0) {
        value = 0.0;
    }
    return fmt::format("{:.12g}", value);
}

void write_menu_csv(const std::filesystem::path& path, std::span<const TypeProfile> types,
                    const ContractMenu& menu) {
    auto out = open_for_write(path);
    out << "type,epsilon,theta,f,R\n";
    for (std::size_t n = 0; n < types.size(); ++n) {
        out << types[n].index_m << ',' << format_value(types[n].epsilon) << ','
            << format_value(types[n].theta) << ',' << format_value(menu.items[n].cpu_freq_f) << ','
            << format_value(menu.items[n].reward_R) << '\n';
    }
    finish(out, path);
}

void write_utilities_csv(const std::filesystem::path& path, const ScenarioReport& report,
                         std::span<const std::size_t> utility_types) {
    auto out = open_for_write(path);
    const std::size_t items = report.menu.items.size();
    out << "type";
    for (std::size_t m = 0; m < items; ++m) {
        out << ",item_" << (m + 1);
    }
    out << '\n';
    for (std::size_t t : utility_types) {
        if (t < 1 || t > report.utility_curves.size()) {
            continue;
        }
        out << t;
        for (double u : report.utility_curves[t - 1]) {
            out << ',' << format_value(u);
        }
        out << '\n';
    }
    finish(out, path);
}

void write_feasibility_txt(const std::filesystem::path& path, const ScenarioReport& report) {
    auto out = open_for_write(path);
    out << describe(report.feasibility);
    out << "selection: " << (report.selection_ok() ? "PASS" : "FAIL") << '\n';
    out << "budget_multiplier: " << format_value(report.menu.budget_multiplier_lambda) << '\n';
    out << "expected_total_reward: " << format_value(report.menu.expected_total_reward) << '\n';
    out << "ironed_segments:";
    if (report.menu.ironed_segments.empty()) {
        out << " none";
    }
    for (const auto& seg : report.menu.ironed_segments) {
        out << ' ' << (seg.first + 1) << '-' << (seg.last + 1);
    }
    out << '\n';
    finish(out, path);
}

void write_scenario_csv(const std::filesystem::path& path, const ScenarioReport& report) {
    auto out = open_for_write(path);
    out << "type,owners,selected_item,own_utility,profit_per_owner\n";
    for (std::size_t n = 0; n < report.types.size(); ++n) {
        const auto sel = report.per_type_selected_index[n];
        out << (n + 1) << ',' << report.owners_per_type[n] << ',' << (sel + 1) << ','
            << format_value(report.utility_curves[n][n]) << ','
            << format_value(publisher_profit_one(report.types[n], report.menu.items[sel],
                                                 report.menu_params))
            << '\n';
    }
    finish(out, path);
}

void write_baselines_csv(const std::filesystem::path& path, const ScenarioReport& report) {
    auto out = open_for_write(path);
    out << "mechanism,publisher_profit,expected_total_reward\n";
    out << "contract," << format_value(report.expected_profit) << ','
        << format_value(report.menu.expected_total_reward) << '\n';
    for (const auto* outcome : {&report.symmetric, &report.asymmetric}) {
        out << "stackelberg_" << to_string(outcome->info_regime) << ','
            << format_value(outcome->publisher_profit) << ','
            << format_value(outcome->expected_total_reward) << '\n';
    }
    finish(out, path);
}

void write_accuracy_sweep_csv(const std::filesystem::path& path,
                              std::span<const AccuracySweepRow> rows) {
    auto out = open_for_write(path);
    out << "upper_limit,expected_profit,realized_profit,feasible\n";
    for (const auto& row : rows) {
        out << format_value(row.upper_limit) << ',' << format_value(row.expected_profit) << ','
            << format_value(row.realized_profit) << ',' << (row.feasible ? 1 : 0) << '\n';
    }
    finish(out, path);
}

void write_type_sweep_csv(const std::filesystem::path& path,
                          std::span<const TypeCountSweepRow> rows) {
    auto out = open_for_write(path);
    out << "type_count,contract_profit,symmetric_profit,asymmetric_profit,feasible\n";
    for (const auto& row : rows) {
        out << row.type_count << ',' << format_value(row.contract_profit) << ','
            << format_value(row.symmetric_profit) << ',' << format_value(row.asymmetric_profit)
            << ',' << (row.feasible ? 1 : 0) << '\n';
    }
    finish(out, path);
}

} // namespace flcontract

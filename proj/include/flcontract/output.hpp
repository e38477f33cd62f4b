#pragma once

#include "flcontract/simulator.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace flcontract {

/// Decimal rendering used by every emitted file: 12 significant digits.
std::string format_value(double value);

void write_menu_csv(const std::filesystem::path& path, std::span<const TypeProfile> types,
                    const ContractMenu& menu);
/// Utility rows for the configured types (indices beyond M are skipped).
void write_utilities_csv(const std::filesystem::path& path, const ScenarioReport& report,
                         std::span<const std::size_t> utility_types);
void write_feasibility_txt(const std::filesystem::path& path, const ScenarioReport& report);
void write_scenario_csv(const std::filesystem::path& path, const ScenarioReport& report);
void write_baselines_csv(const std::filesystem::path& path, const ScenarioReport& report);
void write_accuracy_sweep_csv(const std::filesystem::path& path,
                              std::span<const AccuracySweepRow> rows);
void write_type_sweep_csv(const std::filesystem::path& path,
                          std::span<const TypeCountSweepRow> rows);

} // namespace flcontract

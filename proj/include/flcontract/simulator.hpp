#pragma once

#include "flcontract/contract_solver.hpp"
#include "flcontract/cost_model.hpp"
#include "flcontract/feasibility.hpp"
#include "flcontract/stackelberg.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace flcontract {

enum class SamplingMode {
    quota, ///< N * p_m owners per type, largest-remainder rounding
    iid,   ///< owners drawn independently from p with the scenario seed
};

/// A complete experiment description. Defaults reproduce the reference setup:
/// 100 owners, 10 equiprobable types with accuracy 20%..92%, c=5, s=20,
/// T_com=10, E_com=20, T_max=600, R_max=10000.
struct ScenarioConfig {
    std::size_t type_count_M = 10;
    double accuracy_lo = 0.20;
    double accuracy_hi = 0.92;
    /// Empty means uniform.
    std::vector<double> type_probabilities;
    double cpu_cycles_c = 5.0;
    double samples_s = 20.0;
    SystemParams params;
    /// Simulated owners; defaults to params.population_N when unset.
    std::optional<std::size_t> owner_count_N;
    std::uint64_t seed = 1;
    SamplingMode sampling = SamplingMode::quota;
    /// 1-based type indices whose utility rows are reported.
    std::vector<std::size_t> utility_types = {2, 4, 6, 8};
    double solver_tolerance = kDefaultSolverTolerance;
    std::optional<std::vector<double>> accuracy_upper_limits;
    std::optional<std::vector<std::size_t>> type_counts;

    std::size_t owner_count() const;
    /// Throws ConfigError naming the violated invariant.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

struct ScenarioReport {
    std::vector<TypeProfile> types;
    SystemParams menu_params;
    ContractMenu menu;
    FeasibilityReport feasibility;
    /// Rows are types, columns items.
    std::vector<std::vector<double>> utility_curves;
    /// 0-based item each type picks when offered the whole menu.
    std::vector<std::size_t> per_type_selected_index;
    std::vector<std::size_t> owners_per_type;
    double expected_profit = 0.0;
    double realized_profit = 0.0;
    StackelbergOutcome symmetric;
    StackelbergOutcome asymmetric;

    /// Every type picked its own item.
    bool selection_ok() const;
    bool all_ok() const { return feasibility.all_ok() && selection_ok(); }
};

std::vector<TypeProfile> build_types(std::size_t type_count, double accuracy_lo, double accuracy_hi,
                                     double psi, double cpu_cycles, double samples,
                                     std::span<const double> probabilities = {});

std::vector<TypeProfile> build_types(const ScenarioConfig& config);

/// Item maximizing the owner's utility; near-ties (1e-9 relative) go to the
/// larger index.
std::size_t owner_select_item(std::span<const ContractItem> items, const TypeProfile& type,
                              const SystemParams& params);

/// Owner count per type for the configured sampling mode.
std::vector<std::size_t> sample_population(std::span<const TypeProfile> types, std::size_t owners,
                                           SamplingMode mode, std::uint64_t seed);

ScenarioReport run_scenario(const ScenarioConfig& config);

struct AccuracySweepRow {
    double upper_limit = 0.0;
    double expected_profit = 0.0;
    double realized_profit = 0.0;
    bool feasible = false;
};

std::vector<AccuracySweepRow> accuracy_sweep(const ScenarioConfig& config,
                                             std::span<const double> upper_limits);

struct TypeCountSweepRow {
    std::size_t type_count = 0;
    double contract_profit = 0.0;
    double symmetric_profit = 0.0;
    double asymmetric_profit = 0.0;
    bool feasible = false;
};

/// One scenario per type count, each with uniform type probabilities.
std::vector<TypeCountSweepRow> type_count_sweep(const ScenarioConfig& config,
                                                std::span<const std::size_t> type_counts);

} // namespace flcontract

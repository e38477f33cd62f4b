#pragma once

#include "flcontract/contract_solver.hpp"
#include "flcontract/cost_model.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace flcontract {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kBudgetTolerance = 1e-6;

/// Verdicts for one menu. Worst-violation magnitudes are >= 0; a flag is
/// true iff its magnitude is within the tolerance the report was built with.
struct FeasibilityReport {
    bool ir_ok = true;
    double ir_worst_violation = 0.0;
    std::size_t ir_worst_type = 0;

    bool ic_ok = true;
    double ic_worst_violation = 0.0;
    /// 0-based (type, item) pair with the largest IC violation.
    std::size_t ic_worst_type = 0;
    std::size_t ic_worst_item = 0;

    bool monotone_ok = true;
    bool time_feasible_ok = true;
    double worst_time_margin = 0.0;

    bool budget_ok = true;
    double budget_excess = 0.0;

    bool all_ok() const {
        return ir_ok && ic_ok && monotone_ok && time_feasible_ok && budget_ok;
    }
};

/// U_D(type n, item m) for every pair; rows are types, columns items.
std::vector<std::vector<double>> utility_matrix(std::span<const ContractItem> items,
                                                std::span<const TypeProfile> types,
                                                const SystemParams& params);

std::vector<bool> check_ir(std::span<const ContractItem> items,
                           std::span<const TypeProfile> types, const SystemParams& params,
                           double tol = kFeasibilityTolerance);

/// Entry (n, m) is true iff type n weakly prefers its own item to item m.
std::vector<std::vector<bool>> check_ic(std::span<const ContractItem> items,
                                        std::span<const TypeProfile> types,
                                        const SystemParams& params,
                                        double tol = kFeasibilityTolerance);

/// N * sum_n p_n [w ln(t_max - T_com - psi c s / (f theta)) - l R].
double publisher_total_profit(std::span<const ContractItem> items,
                              std::span<const TypeProfile> types, const SystemParams& params);

FeasibilityReport check_menu(std::span<const ContractItem> items,
                             std::span<const TypeProfile> types, const SystemParams& params,
                             double tol = kFeasibilityTolerance,
                             double budget_tol = kBudgetTolerance);

/// Multi-line human-readable rendering of a report.
std::string describe(const FeasibilityReport& report);

inline constexpr std::size_t kMaxOracleTypes = 4;
inline constexpr std::size_t kMinOracleGrid = 50;

/// Log-spaced candidate frequencies used by the brute-force oracle.
std::vector<double> oracle_grid(std::span<const TypeProfile> types, const SystemParams& params,
                                std::size_t grid_size);

/// Exhaustive search over monotone frequency tuples on oracle_grid, each
/// paired with its cheapest IR/IC-compatible rewards.
ContractMenu brute_force_solve(std::span<const TypeProfile> types, const SystemParams& params,
                               std::size_t grid_size);

/// Upper bound on how much profit the grid can lose against the continuous
/// optimum `f_opt`: first-order bound from rounding each f down onto the grid.
double grid_resolution_bound(std::span<const double> f_opt, std::span<const TypeProfile> types,
                             const SystemParams& params, std::span<const double> grid);

} // namespace flcontract

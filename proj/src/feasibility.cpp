#include "flcontract/feasibility.hpp"

#include "flcontract/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flcontract {

namespace {

void require_aligned(std::span<const ContractItem> items, std::span<const TypeProfile> types) {
    if (items.size() != types.size()) {
        throw AlignmentError(fmt::format("menu has {} items but there are {} types", items.size(),
                                         types.size()));
    }
}

// Own copy of the cheapest IR/LDIC reward recursion so the oracle does not
// share a code path with the solver.
std::vector<double> minimal_rewards(std::span<const double> f, std::span<const TypeProfile> types,
                                    const SystemParams& params) {
    std::vector<double> rewards(f.size());
    const double mu = params.energy_weight_mu;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double k = params.iteration_coeff_psi / types[n].theta;
        const double own = params.capacitance_zeta * types[n].work() * f[n] * f[n];
        if (n == 0) {
            rewards[n] = mu * (k * own + params.ecom());
        } else {
            const double below = params.capacitance_zeta * types[n - 1].work() * f[n - 1] * f[n - 1];
            rewards[n] = rewards[n - 1] + mu * k * (own - below);
        }
    }
    return rewards;
}

} // namespace

std::vector<std::vector<double>> utility_matrix(std::span<const ContractItem> items,
                                                std::span<const TypeProfile> types,
                                                const SystemParams& params) {
    require_aligned(items, types);
    std::vector<std::vector<double>> table(types.size(), std::vector<double>(items.size()));
    for (std::size_t n = 0; n < types.size(); ++n) {
        for (std::size_t m = 0; m < items.size(); ++m) {
            table[n][m] = owner_utility(types[n], items[m], params);
        }
    }
    return table;
}

std::vector<bool> check_ir(std::span<const ContractItem> items,
                           std::span<const TypeProfile> types, const SystemParams& params,
                           double tol) {
    require_aligned(items, types);
    std::vector<bool> verdicts(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        verdicts[n] = owner_utility(types[n], items[n], params) >= -tol;
    }
    return verdicts;
}

std::vector<std::vector<bool>> check_ic(std::span<const ContractItem> items,
                                        std::span<const TypeProfile> types,
                                        const SystemParams& params, double tol) {
    const auto table = utility_matrix(items, types, params);
    std::vector<std::vector<bool>> verdicts(types.size(), std::vector<bool>(items.size(), true));
    for (std::size_t n = 0; n < types.size(); ++n) {
        for (std::size_t m = 0; m < items.size(); ++m) {
            verdicts[n][m] = table[n][n] >= table[n][m] - tol;
        }
    }
    return verdicts;
}

double publisher_total_profit(std::span<const ContractItem> items,
                              std::span<const TypeProfile> types, const SystemParams& params) {
    require_aligned(items, types);
    const double slack = params.t_max - params.tcom();
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& t = types[n];
        const double remaining = slack - params.iteration_coeff_psi * t.cpu_cycles_c * t.samples_s /
                                             (items[n].cpu_freq_f * t.theta);
        if (!(remaining > 0.0)) {
            throw InfeasibleTimeError(fmt::format("item {} misses the deadline", n + 1));
        }
        total += t.probability_p * (params.satisfaction_w * std::log(remaining) -
                                    params.reward_unit_cost_l * items[n].reward_R);
    }
    return params.population_N * total;
}

FeasibilityReport check_menu(std::span<const ContractItem> items,
                             std::span<const TypeProfile> types, const SystemParams& params,
                             double tol, double budget_tol) {
    require_aligned(items, types);
    FeasibilityReport report;
    const auto table = utility_matrix(items, types, params);
    for (std::size_t n = 0; n < types.size(); ++n) {
        const double ir_violation = -table[n][n];
        if (ir_violation > report.ir_worst_violation) {
            report.ir_worst_violation = ir_violation;
            report.ir_worst_type = n;
        }
        for (std::size_t m = 0; m < items.size(); ++m) {
            const double ic_violation = table[n][m] - table[n][n];
            if (ic_violation > report.ic_worst_violation) {
                report.ic_worst_violation = ic_violation;
                report.ic_worst_type = n;
                report.ic_worst_item = m;
            }
        }
    }
    report.ir_ok = report.ir_worst_violation <= tol;
    report.ic_ok = report.ic_worst_violation <= tol;

    for (std::size_t n = 1; n < items.size(); ++n) {
        if (items[n].cpu_freq_f < items[n - 1].cpu_freq_f ||
            items[n].reward_R < items[n - 1].reward_R - tol) {
            report.monotone_ok = false;
        }
    }

    report.worst_time_margin = std::numeric_limits<double>::infinity();
    double expected = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const double margin = params.t_max - total_iteration_time(types[n], items[n], params);
        report.worst_time_margin = std::min(report.worst_time_margin, margin);
        expected += types[n].probability_p * items[n].reward_R;
    }
    report.time_feasible_ok = report.worst_time_margin > 0.0;
    report.budget_excess = std::max(0.0, params.population_N * expected - params.r_max);
    report.budget_ok = report.budget_excess <= budget_tol;
    return report;
}

std::string describe(const FeasibilityReport& r) {
    auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
    std::string out;
    out += fmt::format("ir: {} worst_violation={:.12g} type={}\n", verdict(r.ir_ok),
                       r.ir_worst_violation, r.ir_worst_type + 1);
    out += fmt::format("ic: {} worst_violation={:.12g} type={} item={}\n", verdict(r.ic_ok),
                       r.ic_worst_violation, r.ic_worst_type + 1, r.ic_worst_item + 1);
    out += fmt::format("monotone: {}\n", verdict(r.monotone_ok));
    out += fmt::format("time_feasible: {} worst_margin={:.12g}\n", verdict(r.time_feasible_ok),
                       r.worst_time_margin);
    out += fmt::format("budget: {} excess={:.12g}\n", verdict(r.budget_ok), r.budget_excess);
    out += fmt::format("overall: {}\n", verdict(r.all_ok()));
    return out;
}

std::vector<double> oracle_grid(std::span<const TypeProfile> types, const SystemParams& params,
                                std::size_t grid_size) {
    if (types.empty() || types.size() > kMaxOracleTypes) {
        throw DomainError(fmt::format("brute-force oracle supports 1..{} types, got {}",
                                      kMaxOracleTypes, types.size()));
    }
    if (grid_size < kMinOracleGrid) {
        throw DomainError(fmt::format("oracle grid needs at least {} points", kMinOracleGrid));
    }
    const double slack = params.t_max - params.tcom();
    double a_max = 0.0;
    double a_weighted = 0.0;
    for (const auto& t : types) {
        const double a = params.iteration_coeff_psi * t.work() / t.theta;
        a_max = std::max(a_max, a);
        a_weighted += t.probability_p * a;
    }
    // Smallest telescoped reward weight; any pooled block carries at least this.
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < types.size(); ++n) {
        const double k = params.iteration_coeff_psi / types[n].theta;
        double tail = 0.0;
        for (std::size_t i = n + 1; i < types.size(); ++i) {
            tail += types[i].probability_p;
        }
        double g = k * types[n].probability_p;
        if (n + 1 < types.size()) {
            g += (k - params.iteration_coeff_psi / types[n + 1].theta) * tail;
        }
        g_min = std::min(g_min, g);
    }
    const double lo = a_max / slack * (1.0 + 1e-6);
    // Beyond hi the marginal energy bill exceeds every block's marginal satisfaction.
    const double work = types.front().work();
    const double hi = std::max(
        4.0 * lo, std::cbrt(2.0 * params.satisfaction_w * a_weighted /
                            (slack * params.reward_unit_cost_l * params.energy_weight_mu *
                             params.capacitance_zeta * work * g_min)));
    std::vector<double> grid(grid_size);
    const double step = std::log(hi / lo) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

ContractMenu brute_force_solve(std::span<const TypeProfile> types, const SystemParams& params,
                               std::size_t grid_size) {
    const auto grid = oracle_grid(types, params, grid_size);
    const std::size_t m = types.size();
    const std::size_t g = grid.size();
    const double slack = params.t_max - params.tcom();

    // satisfaction[n][i] = w ln(slack - a_n / grid[i]); grid[0] clears every floor.
    std::vector<std::vector<double>> satisfaction(m, std::vector<double>(g));
    for (std::size_t n = 0; n < m; ++n) {
        const double a = params.iteration_coeff_psi * types[n].work() / types[n].theta;
        for (std::size_t i = 0; i < g; ++i) {
            satisfaction[n][i] = params.satisfaction_w * std::log(slack - a / grid[i]);
        }
    }

    std::vector<std::size_t> idx(m, 0);
    std::vector<std::size_t> best_idx;
    double best_profit = -std::numeric_limits<double>::infinity();
    std::vector<double> f(m);
    for (;;) {
        for (std::size_t n = 0; n < m; ++n) {
            f[n] = grid[idx[n]];
        }
        const auto rewards = minimal_rewards(f, types, params);
        double expected = 0.0;
        double profit = 0.0;
        for (std::size_t n = 0; n < m; ++n) {
            expected += types[n].probability_p * rewards[n];
            profit += types[n].probability_p *
                      (satisfaction[n][idx[n]] - params.reward_unit_cost_l * rewards[n]);
        }
        if (params.population_N * expected <= params.r_max && profit > best_profit) {
            best_profit = profit;
            best_idx = idx;
        }
        // Next non-decreasing index tuple in lexicographic order.
        std::size_t pos = m;
        while (pos > 0 && idx[pos - 1] == g - 1) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++idx[pos - 1];
        for (std::size_t j = pos; j < m; ++j) {
            idx[j] = idx[pos - 1];
        }
    }
    if (best_idx.empty()) {
        throw BudgetInfeasibleError("no grid menu satisfies the reward budget");
    }

    ContractMenu menu;
    for (std::size_t n = 0; n < m; ++n) {
        f[n] = grid[best_idx[n]];
    }
    const auto rewards = minimal_rewards(f, types, params);
    double expected = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
        menu.items.push_back({f[n], rewards[n]});
        expected += types[n].probability_p * rewards[n];
        if (n > 0 && best_idx[n] == best_idx[n - 1]) {
            if (!menu.ironed_segments.empty() && menu.ironed_segments.back().last == n - 1) {
                menu.ironed_segments.back().last = n;
            } else {
                menu.ironed_segments.push_back({n - 1, n});
            }
        }
    }
    menu.expected_total_reward = params.population_N * expected;
    menu.publisher_profit = publisher_total_profit(menu.items, types, params);
    return menu;
}

double grid_resolution_bound(std::span<const double> f_opt, std::span<const TypeProfile> types,
                             const SystemParams& params, std::span<const double> grid) {
    if (f_opt.size() != types.size()) {
        throw AlignmentError("frequency schedule and types differ in length");
    }
    const double slack = params.t_max - params.tcom();
    const double cost = params.population_N * params.reward_unit_cost_l *
                        params.energy_weight_mu * params.capacitance_zeta;
    double bound = 0.0;
    double tail = 0.0;
    for (std::size_t n = types.size(); n-- > 0;) {
        const auto& t = types[n];
        const double k = params.iteration_coeff_psi / t.theta;
        double g = k * t.probability_p;
        if (n + 1 < types.size()) {
            g += (k - params.iteration_coeff_psi / types[n + 1].theta) * tail;
        }
        tail += t.probability_p;

        const double f = f_opt[n];
        auto it = std::upper_bound(grid.begin(), grid.end(), f);
        const double down = it == grid.begin() ? grid.front() : *std::prev(it);
        const double a = k * t.work();
        const double f_low = std::min(down, f);
        const double sat_slope =
            params.population_N * t.probability_p * params.satisfaction_w * a /
            (f_low * (f_low * slack - a));
        const double cost_slope = 2.0 * cost * g * t.work() * std::max(down, f);
        bound += (sat_slope + cost_slope) * std::abs(f - down);
    }
    return bound;
}

} // namespace flcontract

#include "flcontract/contract_solver.hpp"

#include "flcontract/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace flcontract {

namespace {

void require_aligned(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw AlignmentError(std::string(what) + ": expected " + std::to_string(b) +
                             " entries, got " + std::to_string(a));
    }
}

// a_n = psi c_n s_n / theta_n; T_t = a_n / f + T_com.
double time_coefficient(const TypeProfile& type, const SystemParams& params) {
    return iteration_factor(type, params) * type.work();
}

std::vector<double> schedule_at(double lambda, std::span<const TypeProfile> types,
                                const GCoefficients& coeffs, const SystemParams& params,
                                double tol, std::vector<IndexRange>* pooled) {
    std::vector<double> f(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        f[n] = solve_pooled(lambda, {n, n}, types, coeffs, params, tol);
    }
    auto ironed = iron(f, types, params, lambda, tol);
    if (pooled != nullptr) {
        *pooled = std::move(ironed.pooled);
    }
    return std::move(ironed.f_schedule);
}

double expected_reward(std::span<const double> rewards, std::span<const TypeProfile> types,
                       const SystemParams& params) {
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        total += types[n].probability_p * rewards[n];
    }
    return params.population_N * total;
}

} // namespace

void validate_types(std::span<const TypeProfile> types) {
    if (types.empty()) {
        throw DomainError("at least one type is required");
    }
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& t = types[n];
        if (!(t.theta > 0.0) || !std::isfinite(t.theta)) {
            throw DomainError("type " + std::to_string(n + 1) + " has non-positive theta");
        }
        if (!(t.probability_p > 0.0 && t.probability_p <= 1.0)) {
            throw DomainError("type " + std::to_string(n + 1) +
                              " probability must lie in (0,1], got " +
                              std::to_string(t.probability_p));
        }
        if (!(t.work() > 0.0)) {
            throw DomainError("type " + std::to_string(n + 1) + " has non-positive c*s");
        }
        if (n > 0 && !(types[n - 1].theta < t.theta)) {
            throw OrderingError("types must be strictly ascending in theta (positions " +
                                std::to_string(n) + " and " + std::to_string(n + 1) + ")");
        }
        if (t.work() != types.front().work()) {
            throw DomainError("all types must share one c*s workload");
        }
        total += t.probability_p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("type probabilities sum to " + std::to_string(total) + ", expected 1");
    }
}

GCoefficients g_coefficients(std::span<const TypeProfile> types, double psi) {
    if (!(psi > 0.0)) {
        throw DomainError("psi must be > 0");
    }
    if (types.empty()) {
        throw DomainError("at least one type is required");
    }
    for (std::size_t n = 1; n < types.size(); ++n) {
        if (!(types[n - 1].theta < types[n].theta)) {
            throw OrderingError("types must be strictly ascending in theta");
        }
    }
    const std::size_t m = types.size();
    GCoefficients out;
    out.g.resize(m);
    double tail = 0.0; // sum_{i>n} p_i
    for (std::size_t n = m; n-- > 0;) {
        const double k_n = psi / types[n].theta;
        out.g[n] = k_n * types[n].probability_p;
        if (n + 1 < m) {
            out.g[n] += (k_n - psi / types[n + 1].theta) * tail;
        }
        tail += types[n].probability_p;
    }
    return out;
}

std::vector<double> recover_rewards(std::span<const double> f_schedule,
                                    std::span<const TypeProfile> types,
                                    const SystemParams& params) {
    require_aligned(f_schedule.size(), types.size(), "frequency schedule");
    const double mu = params.energy_weight_mu;
    std::vector<double> rewards(types.size());
    double prev_energy = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& t = types[n];
        const double energy =
            computation_energy(params.capacitance_zeta, t.cpu_cycles_c, t.samples_s, f_schedule[n]);
        const double k_n = iteration_factor(t, params);
        if (n == 0) {
            rewards[n] = mu * (params.ecom() + k_n * energy);
        } else {
            rewards[n] = rewards[n - 1] + mu * k_n * (energy - prev_energy);
        }
        prev_energy = energy;
    }
    return rewards;
}

double reduced_objective(std::span<const double> f_schedule, std::span<const TypeProfile> types,
                         const SystemParams& params) {
    require_aligned(f_schedule.size(), types.size(), "frequency schedule");
    const auto coeffs = g_coefficients(types, params.iteration_coeff_psi);
    const double big_n = params.population_N;
    const double slack = params.time_slack();
    double satisfaction = 0.0;
    double energy_bill = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& t = types[n];
        const double f = f_schedule[n];
        if (!(f > 0.0)) {
            throw DomainError("cpu frequency must be > 0");
        }
        const double remaining = slack - time_coefficient(t, params) / f;
        if (!(remaining > 0.0)) {
            throw InfeasibleTimeError("type " + std::to_string(n + 1) +
                                      " misses the deadline at f=" + std::to_string(f));
        }
        satisfaction += t.probability_p * std::log(remaining);
        energy_bill += coeffs.g[n] * t.work() * f * f;
    }
    const double mu_l = params.energy_weight_mu * params.reward_unit_cost_l;
    return big_n * params.satisfaction_w * satisfaction - big_n * mu_l * params.ecom() -
           big_n * mu_l * params.capacitance_zeta * energy_bill;
}

double solve_pooled(double lambda, IndexRange segment, std::span<const TypeProfile> types,
                    const GCoefficients& coeffs, const SystemParams& params, double tol) {
    if (!(lambda >= 0.0)) {
        throw DomainError("budget multiplier must be >= 0");
    }
    if (segment.first > segment.last || segment.last >= types.size()) {
        throw DomainError("segment out of range");
    }
    require_aligned(coeffs.g.size(), types.size(), "g coefficients");

    const double slack = params.time_slack();
    double weight_sum = 0.0;
    double f_floor = 0.0;
    for (std::size_t n = segment.first; n <= segment.last; ++n) {
        if (!(coeffs.g[n] > 0.0) || !std::isfinite(coeffs.g[n])) {
            throw DomainError("g coefficient of type " + std::to_string(n + 1) +
                              " must be finite and > 0");
        }
        weight_sum += coeffs.g[n];
        f_floor = std::max(f_floor, time_coefficient(types[n], params) / slack);
    }
    const double work = types[segment.first].work();
    const double cost_slope = 2.0 * (params.reward_unit_cost_l + lambda) *
                              params.energy_weight_mu * params.capacitance_zeta * work *
                              weight_sum;

    // Strictly decreasing on (f_floor, inf): +inf at the floor, -inf at infinity.
    auto derivative = [&](double f) {
        double gain = 0.0;
        for (std::size_t n = segment.first; n <= segment.last; ++n) {
            const double a = time_coefficient(types[n], params);
            gain += types[n].probability_p * a / (f * (f * slack - a));
        }
        return params.satisfaction_w * gain - cost_slope * f;
    };

    double lo = f_floor * (1.0 + 1e-12);
    double hi = 2.0 * lo;
    for (int i = 0; derivative(hi) > 0.0; ++i) {
        if (i > 2000 || !std::isfinite(hi)) {
            throw ConvergenceError("no upper bracket for the frequency solve", derivative(hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < kMaxBisectionIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (derivative(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double f = 0.5 * (lo + hi);
    if (hi - lo > tol * hi) {
        throw ConvergenceError("frequency bisection did not converge", derivative(f));
    }
    return f;
}

double solve_stationary(double lambda, std::size_t type_index,
                        std::span<const TypeProfile> types, const SystemParams& params,
                        double tol) {
    validate_types(types);
    if (type_index >= types.size()) {
        throw DomainError("type index out of range");
    }
    const auto coeffs = g_coefficients(types, params.iteration_coeff_psi);
    return solve_pooled(lambda, {type_index, type_index}, types, coeffs, params, tol);
}

IroningResult iron(std::span<const double> f_schedule, std::span<const TypeProfile> types,
                   const SystemParams& params, double lambda, double tol) {
    require_aligned(f_schedule.size(), types.size(), "frequency schedule");
    IroningResult result;
    result.f_schedule.assign(f_schedule.begin(), f_schedule.end());
    if (std::is_sorted(f_schedule.begin(), f_schedule.end())) {
        return result;
    }

    const auto coeffs = g_coefficients(types, params.iteration_coeff_psi);
    struct Block {
        IndexRange range;
        double f;
    };
    std::vector<Block> blocks;
    blocks.reserve(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        blocks.push_back({{n, n}, f_schedule[n]});
        while (blocks.size() >= 2 && blocks[blocks.size() - 2].f > blocks.back().f) {
            const IndexRange merged{blocks[blocks.size() - 2].range.first,
                                    blocks.back().range.last};
            blocks.pop_back();
            blocks.back() = {merged, solve_pooled(lambda, merged, types, coeffs, params, tol)};
            ++result.pooling_rounds;
        }
    }
    if (result.pooling_rounds > static_cast<int>(types.size()) - 1) {
        throw ConvergenceError("ironing exceeded M-1 pooling rounds", result.pooling_rounds);
    }
    for (const auto& block : blocks) {
        for (std::size_t n = block.range.first; n <= block.range.last; ++n) {
            result.f_schedule[n] = block.f;
        }
        if (block.range.last > block.range.first) {
            result.pooled.push_back(block.range);
        }
    }
    return result;
}

std::vector<double> iron_monotonicity(std::span<const double> f_schedule,
                                      std::span<const TypeProfile> types,
                                      const SystemParams& params, double lambda, double tol) {
    return iron(f_schedule, types, params, lambda, tol).f_schedule;
}

ContractMenu solve(std::span<const TypeProfile> types, const SystemParams& params, double tol) {
    params.validate();
    validate_types(types);
    if (!(tol > 0.0)) {
        throw DomainError("solver tolerance must be > 0");
    }
    const auto coeffs = g_coefficients(types, params.iteration_coeff_psi);

    // Cheapest monotone menu: every f pinned just above the lowest type's floor.
    const double f_floor = time_coefficient(types.front(), params) / params.time_slack();
    const double g_total = std::accumulate(coeffs.g.begin(), coeffs.g.end(), 0.0);
    const double budget_floor =
        params.population_N * params.energy_weight_mu *
        (params.ecom() + params.capacitance_zeta * types.front().work() * g_total * f_floor * f_floor);
    if (!(budget_floor < params.r_max)) {
        throw BudgetInfeasibleError("reward budget " + std::to_string(params.r_max) +
                                    " cannot cover the cheapest feasible menu (" +
                                    std::to_string(budget_floor) + ")");
    }

    auto budget_at = [&](double lambda, std::vector<double>& f, std::vector<IndexRange>& pooled) {
        f = schedule_at(lambda, types, coeffs, params, tol, &pooled);
        return expected_reward(recover_rewards(f, types, params), types, params);
    };

    ContractMenu menu;
    std::vector<double> f;
    std::vector<IndexRange> pooled;
    double lambda = 0.0;
    double budget = budget_at(0.0, f, pooled);
    if (budget > params.r_max) {
        double lo = 0.0;
        double hi = params.reward_unit_cost_l;
        std::vector<double> f_hi;
        std::vector<IndexRange> pooled_hi;
        double budget_hi = budget_at(hi, f_hi, pooled_hi);
        for (int i = 0; budget_hi > params.r_max; ++i) {
            if (i >= kMaxBisectionIterations) {
                throw ConvergenceError("no budget-feasible multiplier found", budget_hi - params.r_max);
            }
            lo = hi;
            hi *= 2.0;
            budget_hi = budget_at(hi, f_hi, pooled_hi);
        }
        int iterations = 0;
        while (params.r_max - budget_hi > tol * params.r_max) {
            if (++iterations > kMaxBisectionIterations) {
                throw ConvergenceError("budget multiplier bisection did not converge",
                                       params.r_max - budget_hi);
            }
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            std::vector<double> f_mid;
            std::vector<IndexRange> pooled_mid;
            const double budget_mid = budget_at(mid, f_mid, pooled_mid);
            if (budget_mid > params.r_max) {
                lo = mid;
            } else {
                hi = mid;
                budget_hi = budget_mid;
                f_hi = std::move(f_mid);
                pooled_hi = std::move(pooled_mid);
            }
        }
        menu.multiplier_iterations = iterations;
        lambda = hi;
        budget = budget_hi;
        f = std::move(f_hi);
        pooled = std::move(pooled_hi);
    }

    const auto rewards = recover_rewards(f, types, params);
    menu.items.resize(types.size());
    double profit = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        menu.items[n] = {f[n], rewards[n]};
        profit += params.population_N * types[n].probability_p *
                  publisher_profit_one(types[n], menu.items[n], params);
    }
    menu.budget_multiplier_lambda = lambda;
    menu.ironed_segments = std::move(pooled);
    menu.expected_total_reward = budget;
    menu.publisher_profit = profit;
    spdlog::debug("solved menu: M={} lambda={} pooled={} profit={}", types.size(), lambda,
                  menu.ironed_segments.size(), profit);
    return menu;
}

} // namespace flcontract

#include "flcontract/stackelberg.hpp"

#include "flcontract/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace flcontract {

std::string_view to_string(InfoRegime regime) {
    return regime == InfoRegime::symmetric ? "symmetric" : "asymmetric";
}

namespace {

double first_best_cost(const TypeProfile& type, double f, const SystemParams& params) {
    return params.energy_weight_mu * total_iteration_energy(type, {f, 0.0}, params);
}

std::vector<double> first_best_schedule(double lambda, std::span<const TypeProfile> types,
                                        const SystemParams& params, double tol) {
    // With IC dropped each type's reward weight is just p_n psi/theta_n.
    GCoefficients weights;
    weights.g.reserve(types.size());
    for (const auto& t : types) {
        weights.g.push_back(t.probability_p * iteration_factor(t, params));
    }
    std::vector<double> f(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        f[n] = solve_pooled(lambda, {n, n}, types, weights, params, tol);
    }
    return f;
}

double first_best_budget(std::span<const double> f, std::span<const TypeProfile> types,
                         const SystemParams& params) {
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        total += types[n].probability_p * first_best_cost(types[n], f[n], params);
    }
    return params.population_N * total;
}

} // namespace

StackelbergOutcome solve_symmetric(std::span<const TypeProfile> types, const SystemParams& params,
                                   double tol) {
    params.validate();
    validate_types(types);

    double budget_floor = 0.0;
    for (const auto& t : types) {
        budget_floor += t.probability_p * first_best_cost(t, min_feasible_freq(t, params), params);
    }
    budget_floor *= params.population_N;
    if (!(budget_floor < params.r_max)) {
        throw BudgetInfeasibleError("reward budget cannot cover the cheapest first-best allocation");
    }

    double lambda = 0.0;
    auto f = first_best_schedule(0.0, types, params, tol);
    double budget = first_best_budget(f, types, params);
    if (budget > params.r_max) {
        double lo = 0.0;
        double hi = params.reward_unit_cost_l;
        auto f_hi = first_best_schedule(hi, types, params, tol);
        double budget_hi = first_best_budget(f_hi, types, params);
        for (int i = 0; budget_hi > params.r_max; ++i) {
            if (i >= kMaxBisectionIterations) {
                throw ConvergenceError("no budget-feasible multiplier found", budget_hi - params.r_max);
            }
            lo = hi;
            hi *= 2.0;
            f_hi = first_best_schedule(hi, types, params, tol);
            budget_hi = first_best_budget(f_hi, types, params);
        }
        for (int i = 0; params.r_max - budget_hi > tol * params.r_max; ++i) {
            if (i >= kMaxBisectionIterations) {
                throw ConvergenceError("budget multiplier bisection did not converge",
                                       params.r_max - budget_hi);
            }
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            auto f_mid = first_best_schedule(mid, types, params, tol);
            const double budget_mid = first_best_budget(f_mid, types, params);
            if (budget_mid > params.r_max) {
                lo = mid;
            } else {
                hi = mid;
                f_hi = std::move(f_mid);
                budget_hi = budget_mid;
            }
        }
        lambda = hi;
        f = std::move(f_hi);
        budget = budget_hi;
    }

    StackelbergOutcome out;
    out.info_regime = InfoRegime::symmetric;
    out.control = lambda;
    out.per_type_f = f;
    out.participates.assign(types.size(), true);
    out.expected_total_reward = budget;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const ContractItem item{f[n], first_best_cost(types[n], f[n], params)};
        out.per_type_reward.push_back(item.reward_R);
        out.publisher_profit += params.population_N * types[n].probability_p *
                                publisher_profit_one(types[n], item, params);
    }
    return out;
}

double follower_best_response(double price, const TypeProfile& type, const SystemParams& params) {
    if (!(price >= 0.0)) {
        throw DomainError("posted price must be >= 0");
    }
    // argmax_f price*f - mu (psi/theta) zeta c s f^2
    return price / (2.0 * params.energy_weight_mu * iteration_factor(type, params) *
                    params.capacitance_zeta * type.work());
}

StackelbergOutcome evaluate_price(double price, std::span<const TypeProfile> types,
                                  const SystemParams& params) {
    StackelbergOutcome out;
    out.info_regime = InfoRegime::asymmetric;
    out.control = price;
    out.per_type_f.assign(types.size(), 0.0);
    out.per_type_reward.assign(types.size(), 0.0);
    out.participates.assign(types.size(), false);
    double profit = 0.0;
    double budget = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& t = types[n];
        const double f = follower_best_response(price, t, params);
        if (!(f > 0.0)) {
            continue;
        }
        const ContractItem item{f, price * f};
        // Stays out when the deadline cannot be met or the payoff is negative.
        if (!(total_iteration_time(t, item, params) < params.t_max) ||
            owner_utility(t, item, params) < 0.0) {
            continue;
        }
        out.per_type_f[n] = f;
        out.per_type_reward[n] = item.reward_R;
        out.participates[n] = true;
        profit += t.probability_p * publisher_profit_one(t, item, params);
        budget += t.probability_p * item.reward_R;
    }
    out.publisher_profit = params.population_N * profit;
    out.expected_total_reward = params.population_N * budget;
    return out;
}

StackelbergOutcome solve_asymmetric(std::span<const TypeProfile> types, const SystemParams& params) {
    params.validate();
    validate_types(types);

    // Total payout grows with the price, so the budget caps it from above.
    double price_max = params.reward_unit_cost_l;
    for (int i = 0; evaluate_price(price_max, types, params).expected_total_reward <= params.r_max;
         ++i) {
        if (i > 200) {
            throw ConvergenceError("could not bracket the budget-limited price", price_max);
        }
        price_max *= 2.0;
    }
    double lo = 0.0;
    double hi = price_max;
    for (int i = 0; i < kMaxBisectionIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (evaluate_price(mid, types, params).expected_total_reward <= params.r_max) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    price_max = lo;

    auto feasible = [&](const StackelbergOutcome& o) {
        return o.expected_total_reward <= params.r_max;
    };
    auto score = [&](const StackelbergOutcome& o) {
        bool any = std::any_of(o.participates.begin(), o.participates.end(), [](bool b) { return b; });
        return any && feasible(o) ? o.publisher_profit : -std::numeric_limits<double>::infinity();
    };

    const double step = price_max / static_cast<double>(kPriceGridPoints - 1);
    std::size_t best_i = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < kPriceGridPoints; ++i) {
        const double s = score(evaluate_price(step * static_cast<double>(i), types, params));
        if (s > best_score) {
            best_score = s;
            best_i = i;
        }
    }
    if (best_i == 0) {
        throw DomainError("no posted price within the budget induces any participation");
    }

    // Golden-section refinement inside the neighbouring cells; keep the grid
    // point if refinement lands on a participation jump.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = step * static_cast<double>(best_i - 1);
    double b = std::min(price_max, step * static_cast<double>(best_i + 1));
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double s1 = score(evaluate_price(x1, types, params));
    double s2 = score(evaluate_price(x2, types, params));
    for (int i = 0; i < 100 && (b - a) > 1e-12 * b; ++i) {
        if (s1 < s2) {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + inv_phi * (b - a);
            s2 = score(evaluate_price(x2, types, params));
        } else {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - inv_phi * (b - a);
            s1 = score(evaluate_price(x1, types, params));
        }
    }
    const double refined = 0.5 * (a + b);
    auto best = evaluate_price(step * static_cast<double>(best_i), types, params);
    auto candidate = evaluate_price(refined, types, params);
    if (score(candidate) > score(best)) {
        best = std::move(candidate);
    }
    return best;
}

} // namespace flcontract

#pragma once

#include "flcontract/contract_solver.hpp"
#include "flcontract/cost_model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace flcontract {

enum class InfoRegime { symmetric, asymmetric };

std::string_view to_string(InfoRegime regime);

struct StackelbergOutcome {
    InfoRegime info_regime = InfoRegime::symmetric;
    /// 0 marks a type that stays out.
    std::vector<double> per_type_f;
    std::vector<double> per_type_reward;
    std::vector<bool> participates;
    double publisher_profit = 0.0;
    double expected_total_reward = 0.0;
    /// Budget multiplier (symmetric) or posted price per unit of f (asymmetric).
    double control = 0.0;
};

/// Publisher observes every type and pays each exactly its energy cost.
StackelbergOutcome solve_symmetric(std::span<const TypeProfile> types, const SystemParams& params,
                                   double tol = kDefaultSolverTolerance);

/// Interior best response of `type` to a posted price per unit of frequency.
double follower_best_response(double price, const TypeProfile& type, const SystemParams& params);

/// Outcome when the publisher posts one linear `price` and each type best-responds.
StackelbergOutcome evaluate_price(double price, std::span<const TypeProfile> types,
                                  const SystemParams& params);

inline constexpr std::size_t kPriceGridPoints = 4001;

/// Publisher posts one linear price; followers best-respond. Price chosen by
/// grid search plus golden-section refinement around the best grid cell.
StackelbergOutcome solve_asymmetric(std::span<const TypeProfile> types, const SystemParams& params);

} // namespace flcontract

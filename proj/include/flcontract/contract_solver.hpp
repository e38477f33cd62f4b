#pragma once

#include "flcontract/cost_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flcontract {

/// Inclusive range of 0-based menu positions pooled onto one frequency.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;

    bool operator==(const IndexRange&) const = default;
};

struct ContractMenu {
    std::vector<ContractItem> items;
    double budget_multiplier_lambda = 0.0;
    std::vector<IndexRange> ironed_segments;
    /// N * sum_n p_n R_n.
    double expected_total_reward = 0.0;
    /// Expected publisher profit over the whole population.
    double publisher_profit = 0.0;
    int multiplier_iterations = 0;
};

/// Weight of each type's squared frequency in the expected reward bill once
/// rewards are eliminated through the binding IR/LDIC recursion.
struct GCoefficients {
    std::vector<double> g;
};

inline constexpr double kDefaultSolverTolerance = 1e-10;
inline constexpr int kMaxBisectionIterations = 200;

/// Checks the preconditions shared by every solver entry point: non-empty,
/// theta strictly ascending (OrderingError), probabilities positive and
/// summing to one, and one common c*s across types (DomainError).
void validate_types(std::span<const TypeProfile> types);

GCoefficients g_coefficients(std::span<const TypeProfile> types, double psi);

/// Cheapest rewards that keep type 1 at zero utility and every adjacent
/// downward deviation exactly indifferent.
std::vector<double> recover_rewards(std::span<const double> f_schedule,
                                    std::span<const TypeProfile> types,
                                    const SystemParams& params);

/// Expected publisher profit with rewards substituted out.
double reduced_objective(std::span<const double> f_schedule, std::span<const TypeProfile> types,
                         const SystemParams& params);

/// Maximizer over f of the Lagrangian term of a single type.
double solve_stationary(double lambda, std::size_t type_index,
                        std::span<const TypeProfile> types, const SystemParams& params,
                        double tol = kDefaultSolverTolerance);

/// Maximizer of the summed Lagrangian terms of types first..last (inclusive)
/// constrained to share one frequency.
double solve_pooled(double lambda, IndexRange segment, std::span<const TypeProfile> types,
                    const GCoefficients& coeffs, const SystemParams& params,
                    double tol = kDefaultSolverTolerance);

struct IroningResult {
    std::vector<double> f_schedule;
    std::vector<IndexRange> pooled;
    int pooling_rounds = 0;
};

/// Pool-adjacent-violators on a per-type optimum schedule; `f_schedule` must
/// be the unconstrained maximizers at the same `lambda`.
IroningResult iron(std::span<const double> f_schedule, std::span<const TypeProfile> types,
                   const SystemParams& params, double lambda = 0.0,
                   double tol = kDefaultSolverTolerance);

std::vector<double> iron_monotonicity(std::span<const double> f_schedule,
                                      std::span<const TypeProfile> types,
                                      const SystemParams& params, double lambda = 0.0,
                                      double tol = kDefaultSolverTolerance);

/// Optimal screening menu for the given types under the reward budget.
ContractMenu solve(std::span<const TypeProfile> types, const SystemParams& params,
                   double tol = kDefaultSolverTolerance);

} // namespace flcontract

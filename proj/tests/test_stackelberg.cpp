#include "flcontract/errors.hpp"
#include "flcontract/stackelberg.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace flcontract;
using namespace flcontract::testing;

TEST_CASE("symmetric regime pays exactly the energy cost") {
    const auto params = reference_params();
    const auto types = reference_types();
    const auto out = solve_symmetric(types, params);
    CHECK(out.info_regime == InfoRegime::symmetric);
    CHECK(to_string(out.info_regime) == "symmetric");
    for (std::size_t n = 0; n < types.size(); ++n) {
        CHECK(out.participates[n]);
        const ContractItem item{out.per_type_f[n], out.per_type_reward[n]};
        CHECK(std::abs(owner_utility(types[n], item, params)) <= 1e-9);
        CHECK(total_iteration_time(types[n], item, params) < params.t_max);
    }
    CHECK(out.expected_total_reward <= params.r_max + 1e-6);
    // Reference budget is slack.
    CHECK(out.control == 0.0);
}

TEST_CASE("single type: symmetric equals the contract") {
    const auto params = reference_params();
    const auto types = reference_types(1);
    const auto sym = solve_symmetric(types, params);
    const auto menu = solve(types, params);
    CHECK(sym.publisher_profit == doctest::Approx(menu.publisher_profit).epsilon(1e-12));
    CHECK(sym.per_type_f[0] == doctest::Approx(menu.items[0].cpu_freq_f).epsilon(1e-12));
}

TEST_CASE("symmetric regime honours a binding budget") {
    auto params = reference_params();
    const auto types = reference_types();
    const double unconstrained = solve_symmetric(types, params).expected_total_reward;
    params.r_max = 0.5 * (unconstrained + budget_floor(types, params));
    const auto out = solve_symmetric(types, params);
    CHECK(out.control > 0.0);
    CHECK(out.expected_total_reward <= params.r_max);
    CHECK(out.expected_total_reward >= params.r_max * (1.0 - 1e-8));

    // Each type at its own deadline-limited frequency; below the contract floor.
    double floor = 0.0;
    for (const auto& t : types) {
        const double f = min_feasible_freq(t, params);
        floor += t.probability_p * params.energy_weight_mu * total_iteration_energy(t, {f, 0.0}, params);
    }
    floor *= params.population_N;
    CHECK(floor < budget_floor(types, params));
    params.r_max = 1.01 * floor;
    CHECK_NOTHROW(solve_symmetric(types, params));
    params.r_max = 0.99 * floor;
    CHECK_THROWS_AS(solve_symmetric(types, params), BudgetInfeasibleError);
}

TEST_CASE("follower best response") {
    const auto params = reference_params();
    const auto types = reference_types();
    for (double price : {0.5, 3.0, 40.0}) {
        double previous = 0.0;
        for (const auto& t : types) {
            const double f = follower_best_response(price, t, params);
            const double k = iteration_factor(t, params);
            CHECK(f == doctest::Approx(price / (2.0 * params.energy_weight_mu * k *
                                                params.capacitance_zeta * t.work())));
            const double residual =
                price - 2.0 * params.energy_weight_mu * k * params.capacitance_zeta * t.work() * f;
            CHECK(std::abs(residual) <= 1e-8);
            const double numeric = golden_max(
                [&](double x) { return owner_utility(t, {x, price * x}, params); }, 0.0, 10.0 * f + 1.0);
            CHECK(numeric == doctest::Approx(f).epsilon(1e-6));
            // Higher quality means cheaper training, so more effort.
            CHECK(f > previous);
            previous = f;
        }
    }
    CHECK(follower_best_response(0.0, types[0], params) == 0.0);
    CHECK_THROWS_AS(follower_best_response(-1.0, types[0], params), DomainError);
}

TEST_CASE("posted price evaluation") {
    const auto params = reference_params();
    const auto types = reference_types();
    const auto none = evaluate_price(0.0, types, params);
    for (bool p : none.participates) {
        CHECK_FALSE(p);
    }
    CHECK(none.publisher_profit == 0.0);

    const auto out = solve_asymmetric(types, params);
    CHECK(out.info_regime == InfoRegime::asymmetric);
    CHECK(out.expected_total_reward <= params.r_max);
    for (std::size_t n = 0; n < types.size(); ++n) {
        if (!out.participates[n]) {
            CHECK(out.per_type_f[n] == 0.0);
            continue;
        }
        const ContractItem item{out.per_type_f[n], out.per_type_reward[n]};
        CHECK(owner_utility(types[n], item, params) >= 0.0);
        CHECK(item.reward_R == doctest::Approx(out.control * item.cpu_freq_f));
    }
    // Participation is upward closed in quality.
    for (std::size_t n = 1; n < types.size(); ++n) {
        CHECK((!out.participates[n - 1] || out.participates[n]));
    }
}

TEST_CASE("mechanism ordering across type counts") {
    const auto params = reference_params();
    for (std::size_t m = 2; m <= 10; ++m) {
        CAPTURE(m);
        const auto types = reference_types(m);
        const double contract = solve(types, params).publisher_profit;
        const double sym = solve_symmetric(types, params).publisher_profit;
        const double asym = solve_asymmetric(types, params).publisher_profit;
        CHECK(sym >= contract);
        CHECK(contract > asym);
        CHECK(sym > asym);
    }
}

TEST_CASE("no price within budget attracts anyone") {
    auto params = reference_params();
    params.ecom_override = 1000.0;
    params.r_max = 100.0;
    CHECK_THROWS_AS(solve_asymmetric(reference_types(), params), DomainError);
}

#include "flcontract/errors.hpp"
#include "flcontract/feasibility.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace flcontract;
using namespace flcontract::testing;

TEST_CASE("individual rationality") {
    const auto params = reference_params();
    const auto types = reference_types();
    const auto menu = solve(types, params);
    for (bool ok : check_ir(menu.items, types, params)) {
        CHECK(ok);
    }

    std::vector<ContractItem> unpaid = menu.items;
    for (auto& item : unpaid) {
        item.reward_R = 0.0;
    }
    for (bool ok : check_ir(unpaid, types, params)) {
        CHECK_FALSE(ok);
    }

    SUBCASE("hand example") {
        const std::vector<TypeProfile> pair{TypeProfile{1, std::exp(-1.0), 1.0, 0.5, 1.0, 1.0},
                                            TypeProfile{2, std::exp(-0.5), 2.0, 0.5, 1.0, 1.0}};
        SystemParams p;
        p.capacitance_zeta = 1.0;
        p.ecom_override = 0.0;
        const std::vector<ContractItem> items{{1.0, 1.0}, {2.0, 2.5}};
        const auto table = utility_matrix(items, pair, p);
        CHECK(table[0][0] == doctest::Approx(0.0));
        CHECK(table[1][1] == doctest::Approx(0.5));
        const auto verdicts = check_ir(items, pair, p);
        CHECK(verdicts[0]);
        CHECK(verdicts[1]);
    }

    CHECK_THROWS_AS(check_ir(std::span(menu.items).first(3), types, params), AlignmentError);
}

TEST_CASE("incentive compatibility") {
    const auto params = reference_params();
    const auto types = reference_types();
    const auto menu = solve(types, params);
    const auto verdicts = check_ic(menu.items, types, params);
    const auto table = utility_matrix(menu.items, types, params);
    for (std::size_t n = 0; n < types.size(); ++n) {
        for (std::size_t m = 0; m < types.size(); ++m) {
            CHECK(verdicts[n][m]);
        }
        if (n > 0) {
            CHECK(std::abs(table[n][n] - table[n][n - 1]) <= 1e-9);
        }
    }

    auto swapped = menu.items;
    std::swap(swapped[3], swapped[6]);
    bool any_false = false;
    for (const auto& row : check_ic(swapped, types, params)) {
        for (bool ok : row) {
            any_false = any_false || !ok;
        }
    }
    CHECK(any_false);

    const auto one = reference_types(1);
    const auto single = solve(one, params);
    CHECK(check_ic(single.items, one, params).at(0).at(0));

    CHECK_THROWS_AS(check_ic(std::span(menu.items).first(2), types, params), AlignmentError);
}

TEST_CASE("publisher total profit") {
    auto params = reference_params();
    const auto types = reference_types();
    const auto menu = solve(types, params);
    CHECK(publisher_total_profit(menu.items, types, params) ==
          doctest::Approx(reduced_objective(frequencies(menu), types, params)).epsilon(1e-13));

    auto shifted = menu.items;
    const double delta = 3.25;
    for (auto& item : shifted) {
        item.reward_R += delta;
    }
    CHECK(publisher_total_profit(shifted, types, params) - publisher_total_profit(menu.items, types, params) ==
          doctest::Approx(-params.reward_unit_cost_l * params.population_N * delta));

    params.satisfaction_w = 0.0;
    auto unpaid = menu.items;
    for (auto& item : unpaid) {
        item.reward_R = 0.0;
    }
    CHECK(publisher_total_profit(unpaid, types, params) == 0.0);

    std::vector<ContractItem> late = menu.items;
    late[0].cpu_freq_f = min_feasible_freq(types[0], params) * 0.5;
    CHECK_THROWS_AS(publisher_total_profit(late, types, reference_params()), InfeasibleTimeError);
}

TEST_CASE("menu report") {
    const auto params = reference_params();
    const auto types = reference_types();
    auto menu = solve(types, params);
    const auto good = check_menu(menu.items, types, params);
    CHECK(good.all_ok());
    CHECK(good.worst_time_margin > 0.0);
    CHECK(describe(good).find("overall: PASS") != std::string::npos);

    auto broken = menu.items;
    broken[0].reward_R -= 1.0;
    const auto bad_ir = check_menu(broken, types, params);
    CHECK_FALSE(bad_ir.ir_ok);
    CHECK(bad_ir.ir_worst_type == 0);
    CHECK(bad_ir.ir_worst_violation == doctest::Approx(1.0));

    broken = menu.items;
    broken[5].reward_R += 1e4;
    const auto over = check_menu(broken, types, params);
    CHECK_FALSE(over.budget_ok);
    CHECK_FALSE(over.ic_ok);

    broken = menu.items;
    std::swap(broken[2], broken[3]);
    CHECK_FALSE(check_menu(broken, types, params).monotone_ok);
}

TEST_CASE("property: IC with zero tolerance implies monotone menus") {
    Rng rng(5);
    const auto params = reference_params();
    int accepted = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const std::size_t m = rng.index(2, 4);
        const auto types = reference_types(m);
        std::vector<ContractItem> items(m);
        for (auto& item : items) {
            item = {rng.uniform(0.3, 2.0), rng.uniform(20.0, 80.0)};
        }
        bool ic = true;
        for (const auto& row : check_ic(items, types, params, 0.0)) {
            for (bool ok : row) {
                ic = ic && ok;
            }
        }
        if (!ic) {
            continue;
        }
        ++accepted;
        for (std::size_t n = 1; n < m; ++n) {
            CHECK(items[n].cpu_freq_f >= items[n - 1].cpu_freq_f);
            CHECK(items[n].reward_R >= items[n - 1].reward_R);
        }
    }
    CHECK(accepted > 50);
}

TEST_CASE("property: profit falls with rewards and rises with type") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(rng, 2, 6);
        const auto menu = solve(inst.types, inst.params);
        const double base = publisher_total_profit(menu.items, inst.types, inst.params);
        for (std::size_t n = 0; n < inst.types.size(); ++n) {
            auto items = menu.items;
            items[n].reward_R += 1e-3;
            CHECK(publisher_total_profit(items, inst.types, inst.params) < base);
            auto types = inst.types;
            types[n].theta *= 1.0 + 1e-6;
            CHECK(publisher_total_profit(menu.items, types, inst.params) > base);
        }
    }
}

TEST_CASE("brute-force oracle") {
    auto params = reference_params();

    SUBCASE("guards") {
        CHECK_THROWS_AS(brute_force_solve(reference_types(5), params, 60), DomainError);
        CHECK_THROWS_AS(brute_force_solve(reference_types(2), params, 10), DomainError);
    }

    SUBCASE("single type matches a 1-D grid argmax") {
        const auto types = reference_types(1);
        const auto grid = oracle_grid(types, params, 200);
        double best = -1e300;
        double best_f = 0.0;
        for (double f : grid) {
            const double reward = total_iteration_energy(types[0], {f, 0.0}, params);
            const double profit = params.population_N * publisher_profit_one(types[0], {f, reward}, params);
            if (profit > best) {
                best = profit;
                best_f = f;
            }
        }
        const auto oracle = brute_force_solve(types, params, 200);
        CHECK(oracle.items[0].cpu_freq_f == best_f);
        CHECK(oracle.publisher_profit == doctest::Approx(best).epsilon(1e-12));
    }

    SUBCASE("inverted pair pools in both solver and oracle") {
        const auto types = build_types(2, 0.2, 0.9, 1.0, 5.0, 20.0, std::vector<double>{0.9, 0.1});
        const auto menu = solve(types, params);
        const auto oracle = brute_force_solve(types, params, 200);
        REQUIRE(menu.ironed_segments.size() == 1);
        CHECK(oracle.items[0].cpu_freq_f == oracle.items[1].cpu_freq_f);
        CHECK(oracle.ironed_segments.size() == 1);
        CHECK(oracle.publisher_profit <= menu.publisher_profit + 1e-9);
    }

    SUBCASE("three reference-style types within grid resolution") {
        const auto types = reference_types(3);
        const auto menu = solve(types, params);
        const auto oracle = brute_force_solve(types, params, 200);
        const auto grid = oracle_grid(types, params, 200);
        const double bound = grid_resolution_bound(frequencies(menu), types, params, grid);
        const double gap = menu.publisher_profit - oracle.publisher_profit;
        CHECK(gap >= -1e-9);
        CHECK(gap <= std::max(1e-9, bound));
    }

    SUBCASE("oracle output is self-consistent") {
        Rng rng(31);
        for (int trial = 0; trial < 6; ++trial) {
            const auto inst = random_instance(rng, 1, 3);
            const auto oracle = brute_force_solve(inst.types, inst.params, 60);
            const auto report = check_menu(oracle.items, inst.types, inst.params);
            CHECK(report.ir_ok);
            CHECK(report.ic_ok);
            CHECK(report.budget_ok);
            CHECK(report.monotone_ok);
        }
    }
}

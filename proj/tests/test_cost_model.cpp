#include "flcontract/cost_model.hpp"
#include "flcontract/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace flcontract;
using flcontract::testing::Rng;

namespace {

// psi/theta = 1 with the reference c=5, s=20.
TypeProfile unit_type() { return TypeProfile{1, std::exp(-1.0), 1.0, 1.0, 5.0, 20.0}; }

SystemParams hand_params() {
    SystemParams p;
    p.capacitance_zeta = 2.0;
    p.iteration_coeff_psi = 1.0;
    return p;
}

} // namespace

TEST_CASE("local iterations") {
    CHECK(local_iterations(1.0 / std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    // ln(1/0.92) from an independent calculator
    CHECK(local_iterations(0.92) == doctest::Approx(0.083381608939051).epsilon(1e-13));
    CHECK(local_iterations(1.0 - 1e-9) > 0.0);
    CHECK(local_iterations(1.0 - 1e-9) < 1e-8);
    CHECK(local_iterations(0.5) > local_iterations(0.6));

    CHECK_THROWS_AS(local_iterations(0.0), DomainError);
    CHECK_THROWS_AS(local_iterations(1.0), DomainError);
    CHECK_THROWS_AS(local_iterations(-0.2), DomainError);
    CHECK_THROWS_AS(local_iterations(std::nan("")), DomainError);
}

TEST_CASE("type from quality") {
    CHECK(type_from_quality(1.0 / std::numbers::e, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(type_from_quality(0.92, 1.0) == doctest::Approx(11.99305233760798).epsilon(1e-13));
    CHECK(type_from_quality(0.3, 2.6) == doctest::Approx(2.0 * type_from_quality(0.3, 1.3)));
    CHECK(type_from_quality(0.4, 1.0) < type_from_quality(0.41, 1.0));
    CHECK_THROWS_AS(type_from_quality(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(type_from_quality(1.5, 1.0), DomainError);
}

TEST_CASE("computation time and energy") {
    CHECK(computation_time(5, 20, 1) == 100.0);
    CHECK(computation_time(5, 20, 100) == 1.0);
    CHECK(computation_time(5, 20, 3.0) == doctest::Approx(2.0 * computation_time(5, 20, 6.0)));
    CHECK_THROWS_AS(computation_time(5, 20, 0.0), DomainError);
    CHECK_THROWS_AS(computation_time(-5, 20, 1.0), DomainError);

    CHECK(computation_energy(2, 5, 20, 1) == 200.0);
    CHECK(computation_energy(2, 5, 20, 1.4) ==
          doctest::Approx(computation_energy(2, 5, 20, 0.7) * 4.0));
    CHECK(computation_energy(1, 1, 1, 1) == 1.0);
    CHECK_THROWS_AS(computation_energy(0, 5, 20, 1), DomainError);
}

TEST_CASE("transmission rate, time and energy") {
    const double snr = std::numbers::e - 1.0;
    CHECK(transmission_rate(1.0, snr, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transmission_rate(2.0, snr, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(transmission_rate(1.0, 1.0, 2.0, 1.0) > transmission_rate(1.0, 1.0, 1.5, 1.0));
    CHECK_THROWS_AS(transmission_rate(1.0, 1.0, 0.0, 1.0), DomainError);

    CHECK(transmission_time(5.0, 1.0) == 5.0);
    CHECK(communication_energy(5.0, 1.0, 4.0) == 20.0);
    CHECK(communication_energy(3.3, 1.7, 0.9) == doctest::Approx(transmission_time(3.3, 1.7) * 0.9));
    CHECK_THROWS_AS(transmission_time(0.0, 1.0), DomainError);

    SystemParams params;
    CHECK(params.tcom() == 10.0);
    CHECK(params.ecom() == 20.0);

    params.tcom_override.reset();
    params.ecom_override.reset();
    params.update_size_sigma = 5.0;
    params.tx_power_rho = 4.0;
    params.noise_N0 = 4.0 / (std::numbers::e - 1.0); // rate = ln(e) = 1
    CHECK(params.tcom() == doctest::Approx(5.0));
    CHECK(params.ecom() == doctest::Approx(20.0));
}

TEST_CASE("system params validation") {
    SystemParams params;
    CHECK_NOTHROW(params.validate());
    params.t_max = 10.0;
    CHECK_THROWS_AS(params.validate(), DomainError);
    params.t_max = 600.0;
    params.r_max = 0.0;
    CHECK_THROWS_AS(params.validate(), DomainError);
    params.r_max = 1.0;
    params.tcom_override = -1.0;
    CHECK_THROWS_AS(params.validate(), DomainError);
}

TEST_CASE("total iteration time and energy") {
    const auto params = hand_params();
    const auto type = unit_type();
    CHECK(total_iteration_time(type, {1.0, 0.0}, params) == doctest::Approx(110.0));
    CHECK(total_iteration_time(type, {1e12, 0.0}, params) == doctest::Approx(10.0));
    CHECK(total_iteration_energy(type, {1.0, 0.0}, params) == doctest::Approx(220.0));
    CHECK(total_iteration_energy(type, {1.1, 0.0}, params) >
          total_iteration_energy(type, {1.0, 0.0}, params));

    auto best = type;
    best.theta = type_from_quality(1.0 - 1e-12, params.iteration_coeff_psi);
    CHECK(total_iteration_energy(best, {1.0, 0.0}, params) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("publisher profit for one owner") {
    SystemParams params;
    params.satisfaction_w = 1.0;
    params.reward_unit_cost_l = 1.0;
    auto type = unit_type();
    // T_t = 100/f + 10; choose f so that t_max - T_t = e.
    const double f = 100.0 / (params.t_max - 10.0 - std::numbers::e);
    CHECK(publisher_profit_one(type, {f, 0.0}, params) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(publisher_profit_one(type, {f, 3.0}, params) == doctest::Approx(-2.0).epsilon(1e-12));

    CHECK_THROWS_AS(publisher_profit_one(type, {100.0 / 590.0, 0.0}, params), InfeasibleTimeError);
    CHECK_THROWS_AS(publisher_profit_one(type, {0.05, 0.0}, params), InfeasibleTimeError);
}

TEST_CASE("owner utility") {
    const auto params = hand_params();
    const auto type = unit_type();
    CHECK(owner_utility(type, {1.0, 220.0}, params) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(owner_utility(type, {1.0, 0.0}, params) < 0.0);
    auto better = type;
    better.theta = 2.0;
    CHECK(owner_utility(better, {1.0, 220.0}, params) > owner_utility(type, {1.0, 220.0}, params));
}

TEST_CASE("property: psi/theta round trip equals local iterations") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double eps = rng.uniform(1e-6, 1.0 - 1e-6);
        const double psi = rng.uniform(0.1, 10.0);
        const double ratio = psi / type_from_quality(eps, psi);
        CHECK(std::abs(ratio - local_iterations(eps)) <= 1e-12 * std::max(1.0, local_iterations(eps)));
    }
}

TEST_CASE("property: formulas depend on psi and theta only through their ratio") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        SystemParams params;
        params.iteration_coeff_psi = rng.uniform(0.2, 3.0);
        params.capacitance_zeta = rng.uniform(0.05, 2.0);
        const double eps = rng.uniform(0.2, 0.95);
        const auto type = make_type(1, eps, params.iteration_coeff_psi, 1.0, 5.0, 20.0);
        const double floor = min_feasible_freq(type, params);
        const ContractItem item{floor * rng.uniform(1.01, 5.0), rng.uniform(0.0, 200.0)};

        const double scale = rng.uniform(0.1, 10.0);
        auto scaled_params = params;
        scaled_params.iteration_coeff_psi *= scale;
        auto scaled_type = type;
        scaled_type.theta *= scale;

        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
        CHECK(close(total_iteration_time(type, item, params),
                    total_iteration_time(scaled_type, item, scaled_params)));
        CHECK(close(total_iteration_energy(type, item, params),
                    total_iteration_energy(scaled_type, item, scaled_params)));
        CHECK(close(owner_utility(type, item, params), owner_utility(scaled_type, item, scaled_params)));
        CHECK(close(publisher_profit_one(type, item, params),
                    publisher_profit_one(scaled_type, item, scaled_params)));
    }
}

TEST_CASE("property: publisher profit increases in theta, epsilon and f; utility falls in f") {
    const SystemParams params;
    for (double eps = 0.2; eps < 0.95; eps += 0.05) {
        const auto type = make_type(1, eps, params.iteration_coeff_psi, 1.0, 5.0, 20.0);
        const double floor = min_feasible_freq(type, params);
        for (double mult = 1.05; mult < 8.0; mult *= 1.3) {
            const ContractItem item{floor * mult, 50.0};
            const double base = publisher_profit_one(type, item, params);

            auto up_theta = type;
            up_theta.theta *= 1.0 + 1e-6;
            CHECK(publisher_profit_one(up_theta, item, params) > base);

            const auto up_eps = make_type(1, eps + 1e-6, params.iteration_coeff_psi, 1.0, 5.0, 20.0);
            CHECK(publisher_profit_one(up_eps, item, params) > base);

            const ContractItem faster{item.cpu_freq_f * (1.0 + 1e-6), item.reward_R};
            CHECK(publisher_profit_one(type, faster, params) > base);
            CHECK(owner_utility(type, faster, params) < owner_utility(type, item, params));
        }
    }
}

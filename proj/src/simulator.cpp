#include "flcontract/simulator.hpp"

#include "flcontract/errors.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>

namespace flcontract {

std::size_t ScenarioConfig::owner_count() const {
    if (owner_count_N) {
        return *owner_count_N;
    }
    return static_cast<std::size_t>(std::llround(params.population_N));
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (type_count_M < 1) {
        fail("type_count must be >= 1");
    }
    if (!(accuracy_lo > 0.0 && accuracy_lo < 1.0 && accuracy_hi > 0.0 && accuracy_hi < 1.0)) {
        fail("accuracy_range bounds must lie in (0,1)");
    }
    if (!(accuracy_lo < accuracy_hi)) {
        fail("accuracy_range requires lo < hi");
    }
    if (!type_probabilities.empty()) {
        if (type_probabilities.size() != type_count_M) {
            fail(fmt::format("type_probabilities has {} entries but type_count is {}",
                             type_probabilities.size(), type_count_M));
        }
        double sum = 0.0;
        for (double p : type_probabilities) {
            if (!(p > 0.0 && p <= 1.0)) {
                fail("type_probabilities entries must lie in (0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            fail(fmt::format("type_probabilities sum to {:.17g}, expected 1", sum));
        }
    }
    if (!(cpu_cycles_c > 0.0) || !(samples_s > 0.0)) {
        fail("cpu_cycles and samples must be > 0");
    }
    if (!(solver_tolerance > 0.0 && solver_tolerance < 1e-3)) {
        fail("solver tolerance must lie in (0, 1e-3)");
    }
    for (std::size_t t : utility_types) {
        if (t < 1) {
            fail("utility_types entries are 1-based");
        }
    }
    try {
        params.validate();
    } catch (const DomainError& e) {
        fail(std::string("params: ") + e.what());
    }
    if (accuracy_upper_limits) {
        const auto& limits = *accuracy_upper_limits;
        if (limits.empty()) {
            fail("sweep.accuracy_upper_limits must not be empty");
        }
        for (std::size_t i = 0; i < limits.size(); ++i) {
            if (!(limits[i] > accuracy_lo && limits[i] < 1.0)) {
                fail("sweep.accuracy_upper_limits entries must lie in (accuracy lo, 1)");
            }
            if (i > 0 && limits[i] > limits[i - 1]) {
                fail("sweep.accuracy_upper_limits must be descending");
            }
        }
    }
    if (type_counts) {
        const auto& counts = *type_counts;
        if (counts.empty()) {
            fail("sweep.type_counts must not be empty");
        }
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] < 2) {
                fail("sweep.type_counts entries must be >= 2");
            }
            if (i > 0 && counts[i] <= counts[i - 1]) {
                fail("sweep.type_counts must be strictly ascending");
            }
        }
    }
    if (accuracy_upper_limits && type_counts) {
        fail("sweep may hold accuracy_upper_limits or type_counts, not both");
    }
}

bool ScenarioReport::selection_ok() const {
    for (std::size_t n = 0; n < per_type_selected_index.size(); ++n) {
        if (per_type_selected_index[n] != n) {
            return false;
        }
    }
    return true;
}

std::vector<TypeProfile> build_types(std::size_t type_count, double accuracy_lo, double accuracy_hi,
                                     double psi, double cpu_cycles, double samples,
                                     std::span<const double> probabilities) {
    if (type_count < 1) {
        throw DomainError("type count must be >= 1");
    }
    if (!(accuracy_lo > 0.0 && accuracy_hi < 1.0 && accuracy_lo < accuracy_hi)) {
        throw DomainError(
            fmt::format("accuracy range [{}, {}] must satisfy 0 < lo < hi < 1", accuracy_lo, accuracy_hi));
    }
    if (!probabilities.empty() && probabilities.size() != type_count) {
        throw DomainError("probability list does not match the type count");
    }
    std::vector<TypeProfile> types;
    types.reserve(type_count);
    for (std::size_t m = 0; m < type_count; ++m) {
        const double eps =
            type_count == 1
                ? accuracy_lo
                : accuracy_lo + (accuracy_hi - accuracy_lo) * static_cast<double>(m) /
                                    static_cast<double>(type_count - 1);
        const double p = probabilities.empty() ? 1.0 / static_cast<double>(type_count)
                                               : probabilities[m];
        types.push_back(make_type(m + 1, eps, psi, p, cpu_cycles, samples));
        if (m > 0 && !(types[m - 1].theta < types[m].theta)) {
            throw OrderingError("accuracy grid too fine to separate adjacent types");
        }
    }
    return types;
}

std::vector<TypeProfile> build_types(const ScenarioConfig& config) {
    return build_types(config.type_count_M, config.accuracy_lo, config.accuracy_hi,
                       config.params.iteration_coeff_psi, config.cpu_cycles_c, config.samples_s,
                       config.type_probabilities);
}

std::size_t owner_select_item(std::span<const ContractItem> items, const TypeProfile& type,
                              const SystemParams& params) {
    if (items.empty()) {
        throw DomainError("empty menu");
    }
    std::vector<double> utilities(items.size());
    for (std::size_t m = 0; m < items.size(); ++m) {
        utilities[m] = owner_utility(type, items[m], params);
    }
    const double best = *std::max_element(utilities.begin(), utilities.end());
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    for (std::size_t m = items.size(); m-- > 0;) {
        if (utilities[m] >= best - slack) {
            return m;
        }
    }
    return 0;
}

std::vector<std::size_t> sample_population(std::span<const TypeProfile> types, std::size_t owners,
                                           SamplingMode mode, std::uint64_t seed) {
    std::vector<std::size_t> counts(types.size(), 0);
    if (owners == 0 || types.empty()) {
        return counts;
    }
    if (mode == SamplingMode::quota) {
        std::vector<double> remainder(types.size());
        std::size_t assigned = 0;
        for (std::size_t n = 0; n < types.size(); ++n) {
            const double share = types[n].probability_p * static_cast<double>(owners);
            counts[n] = static_cast<std::size_t>(std::floor(share + 1e-9));
            remainder[n] = share - static_cast<double>(counts[n]);
            assigned += counts[n];
        }
        std::vector<std::size_t> order(types.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
        for (std::size_t i = 0; assigned < owners; i = (i + 1) % order.size()) {
            ++counts[order[i]];
            ++assigned;
        }
        return counts;
    }

    // Inverse-CDF draw from raw engine output; std distributions are not
    // reproducible across standard libraries.
    std::vector<double> cdf(types.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        acc += types[n].probability_p;
        cdf[n] = acc;
    }
    std::mt19937_64 engine(seed);
    for (std::size_t i = 0; i < owners; ++i) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t n = std::min<std::size_t>(it - cdf.begin(), types.size() - 1);
        ++counts[n];
    }
    return counts;
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
    config.validate();
    ScenarioReport report;
    report.types = build_types(config);
    report.menu_params = config.params;
    const auto& types = report.types;
    const auto& params = config.params;

    report.menu = solve(types, params, config.solver_tolerance);
    report.feasibility = check_menu(report.menu.items, types, params);
    report.utility_curves = utility_matrix(report.menu.items, types, params);
    report.expected_profit = report.menu.publisher_profit;

    report.per_type_selected_index.resize(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        auto sel = owner_select_item(report.menu.items, types[n], params);
        // Pooled types share one bundle; picking an identical copy is the designed choice.
        const auto& own = report.menu.items[n];
        const auto& picked = report.menu.items[sel];
        if (picked.cpu_freq_f == own.cpu_freq_f && picked.reward_R == own.reward_R) {
            sel = n;
        }
        report.per_type_selected_index[n] = sel;
    }

    report.owners_per_type =
        sample_population(types, config.owner_count(), config.sampling, config.seed);
    double realized = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        if (report.owners_per_type[n] == 0) {
            continue;
        }
        const auto& item = report.menu.items[report.per_type_selected_index[n]];
        realized += static_cast<double>(report.owners_per_type[n]) *
                    publisher_profit_one(types[n], item, params);
    }
    report.realized_profit = realized;

    report.symmetric = solve_symmetric(types, params, config.solver_tolerance);
    report.asymmetric = solve_asymmetric(types, params);
    spdlog::info("scenario M={} profit={:.12g} realized={:.12g} feasible={}", types.size(),
                 report.expected_profit, report.realized_profit, report.all_ok());
    return report;
}

std::vector<AccuracySweepRow> accuracy_sweep(const ScenarioConfig& config,
                                             std::span<const double> upper_limits) {
    std::vector<std::future<AccuracySweepRow>> jobs;
    jobs.reserve(upper_limits.size());
    for (double limit : upper_limits) {
        if (!(limit > config.accuracy_lo && limit < 1.0)) {
            throw ConfigError(fmt::format("accuracy upper limit {} outside (lo, 1)", limit));
        }
        ScenarioConfig row = config;
        row.accuracy_hi = limit;
        row.accuracy_upper_limits.reset();
        row.type_counts.reset();
        jobs.push_back(std::async(std::launch::async, [row, limit] {
            const auto report = run_scenario(row);
            return AccuracySweepRow{limit, report.expected_profit, report.realized_profit,
                                    report.all_ok()};
        }));
    }
    std::vector<AccuracySweepRow> rows;
    rows.reserve(jobs.size());
    for (auto& job : jobs) {
        rows.push_back(job.get());
    }
    return rows;
}

std::vector<TypeCountSweepRow> type_count_sweep(const ScenarioConfig& config,
                                                std::span<const std::size_t> type_counts) {
    std::vector<std::future<TypeCountSweepRow>> jobs;
    jobs.reserve(type_counts.size());
    for (std::size_t count : type_counts) {
        ScenarioConfig row = config;
        row.type_count_M = count;
        row.type_probabilities.clear();
        row.accuracy_upper_limits.reset();
        row.type_counts.reset();
        jobs.push_back(std::async(std::launch::async, [row, count] {
            const auto report = run_scenario(row);
            return TypeCountSweepRow{count, report.expected_profit,
                                     report.symmetric.publisher_profit,
                                     report.asymmetric.publisher_profit, report.all_ok()};
        }));
    }
    std::vector<TypeCountSweepRow> rows;
    rows.reserve(jobs.size());
    for (auto& job : jobs) {
        rows.push_back(job.get());
    }
    return rows;
}

} // namespace flcontract

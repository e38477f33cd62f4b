#include "flcontract/config.hpp"

#include "flcontract/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace flcontract {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::string& where,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(fmt::format("unknown field '{}{}'", where, key));
        }
    }
}

const json& require_object(const json& value, const std::string& path) {
    if (!value.is_object()) {
        throw ConfigError(fmt::format("field '{}' must be an object", path));
    }
    return value;
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw ConfigError(fmt::format("field '{}' must be a number", path));
    }
    return value.get<double>();
}

std::uint64_t as_unsigned(const json& value, const std::string& path) {
    if (!value.is_number_unsigned()) {
        throw ConfigError(fmt::format("field '{}' must be a non-negative integer", path));
    }
    return value.get<std::uint64_t>();
}

template <typename T, typename Convert>
std::vector<T> as_array(const json& value, const std::string& path, Convert convert) {
    if (!value.is_array()) {
        throw ConfigError(fmt::format("field '{}' must be an array", path));
    }
    std::vector<T> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(convert(value[i], fmt::format("{}[{}]", path, i)));
    }
    return out;
}

void read_number(const json& object, const char* key, const std::string& prefix, double& target) {
    if (object.contains(key)) {
        target = as_number(object.at(key), prefix + key);
    }
}

void read_override(const json& object, const char* key, const std::string& prefix,
                   std::optional<double>& target) {
    if (!object.contains(key)) {
        return;
    }
    const auto& value = object.at(key);
    if (value.is_null()) {
        target.reset();
    } else {
        target = as_number(value, prefix + key);
    }
}

SystemParams parse_params(const json& object) {
    const std::string p = "params.";
    reject_unknown(object, p,
                   {"bandwidth", "tx_power", "channel_gain", "noise", "update_size", "capacitance",
                    "iteration_coeff", "satisfaction_w", "reward_unit_cost", "energy_weight",
                    "t_max", "r_max", "population", "tcom_override", "ecom_override"});
    SystemParams params;
    read_number(object, "bandwidth", p, params.bandwidth_B);
    read_number(object, "tx_power", p, params.tx_power_rho);
    read_number(object, "channel_gain", p, params.channel_gain_h);
    read_number(object, "noise", p, params.noise_N0);
    read_number(object, "update_size", p, params.update_size_sigma);
    read_number(object, "capacitance", p, params.capacitance_zeta);
    read_number(object, "iteration_coeff", p, params.iteration_coeff_psi);
    read_number(object, "satisfaction_w", p, params.satisfaction_w);
    read_number(object, "reward_unit_cost", p, params.reward_unit_cost_l);
    read_number(object, "energy_weight", p, params.energy_weight_mu);
    read_number(object, "t_max", p, params.t_max);
    read_number(object, "r_max", p, params.r_max);
    read_number(object, "population", p, params.population_N);
    read_override(object, "tcom_override", p, params.tcom_override);
    read_override(object, "ecom_override", p, params.ecom_override);
    return params;
}

std::string position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return fmt::format("line {}, column {}", line, column);
}

json null_or(const auto& optional) {
    return optional ? json(*optional) : json(nullptr);
}

} // namespace

ScenarioConfig parse_config_text(std::string_view text) {
    json doc;
    const bool blank = std::all_of(text.begin(), text.end(),
                                   [](char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; });
    if (blank) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(fmt::format("malformed JSON at {}: {}", position_of(text, e.byte),
                                          e.what()));
        }
    }
    require_object(doc, "<root>");
    reject_unknown(doc, "",
                   {"type_count", "accuracy_range", "type_probabilities", "cpu_cycles", "samples",
                    "owner_count", "seed", "sampling", "utility_types", "solver", "params",
                    "sweep"});

    ScenarioConfig config;
    if (doc.contains("type_count")) {
        config.type_count_M = as_unsigned(doc.at("type_count"), "type_count");
    }
    if (doc.contains("accuracy_range")) {
        const auto range = as_array<double>(doc.at("accuracy_range"), "accuracy_range", as_number);
        if (range.size() != 2) {
            throw ConfigError("field 'accuracy_range' must hold exactly [lo, hi]");
        }
        config.accuracy_lo = range[0];
        config.accuracy_hi = range[1];
    }
    if (doc.contains("type_probabilities") && !doc.at("type_probabilities").is_null()) {
        config.type_probabilities =
            as_array<double>(doc.at("type_probabilities"), "type_probabilities", as_number);
    }
    read_number(doc, "cpu_cycles", "", config.cpu_cycles_c);
    read_number(doc, "samples", "", config.samples_s);
    if (doc.contains("owner_count") && !doc.at("owner_count").is_null()) {
        config.owner_count_N = as_unsigned(doc.at("owner_count"), "owner_count");
    }
    if (doc.contains("seed")) {
        config.seed = as_unsigned(doc.at("seed"), "seed");
    }
    if (doc.contains("sampling")) {
        const auto& mode = doc.at("sampling");
        if (mode == "quota") {
            config.sampling = SamplingMode::quota;
        } else if (mode == "iid") {
            config.sampling = SamplingMode::iid;
        } else {
            throw ConfigError("field 'sampling' must be \"quota\" or \"iid\"");
        }
    }
    if (doc.contains("utility_types")) {
        config.utility_types = as_array<std::size_t>(
            doc.at("utility_types"), "utility_types",
            [](const json& v, const std::string& path) { return as_unsigned(v, path); });
    }
    if (doc.contains("solver")) {
        const auto& solver = require_object(doc.at("solver"), "solver");
        reject_unknown(solver, "solver.", {"tolerance"});
        read_number(solver, "tolerance", "solver.", config.solver_tolerance);
    }
    if (doc.contains("params")) {
        config.params = parse_params(require_object(doc.at("params"), "params"));
    }
    if (doc.contains("sweep") && !doc.at("sweep").is_null()) {
        const auto& sweep = require_object(doc.at("sweep"), "sweep");
        reject_unknown(sweep, "sweep.", {"accuracy_upper_limits", "type_counts"});
        if (sweep.contains("accuracy_upper_limits")) {
            config.accuracy_upper_limits = as_array<double>(
                sweep.at("accuracy_upper_limits"), "sweep.accuracy_upper_limits", as_number);
        }
        if (sweep.contains("type_counts")) {
            config.type_counts = as_array<std::size_t>(
                sweep.at("type_counts"), "sweep.type_counts",
                [](const json& v, const std::string& path) { return as_unsigned(v, path); });
        }
    }
    config.validate();
    return config;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string config_to_json(const ScenarioConfig& config) {
    const auto& p = config.params;
    json params = {
        {"bandwidth", p.bandwidth_B},
        {"tx_power", p.tx_power_rho},
        {"channel_gain", p.channel_gain_h},
        {"noise", p.noise_N0},
        {"update_size", p.update_size_sigma},
        {"capacitance", p.capacitance_zeta},
        {"iteration_coeff", p.iteration_coeff_psi},
        {"satisfaction_w", p.satisfaction_w},
        {"reward_unit_cost", p.reward_unit_cost_l},
        {"energy_weight", p.energy_weight_mu},
        {"t_max", p.t_max},
        {"r_max", p.r_max},
        {"population", p.population_N},
        {"tcom_override", null_or(p.tcom_override)},
        {"ecom_override", null_or(p.ecom_override)},
    };
    json sweep = nullptr;
    if (config.accuracy_upper_limits) {
        sweep = {{"accuracy_upper_limits", *config.accuracy_upper_limits}};
    } else if (config.type_counts) {
        sweep = {{"type_counts", *config.type_counts}};
    }
    json doc = {
        {"type_count", config.type_count_M},
        {"accuracy_range", {config.accuracy_lo, config.accuracy_hi}},
        {"type_probabilities",
         config.type_probabilities.empty() ? json(nullptr) : json(config.type_probabilities)},
        {"cpu_cycles", config.cpu_cycles_c},
        {"samples", config.samples_s},
        {"owner_count", null_or(config.owner_count_N)},
        {"seed", config.seed},
        {"sampling", config.sampling == SamplingMode::quota ? "quota" : "iid"},
        {"utility_types", config.utility_types},
        {"solver", {{"tolerance", config.solver_tolerance}}},
        {"params", params},
        {"sweep", sweep},
    };
    return doc.dump(2) + "\n";
}

} // namespace flcontract

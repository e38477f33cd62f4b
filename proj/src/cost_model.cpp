#include "flcontract/cost_model.hpp"

#include "flcontract/errors.hpp"

#include <cmath>
#include <string>

namespace flcontract {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be finite and > 0, got " +
                          std::to_string(value));
    }
}

} // namespace

double SystemParams::tcom() const {
    if (tcom_override) {
        return *tcom_override;
    }
    return transmission_time(update_size_sigma,
                             transmission_rate(bandwidth_B, tx_power_rho, channel_gain_h, noise_N0));
}

double SystemParams::ecom() const {
    if (ecom_override) {
        return *ecom_override;
    }
    return communication_energy(
        update_size_sigma, transmission_rate(bandwidth_B, tx_power_rho, channel_gain_h, noise_N0),
        tx_power_rho);
}

void SystemParams::validate() const {
    require_positive(bandwidth_B, "bandwidth_B");
    require_positive(tx_power_rho, "tx_power_rho");
    require_positive(channel_gain_h, "channel_gain_h");
    require_positive(noise_N0, "noise_N0");
    require_positive(update_size_sigma, "update_size_sigma");
    require_positive(capacitance_zeta, "capacitance_zeta");
    require_positive(iteration_coeff_psi, "iteration_coeff_psi");
    require_positive(satisfaction_w, "satisfaction_w");
    require_positive(reward_unit_cost_l, "reward_unit_cost_l");
    require_positive(energy_weight_mu, "energy_weight_mu");
    require_positive(t_max, "t_max");
    require_positive(r_max, "r_max");
    require_positive(population_N, "population_N");
    if (tcom_override) {
        require_positive(*tcom_override, "tcom_override");
    }
    if (ecom_override) {
        require_positive(*ecom_override, "ecom_override");
    }
    if (!(t_max > tcom())) {
        throw DomainError("t_max (" + std::to_string(t_max) +
                          ") must exceed the communication time (" + std::to_string(tcom()) + ")");
    }
}

double local_iterations(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("data quality epsilon must lie in (0,1), got " + std::to_string(epsilon));
    }
    return std::log(1.0 / epsilon);
}

double type_from_quality(double epsilon, double psi) {
    require_positive(psi, "psi");
    return psi / local_iterations(epsilon);
}

TypeProfile make_type(std::size_t index, double epsilon, double psi, double probability,
                      double cpu_cycles, double samples) {
    require_positive(cpu_cycles, "cpu_cycles_c");
    require_positive(samples, "samples_s");
    if (!(probability >= 0.0 && probability <= 1.0)) {
        throw DomainError("type probability must lie in [0,1], got " + std::to_string(probability));
    }
    return TypeProfile{index, epsilon, type_from_quality(epsilon, psi), probability, cpu_cycles,
                       samples};
}

double computation_time(double cycles, double samples, double freq) {
    require_positive(cycles, "cycles");
    require_positive(samples, "samples");
    require_positive(freq, "cpu frequency");
    return cycles * samples / freq;
}

double computation_energy(double zeta, double cycles, double samples, double freq) {
    require_positive(zeta, "zeta");
    require_positive(cycles, "cycles");
    require_positive(samples, "samples");
    require_positive(freq, "cpu frequency");
    return zeta * cycles * samples * freq * freq;
}

double transmission_rate(double bandwidth, double rho, double gain, double noise) {
    require_positive(bandwidth, "bandwidth");
    require_positive(rho, "transmit power");
    require_positive(gain, "channel gain");
    require_positive(noise, "noise");
    return bandwidth * std::log1p(rho * gain / noise);
}

double transmission_time(double sigma, double rate) {
    require_positive(sigma, "update size");
    require_positive(rate, "rate");
    return sigma / rate;
}

double communication_energy(double sigma, double rate, double rho) {
    require_positive(rho, "transmit power");
    return transmission_time(sigma, rate) * rho;
}

double iteration_factor(const TypeProfile& type, const SystemParams& params) {
    require_positive(type.theta, "theta");
    require_positive(params.iteration_coeff_psi, "psi");
    return params.iteration_coeff_psi / type.theta;
}

double total_iteration_time(const TypeProfile& type, const ContractItem& item,
                            const SystemParams& params) {
    return iteration_factor(type, params) *
               computation_time(type.cpu_cycles_c, type.samples_s, item.cpu_freq_f) +
           params.tcom();
}

double total_iteration_energy(const TypeProfile& type, const ContractItem& item,
                              const SystemParams& params) {
    return iteration_factor(type, params) * computation_energy(params.capacitance_zeta,
                                                               type.cpu_cycles_c, type.samples_s,
                                                               item.cpu_freq_f) +
           params.ecom();
}

double publisher_profit_one(const TypeProfile& type, const ContractItem& item,
                            const SystemParams& params) {
    const double remaining = params.t_max - total_iteration_time(type, item, params);
    if (!(remaining > 0.0)) {
        throw InfeasibleTimeError("iteration time of type " + std::to_string(type.index_m) +
                                  " at f=" + std::to_string(item.cpu_freq_f) +
                                  " does not meet t_max");
    }
    return params.satisfaction_w * std::log(remaining) - params.reward_unit_cost_l * item.reward_R;
}

double owner_utility(const TypeProfile& type, const ContractItem& item,
                     const SystemParams& params) {
    return item.reward_R - params.energy_weight_mu * total_iteration_energy(type, item, params);
}

double min_feasible_freq(const TypeProfile& type, const SystemParams& params) {
    return iteration_factor(type, params) * type.work() / params.time_slack();
}

} // namespace flcontract

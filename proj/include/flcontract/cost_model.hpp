#pragma once

#include <cstddef>
#include <optional>

namespace flcontract {

/// Global market constants shared by every data owner.
///
/// All owners see the same bandwidth, transmit power and channel gain, so the
/// upload time and upload energy are single scalars for the whole market.
/// When `tcom_override` / `ecom_override` are set they replace the values
/// derived from the rate formula.
struct SystemParams {
    double bandwidth_B = 1.0;
    double tx_power_rho = 1.0;
    double channel_gain_h = 1.0;
    double noise_N0 = 1.0;
    double update_size_sigma = 1.0;
    double capacitance_zeta = 0.1;
    double iteration_coeff_psi = 1.0;
    double satisfaction_w = 500.0;
    double reward_unit_cost_l = 1.0;
    double energy_weight_mu = 1.0;
    double t_max = 600.0;
    double r_max = 10000.0;
    double population_N = 100.0;
    std::optional<double> tcom_override = 10.0;
    std::optional<double> ecom_override = 20.0;

    /// Upload time of one local model update (override wins).
    double tcom() const;
    /// Upload energy of one local model update (override wins).
    double ecom() const;
    /// Time left for local computation: t_max - tcom().
    double time_slack() const { return t_max - tcom(); }

    /// Throws DomainError naming the first violated invariant.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

/// One data-owner type. `theta` is stored alongside `epsilon` so callers may
/// rescale it together with psi; formulas use psi/theta, never epsilon.
struct TypeProfile {
    std::size_t index_m = 1;
    double epsilon = 0.5;
    double theta = 1.0;
    double probability_p = 1.0;
    double cpu_cycles_c = 5.0;
    double samples_s = 20.0;

    double work() const { return cpu_cycles_c * samples_s; }
};

/// One (CPU frequency, reward) bundle of a menu.
struct ContractItem {
    double cpu_freq_f = 1.0;
    double reward_R = 0.0;
};

/// ln(1/epsilon): local iterations needed per global round.
double local_iterations(double epsilon);
/// theta = psi / ln(1/epsilon).
double type_from_quality(double epsilon, double psi);
/// Builds a TypeProfile whose theta is derived from epsilon.
TypeProfile make_type(std::size_t index, double epsilon, double psi, double probability,
                      double cpu_cycles, double samples);

double computation_time(double cycles, double samples, double freq);
double computation_energy(double zeta, double cycles, double samples, double freq);
double transmission_rate(double bandwidth, double rho, double gain, double noise);
double transmission_time(double sigma, double rate);
double communication_energy(double sigma, double rate, double rho);

/// psi/theta, the iteration multiplier every per-type formula goes through.
double iteration_factor(const TypeProfile& type, const SystemParams& params);

double total_iteration_time(const TypeProfile& type, const ContractItem& item,
                            const SystemParams& params);
double total_iteration_energy(const TypeProfile& type, const ContractItem& item,
                              const SystemParams& params);

/// w ln(t_max - T_t) - l R for one owner of `type` holding `item`.
/// Throws InfeasibleTimeError when T_t >= t_max.
double publisher_profit_one(const TypeProfile& type, const ContractItem& item,
                            const SystemParams& params);

/// R - mu * E_t.
double owner_utility(const TypeProfile& type, const ContractItem& item,
                     const SystemParams& params);

/// Smallest frequency (exclusive) meeting the deadline for this type.
double min_feasible_freq(const TypeProfile& type, const SystemParams& params);

} // namespace flcontract

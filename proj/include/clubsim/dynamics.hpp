#pragma once

#include <array>
#include <span>
#include <utility>

#include "clubsim/error.hpp"
#include "clubsim/matrix.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

using TransferMatrix = std::array<std::array<double, 3>, 3>;

/// Five-year DICE-2016 carbon transfer matrix. Entry (r, c) is the fraction
/// of reservoir c that ends the step in reservoir r.
TransferMatrix dice2016_transfer_matrix();

/// Climate-economy constants. Defaults follow DICE-2016.
struct DynamicsParams {
    double capital_elasticity = 0.3;
    double capital_depreciation = 0.1;  // per year
    double damage_coeff = 0.00236;      // per degC^2
    double abatement_exponent = 2.6;
    TransferMatrix carbon_transfer = dice2016_transfer_matrix();
    double preindustrial_carbon = 588.0;  // GtC
    double forcing_per_doubling = 3.6813;
    double climate_feedback = 1.1875;  // W/m2/degC
    double temp_upper_rate = 0.1005;   // xi1
    double temp_exchange = 0.088;      // xi2
    double temp_ocean_rate = 0.025;    // xi3
    double forcing_ex_initial = 0.5;   // W/m2
    double forcing_ex_final = 1.0;
    double forcing_ex_horizon = 85.0;         // years to reach the final value
    double land_emissions_initial = 0.7096;   // GtC/yr
    double land_emissions_decline = 0.024435; // per year
    double utility_elasticity = 1.45;
    double import_share = 0.2;          // fraction of own net output bid on imports
    double consumption_floor = 1e-6;

    /// Non-CO2 forcing at `year` years into the episode.
    double exogenous_forcing(double year) const;
    /// Land-use emissions rate (GtC/yr) at `year`.
    double land_emissions(double year) const;
};

ValidationReport validate(const DynamicsParams& params);

/// Cobb-Douglas A K^g L^(1-g).
double gross_output(double tfp, double capital, double labor, double elasticity);

/// Output fraction lost to damages at `temp_atmosphere`, clamped to [0, 1].
double damage_fraction(double temp_atmosphere, double damage_coeff);

/// theta1 * mu^theta2.
double abatement_cost_fraction(double mitigation, double cost_coeff, double exponent);

double net_output(double gross, double temp_atmosphere, double mitigation, double cost_coeff,
                  const DynamicsParams& params);

/// Annual industrial emissions sigma (1 - mu) Y.
double emissions(double carbon_intensity, double mitigation, double gross);

/// M' = Phi M + (E, 0, 0). Throws ValidationError unless every column of
/// `transfer` sums to 1 within 1e-12.
std::array<double, 3> carbon_cycle_step(const std::array<double, 3>& carbon, double injected,
                                        const TransferMatrix& transfer);

/// Advances the two-box temperature model given the atmospheric carbon at
/// the end of the step. `year` selects the exogenous forcing.
std::pair<double, double> temperature_step(double temp_atmosphere, double temp_ocean,
                                           double carbon_atmosphere, const DynamicsParams& params,
                                           double year);

double radiative_forcing(double carbon_atmosphere, const DynamicsParams& params, double year);

struct ExogenousState {
    double tfp = 0.0;
    double carbon_intensity = 0.0;
    double labor = 0.0;
};

/// Exogenous trends over one step of `years_per_step` starting at `year`.
ExogenousState exogenous_step(const ExogenousState& current, const RegionParams& region,
                              double year, double years_per_step);

/// K (1 - delta)^dt + dt s Q.
double capital_step(double capital, double saving_rate, double net, double depreciation,
                    double years_per_step);

/// flows(i, j): goods from exporter j to importer i.
struct TradeOutcome {
    SquareMatrix<double> flows;
    std::vector<double> exports;            // shipped by each exporter
    std::vector<double> effective_imports;  // post-tariff goods received
    std::vector<double> tariff_revenue;     // collected by each importer
    std::vector<double> tariff_paid;        // borne by each exporter
};

/// Rations over-subscribed export budgets proportionally. An exporter never
/// ships more than export_cap * net_output.
TradeOutcome settle_trade(std::span<const double> net_outputs, std::span<const double> export_caps,
                          const SquareMatrix<double>& import_bids,
                          const SquareMatrix<double>& effective_tariffs);

/// Budget identity for one region. Exporters are paid the post-tariff value
/// of what they ship and importers pay the same amount, so trade only moves
/// the tariff wedge from exporter to importer.
double consumption(double net, double saving_rate, const TradeOutcome& trade, AgentId region);

struct Reward {
    double utility = 0.0;
    bool clamped = false;
};

/// Isoelastic utility L ((C/L)^(1-a) - 1) / (1 - a). Non-positive C is raised
/// to `floor` and flagged.
Reward step_reward(double consumption, double labor, double elasticity, double floor = 1e-6);

}  // namespace clubsim

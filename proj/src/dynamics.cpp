#include "clubsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clubsim {

TransferMatrix dice2016_transfer_matrix() {
    constexpr double b12 = 0.12;
    constexpr double b23 = 0.007;
    constexpr double mat_eq = 588.0;
    constexpr double mup_eq = 360.0;
    constexpr double mlo_eq = 1720.0;
    const double b21 = b12 * mat_eq / mup_eq;
    const double b32 = b23 * mup_eq / mlo_eq;
    TransferMatrix phi{};
    phi[0] = {1.0 - b12, b21, 0.0};
    phi[1] = {b12, 1.0 - b21 - b23, b32};
    phi[2] = {0.0, b23, 1.0 - b32};
    return phi;
}

double DynamicsParams::exogenous_forcing(double year) const {
    const double progress = forcing_ex_horizon > 0.0 ? std::min(1.0, year / forcing_ex_horizon) : 1.0;
    return forcing_ex_initial + (forcing_ex_final - forcing_ex_initial) * progress;
}

double DynamicsParams::land_emissions(double year) const {
    return land_emissions_initial * std::exp(-land_emissions_decline * year);
}

namespace {

void check_transfer(const TransferMatrix& phi, ValidationReport& report) {
    for (std::size_t c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < 3; ++r) {
            if (!(phi[r][c] >= 0.0)) {
                report.add("dynamics", "carbon_transfer", "negative or non-finite entry in column " +
                                                               std::to_string(c));
            }
            sum += phi[r][c];
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            report.add("dynamics", "carbon_transfer",
                       "column " + std::to_string(c) + " sums to " + std::to_string(sum));
        }
    }
}

}  // namespace

ValidationReport validate(const DynamicsParams& p) {
    ValidationReport report;
    auto need = [&](bool ok, const char* field, const char* msg) {
        if (!ok) report.add("dynamics", field, msg);
    };
    need(p.capital_elasticity > 0.0 && p.capital_elasticity < 1.0, "capital_elasticity", "must lie in (0, 1)");
    need(p.capital_depreciation >= 0.0 && p.capital_depreciation <= 1.0, "capital_depreciation", "must lie in [0, 1]");
    need(p.damage_coeff >= 0.0, "damage_coeff", "must be >= 0");
    need(p.abatement_exponent > 1.0, "abatement_exponent", "must be > 1");
    need(p.preindustrial_carbon > 0.0, "preindustrial_carbon", "must be > 0");
    need(std::isfinite(p.forcing_per_doubling), "forcing_per_doubling", "must be finite");
    need(p.climate_feedback > 0.0, "climate_feedback", "must be > 0");
    need(p.temp_upper_rate > 0.0 && p.temp_upper_rate <= 1.0, "temp_upper_rate", "must lie in (0, 1]");
    need(p.temp_exchange >= 0.0, "temp_exchange", "must be >= 0");
    need(p.temp_ocean_rate >= 0.0 && p.temp_ocean_rate <= 1.0, "temp_ocean_rate", "must lie in [0, 1]");
    need(std::isfinite(p.forcing_ex_initial) && std::isfinite(p.forcing_ex_final), "forcing_ex", "must be finite");
    need(p.forcing_ex_horizon >= 0.0, "forcing_ex_horizon", "must be >= 0");
    need(p.land_emissions_initial >= 0.0, "land_emissions_initial", "must be >= 0");
    need(std::isfinite(p.land_emissions_decline), "land_emissions_decline", "must be finite");
    need(p.utility_elasticity > 0.0 && p.utility_elasticity != 1.0, "utility_elasticity", "must be > 0 and != 1");
    need(p.import_share >= 0.0 && p.import_share <= 1.0, "import_share", "must lie in [0, 1]");
    need(p.consumption_floor > 0.0, "consumption_floor", "must be > 0");
    check_transfer(p.carbon_transfer, report);
    return report;
}

double gross_output(double tfp, double capital, double labor, double elasticity) {
    return tfp * std::pow(capital, elasticity) * std::pow(labor, 1.0 - elasticity);
}

double damage_fraction(double temp_atmosphere, double damage_coeff) {
    if (temp_atmosphere <= 0.0) return 0.0;
    return std::clamp(damage_coeff * temp_atmosphere * temp_atmosphere, 0.0, 1.0);
}

double abatement_cost_fraction(double mitigation, double cost_coeff, double exponent) {
    return cost_coeff * std::pow(mitigation, exponent);
}

double net_output(double gross, double temp_atmosphere, double mitigation, double cost_coeff,
                  const DynamicsParams& params) {
    const double after_damage = gross * (1.0 - damage_fraction(temp_atmosphere, params.damage_coeff));
    const double cost = abatement_cost_fraction(mitigation, cost_coeff, params.abatement_exponent);
    return after_damage * (1.0 - std::clamp(cost, 0.0, 1.0));
}

double emissions(double carbon_intensity, double mitigation, double gross) {
    return carbon_intensity * (1.0 - mitigation) * gross;
}

std::array<double, 3> carbon_cycle_step(const std::array<double, 3>& carbon, double injected,
                                        const TransferMatrix& transfer) {
    ValidationReport report;
    check_transfer(transfer, report);
    if (!report.ok()) throw ValidationError(std::move(report));

    std::array<double, 3> next{};
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) next[r] += transfer[r][c] * carbon[c];
    }
    next[0] += injected;
    return next;
}

double radiative_forcing(double carbon_atmosphere, const DynamicsParams& params, double year) {
    return params.forcing_per_doubling * std::log2(carbon_atmosphere / params.preindustrial_carbon) +
           params.exogenous_forcing(year);
}

std::pair<double, double> temperature_step(double temp_atmosphere, double temp_ocean,
                                           double carbon_atmosphere, const DynamicsParams& params,
                                           double year) {
    const double forcing = radiative_forcing(carbon_atmosphere, params, year);
    const double next_atmosphere =
        temp_atmosphere + params.temp_upper_rate * (forcing - params.climate_feedback * temp_atmosphere -
                                                    params.temp_exchange * (temp_atmosphere - temp_ocean));
    const double next_ocean = temp_ocean + params.temp_ocean_rate * (temp_atmosphere - temp_ocean);
    return {next_atmosphere, next_ocean};
}

ExogenousState exogenous_step(const ExogenousState& current, const RegionParams& region,
                              double year, double years_per_step) {
    const double tfp_growth = region.tfp_growth_initial * std::exp(-region.tfp_growth_decline * year);
    ExogenousState next;
    next.tfp = current.tfp * std::exp(tfp_growth * years_per_step);
    next.carbon_intensity = current.carbon_intensity * std::exp(region.carbon_intensity_decline * years_per_step);
    next.labor = current.labor * std::pow(region.labor_asymptote / current.labor, region.labor_convergence);
    return next;
}

double capital_step(double capital, double saving_rate, double net, double depreciation,
                    double years_per_step) {
    return capital * std::pow(1.0 - depreciation, years_per_step) + years_per_step * saving_rate * net;
}

TradeOutcome settle_trade(std::span<const double> net_outputs, std::span<const double> export_caps,
                          const SquareMatrix<double>& import_bids,
                          const SquareMatrix<double>& effective_tariffs) {
    const std::size_t n = net_outputs.size();
    TradeOutcome out;
    out.flows = SquareMatrix<double>(n, 0.0);
    out.exports.assign(n, 0.0);
    out.effective_imports.assign(n, 0.0);
    out.tariff_revenue.assign(n, 0.0);
    out.tariff_paid.assign(n, 0.0);

    for (std::size_t j = 0; j < n; ++j) {
        const double budget = std::max(0.0, export_caps[j] * net_outputs[j]);
        double demand = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) demand += std::max(0.0, import_bids(i, j));
        }
        const double scale = demand > budget ? budget / demand : 1.0;
        double shipped = 0.0;
        std::size_t largest = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const double flow = std::max(0.0, import_bids(i, j)) * scale;
            out.flows(i, j) = flow;
            shipped += flow;
            if (largest == n || flow > out.flows(largest, j)) largest = i;
        }
        // Rounding in the scaled sum can overshoot the budget by a few ulps;
        // shave the excess off the largest flow until the cap holds exactly.
        while (shipped > budget && largest != n) {
            out.flows(largest, j) = std::max(0.0, out.flows(largest, j) - (shipped - budget));
            shipped = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i != j) shipped += out.flows(i, j);
            }
            if (shipped > budget) out.flows(largest, j) = std::nextafter(out.flows(largest, j), 0.0);
        }
        out.exports[j] = shipped;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double flow = out.flows(i, j);
            const double tau = std::clamp(effective_tariffs(i, j), 0.0, 1.0);
            out.effective_imports[i] += flow * (1.0 - tau);
            out.tariff_revenue[i] += flow * tau;
            out.tariff_paid[j] += flow * tau;
        }
    }
    return out;
}

double consumption(double net, double saving_rate, const TradeOutcome& trade, AgentId region) {
    // Q - sQ - shipped + payments received + (1 - tau) imports + revenue - payments made,
    // where payments received = shipped - tariff_paid and payments made = effective imports.
    const double shipped = trade.exports[region];
    const double received = shipped - trade.tariff_paid[region];
    const double paid = trade.effective_imports[region];
    return net - saving_rate * net - shipped + received + trade.effective_imports[region] +
           trade.tariff_revenue[region] - paid;
}

Reward step_reward(double consumption, double labor, double elasticity, double floor) {
    Reward reward;
    double c = consumption;
    if (!(c > 0.0)) {
        c = floor;
        reward.clamped = true;
    }
    reward.utility = labor * (std::pow(c / labor, 1.0 - elasticity) - 1.0) / (1.0 - elasticity);
    return reward;
}

}  // namespace clubsim

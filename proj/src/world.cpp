#include "clubsim/world.hpp"

#include <cmath>
#include <string>

namespace clubsim {

WorldState new_world(std::span<const RegionParams> params, const ClimateState& climate_init,
                     const SimConfig& config) {
    ValidationReport report = validate(params);
    if (params.size() != config.num_agents) {
        report.add("calibration", "num_agents",
                   "expected " + std::to_string(config.num_agents) + " regions, found " +
                       std::to_string(params.size()));
    }
    if (params.empty()) report.add("calibration", "num_agents", "need at least one region");
    report.merge(validate(climate_init));
    if (!report.ok()) throw ValidationError(std::move(report));

    const std::size_t n = params.size();
    WorldState world;
    world.params.assign(params.begin(), params.end());
    world.now.step = 0;
    world.now.year = 0.0;
    world.now.climate = climate_init;
    world.now.club.membership.assign(n, kNoGroup);
    world.now.club.co_membership_steps = SquareMatrix<int>(n, 0);
    world.now.regions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        RegionState& r = world.now.regions[i];
        r.capital = params[i].capital_initial;
        r.labor = params[i].labor_initial;
        r.tfp = params[i].tfp_initial;
        r.carbon_intensity = params[i].carbon_intensity_initial;
        r.saving_rate = 0.5 * (config.bounds.saving_min + config.bounds.saving_max);
        r.mitigation_rate = 0.0;
        r.export_cap = 0.0;
        r.group_id = kNoGroup;
        r.base_tariffs.assign(n, 0.0);
    }
    return world;
}

ValidationReport validate(const ClimateState& climate) {
    ValidationReport report;
    static constexpr const char* kReservoir[3] = {"carbon_atmosphere", "carbon_upper_ocean", "carbon_lower_ocean"};
    for (std::size_t k = 0; k < 3; ++k) {
        if (!(climate.carbon[k] > 0.0) || !std::isfinite(climate.carbon[k]))
            report.add("climate", kReservoir[k], "must be finite and > 0");
    }
    if (!std::isfinite(climate.temp_atmosphere)) report.add("climate", "temp_atmosphere", "not finite");
    if (!std::isfinite(climate.temp_ocean)) report.add("climate", "temp_ocean", "not finite");
    return report;
}

ValidationReport validate(const WorldSnapshot& s) {
    ValidationReport report = validate(s.climate);
    const std::size_t n = s.regions.size();
    const auto max_group = static_cast<GroupId>(n);
    auto fraction = [&](double v, const std::string& where, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) report.add(where, field, "must lie in [0, 1]");
    };
    for (std::size_t i = 0; i < n; ++i) {
        const RegionState& r = s.regions[i];
        const std::string where = "region " + std::to_string(i);
        if (!(r.capital >= 0.0) || !std::isfinite(r.capital)) report.add(where, "capital", "must be finite and >= 0");
        if (!(r.labor > 0.0) || !std::isfinite(r.labor)) report.add(where, "labor", "must be finite and > 0");
        if (!(r.tfp >= 0.0) || !std::isfinite(r.tfp)) report.add(where, "tfp", "must be finite and >= 0");
        if (!(r.carbon_intensity >= 0.0) || !std::isfinite(r.carbon_intensity))
            report.add(where, "carbon_intensity", "must be finite and >= 0");
        fraction(r.saving_rate, where, "saving_rate");
        fraction(r.mitigation_rate, where, "mitigation_rate");
        fraction(r.export_cap, where, "export_cap");
        if (r.group_id < 0 || r.group_id > max_group) report.add(where, "group_id", "outside [0, N]");
        if (r.base_tariffs.size() != n) report.add(where, "base_tariffs", "expected one entry per region");
        for (double tau : r.base_tariffs) fraction(tau, where, "base_tariffs");
    }

    const ClubState& club = s.club;
    if (club.membership.size() != n) {
        report.add("club", "membership", "expected one entry per region");
        return report;
    }
    if (club.co_membership_steps.size() != n) {
        report.add("club", "co_membership_steps", "expected an N x N matrix");
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (club.membership[i] < 0 || club.membership[i] > max_group)
            report.add("club", "membership", "agent " + std::to_string(i) + " outside [0, N]");
        if (club.membership[i] != s.regions[i].group_id)
            report.add("club", "membership", "agent " + std::to_string(i) + " disagrees with region group_id");
        if (club.co_membership_steps(i, i) != 0)
            report.add("club", "co_membership_steps", "nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const int a = club.co_membership_steps(i, j);
            if (a != club.co_membership_steps(j, i))
                report.add("club", "co_membership_steps", "asymmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            if (a < 0) report.add("club", "co_membership_steps", "negative counter");
            if (a > 0 && !club.co_members(i, j))
                report.add("club", "co_membership_steps",
                           "counter set for non-members (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    return report;
}

ValidationReport validate(const WorldState& world) {
    ValidationReport report = validate(world.params);
    if (world.params.size() != world.now.regions.size())
        report.add("world", "params", "calibration size differs from region count");
    report.merge(validate(world.now));
    return report;
}

}  // namespace clubsim

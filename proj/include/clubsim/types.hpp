#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "clubsim/matrix.hpp"

namespace clubsim {

using AgentId = std::size_t;
/// Club identifier. 0 means "not in any club"; valid ids are [0, N].
using GroupId = int;

inline constexpr GroupId kNoGroup = 0;

/// Static per-region calibration. Growth and decline rates are per year.
struct RegionParams {
    std::string name;
    double tfp_initial = 0.0;
    double tfp_growth_initial = 0.0;
    double tfp_growth_decline = 0.0;
    double capital_initial = 0.0;           // trillion USD
    double labor_initial = 0.0;             // millions
    double labor_asymptote = 0.0;           // millions
    double labor_convergence = 0.0;         // per step
    double carbon_intensity_initial = 0.0;  // GtC per trillion USD of annual output
    double carbon_intensity_decline = 0.0;  // per year, <= 0
    double abatement_cost_coeff = 0.0;      // output fraction lost at full mitigation
    double emissions_initial = 0.0;         // GtC/yr, used for ranking only
};

/// Mutable per-region state carried between steps.
struct RegionState {
    double capital = 0.0;
    double labor = 0.0;
    double tfp = 0.0;
    double carbon_intensity = 0.0;
    double saving_rate = 0.0;
    double mitigation_rate = 0.0;  // realized, i.e. after the negotiated floor
    double export_cap = 0.0;
    GroupId group_id = kNoGroup;
    std::vector<double> base_tariffs;  // indexed by exporter

    bool operator==(const RegionState&) const = default;
};

struct ClimateState {
    std::array<double, 3> carbon{};  // atmosphere, upper ocean, lower ocean (GtC)
    double temp_atmosphere = 0.0;    // degC above preindustrial
    double temp_ocean = 0.0;

    double total_carbon() const { return carbon[0] + carbon[1] + carbon[2]; }
    bool operator==(const ClimateState&) const = default;
};

/// Membership plus, for each pair, the number of consecutive completed steps
/// they have shared a nonzero group.
struct ClubState {
    std::vector<GroupId> membership;
    SquareMatrix<int> co_membership_steps;

    bool co_members(AgentId i, AgentId j) const {
        return i != j && membership[i] != kNoGroup && membership[i] == membership[j];
    }
    bool operator==(const ClubState&) const = default;
};

/// One agent's decisions for one step.
struct AgentAction {
    GroupId group_choice = kNoGroup;
    std::map<AgentId, double> proposals;  // recipient -> requested mitigation
    std::map<AgentId, bool> evaluations;  // proposer -> accepted
    double saving_rate = 0.0;
    double mitigation_rate = 0.0;
    double export_cap = 0.0;
    std::vector<double> base_tariffs;  // indexed by exporter

    bool operator==(const AgentAction&) const = default;
};

struct Proposal {
    AgentId proposer = 0;
    AgentId recipient = 0;
    double requested_mitigation = 0.0;

    bool operator==(const Proposal&) const = default;
};

/// Everything that changes over an episode; calibration lives beside it in
/// WorldState.
struct WorldSnapshot {
    int step = 0;
    double year = 0.0;
    std::vector<RegionState> regions;
    ClimateState climate;
    ClubState club;

    bool operator==(const WorldSnapshot&) const = default;
};

struct WorldState {
    std::vector<RegionParams> params;
    WorldSnapshot now;

    std::size_t num_agents() const { return now.regions.size(); }
};

/// Per-region quantities realized during a step.
struct RegionFlows {
    double gross_output = 0.0;
    double net_output = 0.0;
    double emissions = 0.0;  // GtC/yr
    double mitigation_floor = 0.0;
    double exports = 0.0;
    double effective_imports = 0.0;
    double tariff_revenue = 0.0;
    double consumption = 0.0;
    double reward = 0.0;
    bool consumption_clamped = false;
};

/// What happened between snapshot `step` and snapshot `step + 1`.
struct StepRecord {
    int step = 0;
    std::vector<AgentAction> actions;  // after clamping
    std::vector<Proposal> proposals;   // after filtering
    std::vector<RegionFlows> flows;
    SquareMatrix<double> effective_tariffs;
    double injected_carbon = 0.0;  // GtC added to the atmosphere this step
};

struct MetricsRow {
    int step = 0;
    double year = 0.0;
    double temp_rise = 0.0;
    double total_gross_output = 0.0;
    double mean_mitigation = 0.0;
    int group_count = 0;
    int largest_group_size = 0;
    int top5_in_largest = 0;

    bool operator==(const MetricsRow&) const = default;
};

}  // namespace clubsim

#include "clubsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clubsim/rng.hpp"

namespace clubsim {

ValidationReport validate(const ActionBounds& b) {
    ValidationReport report;
    auto pair = [&](double lo, double hi, const char* field) {
        if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) report.add("bounds", field, "need 0 <= min <= max <= 1");
    };
    pair(b.saving_min, b.saving_max, "saving");
    pair(0.0, b.export_cap_max, "export_cap_max");
    pair(0.0, b.tariff_max, "tariff_max");
    pair(b.mitigation_min, b.mitigation_max, "mitigation");
    return report;
}

AgentAction clamp_action(AgentAction raw, const ActionBounds& b) {
    raw.saving_rate = std::clamp(raw.saving_rate, b.saving_min, b.saving_max);
    raw.mitigation_rate = std::clamp(raw.mitigation_rate, b.mitigation_min, b.mitigation_max);
    raw.export_cap = std::clamp(raw.export_cap, 0.0, b.export_cap_max);
    for (double& tau : raw.base_tariffs) tau = std::clamp(tau, 0.0, b.tariff_max);
    for (auto& [recipient, request] : raw.proposals) request = std::clamp(request, 0.0, 1.0);
    return raw;
}

std::vector<AgentId> Observation::co_members() const {
    std::vector<AgentId> out;
    const GroupId mine = membership[self];
    if (mine == kNoGroup) return out;
    for (AgentId j = 0; j < membership.size(); ++j) {
        if (j != self && membership[j] == mine) out.push_back(j);
    }
    return out;
}

double Observation::club_market_share() const {
    double club = 0.0;
    double rest = 0.0;
    const GroupId mine = membership[self];
    for (AgentId j = 0; j < gross_outputs.size(); ++j) {
        if (j == self) continue;
        rest += gross_outputs[j];
        if (mine != kNoGroup && membership[j] == mine) club += gross_outputs[j];
    }
    return rest > 0.0 ? club / rest : 0.0;
}

// ---------------------------------------------------------------- cooperative

double CooperativeParams::target(int step) const { return std::min(1.0, ramp_start + ramp_slope * step); }

GroupId CooperativePolicy::choose_group(const Observation& obs) { return obs.membership[obs.self]; }

std::map<AgentId, double> CooperativePolicy::propose(const Observation& obs) {
    std::map<AgentId, double> out;
    const double request = params_.target(obs.step);
    for (AgentId j : obs.co_members()) out[j] = request;
    return out;
}

std::map<AgentId, bool> CooperativePolicy::evaluate(const Observation& obs) {
    std::map<AgentId, bool> out;
    const double limit = params_.target(obs.step) + params_.acceptance_slack;
    for (const Proposal& p : obs.incoming) out[p.proposer] = p.requested_mitigation <= limit;
    return out;
}

AgentAction CooperativePolicy::act(const Observation& obs) {
    AgentAction a;
    a.saving_rate = params_.saving_rate;
    a.mitigation_rate = params_.target(obs.step);
    a.export_cap = obs.bounds->export_cap_max;
    a.base_tariffs.assign(obs.num_agents, params_.base_tariff);
    a.base_tariffs[obs.self] = 0.0;
    return a;
}

// ------------------------------------------------------------------ freerider

FreeriderPolicy::FreeriderPolicy(FreeriderParams params, std::uint64_t seed)
    : params_(params), rng_(seed) {}

bool FreeriderPolicy::compliant(const Observation& obs) const {
    if (obs.membership[obs.self] == kNoGroup) return false;
    return obs.club_market_share() >= params_.compliance_threshold;
}

GroupId FreeriderPolicy::choose_group(const Observation& obs) {
    // One draw per step regardless of outcome keeps the stream aligned
    // across scenarios.
    const bool leave = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < params_.p_exit;
    if (compliant(obs)) return obs.membership[obs.self];
    return leave ? kNoGroup : obs.membership[obs.self];
}

std::map<AgentId, double> FreeriderPolicy::propose(const Observation&) { return {}; }

std::map<AgentId, bool> FreeriderPolicy::evaluate(const Observation& obs) {
    const bool accept = compliant(obs);
    std::map<AgentId, bool> out;
    for (const Proposal& p : obs.incoming) out[p.proposer] = accept;
    return out;
}

AgentAction FreeriderPolicy::act(const Observation& obs) {
    AgentAction a;
    a.saving_rate = params_.saving_rate;
    a.mitigation_rate = obs.bounds->mitigation_min;
    a.export_cap = obs.bounds->export_cap_max;
    a.base_tariffs.assign(obs.num_agents, 0.0);
    return a;
}

// --------------------------------------------------------------------- random

GroupId RandomPolicy::choose_group(const Observation& obs) {
    return std::uniform_int_distribution<GroupId>(0, static_cast<GroupId>(obs.num_agents))(rng_);
}

std::map<AgentId, double> RandomPolicy::propose(const Observation& obs) {
    std::uniform_real_distribution<double> request(obs.bounds->mitigation_min, obs.bounds->mitigation_max);
    std::map<AgentId, double> out;
    for (AgentId j : obs.co_members()) out[j] = request(rng_);
    return out;
}

std::map<AgentId, bool> RandomPolicy::evaluate(const Observation& obs) {
    std::bernoulli_distribution coin(0.5);
    std::map<AgentId, bool> out;
    for (const Proposal& p : obs.incoming) out[p.proposer] = coin(rng_);
    return out;
}

AgentAction RandomPolicy::act(const Observation& obs) {
    const ActionBounds& b = *obs.bounds;
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); };
    AgentAction a;
    a.saving_rate = uniform(b.saving_min, b.saving_max);
    a.mitigation_rate = uniform(b.mitigation_min, b.mitigation_max);
    a.export_cap = uniform(0.0, b.export_cap_max);
    a.base_tariffs.resize(obs.num_agents);
    for (double& tau : a.base_tariffs) tau = uniform(0.0, b.tariff_max);
    a.base_tariffs[obs.self] = 0.0;
    return a;
}

// ---------------------------------------------------------------- assignment

ValidationReport validate(const PolicyMap& map, std::size_t num_agents) {
    ValidationReport report;
    auto check_spec = [&](const PolicySpec& spec, const std::string& where) {
        if (spec.archetype != "cooperative" && spec.archetype != "freerider" && spec.archetype != "random")
            report.add(where, "archetype", "unknown archetype '" + spec.archetype + "'");
        if (!(spec.freerider.p_exit >= 0.0 && spec.freerider.p_exit <= 1.0))
            report.add(where, "p_exit", "must lie in [0, 1]");
    };
    check_spec(map.uniform, "policies.uniform");
    if (!(map.freerider_fraction >= 0.0 && map.freerider_fraction <= 1.0))
        report.add("policies", "freerider_fraction", "must lie in [0, 1]");
    if (!(map.freerider.p_exit >= 0.0 && map.freerider.p_exit <= 1.0))
        report.add("policies.freerider", "p_exit", "must lie in [0, 1]");
    for (const auto& [agent, spec] : map.overrides) {
        const std::string where = "policies.agents[" + std::to_string(agent) + "]";
        if (agent >= num_agents) report.add(where, "id", "no such agent");
        check_spec(spec, where);
    }
    return report;
}

std::vector<PolicySpec> assign_policies(const PolicyMap& map, std::span<const AgentId> ranking,
                                        std::uint64_t seed) {
    const std::size_t n = ranking.size();
    std::vector<PolicySpec> specs(n, map.uniform);
    if (map.assignment == PolicyAssignment::mixed) {
        PolicySpec cooperative{.archetype = "cooperative", .cooperative = map.cooperative, .freerider = map.freerider};
        PolicySpec freerider = cooperative;
        freerider.archetype = "freerider";
        std::fill(specs.begin(), specs.end(), cooperative);

        std::vector<AgentId> others(ranking.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(5, n)),
                                    ranking.end());
        std::sort(others.begin(), others.end());
        std::mt19937_64 rng = make_stream(seed, Stream::policy_map);
        std::shuffle(others.begin(), others.end(), rng);
        const auto count = static_cast<std::size_t>(std::llround(map.freerider_fraction * static_cast<double>(others.size())));
        for (std::size_t k = 0; k < count && k < others.size(); ++k) specs[others[k]] = freerider;
    }
    for (const auto& [agent, spec] : map.overrides) {
        if (agent < n) specs[agent] = spec;
    }
    return specs;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed) {
    if (spec.archetype == "cooperative") return std::make_unique<CooperativePolicy>(spec.cooperative);
    if (spec.archetype == "freerider") return std::make_unique<FreeriderPolicy>(spec.freerider, seed);
    if (spec.archetype == "random") return std::make_unique<RandomPolicy>(seed);
    throw ValidationError("unknown policy archetype '" + spec.archetype + "'");
}

}  // namespace clubsim

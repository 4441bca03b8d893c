#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "clubsim/error.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

/// Feasible ranges for the economic part of an action.
struct ActionBounds {
    double saving_min = 0.15;
    double saving_max = 0.35;
    double export_cap_max = 0.30;
    double tariff_max = 1.0;
    double mitigation_min = 0.0;
    double mitigation_max = 1.0;
};

ValidationReport validate(const ActionBounds& bounds);

/// Projects every scalar into its interval. Group choice, proposals and
/// evaluations pass through untouched.
AgentAction clamp_action(AgentAction raw, const ActionBounds& bounds);

/// What an agent sees when asked for a decision. Spans point into the
/// harness's state for the duration of the call.
struct Observation {
    AgentId self = 0;
    int step = 0;
    std::size_t num_agents = 0;
    const RegionState* own = nullptr;
    std::span<const GroupId> membership;        // current for the stage being decided
    std::span<const double> gross_outputs;      // all regions, this step
    std::span<const Proposal> incoming;         // evaluation stage only
    const ActionBounds* bounds = nullptr;

    std::vector<AgentId> co_members() const;
    /// Share of the rest of the world's gross output held by co-members.
    double club_market_share() const;
};

/// A decision rule for one agent. The harness calls the four stages in order
/// every step; implementations may keep per-agent state between calls.
class Policy {
public:
    virtual ~Policy() = default;

    virtual GroupId choose_group(const Observation& obs) = 0;
    virtual std::map<AgentId, double> propose(const Observation& obs) = 0;
    virtual std::map<AgentId, bool> evaluate(const Observation& obs) = 0;
    /// Economic part of the action; group choice and negotiation fields are ignored.
    virtual AgentAction act(const Observation& obs) = 0;

    virtual std::string archetype() const = 0;
};

struct CooperativeParams {
    double ramp_start = 0.1;
    double ramp_slope = 0.05;  // per step
    double acceptance_slack = 0.1;
    double saving_rate = 0.25;
    double base_tariff = 0.05;

    double target(int step) const;
};

/// Stays put, asks every co-member for its own ramp and accepts requests up
/// to the ramp plus a slack.
class CooperativePolicy final : public Policy {
public:
    explicit CooperativePolicy(CooperativeParams params = {}) : params_(params) {}

    GroupId choose_group(const Observation& obs) override;
    std::map<AgentId, double> propose(const Observation& obs) override;
    std::map<AgentId, bool> evaluate(const Observation& obs) override;
    AgentAction act(const Observation& obs) override;
    std::string archetype() const override { return "cooperative"; }

private:
    CooperativeParams params_;
};

struct FreeriderParams {
    double p_exit = 0.5;
    double saving_rate = 0.25;
    /// A free-rider whose co-members hold at least this share of its export
    /// market stays and accepts requests, because leaving would expose it to
    /// the club's surcharge. Infinity disables compliance.
    double compliance_threshold = std::numeric_limits<double>::infinity();
};

/// Leaves its club with probability p_exit each step, rejects every request
/// and abates at the bound minimum, unless the club's market is too large to
/// walk away from.
class FreeriderPolicy final : public Policy {
public:
    FreeriderPolicy(FreeriderParams params, std::uint64_t seed);

    GroupId choose_group(const Observation& obs) override;
    std::map<AgentId, double> propose(const Observation& obs) override;
    std::map<AgentId, bool> evaluate(const Observation& obs) override;
    AgentAction act(const Observation& obs) override;
    std::string archetype() const override { return "freerider"; }

    bool compliant(const Observation& obs) const;

private:
    FreeriderParams params_;
    std::mt19937_64 rng_;
};

/// Uniform over every field's feasible range; group choice uniform on [0, N].
class RandomPolicy final : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

    GroupId choose_group(const Observation& obs) override;
    std::map<AgentId, double> propose(const Observation& obs) override;
    std::map<AgentId, bool> evaluate(const Observation& obs) override;
    AgentAction act(const Observation& obs) override;
    std::string archetype() const override { return "random"; }

private:
    std::mt19937_64 rng_;
};

/// Archetype name plus its parameters.
struct PolicySpec {
    std::string archetype = "cooperative";
    CooperativeParams cooperative;
    FreeriderParams freerider;
};

enum class PolicyAssignment {
    uniform,  // every agent uses `uniform`
    mixed,    // top five cooperative, a seeded fraction of the rest free-riders
};

/// Which policy each agent runs. Explicit per-agent overrides win over the
/// assignment rule.
struct PolicyMap {
    PolicyAssignment assignment = PolicyAssignment::mixed;
    PolicySpec uniform;
    double freerider_fraction = 0.25;
    CooperativeParams cooperative;
    FreeriderParams freerider{.p_exit = 0.5, .saving_rate = 0.25, .compliance_threshold = 0.2};
    std::map<AgentId, PolicySpec> overrides;
};

ValidationReport validate(const PolicyMap& map, std::size_t num_agents);

/// Resolves the map to one spec per agent. `ranking` is best-first; `seed`
/// picks the free-riders in mixed mode and is independent of the scenario.
std::vector<PolicySpec> assign_policies(const PolicyMap& map, std::span<const AgentId> ranking,
                                        std::uint64_t seed);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed);

}  // namespace clubsim

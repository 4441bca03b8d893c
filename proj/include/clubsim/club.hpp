#pragma once

#include <map>
#include <span>
#include <vector>

#include "clubsim/diagnostics.hpp"
#include "clubsim/error.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

/// How the member tariff falls as co-membership persists. Both reach exactly
/// zero once the counter hits the decay horizon.
enum class DecaySchedule {
    linear,  // tau0 * (1 - k / D)
    cliff,   // tau0 until k = D, then 0
};

struct ClubParams {
    double surcharge = 0.10;
    double member_tariff_initial = 0.05;
    int decay_horizon = 3;  // steps
    DecaySchedule schedule = DecaySchedule::linear;

    /// Member tariff after `counter` consecutive co-membership steps.
    double member_tariff(int counter) const;
};

ValidationReport validate(const ClubParams& params);

/// New membership is the choices verbatim. Choices outside [0, N] become 0
/// and are reported.
std::vector<GroupId> resolve_group_choices(std::span<const GroupId> previous,
                                           std::span<const GroupId> choices,
                                           Diagnostics* diags = nullptr);

/// +1 for every pair sharing a nonzero group in `membership`, reset to 0
/// otherwise. The diagonal stays 0.
SquareMatrix<int> update_co_membership(const SquareMatrix<int>& counters,
                                       std::span<const GroupId> membership);

enum class TariffRule {
    member,      // co-members: decaying member tariff
    surcharged,  // grouped importer, exporter outside its club
    base,        // importer in no club
};

TariffRule tariff_rule(AgentId importer, AgentId exporter, std::span<const GroupId> membership);

/// Tariff importer `importer` levies on goods from `exporter`.
double effective_tariff(AgentId importer, AgentId exporter, double base,
                        std::span<const GroupId> membership, const SquareMatrix<int>& counters,
                        const ClubParams& params);

/// Keeps proposals between distinct co-members of a nonzero group whose
/// request lies in [0, 1]. Output is ordered by (proposer, recipient).
/// `raw[i]` maps recipient -> requested mitigation for proposer i.
std::vector<Proposal> collect_proposals(std::span<const GroupId> membership,
                                        std::span<const std::map<AgentId, double>> raw,
                                        Diagnostics* diags = nullptr);

/// `evaluations[i]` maps proposer -> accepted for recipient i. Returns, per
/// agent, the largest accepted request (0 when none). Unanswered proposals
/// count as rejected.
std::vector<double> apply_evaluations(std::span<const Proposal> proposals,
                                      std::span<const std::map<AgentId, bool>> evaluations,
                                      Diagnostics* diags = nullptr);

inline double realized_mitigation(double chosen, double floor) { return chosen > floor ? chosen : floor; }

}  // namespace clubsim

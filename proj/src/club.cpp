#include "clubsim/club.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clubsim {

double ClubParams::member_tariff(int counter) const {
    if (counter >= decay_horizon) return 0.0;
    switch (schedule) {
    case DecaySchedule::cliff:
        return member_tariff_initial;
    case DecaySchedule::linear:
        break;
    }
    const double remaining = 1.0 - static_cast<double>(std::max(counter, 0)) / decay_horizon;
    return member_tariff_initial * std::max(0.0, remaining);
}

ValidationReport validate(const ClubParams& params) {
    ValidationReport report;
    if (!(params.surcharge >= 0.0 && params.surcharge <= 1.0))
        report.add("club", "surcharge", "must lie in [0, 1]");
    if (!(params.member_tariff_initial >= 0.0 && params.member_tariff_initial <= 1.0))
        report.add("club", "member_tariff_initial", "must lie in [0, 1]");
    if (params.decay_horizon < 1) report.add("club", "decay_horizon", "must be >= 1");
    return report;
}

std::vector<GroupId> resolve_group_choices(std::span<const GroupId> previous,
                                           std::span<const GroupId> choices, Diagnostics* diags) {
    const auto n = static_cast<GroupId>(choices.size());
    std::vector<GroupId> next(choices.begin(), choices.end());
    for (std::size_t i = 0; i < next.size(); ++i) {
        if (next[i] < 0 || next[i] > n) {
            note(diags, "membership",
                 "agent " + std::to_string(i) + " chose group " + std::to_string(next[i]) +
                     " outside [0, " + std::to_string(n) + "]; treated as 0");
            next[i] = kNoGroup;
        }
    }
    (void)previous;  // choices carry the full decision, including "stay"
    return next;
}

SquareMatrix<int> update_co_membership(const SquareMatrix<int>& counters,
                                       std::span<const GroupId> membership) {
    const std::size_t n = membership.size();
    SquareMatrix<int> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && membership[i] != kNoGroup && membership[i] == membership[j])
                next(i, j) = counters(i, j) + 1;
        }
    }
    return next;
}

TariffRule tariff_rule(AgentId importer, AgentId exporter, std::span<const GroupId> membership) {
    const GroupId group = membership[importer];
    if (group == kNoGroup) return TariffRule::base;
    if (importer != exporter && membership[exporter] == group) return TariffRule::member;
    return TariffRule::surcharged;
}

double effective_tariff(AgentId importer, AgentId exporter, double base,
                        std::span<const GroupId> membership, const SquareMatrix<int>& counters,
                        const ClubParams& params) {
    switch (tariff_rule(importer, exporter, membership)) {
    case TariffRule::member:
        return params.member_tariff(counters(importer, exporter));
    case TariffRule::surcharged:
        return std::min(1.0, base + params.surcharge);
    case TariffRule::base:
        break;
    }
    return base;
}

std::vector<Proposal> collect_proposals(std::span<const GroupId> membership,
                                        std::span<const std::map<AgentId, double>> raw,
                                        Diagnostics* diags) {
    const std::size_t n = membership.size();
    std::vector<Proposal> kept;
    for (std::size_t proposer = 0; proposer < raw.size(); ++proposer) {
        for (const auto& [recipient, request] : raw[proposer]) {
            const std::string tag = std::to_string(proposer) + " -> " + std::to_string(recipient);
            if (proposer >= n || recipient >= n) {
                note(diags, "proposals", "dropped " + tag + ": unknown agent");
            } else if (proposer == recipient) {
                note(diags, "proposals", "dropped " + tag + ": self proposal");
            } else if (membership[proposer] == kNoGroup) {
                note(diags, "proposals", "dropped " + tag + ": proposer in no group");
            } else if (membership[proposer] != membership[recipient]) {
                note(diags, "proposals", "dropped " + tag + ": not co-members");
            } else if (!(request >= 0.0 && request <= 1.0)) {
                note(diags, "proposals", "dropped " + tag + ": request outside [0, 1]");
            } else {
                kept.push_back({proposer, recipient, request});
            }
        }
    }
    return kept;
}

std::vector<double> apply_evaluations(std::span<const Proposal> proposals,
                                      std::span<const std::map<AgentId, bool>> evaluations,
                                      Diagnostics* diags) {
    std::vector<double> floors(evaluations.size(), 0.0);
    std::vector<std::map<AgentId, double>> received(evaluations.size());
    for (const Proposal& p : proposals) {
        if (p.recipient < received.size()) received[p.recipient][p.proposer] = p.requested_mitigation;
    }
    for (std::size_t i = 0; i < evaluations.size(); ++i) {
        for (const auto& [proposer, accepted] : evaluations[i]) {
            auto it = received[i].find(proposer);
            if (it == received[i].end()) {
                note(diags, "evaluations",
                     "agent " + std::to_string(i) + " answered a nonexistent proposal from " +
                         std::to_string(proposer));
                continue;
            }
            if (accepted) floors[i] = std::max(floors[i], it->second);
        }
    }
    return floors;
}

}  // namespace clubsim

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "clubsim/config.hpp"
#include "clubsim/diagnostics.hpp"
#include "clubsim/policies.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

/// Full record of one seeded run. snapshots[k] is the world after k steps;
/// records[k] holds what happened during step k.
struct EpisodeTrajectory {
    Scenario scenario = Scenario::none;
    std::uint64_t seed = 0;
    double years_per_step = 5.0;
    std::vector<AgentId> ranking;
    std::vector<std::string> archetypes;
    std::vector<WorldSnapshot> snapshots;
    std::vector<StepRecord> records;
    std::vector<MetricsRow> metrics;
    Diagnostics diagnostics;

    std::vector<GroupId> final_groups() const { return snapshots.back().club.membership; }
    double final_temp_rise() const { return metrics.back().temp_rise; }
    /// Gross output produced over the horizon (sum over steps of the annual
    /// total times years per step).
    double cumulative_gross_output() const;
};

/// Advances the world by one step in fixed stage order: membership,
/// proposals, evaluations, clamped actions and tariffs, trade, dynamics,
/// co-membership counters. Agents are visited in ascending id.
WorldState step_episode(const WorldState& world, std::span<const std::unique_ptr<Policy>> policies,
                        const SimConfig& config, StepRecord* record = nullptr, Diagnostics* diags = nullptr);

/// Metrics for one snapshot. `top5` are the five best-ranked agents.
MetricsRow compute_metrics(const WorldSnapshot& snapshot, double initial_temp, std::span<const AgentId> top5, double capital_elasticity);

/// Initial membership for `scenario` (all zero for Scenario::none).
std::vector<GroupId> initial_groups(Scenario scenario, std::span<const AgentId> ranking, std::uint64_t seed);

/// Loads the calibration named by `config` and runs `config.scenario`.
EpisodeTrajectory run_episode(const SimConfig& config, std::uint64_t seed);
EpisodeTrajectory run_episode(const SimConfig& config, std::span<const RegionParams> calibration,
                              Scenario scenario, std::uint64_t seed);

struct ScenarioSummary {
    Scenario scenario = Scenario::none;
    double mean_final_temp_rise = 0.0;
    double mean_cumulative_output = 0.0;
    double mean_final_largest_group = 0.0;
    double mean_final_top5_in_largest = 0.0;
    std::vector<double> mean_mitigation_by_step;  // averaged across seeds
    std::map<int, int> final_group_size_histogram;  // group size -> count over seeds
};

/// First experiment scenario minus the second, for one seed.
struct PairedDelta {
    std::uint64_t seed = 0;
    double temp_rise_delta = 0.0;
    double cumulative_output_rel_diff = 0.0;  // |a - b| / max(a, b)
    int largest_group_delta = 0;
    int top5_in_largest_delta = 0;
};

struct ExperimentSummary {
    std::vector<Scenario> scenarios;
    std::vector<std::uint64_t> seeds;
    std::vector<ScenarioSummary> per_scenario;
    std::vector<PairedDelta> paired;
};

struct ExperimentResult {
    std::vector<EpisodeTrajectory> runs;  // scenario-major, then seed order
    ExperimentSummary summary;
};

/// Every experiment scenario x seed. Episodes run concurrently; results are
/// assembled in fixed order, so output does not depend on scheduling.
ExperimentResult run_experiment(const SimConfig& config);
ExperimentResult run_experiment(const SimConfig& config, std::span<const RegionParams> calibration);

ExperimentSummary summarize(std::span<const EpisodeTrajectory> runs, std::span<const Scenario> scenarios,
                            std::span<const std::uint64_t> seeds);

}  // namespace clubsim

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clubsim/config.hpp"
#include "clubsim/harness.hpp"

namespace clubsim {

inline constexpr std::string_view kMetricsHeader =
    "step,year,temp_rise,total_gross_output,mean_mitigation,group_count,largest_group_size,top5_in_largest";

std::string metrics_csv(std::span<const MetricsRow> rows);
std::string groups_csv(std::span<const GroupId> groups);
/// One row per (step, agent) with the raw state and realized flows.
std::string regions_csv(const EpisodeTrajectory& trajectory);

nlohmann::json run_summary_json(const EpisodeTrajectory& trajectory, const SimConfig& config);
nlohmann::json experiment_summary_json(const ExperimentSummary& summary, const SimConfig& config);

/// "<scenario>_seed<seed>", the stem shared by a run's files.
std::string run_stem(const EpisodeTrajectory& trajectory);

/// Writes <stem>_metrics.csv, <stem>_groups.csv and <stem>_regions.csv into
/// `outdir`. Returns the paths written.
std::vector<std::filesystem::path> export_run_files(const EpisodeTrajectory& trajectory,
                                                    const std::filesystem::path& outdir);

/// Single run: per-run files plus summary.json.
std::vector<std::filesystem::path> export_results(const EpisodeTrajectory& trajectory, const SimConfig& config,
                                                  const std::filesystem::path& outdir);

/// Experiment: per-run files for every run plus summary.json.
std::vector<std::filesystem::path> export_results(const ExperimentResult& result, const SimConfig& config,
                                                  const std::filesystem::path& outdir);

/// Writes `content` to `path`, throwing RuntimeError with the path on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace clubsim

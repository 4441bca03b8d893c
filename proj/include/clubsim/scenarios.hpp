#pragma once

#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "clubsim/error.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

enum class Scenario { none, hc, hc_lc };

std::string_view to_string(Scenario scenario);
/// Accepts "none", "hc", "hc_lc".
Scenario parse_scenario(std::string_view text);

/// Column names of the calibration file, in canonical order.
std::span<const std::string_view> calibration_columns();

/// Reads a calibration CSV. Row order defines agent ids. Errors name the
/// 1-based data row (header excluded) and the column.
std::vector<RegionParams> load_calibration(const std::filesystem::path& path);
std::vector<RegionParams> parse_calibration(std::string_view text);

/// Non-finite or out-of-range calibration values, one issue per field.
ValidationReport validate(std::span<const RegionParams> regions);

struct RankingScore {
    AgentId agent = 0;
    double emissions_initial = 0.0;
    double output_initial = 0.0;
    double composite_score = 0.0;
};

/// w * minmax(emissions) + (1 - w) * minmax(initial gross output), sorted by
/// descending score with ties broken by ascending id.
std::vector<RankingScore> ranking_scores(std::span<const RegionParams> regions,
                                         double capital_elasticity = 0.3,
                                         double emissions_weight = 0.5);

std::vector<AgentId> rank_regions(std::span<const RegionParams> regions,
                                  double capital_elasticity = 0.3, double emissions_weight = 0.5);

/// Top five ranked agents share group 1; the rest draw uniformly from
/// groups 2..5. Needs N >= 9.
std::vector<GroupId> init_hc(std::span<const AgentId> ranking, std::mt19937_64& rng);

/// Top five ranked agents seed groups 1..5; the rest follow round-robin in
/// rank order. Needs N >= 5.
std::vector<GroupId> init_hc_lc(std::span<const AgentId> ranking);

}  // namespace clubsim

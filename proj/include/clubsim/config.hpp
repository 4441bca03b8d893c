#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "clubsim/club.hpp"
#include "clubsim/dynamics.hpp"
#include "clubsim/policies.hpp"
#include "clubsim/scenarios.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

/// Initial climate: DICE-2016 values for 2015.
ClimateState default_climate();

struct SimConfig {
    std::size_t num_agents = 27;
    int steps = 20;
    double years_per_step = 5.0;
    Scenario scenario = Scenario::hc_lc;
    std::vector<Scenario> experiment_scenarios{Scenario::hc, Scenario::hc_lc};
    std::vector<std::uint64_t> seeds{0};
    /// Empty means the bundled 27-region file.
    std::string calibration_path;
    double ranking_emissions_weight = 0.5;
    ClimateState climate_init = default_climate();
    ClubParams club;
    DynamicsParams dynamics;
    ActionBounds bounds;
    PolicyMap policies;
    std::string output_dir = "results";
    /// Worker threads for experiments; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Bundled calibration file location (set at build time).
std::filesystem::path default_calibration_path();
std::filesystem::path resolved_calibration_path(const SimConfig& config);

/// Checks every field that does not need the calibration.
ValidationReport validate(const SimConfig& config);

/// Reads a JSON config. Every field is optional; unknown keys are rejected.
SimConfig load_config(const std::filesystem::path& path);
SimConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const SimConfig& config);

}  // namespace clubsim

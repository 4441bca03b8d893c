#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"

#include "clubsim/config.hpp"
#include "clubsim/export.hpp"
#include "clubsim/harness.hpp"
#include "clubsim/scenarios.hpp"

using namespace clubsim;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty document gives the defaults") {
    const SimConfig c = parse_config(json::object());
    CHECK(c.num_agents == 27);
    CHECK(c.steps == 20);
    CHECK(c.years_per_step == 5.0);
    CHECK(c.club.surcharge == 0.10);
    CHECK(c.policies.freerider.compliance_threshold == 0.2);
    CHECK(validate(c).ok());
}

TEST_CASE("fields are read") {
    const SimConfig c = parse_config(json::parse(R"({
        "steps": 4,
        "seeds": [3, 9],
        "experiment_scenarios": ["none", "hc"],
        "club": {"surcharge": 0.2, "schedule": "cliff"},
        "bounds": {"saving_max": 0.3},
        "policies": {
            "assignment": "uniform",
            "uniform": {"archetype": "freerider", "p_exit": 0.1},
            "freerider": {"compliance_threshold": null},
            "agents": [{"id": 2, "archetype": "random"}]
        }
    })"));
    CHECK(c.steps == 4);
    CHECK(c.seeds == std::vector<std::uint64_t>{3, 9});
    CHECK(c.experiment_scenarios == std::vector<Scenario>{Scenario::none, Scenario::hc});
    CHECK(c.club.surcharge == 0.2);
    CHECK(c.club.schedule == DecaySchedule::cliff);
    CHECK(c.bounds.saving_max == 0.3);
    CHECK(c.policies.assignment == PolicyAssignment::uniform);
    CHECK(c.policies.uniform.freerider.p_exit == 0.1);
    CHECK(std::isinf(c.policies.freerider.compliance_threshold));
    CHECK(c.policies.overrides.at(2).archetype == "random");
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK(error_of(json::parse(R"({"stepz": 3})")).find("stepz") != std::string::npos);
    CHECK(error_of(json::parse(R"({"club": {"surchage": 0.1}})")).find("surchage") != std::string::npos);
    CHECK(error_of(json::parse(R"({"steps": "many"})")).find("steps") != std::string::npos);
    CHECK(error_of(json::parse(R"({"scenario": "global"})")).find("global") != std::string::npos);
    CHECK_FALSE(error_of(json::parse(R"({"club": {"schedule": "stepwise"}})")).empty());
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);

    SimConfig c;
    c.steps = 0;
    c.seeds.clear();
    CHECK(validate(c).issues().size() == 2);
}

TEST_CASE("to_json round-trips") {
    SimConfig c;
    c.steps = 7;
    c.seeds = {1, 2};
    c.club.schedule = DecaySchedule::cliff;
    c.policies.overrides[4].archetype = "random";
    c.policies.freerider.compliance_threshold = std::numeric_limits<double>::infinity();
    const json doc = to_json(c);
    CHECK(to_json(parse_config(doc)) == doc);
}

}

TEST_SUITE("export") {

TEST_CASE("metrics csv") {
    MetricsRow row{2, 10.0, 0.1, 123.456, 0.3, 2, 4, 1};
    const std::vector<MetricsRow> rows{row};
    CHECK(metrics_csv(rows) ==
          "step,year,temp_rise,total_gross_output,mean_mitigation,group_count,largest_group_size,top5_in_largest\n"
          "2,10,0.1,123.456,0.3,2,4,1\n");

    SUBCASE("doubles round-trip") {
        MetricsRow tricky{0, 0.0, 0.1 + 0.2, 1.0 / 3.0, 2.0 / 7.0, 0, 0, 0};
        const std::vector<MetricsRow> one{tricky};
        const std::string text = metrics_csv(one);
        std::istringstream in(text.substr(text.find('\n') + 1));
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(in, cell, ',')) cells.push_back(cell);
        CHECK(std::stod(cells[2]) == tricky.temp_rise);
        CHECK(std::stod(cells[3]) == tricky.total_gross_output);
        CHECK(std::stod(cells[4]) == tricky.mean_mitigation);
    }
}

TEST_CASE("groups csv") {
    CHECK(groups_csv(std::vector<GroupId>{1, 0, 3}) == "agent_id,group_id\n0,1\n1,0\n2,3\n");
}

TEST_CASE("run files") {
    SimConfig config;
    config.steps = 2;
    const auto traj = run_episode(config, load_calibration(default_calibration_path()), Scenario::hc_lc, 4);
    CHECK(run_stem(traj) == "hc_lc_seed4");

    const auto summary = run_summary_json(traj, config);
    CHECK(summary.at("seed") == 4);
    CHECK(summary.at("final_year") == 10.0);
    CHECK(summary.at("archetypes").size() == 27);

    const auto dir = std::filesystem::temp_directory_path() / "clubsim_test_run_files";
    std::filesystem::remove_all(dir);
    const auto written = export_results(traj, config, dir);
    CHECK(written.size() == 4);
    for (const auto& p : written) CHECK(std::filesystem::exists(p));
    std::filesystem::remove_all(dir);

    const std::string regions = regions_csv(traj);
    CHECK(std::count(regions.begin(), regions.end(), '\n') == 1 + 3 * 27);
}

TEST_CASE("write failures name the path") {
    try {
        write_text("/nonexistent/dir/out.csv", "x");
        FAIL("expected a runtime error");
    } catch (const RuntimeError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
}

}

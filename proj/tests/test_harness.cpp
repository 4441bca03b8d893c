#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "doctest.h"

#include "clubsim/club.hpp"
#include "clubsim/dynamics.hpp"
#include "clubsim/export.hpp"
#include "clubsim/harness.hpp"
#include "clubsim/scenarios.hpp"
#include "clubsim/world.hpp"

using namespace clubsim;

namespace {

const std::vector<RegionParams>& bundled() {
    static const std::vector<RegionParams> regions = load_calibration(default_calibration_path());
    return regions;
}

std::vector<RegionParams> small_calibration(std::size_t n) {
    std::vector<RegionParams> out(bundled().begin(), bundled().begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

std::vector<std::unique_ptr<Policy>> cooperative_policies(std::size_t n) {
    std::vector<std::unique_ptr<Policy>> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::make_unique<CooperativePolicy>());
    return out;
}

// Proposes to everybody, asks for impossible groups and never sends tariffs.
class RoguePolicy final : public Policy {
public:
    GroupId choose_group(const Observation& obs) override {
        return obs.self == 0 ? static_cast<GroupId>(obs.num_agents + 3) : obs.membership[obs.self];
    }
    std::map<AgentId, double> propose(const Observation& obs) override {
        std::map<AgentId, double> out;
        for (AgentId j = 0; j < obs.num_agents + 1; ++j) out[j] = 0.9;
        return out;
    }
    std::map<AgentId, bool> evaluate(const Observation& obs) override {
        std::map<AgentId, bool> out;
        for (const Proposal& p : obs.incoming) out[p.proposer] = true;
        out[obs.self] = true;
        return out;
    }
    AgentAction act(const Observation&) override { return {}; }
    std::string archetype() const override { return "rogue"; }
};

SimConfig small_config(std::size_t n) {
    SimConfig c;
    c.num_agents = n;
    return c;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("clubsim_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("two co-members start at the initial member tariff") {
    const SimConfig config = small_config(2);
    const auto params = small_calibration(2);
    WorldState world = new_world(params, config.climate_init, config);
    world.now.club.membership = {1, 1};
    for (auto& r : world.now.regions) r.group_id = 1;
    const auto policies = cooperative_policies(2);

    StepRecord first;
    world = step_episode(world, policies, config, &first);
    CHECK(first.effective_tariffs(0, 1) == doctest::Approx(0.05));
    CHECK(first.effective_tariffs(1, 0) == doctest::Approx(0.05));
    CHECK(world.now.club.co_membership_steps(0, 1) == 1);

    StepRecord second;
    world = step_episode(world, policies, config, &second);
    CHECK(second.effective_tariffs(0, 1) == doctest::Approx(0.05 * 2.0 / 3.0));

    for (int k = 0; k < 2; ++k) world = step_episode(world, policies, config);
    StepRecord fifth;
    world = step_episode(world, policies, config, &fifth);
    CHECK(fifth.effective_tariffs(0, 1) == 0.0);

    CHECK(first.proposals.size() == 2);
    CHECK(first.flows[0].mitigation_floor == doctest::Approx(0.1));
}

TEST_CASE("zero industrial emissions leaves only land-use carbon") {
    SimConfig config = small_config(4);
    config.bounds.mitigation_min = 1.0;
    const auto params = small_calibration(4);
    WorldState world = new_world(params, config.climate_init, config);
    const auto policies = cooperative_policies(4);
    StepRecord rec;
    world = step_episode(world, policies, config, &rec);
    for (const auto& f : rec.flows) CHECK(f.emissions == 0.0);
    CHECK(rec.injected_carbon == doctest::Approx(5.0 * config.dynamics.land_emissions(0.0)));
}

TEST_CASE("protocol violations are dropped and reported") {
    const SimConfig config = small_config(4);
    const auto params = small_calibration(4);
    WorldState world = new_world(params, config.climate_init, config);
    world.now.club.membership = {1, 1, 2, 0};
    for (std::size_t i = 0; i < 4; ++i) world.now.regions[i].group_id = world.now.club.membership[i];
    std::vector<std::unique_ptr<Policy>> policies;
    for (int i = 0; i < 4; ++i) policies.push_back(std::make_unique<RoguePolicy>());

    StepRecord rec;
    Diagnostics diags;
    world = step_episode(world, policies, config, &rec, &diags);
    CHECK(world.now.club.membership == std::vector<GroupId>{0, 1, 2, 0});
    CHECK(rec.proposals.empty());
    CHECK(diags.count("membership") == 1);
    CHECK(diags.count("proposals") > 0);
    CHECK(diags.count("evaluations") > 0);
    CHECK(diags.count("actions") == 4);
    for (const auto& a : rec.actions) {
        CHECK(a.saving_rate == config.bounds.saving_min);
        CHECK(a.base_tariffs.size() == 4);
    }
}

TEST_CASE("step errors carry step and stage") {
    SimConfig config = small_config(3);
    const auto params = small_calibration(3);
    const WorldState world = new_world(params, config.climate_init, config);
    const auto policies = cooperative_policies(3);
    config.dynamics.carbon_transfer[0][0] += 0.01;
    try {
        step_episode(world, policies, config);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("step 0, stage dynamics") != std::string::npos);
    }
    CHECK_THROWS_AS(step_episode(world, cooperative_policies(2), small_config(3)), ValidationError);
}

TEST_CASE("episode shape and metrics") {
    SimConfig config;
    const auto traj = run_episode(config, bundled(), Scenario::hc_lc, 3);
    REQUIRE(traj.metrics.size() == 21);
    CHECK(traj.records.size() == 20);
    CHECK(traj.metrics.back().year == 100.0);
    CHECK(traj.metrics.front().temp_rise == 0.0);

    const std::vector<AgentId> top5(traj.ranking.begin(), traj.ranking.begin() + 5);
    for (std::size_t t = 0; t < traj.snapshots.size(); ++t) {
        const WorldSnapshot& s = traj.snapshots[t];
        CHECK(validate(s).ok());
        CHECK(compute_metrics(s, traj.snapshots[0].climate.temp_atmosphere, top5, 0.3) == traj.metrics[t]);

        double mu = 0.0;
        std::map<GroupId, int> sizes;
        for (std::size_t i = 0; i < 27; ++i) {
            mu += s.regions[i].mitigation_rate;
            if (s.club.membership[i] != 0) ++sizes[s.club.membership[i]];
        }
        CHECK(traj.metrics[t].mean_mitigation == doctest::Approx(mu / 27.0));
        CHECK(traj.metrics[t].group_count == static_cast<int>(sizes.size()));
        int largest = 0;
        for (const auto& [g, c] : sizes) largest = std::max(largest, c);
        CHECK(traj.metrics[t].largest_group_size == largest);
        CHECK(traj.metrics[t].top5_in_largest <= 5);
    }

    SUBCASE("realized mitigation respects accepted floors") {
        for (std::size_t t = 0; t < traj.records.size(); ++t) {
            for (std::size_t i = 0; i < 27; ++i) {
                CHECK(traj.snapshots[t + 1].regions[i].mitigation_rate >= traj.records[t].flows[i].mitigation_floor);
            }
        }
    }

    SUBCASE("step-0 groups match the initializer") {
        const auto groups = traj.snapshots[0].club.membership;
        std::set<GroupId> top;
        for (AgentId a : top5) top.insert(groups[a]);
        CHECK(top.size() == 5);
    }
}

TEST_CASE("scenario none starts ungrouped") {
    SimConfig config;
    config.steps = 2;
    const auto traj = run_episode(config, bundled(), Scenario::none, 0);
    for (const GroupId g : traj.snapshots[0].club.membership) CHECK(g == 0);
    CHECK(traj.metrics[0].group_count == 0);
}

TEST_CASE("reruns are byte-identical") {
    SimConfig config;
    const auto a = run_episode(config, bundled(), Scenario::hc, 11);
    const auto b = run_episode(config, bundled(), Scenario::hc, 11);
    CHECK(metrics_csv(a.metrics) == metrics_csv(b.metrics));
    CHECK(regions_csv(a) == regions_csv(b));
    CHECK(groups_csv(a.final_groups()) == groups_csv(b.final_groups()));

    const auto c = run_episode(config, bundled(), Scenario::hc, 12);
    CHECK(groups_csv(c.snapshots[0].club.membership) != groups_csv(a.snapshots[0].club.membership));
}

TEST_CASE("experiment output files") {
    SimConfig config;
    config.seeds = {5};
    const auto dir = fresh_dir("experiment_count");
    const auto result = run_experiment(config, bundled());
    export_results(result, config, dir);

    int metrics = 0, summaries = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.ends_with("_metrics.csv")) ++metrics;
        if (name == "summary.json") ++summaries;
    }
    CHECK(metrics == 2);
    CHECK(summaries == 1);
    CHECK(std::filesystem::exists(dir / "hc_seed5_groups.csv"));
    CHECK(slurp(dir / "hc_lc_seed5_metrics.csv").starts_with(std::string(kMetricsHeader) + "\n"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment results do not depend on thread count") {
    SimConfig config;
    config.seeds = {0, 1, 2, 3};
    config.threads = 1;
    const auto serial = run_experiment(config, bundled());
    config.threads = 4;
    const auto parallel = run_experiment(config, bundled());
    REQUIRE(serial.runs.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(serial.runs[k].metrics == parallel.runs[k].metrics);
    CHECK(experiment_summary_json(serial.summary, config) == experiment_summary_json(parallel.summary, config));
}

TEST_CASE("club mechanism is inert when everyone free-rides") {
    SimConfig config;
    config.seeds = {0, 1, 2, 3, 4};
    config.policies.assignment = PolicyAssignment::uniform;
    config.policies.uniform.archetype = "freerider";
    for (const double p_exit : {1.0, 0.5}) {
        config.policies.uniform.freerider.p_exit = p_exit;
        const auto result = run_experiment(config, bundled());
        for (const auto& d : result.summary.paired) {
            CHECK(std::abs(d.temp_rise_delta) < 1e-12);
            CHECK(d.cumulative_output_rel_diff < 1e-12);
        }
    }
}

TEST_CASE("cumulative output sums the horizon") {
    SimConfig config;
    config.steps = 3;
    const auto traj = run_episode(config, bundled(), Scenario::hc_lc, 0);
    double expected = 0.0;
    for (int t = 0; t < 3; ++t) expected += traj.metrics[static_cast<std::size_t>(t)].total_gross_output * 5.0;
    CHECK(traj.cumulative_gross_output() == doctest::Approx(expected));
}

}

#include "clubsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "clubsim/club.hpp"
#include "clubsim/dynamics.hpp"
#include "clubsim/rng.hpp"
#include "clubsim/scenarios.hpp"
#include "clubsim/world.hpp"

namespace clubsim {

double EpisodeTrajectory::cumulative_gross_output() const {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < metrics.size(); ++k) total += metrics[k].total_gross_output * years_per_step;
    return total;
}

namespace {

ValidationError with_context(const ValidationError& e, int step, const std::string& stage) {
    ValidationReport report;
    for (const ValidationIssue& issue : e.report().issues()) {
        report.add("step " + std::to_string(step) + ", stage " + stage + ": " + issue.location, issue.field,
                   issue.message);
    }
    return ValidationError(std::move(report));
}

}  // namespace

WorldState step_episode(const WorldState& world, std::span<const std::unique_ptr<Policy>> policies,
                        const SimConfig& config, StepRecord* record, Diagnostics* diags) {
    const WorldSnapshot& now = world.now;
    const std::size_t n = world.num_agents();
    const DynamicsParams& dyn = config.dynamics;
    const double dt = config.years_per_step;
    if (policies.size() != n) throw ValidationError("step_episode: need one policy per agent");
    if (diags != nullptr) diags->set_step(now.step);

    std::string stage = "membership";
    try {
        std::vector<double> gross(n);
        for (std::size_t i = 0; i < n; ++i) {
            const RegionState& r = now.regions[i];
            gross[i] = gross_output(r.tfp, r.capital, r.labor, dyn.capital_elasticity);
        }
        auto observe = [&](AgentId i, std::span<const GroupId> membership) {
            Observation obs;
            obs.self = i;
            obs.step = now.step;
            obs.num_agents = n;
            obs.own = &now.regions[i];
            obs.membership = membership;
            obs.gross_outputs = gross;
            obs.bounds = &config.bounds;
            return obs;
        };

        // (1) group choices
        std::vector<GroupId> choices(n);
        for (AgentId i = 0; i < n; ++i) choices[i] = policies[i]->choose_group(observe(i, now.club.membership));
        const std::vector<GroupId> membership = resolve_group_choices(now.club.membership, choices, diags);

        // (2) proposals
        stage = "proposals";
        std::vector<std::map<AgentId, double>> raw(n);
        for (AgentId i = 0; i < n; ++i) raw[i] = policies[i]->propose(observe(i, membership));
        const std::vector<Proposal> proposals = collect_proposals(membership, raw, diags);

        // (3) evaluations
        stage = "evaluations";
        std::vector<std::vector<Proposal>> incoming(n);
        for (const Proposal& p : proposals) incoming[p.recipient].push_back(p);
        std::vector<std::map<AgentId, bool>> evaluations(n);
        for (AgentId i = 0; i < n; ++i) {
            Observation obs = observe(i, membership);
            obs.incoming = incoming[i];
            evaluations[i] = policies[i]->evaluate(obs);
        }
        const std::vector<double> floors = apply_evaluations(proposals, evaluations, diags);

        // (4) economic actions and tariffs
        stage = "actions";
        std::vector<AgentAction> actions(n);
        std::vector<double> mitigation(n);
        for (AgentId i = 0; i < n; ++i) {
            AgentAction a = policies[i]->act(observe(i, membership));
            a.group_choice = choices[i];
            a.proposals = raw[i];
            a.evaluations = evaluations[i];
            if (a.base_tariffs.size() != n) {
                note(diags, "actions", "agent " + std::to_string(i) + " gave " + std::to_string(a.base_tariffs.size()) +
                                           " base tariffs; padded with 0");
                a.base_tariffs.resize(n, 0.0);
            }
            actions[i] = clamp_action(std::move(a), config.bounds);
            mitigation[i] = realized_mitigation(actions[i].mitigation_rate, floors[i]);
        }
        SquareMatrix<double> tariffs(n, 0.0);
        for (AgentId i = 0; i < n; ++i) {
            for (AgentId j = 0; j < n; ++j) {
                if (i != j)
                    tariffs(i, j) = effective_tariff(i, j, actions[i].base_tariffs[j], membership,
                                                     now.club.co_membership_steps, config.club);
            }
        }

        // (5) trade
        stage = "trade";
        std::vector<double> net(n);
        std::vector<double> caps(n);
        for (AgentId i = 0; i < n; ++i) {
            net[i] = net_output(gross[i], now.climate.temp_atmosphere, mitigation[i],
                                world.params[i].abatement_cost_coeff, dyn);
            caps[i] = actions[i].export_cap;
        }
        SquareMatrix<double> bids(n, 0.0);
        if (n > 1) {
            for (AgentId i = 0; i < n; ++i) {
                const double per_partner = dyn.import_share * net[i] / static_cast<double>(n - 1);
                for (AgentId j = 0; j < n; ++j) {
                    if (i != j) bids(i, j) = per_partner;
                }
            }
        }
        const TradeOutcome trade = settle_trade(net, caps, bids, tariffs);

        // (6) economy and climate
        stage = "dynamics";
        std::vector<RegionFlows> flows(n);
        double industrial = 0.0;
        for (AgentId i = 0; i < n; ++i) {
            RegionFlows& f = flows[i];
            f.gross_output = gross[i];
            f.net_output = net[i];
            f.emissions = emissions(now.regions[i].carbon_intensity, mitigation[i], gross[i]);
            f.mitigation_floor = floors[i];
            f.exports = trade.exports[i];
            f.effective_imports = trade.effective_imports[i];
            f.tariff_revenue = trade.tariff_revenue[i];
            f.consumption = consumption(net[i], actions[i].saving_rate, trade, i);
            const Reward reward = step_reward(f.consumption, now.regions[i].labor, dyn.utility_elasticity,
                                              dyn.consumption_floor);
            f.reward = reward.utility;
            f.consumption_clamped = reward.clamped;
            if (reward.clamped) note(diags, "dynamics", "agent " + std::to_string(i) + " consumption clamped");
            industrial += f.emissions;
        }
        const double injected = dt * (industrial + dyn.land_emissions(now.year));

        WorldState next;
        next.params = world.params;
        WorldSnapshot& s = next.now;
        s.step = now.step + 1;
        s.year = now.year + dt;
        s.climate.carbon = carbon_cycle_step(now.climate.carbon, injected, dyn.carbon_transfer);
        std::tie(s.climate.temp_atmosphere, s.climate.temp_ocean) = temperature_step(
            now.climate.temp_atmosphere, now.climate.temp_ocean, s.climate.carbon[0], dyn, s.year);
        s.regions.resize(n);
        for (AgentId i = 0; i < n; ++i) {
            const RegionState& r = now.regions[i];
            RegionState& out = s.regions[i];
            out.capital = capital_step(r.capital, actions[i].saving_rate, net[i], dyn.capital_depreciation, dt);
            const ExogenousState exo =
                exogenous_step({r.tfp, r.carbon_intensity, r.labor}, world.params[i], now.year, dt);
            out.tfp = exo.tfp;
            out.carbon_intensity = exo.carbon_intensity;
            out.labor = exo.labor;
            out.saving_rate = actions[i].saving_rate;
            out.mitigation_rate = mitigation[i];
            out.export_cap = actions[i].export_cap;
            out.group_id = membership[i];
            out.base_tariffs = actions[i].base_tariffs;
        }

        // (7) co-membership counters
        stage = "counters";
        s.club.membership = membership;
        s.club.co_membership_steps = update_co_membership(now.club.co_membership_steps, membership);

        stage = "validate";
        ValidationReport report = validate(s);
        if (!report.ok()) throw ValidationError(std::move(report));

        if (record != nullptr) {
            record->step = now.step;
            record->actions = std::move(actions);
            record->proposals = proposals;
            record->flows = std::move(flows);
            record->effective_tariffs = std::move(tariffs);
            record->injected_carbon = injected;
        }
        return next;
    } catch (const ValidationError& e) {
        throw with_context(e, now.step, stage);
    }
}

MetricsRow compute_metrics(const WorldSnapshot& snapshot, double initial_temp, std::span<const AgentId> top5, double capital_elasticity) {
    MetricsRow row;
    row.step = snapshot.step;
    row.year = snapshot.year;
    row.temp_rise = snapshot.climate.temp_atmosphere - initial_temp;
    double mitigation = 0.0;
    for (const RegionState& r : snapshot.regions) {
        row.total_gross_output += gross_output(r.tfp, r.capital, r.labor, capital_elasticity);
        mitigation += r.mitigation_rate;
    }
    row.mean_mitigation = snapshot.regions.empty() ? 0.0 : mitigation / static_cast<double>(snapshot.regions.size());

    std::map<GroupId, int> sizes;
    for (GroupId g : snapshot.club.membership) {
        if (g != kNoGroup) ++sizes[g];
    }
    row.group_count = static_cast<int>(sizes.size());
    GroupId largest = kNoGroup;
    for (const auto& [group, size] : sizes) {  // ascending id, so ties keep the lowest id
        if (size > row.largest_group_size) {
            row.largest_group_size = size;
            largest = group;
        }
    }
    if (largest != kNoGroup) {
        for (AgentId a : top5) {
            if (snapshot.club.membership[a] == largest) ++row.top5_in_largest;
        }
    }
    return row;
}

std::vector<GroupId> initial_groups(Scenario scenario, std::span<const AgentId> ranking, std::uint64_t seed) {
    switch (scenario) {
    case Scenario::hc: {
        std::mt19937_64 rng = make_stream(seed, Stream::scenario);
        return init_hc(ranking, rng);
    }
    case Scenario::hc_lc:
        return init_hc_lc(ranking);
    case Scenario::none:
        break;
    }
    return std::vector<GroupId>(ranking.size(), kNoGroup);
}

EpisodeTrajectory run_episode(const SimConfig& config, std::uint64_t seed) {
    ValidationReport report = validate(config);
    if (!report.ok()) throw ValidationError(std::move(report));
    const auto calibration = load_calibration(resolved_calibration_path(config));
    return run_episode(config, calibration, config.scenario, seed);
}

EpisodeTrajectory run_episode(const SimConfig& config, std::span<const RegionParams> calibration,
                              Scenario scenario, std::uint64_t seed) {
    ValidationReport report = validate(config);
    if (!report.ok()) throw ValidationError(std::move(report));

    EpisodeTrajectory traj;
    traj.scenario = scenario;
    traj.seed = seed;
    traj.years_per_step = config.years_per_step;

    WorldState world = new_world(calibration, config.climate_init, config);
    const std::size_t n = world.num_agents();
    traj.ranking = rank_regions(calibration, config.dynamics.capital_elasticity, config.ranking_emissions_weight);

    world.now.club.membership = initial_groups(scenario, traj.ranking, seed);
    for (std::size_t i = 0; i < n; ++i) world.now.regions[i].group_id = world.now.club.membership[i];

    const std::vector<PolicySpec> specs = assign_policies(config.policies, traj.ranking, seed);
    std::vector<std::unique_ptr<Policy>> policies;
    for (std::size_t i = 0; i < n; ++i) {
        policies.push_back(make_policy(specs[i], derive_seed(seed, Stream::agent, static_cast<std::uint32_t>(i))));
        traj.archetypes.push_back(specs[i].archetype);
    }

    const std::span<const AgentId> top5(traj.ranking.data(), std::min<std::size_t>(5, n));
    const double initial_temp = world.now.climate.temp_atmosphere;
    const double gamma = config.dynamics.capital_elasticity;

    traj.snapshots.reserve(static_cast<std::size_t>(config.steps) + 1);
    traj.snapshots.push_back(world.now);
    traj.metrics.push_back(compute_metrics(world.now, initial_temp, top5, gamma));
    for (int step = 0; step < config.steps; ++step) {
        StepRecord record;
        world = step_episode(world, policies, config, &record, &traj.diagnostics);
        traj.records.push_back(std::move(record));
        traj.snapshots.push_back(world.now);
        traj.metrics.push_back(compute_metrics(world.now, initial_temp, top5, gamma));
    }
    return traj;
}

ExperimentResult run_experiment(const SimConfig& config) {
    ValidationReport report = validate(config);
    if (!report.ok()) throw ValidationError(std::move(report));
    const auto calibration = load_calibration(resolved_calibration_path(config));
    return run_experiment(config, calibration);
}

ExperimentResult run_experiment(const SimConfig& config, std::span<const RegionParams> calibration) {
    struct Job {
        Scenario scenario;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Scenario s : config.experiment_scenarios) {
        for (std::uint64_t seed : config.seeds) jobs.push_back({s, seed});
    }

    ExperimentResult result;
    result.runs.resize(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                result.runs[k] = run_episode(config, calibration, jobs[k].scenario, jobs[k].seed);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (!errors[k]) continue;
        const std::string where = "scenario " + std::string(to_string(jobs[k].scenario)) + ", seed " +
                                  std::to_string(jobs[k].seed);
        try {
            std::rethrow_exception(errors[k]);
        } catch (const ValidationError& e) {
            ValidationReport tagged;
            for (const ValidationIssue& issue : e.report().issues())
                tagged.add(where + ": " + issue.location, issue.field, issue.message);
            throw ValidationError(std::move(tagged));
        } catch (const std::exception& e) {
            throw RuntimeError(where + ": " + e.what());
        }
    }

    result.summary = summarize(result.runs, config.experiment_scenarios, config.seeds);
    return result;
}

ExperimentSummary summarize(std::span<const EpisodeTrajectory> runs, std::span<const Scenario> scenarios,
                            std::span<const std::uint64_t> seeds) {
    ExperimentSummary summary;
    summary.scenarios.assign(scenarios.begin(), scenarios.end());
    summary.seeds.assign(seeds.begin(), seeds.end());
    const std::size_t per = seeds.size();
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        ScenarioSummary out;
        out.scenario = scenarios[s];
        for (std::size_t k = 0; k < per; ++k) {
            const EpisodeTrajectory& run = runs[s * per + k];
            out.mean_final_temp_rise += run.final_temp_rise();
            out.mean_cumulative_output += run.cumulative_gross_output();
            out.mean_final_largest_group += run.metrics.back().largest_group_size;
            out.mean_final_top5_in_largest += run.metrics.back().top5_in_largest;
            out.mean_mitigation_by_step.resize(run.metrics.size(), 0.0);
            for (std::size_t t = 0; t < run.metrics.size(); ++t)
                out.mean_mitigation_by_step[t] += run.metrics[t].mean_mitigation;
            std::map<GroupId, int> sizes;
            for (GroupId g : run.final_groups()) {
                if (g != kNoGroup) ++sizes[g];
            }
            for (const auto& [group, size] : sizes) ++out.final_group_size_histogram[size];
        }
        const double count = static_cast<double>(per);
        out.mean_final_temp_rise /= count;
        out.mean_cumulative_output /= count;
        out.mean_final_largest_group /= count;
        out.mean_final_top5_in_largest /= count;
        for (double& m : out.mean_mitigation_by_step) m /= count;
        summary.per_scenario.push_back(std::move(out));
    }
    if (scenarios.size() >= 2) {
        for (std::size_t k = 0; k < per; ++k) {
            const EpisodeTrajectory& a = runs[k];
            const EpisodeTrajectory& b = runs[per + k];
            PairedDelta d;
            d.seed = seeds[k];
            d.temp_rise_delta = a.final_temp_rise() - b.final_temp_rise();
            const double ya = a.cumulative_gross_output();
            const double yb = b.cumulative_gross_output();
            d.cumulative_output_rel_diff = std::abs(ya - yb) / std::max(ya, yb);
            d.largest_group_delta = a.metrics.back().largest_group_size - b.metrics.back().largest_group_size;
            d.top5_in_largest_delta = a.metrics.back().top5_in_largest - b.metrics.back().top5_in_largest;
            summary.paired.push_back(d);
        }
    }
    return summary;
}

}  // namespace clubsim

// Command-line front end: run one episode, compare scenarios, or check inputs.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clubsim/config.hpp"
#include "clubsim/error.hpp"
#include "clubsim/export.hpp"
#include "clubsim/harness.hpp"
#include "clubsim/scenarios.hpp"
#include "clubsim/world.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct CommonFlags {
    std::string config;
    std::string scenario;
    std::string seeds;
    int steps = 0;
    std::string out;
    std::string calibration;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file (all fields optional)");
    cmd->add_option("--scenario", f.scenario, "Initial club layout")->check(CLI::IsMember({"hc", "hc_lc", "none"}));
    cmd->add_option("--seeds", f.seeds, "Comma-separated seeds, e.g. 0,1,2 or a range 0-19");
    cmd->add_option("--steps", f.steps, "Number of steps")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--calibration", f.calibration, "Region calibration CSV");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            const auto dash = item.find('-');
            if (dash != std::string::npos && dash > 0) {
                const std::uint64_t lo = std::stoull(item.substr(0, dash));
                const std::uint64_t hi = std::stoull(item.substr(dash + 1));
                if (hi < lo) throw clubsim::ValidationError("--seeds: empty range '" + item + "'");
                for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            } else {
                std::size_t used = 0;
                seeds.push_back(std::stoull(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw clubsim::ValidationError("--seeds: cannot parse '" + item + "'");
        }
    }
    if (seeds.empty()) throw clubsim::ValidationError("--seeds: no seeds given");
    return seeds;
}

clubsim::SimConfig build_config(const CommonFlags& f) {
    clubsim::SimConfig config = f.config.empty() ? clubsim::SimConfig{} : clubsim::load_config(f.config);
    if (!f.scenario.empty()) config.scenario = clubsim::parse_scenario(f.scenario);
    if (!f.seeds.empty()) config.seeds = parse_seeds(f.seeds);
    if (f.steps > 0) config.steps = f.steps;
    if (!f.out.empty()) config.output_dir = f.out;
    if (!f.calibration.empty()) config.calibration_path = f.calibration;
    return config;
}

int cmd_run(const CommonFlags& flags) {
    const clubsim::SimConfig config = build_config(flags);
    if (config.seeds.size() != 1) throw clubsim::ValidationError("run takes exactly one seed; use experiment for batches");
    const auto trajectory = clubsim::run_episode(config, config.seeds.front());
    clubsim::export_results(trajectory, config, config.output_dir);
    std::cout << "scenario " << clubsim::to_string(trajectory.scenario) << " seed " << trajectory.seed
              << ": year " << trajectory.metrics.back().year << ", temperature rise "
              << trajectory.final_temp_rise() << " C, largest club " << trajectory.metrics.back().largest_group_size
              << "\nwrote " << config.output_dir << "\n";
    return kOk;
}

int cmd_experiment(const CommonFlags& flags) {
    const clubsim::SimConfig config = build_config(flags);
    const auto result = clubsim::run_experiment(config);
    clubsim::export_results(result, config, config.output_dir);
    for (const auto& s : result.summary.per_scenario) {
        std::cout << clubsim::to_string(s.scenario) << ": mean final temperature rise " << s.mean_final_temp_rise
                  << " C, mean cumulative gross output " << s.mean_cumulative_output << ", mean largest club "
                  << s.mean_final_largest_group << "\n";
    }
    std::cout << "wrote " << config.output_dir << "\n";
    return kOk;
}

int cmd_validate(const CommonFlags& flags) {
    const clubsim::SimConfig config = build_config(flags);
    clubsim::ValidationReport report = clubsim::validate(config);
    if (report.ok()) {
        const auto calibration = clubsim::load_calibration(clubsim::resolved_calibration_path(config));
        clubsim::new_world(calibration, config.climate_init, config);
        std::cout << "ok: " << calibration.size() << " regions from "
                  << clubsim::resolved_calibration_path(config).string() << "\n";
        return kOk;
    }
    throw clubsim::ValidationError(std::move(report));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based climate club negotiation simulator"};
    app.require_subcommand(1);
    CommonFlags flags;
    auto* run = app.add_subcommand("run", "Run one episode");
    auto* experiment = app.add_subcommand("experiment", "Run every experiment scenario for every seed");
    auto* validate = app.add_subcommand("validate", "Check config and calibration");
    for (auto* cmd : {run, experiment, validate}) add_common(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (run->parsed()) return cmd_run(flags);
        if (experiment->parsed()) return cmd_experiment(flags);
        return cmd_validate(flags);
    } catch (const clubsim::ValidationError& e) {
        std::cerr << "validation error:\n" << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

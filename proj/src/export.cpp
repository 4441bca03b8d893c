#include "clubsim/export.hpp"

#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "clubsim/error.hpp"

namespace clubsim {

using nlohmann::json;

std::string metrics_csv(std::span<const MetricsRow> rows) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (const MetricsRow& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.step, r.year, r.temp_rise, r.total_gross_output,
                           r.mean_mitigation, r.group_count, r.largest_group_size, r.top5_in_largest);
    }
    return out;
}

std::string groups_csv(std::span<const GroupId> groups) {
    std::string out = "agent_id,group_id\n";
    for (std::size_t i = 0; i < groups.size(); ++i) out += fmt::format("{},{}\n", i, groups[i]);
    return out;
}

std::string regions_csv(const EpisodeTrajectory& t) {
    std::string out =
        "step,agent_id,capital,labor,tfp,carbon_intensity,saving_rate,mitigation_rate,export_cap,group_id,"
        "gross_output,net_output,emissions,mitigation_floor,consumption,reward\n";
    for (const WorldSnapshot& s : t.snapshots) {
        const bool has_flows = static_cast<std::size_t>(s.step) < t.records.size();
        for (std::size_t i = 0; i < s.regions.size(); ++i) {
            const RegionState& r = s.regions[i];
            RegionFlows f;
            if (has_flows) f = t.records[static_cast<std::size_t>(s.step)].flows[i];
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},", s.step, i, r.capital, r.labor, r.tfp,
                               r.carbon_intensity, r.saving_rate, r.mitigation_rate, r.export_cap, r.group_id);
            if (has_flows) {
                out += fmt::format("{},{},{},{},{},{}\n", f.gross_output, f.net_output, f.emissions,
                                   f.mitigation_floor, f.consumption, f.reward);
            } else {
                out += ",,,,,\n";  // final snapshot: nothing produced yet
            }
        }
    }
    return out;
}

std::string run_stem(const EpisodeTrajectory& t) {
    return fmt::format("{}_seed{}", to_string(t.scenario), t.seed);
}

json run_summary_json(const EpisodeTrajectory& t, const SimConfig& config) {
    json diagnostics = json::object();
    for (const Diagnostic& d : t.diagnostics.entries()) {
        diagnostics[d.stage] = diagnostics.value(d.stage, 0) + 1;
    }
    return {
        {"scenario", std::string(to_string(t.scenario))},
        {"seed", t.seed},
        {"config", to_json(config)},
        {"ranking", t.ranking},
        {"archetypes", t.archetypes},
        {"final_year", t.metrics.back().year},
        {"final_temp_rise", t.final_temp_rise()},
        {"cumulative_gross_output", t.cumulative_gross_output()},
        {"final_mean_mitigation", t.metrics.back().mean_mitigation},
        {"final_largest_group_size", t.metrics.back().largest_group_size},
        {"final_top5_in_largest", t.metrics.back().top5_in_largest},
        {"final_groups", t.final_groups()},
        {"diagnostics", diagnostics},
    };
}

json experiment_summary_json(const ExperimentSummary& s, const SimConfig& config) {
    json scenarios = json::array();
    for (const ScenarioSummary& sc : s.per_scenario) {
        json histogram = json::object();
        for (const auto& [size, count] : sc.final_group_size_histogram) histogram[std::to_string(size)] = count;
        scenarios.push_back({
            {"scenario", std::string(to_string(sc.scenario))},
            {"mean_final_temp_rise", sc.mean_final_temp_rise},
            {"mean_cumulative_gross_output", sc.mean_cumulative_output},
            {"mean_final_largest_group_size", sc.mean_final_largest_group},
            {"mean_final_top5_in_largest", sc.mean_final_top5_in_largest},
            {"mean_mitigation_by_step", sc.mean_mitigation_by_step},
            {"final_group_size_histogram", histogram},
        });
    }
    json paired = json::array();
    for (const PairedDelta& d : s.paired) {
        paired.push_back({
            {"seed", d.seed},
            {"temp_rise_delta", d.temp_rise_delta},
            {"cumulative_output_rel_diff", d.cumulative_output_rel_diff},
            {"largest_group_delta", d.largest_group_delta},
            {"top5_in_largest_delta", d.top5_in_largest_delta},
        });
    }
    json names = json::array();
    for (Scenario sc : s.scenarios) names.push_back(std::string(to_string(sc)));
    return {
        {"config", to_json(config)},
        {"scenarios", names},
        {"seeds", s.seeds},
        {"per_scenario", scenarios},
        {"paired_deltas", paired},
    };
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw RuntimeError("write failed for '" + path.string() + "'");
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw RuntimeError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

std::vector<std::filesystem::path> export_run_files(const EpisodeTrajectory& t, const std::filesystem::path& outdir) {
    ensure_dir(outdir);
    const std::string stem = run_stem(t);
    std::vector<std::filesystem::path> written = {
        outdir / (stem + "_metrics.csv"),
        outdir / (stem + "_groups.csv"),
        outdir / (stem + "_regions.csv"),
    };
    write_text(written[0], metrics_csv(t.metrics));
    write_text(written[1], groups_csv(t.final_groups()));
    write_text(written[2], regions_csv(t));
    return written;
}

std::vector<std::filesystem::path> export_results(const EpisodeTrajectory& t, const SimConfig& config,
                                                  const std::filesystem::path& outdir) {
    auto written = export_run_files(t, outdir);
    written.push_back(outdir / "summary.json");
    write_text(written.back(), run_summary_json(t, config).dump(2) + "\n");
    return written;
}

std::vector<std::filesystem::path> export_results(const ExperimentResult& result, const SimConfig& config,
                                                  const std::filesystem::path& outdir) {
    std::vector<std::filesystem::path> written;
    for (const EpisodeTrajectory& t : result.runs) {
        auto files = export_run_files(t, outdir);
        written.insert(written.end(), files.begin(), files.end());
    }
    ensure_dir(outdir);
    written.push_back(outdir / "summary.json");
    write_text(written.back(), experiment_summary_json(result.summary, config).dump(2) + "\n");
    return written;
}

}  // namespace clubsim

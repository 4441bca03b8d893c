#include "clubsim/scenarios.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "clubsim/dynamics.hpp"

namespace clubsim {

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
    case Scenario::hc:
        return "hc";
    case Scenario::hc_lc:
        return "hc_lc";
    case Scenario::none:
        break;
    }
    return "none";
}

Scenario parse_scenario(std::string_view text) {
    if (text == "none") return Scenario::none;
    if (text == "hc") return Scenario::hc;
    if (text == "hc_lc") return Scenario::hc_lc;
    throw ValidationError("unknown scenario '" + std::string(text) + "' (expected none, hc or hc_lc)");
}

namespace {

constexpr std::array<std::string_view, 12> kColumns = {
    "region",
    "tfp_initial",
    "tfp_growth_initial",
    "tfp_growth_decline",
    "capital_initial",
    "labor_initial",
    "labor_asymptote",
    "labor_convergence",
    "carbon_intensity_initial",
    "carbon_intensity_decline",
    "abatement_cost_coeff",
    "emissions_initial",
};

double* numeric_field(RegionParams& r, std::size_t column) {
    switch (column) {
    case 1: return &r.tfp_initial;
    case 2: return &r.tfp_growth_initial;
    case 3: return &r.tfp_growth_decline;
    case 4: return &r.capital_initial;
    case 5: return &r.labor_initial;
    case 6: return &r.labor_asymptote;
    case 7: return &r.labor_convergence;
    case 8: return &r.carbon_intensity_initial;
    case 9: return &r.carbon_intensity_decline;
    case 10: return &r.abatement_cost_coeff;
    case 11: return &r.emissions_initial;
    default: return nullptr;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string row_label(std::size_t row) { return "row " + std::to_string(row); }

}  // namespace

std::span<const std::string_view> calibration_columns() { return kColumns; }

std::vector<RegionParams> parse_calibration(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
        if (!trim(line).empty()) lines.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    if (lines.empty()) throw ValidationError("calibration: empty file, expected a header row");

    // Map header names onto canonical columns.
    std::string_view header = lines.front();
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto names = split_row(header);
    std::array<std::size_t, kColumns.size()> position{};
    position.fill(names.size());
    ValidationReport report;
    for (std::size_t c = 0; c < names.size(); ++c) {
        const auto it = std::find(kColumns.begin(), kColumns.end(), names[c]);
        if (it == kColumns.end()) {
            report.add("header", std::string(names[c]), "unknown column");
            continue;
        }
        const auto canonical = static_cast<std::size_t>(it - kColumns.begin());
        if (position[canonical] != names.size()) {
            report.add("header", std::string(names[c]), "duplicate column");
        }
        position[canonical] = c;
    }
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (position[k] == names.size()) report.add("header", std::string(kColumns[k]), "missing column");
    }
    if (!report.ok()) throw ValidationError(std::move(report));

    std::vector<RegionParams> regions;
    std::set<std::string, std::less<>> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split_row(lines[r]);
        if (cells.size() != names.size()) {
            report.add(row_label(r), "", "expected " + std::to_string(names.size()) + " cells, found " +
                                             std::to_string(cells.size()));
            continue;
        }
        RegionParams region;
        for (std::size_t k = 0; k < kColumns.size(); ++k) {
            const std::string_view cell = cells[position[k]];
            const std::string column(kColumns[k]);
            if (cell.empty()) {
                report.add(row_label(r), column, "empty cell");
                continue;
            }
            if (k == 0) {
                region.name = std::string(cell);
                if (!seen.insert(region.name).second)
                    report.add(row_label(r), column, "duplicate region '" + region.name + "'");
                continue;
            }
            double value = 0.0;
            const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || end != cell.data() + cell.size()) {
                report.add(row_label(r), column, "not a number: '" + std::string(cell) + "'");
                continue;
            }
            *numeric_field(region, k) = value;
        }
        regions.push_back(std::move(region));
    }
    if (!report.ok()) throw ValidationError(std::move(report));
    if (regions.empty()) throw ValidationError("calibration: no data rows");

    ValidationReport values = validate(regions);
    if (!values.ok()) throw ValidationError(std::move(values));
    return regions;
}

std::vector<RegionParams> load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("calibration: cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_calibration(buffer.str());
}

ValidationReport validate(std::span<const RegionParams> regions) {
    ValidationReport report;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const RegionParams& r = regions[i];
        const std::string where = "region " + std::to_string(i) + " (" + r.name + ")";
        auto nonneg = [&](double v, const char* field) {
            if (!std::isfinite(v)) report.add(where, field, "not finite");
            else if (v < 0.0) report.add(where, field, "negative");
        };
        nonneg(r.tfp_initial, "tfp_initial");
        nonneg(r.tfp_growth_initial, "tfp_growth_initial");
        nonneg(r.tfp_growth_decline, "tfp_growth_decline");
        nonneg(r.capital_initial, "capital_initial");
        nonneg(r.labor_initial, "labor_initial");
        nonneg(r.labor_asymptote, "labor_asymptote");
        nonneg(r.labor_convergence, "labor_convergence");
        nonneg(r.carbon_intensity_initial, "carbon_intensity_initial");
        nonneg(r.abatement_cost_coeff, "abatement_cost_coeff");
        nonneg(r.emissions_initial, "emissions_initial");
        if (!std::isfinite(r.carbon_intensity_decline)) report.add(where, "carbon_intensity_decline", "not finite");
        else if (r.carbon_intensity_decline > 0.0) report.add(where, "carbon_intensity_decline", "must be <= 0");
        if (r.abatement_cost_coeff > 1.0) report.add(where, "abatement_cost_coeff", "must be <= 1");
        if (std::isfinite(r.labor_initial) && r.labor_initial == 0.0) report.add(where, "labor_initial", "must be > 0");
        if (std::isfinite(r.labor_asymptote) && r.labor_asymptote == 0.0) report.add(where, "labor_asymptote", "must be > 0");
        if (r.labor_convergence > 1.0) report.add(where, "labor_convergence", "must be <= 1");
    }
    return report;
}

std::vector<RankingScore> ranking_scores(std::span<const RegionParams> regions, double capital_elasticity,
                                         double emissions_weight) {
    std::vector<RankingScore> scores(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const RegionParams& r = regions[i];
        scores[i].agent = i;
        scores[i].emissions_initial = r.emissions_initial;
        scores[i].output_initial = gross_output(r.tfp_initial, r.capital_initial, r.labor_initial, capital_elasticity);
    }
    auto normalized = [&](auto field) {
        std::vector<double> values;
        for (const auto& s : scores) values.push_back(s.*field);
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const double low = *lo;
        const double span = *hi - *lo;
        for (double& v : values) v = span > 0.0 ? (v - low) / span : 0.0;
        return values;
    };
    const auto e = normalized(&RankingScore::emissions_initial);
    const auto y = normalized(&RankingScore::output_initial);
    for (std::size_t i = 0; i < scores.size(); ++i)
        scores[i].composite_score = emissions_weight * e[i] + (1.0 - emissions_weight) * y[i];
    std::stable_sort(scores.begin(), scores.end(), [](const RankingScore& a, const RankingScore& b) {
        if (a.composite_score != b.composite_score) return a.composite_score > b.composite_score;
        return a.agent < b.agent;
    });
    return scores;
}

std::vector<AgentId> rank_regions(std::span<const RegionParams> regions, double capital_elasticity,
                                  double emissions_weight) {
    std::vector<AgentId> order;
    for (const auto& s : ranking_scores(regions, capital_elasticity, emissions_weight)) order.push_back(s.agent);
    return order;
}

std::vector<GroupId> init_hc(std::span<const AgentId> ranking, std::mt19937_64& rng) {
    if (ranking.size() < 9) {
        throw ValidationError("scenario hc needs at least 9 agents, got " + std::to_string(ranking.size()));
    }
    std::vector<GroupId> groups(ranking.size(), kNoGroup);
    std::uniform_int_distribution<GroupId> pick(2, 5);
    for (std::size_t rank = 0; rank < ranking.size(); ++rank)
        groups[ranking[rank]] = rank < 5 ? 1 : pick(rng);
    return groups;
}

std::vector<GroupId> init_hc_lc(std::span<const AgentId> ranking) {
    if (ranking.size() < 5) {
        throw ValidationError("scenario hc_lc needs at least 5 agents, got " + std::to_string(ranking.size()));
    }
    std::vector<GroupId> groups(ranking.size(), kNoGroup);
    for (std::size_t rank = 0; rank < ranking.size(); ++rank)
        groups[ranking[rank]] = static_cast<GroupId>(rank % 5) + 1;
    return groups;
}

}  // namespace clubsim

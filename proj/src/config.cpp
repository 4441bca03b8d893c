#include "clubsim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#ifndef CLUBSIM_DATA_DIR
#define CLUBSIM_DATA_DIR "data"
#endif

namespace clubsim {

using nlohmann::json;

ClimateState default_climate() {
    ClimateState c;
    c.carbon = {851.0, 460.0, 1740.0};
    c.temp_atmosphere = 0.85;
    c.temp_ocean = 0.0068;
    return c;
}

std::filesystem::path default_calibration_path() {
    return std::filesystem::path(CLUBSIM_DATA_DIR) / "regions27.csv";
}

std::filesystem::path resolved_calibration_path(const SimConfig& config) {
    return config.calibration_path.empty() ? default_calibration_path()
                                           : std::filesystem::path(config.calibration_path);
}

ValidationReport validate(const SimConfig& c) {
    ValidationReport report;
    if (c.num_agents < 1) report.add("config", "num_agents", "must be >= 1");
    if (c.steps < 1) report.add("config", "steps", "must be >= 1");
    if (!(c.years_per_step > 0.0)) report.add("config", "years_per_step", "must be > 0");
    if (c.seeds.empty()) report.add("config", "seeds", "need at least one seed");
    if (c.experiment_scenarios.empty()) report.add("config", "experiment_scenarios", "need at least one scenario");
    if (!(c.ranking_emissions_weight >= 0.0 && c.ranking_emissions_weight <= 1.0))
        report.add("config", "ranking_emissions_weight", "must lie in [0, 1]");
    report.merge(validate(c.club));
    report.merge(validate(c.dynamics));
    report.merge(validate(c.bounds));
    report.merge(validate(c.policies, c.num_agents));
    return report;
}

namespace {

/// Walks one JSON object, reading optional keys and flagging leftovers.
class Reader {
public:
    Reader(const json& obj, std::string path, ValidationReport& report)
        : obj_(obj), path_(std::move(path)), report_(report) {
        if (!obj_.is_object()) report_.add(path_, "", "expected an object");
    }
    ~Reader() {
        if (!obj_.is_object()) return;
        for (const auto& item : obj_.items()) {
            if (!used_.contains(item.key())) report_.add(path_, item.key(), "unknown key");
        }
    }

    template <typename T>
    void get(const char* key, T& out) {
        const json* value = find(key);
        if (value == nullptr) return;
        try {
            out = value->get<T>();
        } catch (const json::exception&) {
            report_.add(path_, key, "wrong type");
        }
    }

    /// Like get(), but JSON null maps to +infinity.
    void get_or_infinity(const char* key, double& out) {
        const json* value = find(key);
        if (value == nullptr) return;
        if (value->is_null()) {
            out = std::numeric_limits<double>::infinity();
            return;
        }
        get(key, out);
    }

    const json* find(const char* key) {
        if (!obj_.is_object()) return nullptr;
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
    ValidationReport& report() { return report_; }

private:
    const json& obj_;
    std::string path_;
    ValidationReport& report_;
    std::set<std::string> used_;
};

Scenario scenario_from(const json& value, const std::string& where, ValidationReport& report) {
    try {
        return parse_scenario(value.get<std::string>());
    } catch (const std::exception& e) {
        report.add(where, "", e.what());
    }
    return Scenario::none;
}

void read_climate(Reader& parent, ClimateState& c) {
    const json* node = parent.find("climate_init");
    if (node == nullptr) return;
    Reader r(*node, parent.child_path("climate_init"), parent.report());
    r.get("carbon", c.carbon);
    r.get("temp_atmosphere", c.temp_atmosphere);
    r.get("temp_ocean", c.temp_ocean);
}

void read_club(Reader& parent, ClubParams& c) {
    const json* node = parent.find("club");
    if (node == nullptr) return;
    Reader r(*node, parent.child_path("club"), parent.report());
    r.get("surcharge", c.surcharge);
    r.get("member_tariff_initial", c.member_tariff_initial);
    r.get("decay_horizon", c.decay_horizon);
    std::string schedule = c.schedule == DecaySchedule::cliff ? "cliff" : "linear";
    r.get("schedule", schedule);
    if (schedule == "linear") c.schedule = DecaySchedule::linear;
    else if (schedule == "cliff") c.schedule = DecaySchedule::cliff;
    else r.report().add("club", "schedule", "expected linear or cliff");
}

void read_dynamics(Reader& parent, DynamicsParams& d) {
    const json* node = parent.find("dynamics");
    if (node == nullptr) return;
    Reader r(*node, parent.child_path("dynamics"), parent.report());
    r.get("capital_elasticity", d.capital_elasticity);
    r.get("capital_depreciation", d.capital_depreciation);
    r.get("damage_coeff", d.damage_coeff);
    r.get("abatement_exponent", d.abatement_exponent);
    r.get("carbon_transfer", d.carbon_transfer);
    r.get("preindustrial_carbon", d.preindustrial_carbon);
    r.get("forcing_per_doubling", d.forcing_per_doubling);
    r.get("climate_feedback", d.climate_feedback);
    r.get("temp_upper_rate", d.temp_upper_rate);
    r.get("temp_exchange", d.temp_exchange);
    r.get("temp_ocean_rate", d.temp_ocean_rate);
    r.get("forcing_ex_initial", d.forcing_ex_initial);
    r.get("forcing_ex_final", d.forcing_ex_final);
    r.get("forcing_ex_horizon", d.forcing_ex_horizon);
    r.get("land_emissions_initial", d.land_emissions_initial);
    r.get("land_emissions_decline", d.land_emissions_decline);
    r.get("utility_elasticity", d.utility_elasticity);
    r.get("import_share", d.import_share);
    r.get("consumption_floor", d.consumption_floor);
}

void read_bounds(Reader& parent, ActionBounds& b) {
    const json* node = parent.find("bounds");
    if (node == nullptr) return;
    Reader r(*node, parent.child_path("bounds"), parent.report());
    r.get("saving_min", b.saving_min);
    r.get("saving_max", b.saving_max);
    r.get("export_cap_max", b.export_cap_max);
    r.get("tariff_max", b.tariff_max);
    r.get("mitigation_min", b.mitigation_min);
    r.get("mitigation_max", b.mitigation_max);
}

void read_cooperative_fields(Reader& r, CooperativeParams& c) {
    r.get("ramp_start", c.ramp_start);
    r.get("ramp_slope", c.ramp_slope);
    r.get("acceptance_slack", c.acceptance_slack);
    r.get("saving_rate", c.saving_rate);
    r.get("base_tariff", c.base_tariff);
}

void read_freerider_fields(Reader& r, FreeriderParams& f) {
    r.get("p_exit", f.p_exit);
    r.get("saving_rate", f.saving_rate);
    r.get_or_infinity("compliance_threshold", f.compliance_threshold);
}

/// A spec carries the archetype plus the parameters relevant to it.
void read_spec(const json& node, const std::string& path, ValidationReport& report, PolicySpec& spec,
               AgentId* id = nullptr) {
    Reader r(node, path, report);
    if (id != nullptr) r.get("id", *id);
    r.get("archetype", spec.archetype);
    if (spec.archetype == "cooperative") {
        read_cooperative_fields(r, spec.cooperative);
    } else if (spec.archetype == "freerider") {
        read_freerider_fields(r, spec.freerider);
    }
}

void read_policies(Reader& parent, PolicyMap& p) {
    const json* node = parent.find("policies");
    if (node == nullptr) return;
    const std::string path = parent.child_path("policies");
    Reader r(*node, path, parent.report());
    std::string assignment = p.assignment == PolicyAssignment::mixed ? "mixed" : "uniform";
    r.get("assignment", assignment);
    if (assignment == "mixed") p.assignment = PolicyAssignment::mixed;
    else if (assignment == "uniform") p.assignment = PolicyAssignment::uniform;
    else r.report().add(path, "assignment", "expected mixed or uniform");
    r.get("freerider_fraction", p.freerider_fraction);
    if (const json* coop = r.find("cooperative")) {
        Reader c(*coop, path + ".cooperative", r.report());
        read_cooperative_fields(c, p.cooperative);
    }
    if (const json* fr = r.find("freerider")) {
        Reader f(*fr, path + ".freerider", r.report());
        read_freerider_fields(f, p.freerider);
    }
    if (const json* uniform = r.find("uniform")) read_spec(*uniform, path + ".uniform", r.report(), p.uniform);
    if (const json* agents = r.find("agents")) {
        if (!agents->is_array()) {
            r.report().add(path, "agents", "expected an array");
            return;
        }
        for (std::size_t k = 0; k < agents->size(); ++k) {
            PolicySpec spec;
            AgentId id = std::numeric_limits<AgentId>::max();
            const std::string where = path + ".agents[" + std::to_string(k) + "]";
            read_spec((*agents)[k], where, r.report(), spec, &id);
            if (id == std::numeric_limits<AgentId>::max()) r.report().add(where, "id", "missing");
            else p.overrides[id] = spec;
        }
    }
}

json threshold_json(double value) { return std::isinf(value) ? json(nullptr) : json(value); }

json cooperative_json(const CooperativeParams& c) {
    return {{"ramp_start", c.ramp_start}, {"ramp_slope", c.ramp_slope}, {"acceptance_slack", c.acceptance_slack},
            {"saving_rate", c.saving_rate}, {"base_tariff", c.base_tariff}};
}

json freerider_json(const FreeriderParams& f) {
    return {{"p_exit", f.p_exit}, {"saving_rate", f.saving_rate},
            {"compliance_threshold", threshold_json(f.compliance_threshold)}};
}

json spec_json(const PolicySpec& spec) {
    json out = {{"archetype", spec.archetype}};
    if (spec.archetype == "cooperative") out.update(cooperative_json(spec.cooperative));
    if (spec.archetype == "freerider") out.update(freerider_json(spec.freerider));
    return out;
}

}  // namespace

SimConfig parse_config(const json& doc) {
    SimConfig c;
    ValidationReport report;
    {
        Reader r(doc, "", report);
        r.get("num_agents", c.num_agents);
        r.get("steps", c.steps);
        r.get("years_per_step", c.years_per_step);
        if (const json* s = r.find("scenario")) c.scenario = scenario_from(*s, "scenario", report);
        if (const json* list = r.find("experiment_scenarios")) {
            if (!list->is_array()) {
                report.add("config", "experiment_scenarios", "expected an array");
            } else {
                c.experiment_scenarios.clear();
                for (const json& s : *list) c.experiment_scenarios.push_back(scenario_from(s, "experiment_scenarios", report));
            }
        }
        r.get("seeds", c.seeds);
        r.get("calibration", c.calibration_path);
        r.get("ranking_emissions_weight", c.ranking_emissions_weight);
        r.get("output_dir", c.output_dir);
        r.get("threads", c.threads);
        read_climate(r, c.climate_init);
        read_club(r, c.club);
        read_dynamics(r, c.dynamics);
        read_bounds(r, c.bounds);
        read_policies(r, c.policies);
    }
    if (!report.ok()) throw ValidationError(std::move(report));
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config: " + path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const SimConfig& c) {
    json scenarios = json::array();
    for (Scenario s : c.experiment_scenarios) scenarios.push_back(std::string(to_string(s)));
    const DynamicsParams& d = c.dynamics;
    json overrides = json::array();
    for (const auto& [id, spec] : c.policies.overrides) {
        json entry = spec_json(spec);
        entry["id"] = id;
        overrides.push_back(entry);
    }
    return {
        {"num_agents", c.num_agents},
        {"steps", c.steps},
        {"years_per_step", c.years_per_step},
        {"scenario", std::string(to_string(c.scenario))},
        {"experiment_scenarios", scenarios},
        {"seeds", c.seeds},
        {"calibration", c.calibration_path},
        {"ranking_emissions_weight", c.ranking_emissions_weight},
        {"output_dir", c.output_dir},
        {"threads", c.threads},
        {"climate_init",
         {{"carbon", c.climate_init.carbon},
          {"temp_atmosphere", c.climate_init.temp_atmosphere},
          {"temp_ocean", c.climate_init.temp_ocean}}},
        {"club",
         {{"surcharge", c.club.surcharge},
          {"member_tariff_initial", c.club.member_tariff_initial},
          {"decay_horizon", c.club.decay_horizon},
          {"schedule", c.club.schedule == DecaySchedule::cliff ? "cliff" : "linear"}}},
        {"dynamics",
         {{"capital_elasticity", d.capital_elasticity},
          {"capital_depreciation", d.capital_depreciation},
          {"damage_coeff", d.damage_coeff},
          {"abatement_exponent", d.abatement_exponent},
          {"carbon_transfer", d.carbon_transfer},
          {"preindustrial_carbon", d.preindustrial_carbon},
          {"forcing_per_doubling", d.forcing_per_doubling},
          {"climate_feedback", d.climate_feedback},
          {"temp_upper_rate", d.temp_upper_rate},
          {"temp_exchange", d.temp_exchange},
          {"temp_ocean_rate", d.temp_ocean_rate},
          {"forcing_ex_initial", d.forcing_ex_initial},
          {"forcing_ex_final", d.forcing_ex_final},
          {"forcing_ex_horizon", d.forcing_ex_horizon},
          {"land_emissions_initial", d.land_emissions_initial},
          {"land_emissions_decline", d.land_emissions_decline},
          {"utility_elasticity", d.utility_elasticity},
          {"import_share", d.import_share},
          {"consumption_floor", d.consumption_floor}}},
        {"bounds",
         {{"saving_min", c.bounds.saving_min},
          {"saving_max", c.bounds.saving_max},
          {"export_cap_max", c.bounds.export_cap_max},
          {"tariff_max", c.bounds.tariff_max},
          {"mitigation_min", c.bounds.mitigation_min},
          {"mitigation_max", c.bounds.mitigation_max}}},
        {"policies",
         {{"assignment", c.policies.assignment == PolicyAssignment::mixed ? "mixed" : "uniform"},
          {"freerider_fraction", c.policies.freerider_fraction},
          {"cooperative", cooperative_json(c.policies.cooperative)},
          {"freerider", freerider_json(c.policies.freerider)},
          {"uniform", spec_json(c.policies.uniform)},
          {"agents", overrides}}},
    };
}

}  // namespace clubsim

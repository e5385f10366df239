#include "emf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "emf/errors.hpp"

namespace emf {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) {
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
T optional(const json& j, const char* key, T fallback, const std::string& where) {
    return j.contains(key) ? required<T>(j, key, where) : fallback;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("override '" + key + "': not a number: '" + value + "'");
}

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("override '" + key + "': not an integer: '" + value + "'");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        if (!value.empty() && value.front() != '-') {
            const unsigned long long v = std::stoull(value, &used);
            if (used == value.size()) return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("override '" + key + "': not an unsigned integer: '" + value + "'");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

}  // namespace

json to_json(const StationConfig& s) {
    return {{"element_gain_dbi", s.element_gain_dbi}, {"tx_power_dbm", s.tx_power_dbm},
            {"antenna_count", s.antenna_count},       {"antenna_height_m", s.antenna_height_m},
            {"noise_figure_db", s.noise_figure_db},   {"gain_is_total", s.gain_is_total},
            {"power_is_total", s.power_is_total}};
}

json to_json(const SystemProfile& p) {
    return {{"name", p.name},
            {"carrier_frequency_hz", p.carrier_frequency_hz},
            {"inter_site_distance_m", p.inter_site_distance_m},
            {"bandwidth_hz", p.bandwidth_hz},
            {"sectors_per_site", p.sectors_per_site},
            {"users_per_sector", p.users_per_sector},
            {"duplexing", "TDD"},
            {"outdoor_only", p.outdoor_only},
            {"bs", to_json(p.bs)},
            {"ue", to_json(p.ue)}};
}

StationConfig station_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j,
                        {"element_gain_dbi", "tx_power_dbm", "antenna_count", "antenna_height_m", "noise_figure_db",
                         "gain_is_total", "power_is_total"},
                        where);
    StationConfig s;
    s.element_gain_dbi = required<double>(j, "element_gain_dbi", where);
    s.tx_power_dbm = required<double>(j, "tx_power_dbm", where);
    s.antenna_count = required<int>(j, "antenna_count", where);
    s.antenna_height_m = required<double>(j, "antenna_height_m", where);
    s.noise_figure_db = optional<double>(j, "noise_figure_db", 0.0, where);
    s.gain_is_total = optional<bool>(j, "gain_is_total", false, where);
    s.power_is_total = optional<bool>(j, "power_is_total", false, where);
    return s;
}

SystemProfile profile_from_json(const json& j) {
    const std::string where = "profile";
    reject_unknown_keys(j,
                        {"name", "carrier_frequency_hz", "inter_site_distance_m", "bandwidth_hz", "sectors_per_site",
                         "users_per_sector", "duplexing", "outdoor_only", "bs", "ue"},
                        where);
    SystemProfile p;
    p.name = required<std::string>(j, "name", where);
    p.carrier_frequency_hz = required<double>(j, "carrier_frequency_hz", where);
    p.inter_site_distance_m = required<double>(j, "inter_site_distance_m", where);
    p.bandwidth_hz = required<double>(j, "bandwidth_hz", where);
    p.sectors_per_site = optional<int>(j, "sectors_per_site", 3, where);
    p.users_per_sector = optional<int>(j, "users_per_sector", 10, where);
    if (optional<std::string>(j, "duplexing", "TDD", where) != "TDD") {
        throw ConfigError("profile.duplexing: only TDD is supported");
    }
    p.outdoor_only = optional<bool>(j, "outdoor_only", true, where);
    if (!j.contains("bs") || !j.contains("ue")) {
        throw ConfigError("profile: both 'bs' and 'ue' sections are required");
    }
    p.bs = station_from_json(j.at("bs"), "profile.bs");
    p.ue = station_from_json(j.at("ue"), "profile.ue");
    return p;
}

SystemProfile load_profile(const std::string& selector) {
    try {
        return builtin_profile(selector);
    } catch (const UnknownProfileError&) {
        if (!std::filesystem::exists(selector)) throw;
    }
    const SystemProfile p = profile_from_json(read_json_file(selector));
    const auto violations = validate_profile(p);
    if (!violations.empty()) {
        std::string msg = "profile '" + selector + "' is invalid:";
        for (const auto& v : violations) msg += "\n  " + v.field + " " + v.rule;
        throw ValidationError(msg);
    }
    return p;
}

void save_profile(const SystemProfile& p, const std::filesystem::path& path) { write_json_file(to_json(p), path); }

const std::vector<std::string>& known_override_keys() {
    static const std::vector<std::string> keys{"trials", "seed",       "R",      "duty",  "pathloss",
                                               "antenna_count", "jitter", "beam_offset_db", "users_per_sector",
                                               "aggregation",   "start",  "stop",  "step",  "bs_line_extent"};
    return keys;
}

void check_override_keys(const std::map<std::string, std::string>& overrides) {
    const auto& keys = known_override_keys();
    for (const auto& [k, _] : overrides) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            throw ConfigError("unknown override key '" + k + "'");
        }
    }
}

void apply_overrides(CampaignSpec& c, const std::map<std::string, std::string>& overrides) {
    check_override_keys(overrides);
    for (const auto& [k, v] : overrides) {
        if (k == "trials") {
            c.trials = static_cast<int>(parse_integer(k, v));
        } else if (k == "seed") {
            c.seed = parse_unsigned(k, v);
        } else if (k == "R") {
            c.sweep.tissue.reflection_coefficient = parse_double(k, v);
        } else if (k == "duty") {
            c.duty = parse_double(k, v);
        } else if (k == "pathloss") {
            try {
                c.sweep.pathloss.kind = parse_pathloss_kind(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("override 'pathloss': ") + e.what());
            }
        } else if (k == "antenna_count") {
            const auto n = static_cast<int>(parse_integer(k, v));
            (c.sweep.direction == Direction::Downlink ? c.sweep.profile.bs : c.sweep.profile.ue).antenna_count = n;
        } else if (k == "jitter") {
            c.jitter_scale = parse_double(k, v);
        } else if (k == "beam_offset_db") {
            c.beam_offset_db = parse_double(k, v);
        } else if (k == "users_per_sector") {
            c.users_per_sector = static_cast<int>(parse_integer(k, v));
        } else if (k == "aggregation") {
            try {
                c.aggregation = parse_aggregation(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("override 'aggregation': ") + e.what());
            }
        } else if (k == "start") {
            c.sweep.start_m = parse_double(k, v);
        } else if (k == "stop") {
            c.sweep.stop_m = parse_double(k, v);
        } else if (k == "step") {
            c.sweep.step_m = parse_double(k, v);
        } else if (k == "bs_line_extent") {
            c.sweep.bs_line_extent_m = parse_double(k, v);
        }
    }
}

json to_json(const RunConfig& r) {
    return {{"profiles", r.profiles},
            {"direction", std::string(to_string(r.direction))},
            {"overrides", r.overrides},
            {"output_dir", r.output_dir},
            {"emit_plots", r.emit_plots},
            {"threads", r.threads},
            {"dielectrics", r.dielectrics}};
}

RunConfig run_config_from_json(const json& j) {
    const std::string where = "run";
    reject_unknown_keys(j, {"profiles", "direction", "overrides", "output_dir", "emit_plots", "threads", "dielectrics"},
                        where);
    RunConfig r;
    r.profiles = optional<std::vector<std::string>>(j, "profiles", r.profiles, where);
    try {
        r.direction = parse_direction(optional<std::string>(j, "direction", "downlink", where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("run.direction: ") + e.what());
    }
    r.overrides = optional<std::map<std::string, std::string>>(j, "overrides", {}, where);
    check_override_keys(r.overrides);
    r.output_dir = optional<std::string>(j, "output_dir", r.output_dir, where);
    r.emit_plots = optional<bool>(j, "emit_plots", r.emit_plots, where);
    r.threads = optional<int>(j, "threads", r.threads, where);
    r.dielectrics = optional<std::string>(j, "dielectrics", r.dielectrics, where);
    return r;
}

RunConfig load_run_config(const std::filesystem::path& path) { return run_config_from_json(read_json_file(path)); }

void save_run_config(const RunConfig& r, const std::filesystem::path& path) { write_json_file(to_json(r), path); }

CampaignSpec campaign_for(const RunConfig& r, const SystemProfile& profile) {
    CampaignSpec c = default_campaign(r.direction, profile);
    c.threads = r.threads;
    if (!r.dielectrics.empty()) {
        c.sweep.tissue.dielectric_table = read_dielectric_csv(std::filesystem::path(r.dielectrics));
    }
    apply_overrides(c, r.overrides);
    return c;
}

json to_json(const Assumptions& a) {
    return {{"pathloss", a.pathloss},
            {"reflection_coefficient", a.reflection_coefficient},
            {"penetration_depth_m", a.penetration_depth_m},
            {"mass_density_kg_m3", a.mass_density_kg_m3},
            {"duty", a.duty},
            {"jitter_scale", a.jitter_scale},
            {"aggregation", a.aggregation},
            {"beam_offset_db", a.beam_offset_db},
            {"users_per_sector", a.users_per_sector},
            {"trials", a.trials},
            {"seed", a.seed},
            {"any_near_field", a.any_near_field}};
}

Assumptions assumptions_from_json(const json& j) {
    const std::string where = "assumptions";
    reject_unknown_keys(j,
                        {"pathloss", "reflection_coefficient", "penetration_depth_m", "mass_density_kg_m3", "duty",
                         "jitter_scale", "aggregation", "beam_offset_db", "users_per_sector", "trials", "seed",
                         "any_near_field"},
                        where);
    Assumptions a;
    a.pathloss = required<std::string>(j, "pathloss", where);
    a.reflection_coefficient = required<double>(j, "reflection_coefficient", where);
    a.penetration_depth_m = required<double>(j, "penetration_depth_m", where);
    a.mass_density_kg_m3 = required<double>(j, "mass_density_kg_m3", where);
    a.duty = required<double>(j, "duty", where);
    a.jitter_scale = required<double>(j, "jitter_scale", where);
    a.aggregation = required<std::string>(j, "aggregation", where);
    a.beam_offset_db = required<double>(j, "beam_offset_db", where);
    a.users_per_sector = required<int>(j, "users_per_sector", where);
    a.trials = required<int>(j, "trials", where);
    a.seed = required<std::uint64_t>(j, "seed", where);
    a.any_near_field = required<bool>(j, "any_near_field", where);
    return a;
}

json to_json(const RegulatoryLimit& l) {
    return {{"id", l.id},
            {"authority", std::string(to_string(l.authority))},
            {"metric", std::string(to_string(l.metric))},
            {"value", l.value},
            {"unit", std::string(metric_unit(l.metric))},
            {"averaging_basis", l.averaging_basis},
            {"min_frequency_hz", l.min_frequency_hz},
            {"max_frequency_hz", l.max_frequency_hz},
            {"extrapolated", l.extrapolated},
            {"sourced_outside_paper", l.sourced_outside_paper}};
}

json to_json(const ExposureReport& r) {
    json scenarios = json::array();
    for (const auto& s : r.scenarios) {
        json verdicts = json::array();
        for (const auto& cv : s.verdicts) {
            // JSON has no infinity; a zero exposure reports a null margin.
            const json margin = std::isfinite(cv.verdict.margin_db) ? json(cv.verdict.margin_db) : json(nullptr);
            verdicts.push_back({{"limit", cv.verdict.limit.id},
                                {"checkpoint", cv.label},
                                {"distance_m", cv.distance_m},
                                {"value", cv.value},
                                {"pass", cv.verdict.pass},
                                {"margin_db", margin},
                                {"extrapolated", cv.verdict.extrapolated}});
        }
        const auto& recs = s.result.records;
        json summary = {{"marks", recs.size()}};
        if (!recs.empty()) {
            summary["start_m"] = recs.front().distance_m;
            summary["stop_m"] = recs.back().distance_m;
        }
        scenarios.push_back({{"direction", std::string(to_string(s.direction))},
                             {"assumptions", to_json(s.assumptions)},
                             {"summary", summary},
                             {"verdicts", verdicts}});
    }
    json safe = json::array();
    for (const auto& e : r.safe_distances) {
        json entry = {{"station", std::string(to_string(e.station))},
                      {"limit", e.limit_id},
                      {"duty", e.duty},
                      {"solved", e.solved}};
        if (e.solved) {
            entry["distance_m"] = e.distance.distance_m;
            entry["always_compliant"] = e.distance.always_compliant;
        }
        safe.push_back(entry);
    }
    json limits = json::array();
    for (const auto& l : limit_registry()) limits.push_back(to_json(limit_at_frequency(l, r.carrier_frequency_hz)));
    return {{"profile", r.profile_name},
            {"carrier_frequency_hz", r.carrier_frequency_hz},
            {"limits", limits},
            {"scenarios", scenarios},
            {"min_safe_distances", safe}};
}

}  // namespace emf

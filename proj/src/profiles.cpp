#include "emf/profiles.hpp"

#include <algorithm>
#include <cctype>

#include "emf/errors.hpp"

namespace emf {

namespace {

SystemProfile make_nr5g() {
    SystemProfile p;
    p.name = "nr5g";
    p.carrier_frequency_hz = 28e9;
    p.inter_site_distance_m = 200.0;
    p.bandwidth_hz = 850e6;
    // 256-element array; the 64-element variant is an antenna_count override.
    p.bs = {.element_gain_dbi = 8.0,
            .tx_power_dbm = 18.0,
            .antenna_count = 256,
            .antenna_height_m = 25.0,
            .noise_figure_db = 5.0,
            .gain_is_total = false,
            .power_is_total = false};
    p.ue = {.element_gain_dbi = 20.0,
            .tx_power_dbm = 35.0,
            .antenna_count = 16,
            .antenna_height_m = 1.5,
            .noise_figure_db = 9.0,
            .gain_is_total = true,
            .power_is_total = true};
    return p;
}

SystemProfile make_lte4g() {
    SystemProfile p;
    p.name = "lte4g";
    p.carrier_frequency_hz = 2e9;
    p.inter_site_distance_m = 500.0;
    p.bandwidth_hz = 20e6;
    p.bs = {.element_gain_dbi = 8.0,
            .tx_power_dbm = 44.0,
            .antenna_count = 4,
            .antenna_height_m = 35.0,
            .noise_figure_db = 5.0,
            .gain_is_total = false,
            .power_is_total = true};
    p.ue = {.element_gain_dbi = 1.0,
            .tx_power_dbm = 23.0,
            .antenna_count = 4,
            .antenna_height_m = 1.5,
            .noise_figure_db = 9.0,
            .gain_is_total = true,
            .power_is_total = true};
    return p;
}

SystemProfile make_g39() {
    SystemProfile p;
    p.name = "g39";
    p.carrier_frequency_hz = 1.9e9;
    p.inter_site_distance_m = 1000.0;
    p.bandwidth_hz = 20e6;
    p.bs = {.element_gain_dbi = 17.0,
            .tx_power_dbm = 43.0,
            .antenna_count = 4,
            .antenna_height_m = 32.0,
            .noise_figure_db = 5.0,
            .gain_is_total = true,
            .power_is_total = true};
    p.ue = {.element_gain_dbi = 1.0,
            .tx_power_dbm = 33.0,
            .antenna_count = 1,
            .antenna_height_m = 1.5,
            .noise_figure_db = 9.0,
            .gain_is_total = true,
            .power_is_total = true};
    return p;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void check_station(const StationConfig& s, const std::string& prefix, std::vector<Violation>& out) {
    if (s.antenna_count < 1) {
        out.push_back({prefix + ".antenna_count", "must be >= 1"});
    }
    if (!(s.antenna_height_m > 0.0)) {
        out.push_back({prefix + ".antenna_height_m", "must be > 0"});
    }
}

}  // namespace

SystemProfile builtin_profile(BuiltinProfile which) {
    switch (which) {
        case BuiltinProfile::NR5G:
            return make_nr5g();
        case BuiltinProfile::LTE4G:
            return make_lte4g();
        case BuiltinProfile::G39:
            return make_g39();
    }
    throw UnknownProfileError(std::to_string(static_cast<int>(which)));
}

BuiltinProfile parse_builtin_name(std::string_view name) {
    const std::string key = lowercase(name);
    if (key == "nr5g" || key == "5g") return BuiltinProfile::NR5G;
    if (key == "lte4g" || key == "4g") return BuiltinProfile::LTE4G;
    if (key == "g39" || key == "3.9g") return BuiltinProfile::G39;
    throw UnknownProfileError(std::string(name));
}

SystemProfile builtin_profile(std::string_view name) { return builtin_profile(parse_builtin_name(name)); }

std::string_view builtin_name(BuiltinProfile which) {
    switch (which) {
        case BuiltinProfile::NR5G:
            return "nr5g";
        case BuiltinProfile::LTE4G:
            return "lte4g";
        case BuiltinProfile::G39:
            return "g39";
    }
    return "unknown";
}

std::vector<BuiltinProfile> all_builtins() {
    return {BuiltinProfile::NR5G, BuiltinProfile::LTE4G, BuiltinProfile::G39};
}

std::vector<Violation> validate_profile(const SystemProfile& p) {
    std::vector<Violation> out;
    if (!(p.carrier_frequency_hz > 0.0)) {
        out.push_back({"carrier_frequency_hz", "must be > 0"});
    }
    if (!(p.inter_site_distance_m > 0.0)) {
        out.push_back({"inter_site_distance_m", "must be > 0"});
    }
    if (!(p.bandwidth_hz > 0.0)) {
        out.push_back({"bandwidth_hz", "must be > 0"});
    }
    if (p.sectors_per_site < 1) {
        out.push_back({"sectors_per_site", "must be >= 1"});
    }
    if (p.users_per_sector < 1) {
        out.push_back({"users_per_sector", "must be >= 1"});
    }
    check_station(p.bs, "bs", out);
    check_station(p.ue, "ue", out);
    return out;
}

}  // namespace emf

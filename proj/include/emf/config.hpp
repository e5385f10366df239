#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "emf/compliance.hpp"
#include "emf/montecarlo.hpp"
#include "emf/profiles.hpp"

namespace emf {

// Profiles, run configurations and reports share one JSON schema family.
// Parsing is strict: unknown keys and wrong types raise ConfigError.

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

nlohmann::json to_json(const StationConfig& s);
nlohmann::json to_json(const SystemProfile& p);
StationConfig station_from_json(const nlohmann::json& j, const std::string& where);
SystemProfile profile_from_json(const nlohmann::json& j);

/// Built-in name or a path to a JSON profile; the result is validated.
SystemProfile load_profile(const std::string& selector);

void save_profile(const SystemProfile& p, const std::filesystem::path& path);

/// Everything `sweep` needs. Overrides are a sparse key/value set restricted to
/// known_override_keys().
struct RunConfig {
    std::vector<std::string> profiles{"nr5g"};
    Direction direction = Direction::Downlink;
    std::map<std::string, std::string> overrides;
    std::string output_dir = "out";
    bool emit_plots = true;
    int threads = 0;
    std::string dielectrics;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& known_override_keys();

/// Throws ConfigError naming the first unknown key.
void check_override_keys(const std::map<std::string, std::string>& overrides);

/// Applies overrides to a campaign in place; throws ConfigError on bad values.
void apply_overrides(CampaignSpec& c, const std::map<std::string, std::string>& overrides);

nlohmann::json to_json(const RunConfig& r);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& r, const std::filesystem::path& path);

/// Campaign for one profile of the run: defaults for its direction, then overrides.
CampaignSpec campaign_for(const RunConfig& r, const SystemProfile& profile);

nlohmann::json to_json(const Assumptions& a);
Assumptions assumptions_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RegulatoryLimit& l);
nlohmann::json to_json(const ExposureReport& r);

}  // namespace emf

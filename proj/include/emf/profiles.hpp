#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace emf {

/// Antenna and power configuration of one end of the link (BS or UE).
///
/// Power and gain are each either per element or already aggregated over the
/// array; the two flags say which. Elements sit on a λ/2 lattice; the spacing
/// is implied and never simulated per element.
struct StationConfig {
    double element_gain_dbi = 0.0;
    double tx_power_dbm = 0.0;
    int antenna_count = 1;
    double antenna_height_m = 1.5;
    double noise_figure_db = 0.0;
    bool gain_is_total = false;
    bool power_is_total = false;

    friend bool operator==(const StationConfig&, const StationConfig&) = default;
};

enum class Duplexing { TDD };

enum class BuiltinProfile { NR5G, LTE4G, G39 };

struct SystemProfile {
    std::string name;
    double carrier_frequency_hz = 0.0;
    double inter_site_distance_m = 0.0;
    double bandwidth_hz = 0.0;
    StationConfig bs;
    StationConfig ue;
    int sectors_per_site = 3;
    Duplexing duplexing = Duplexing::TDD;
    int users_per_sector = 10;
    // Metadata only: indoor penetration is not modeled.
    bool outdoor_only = true;

    friend bool operator==(const SystemProfile&, const SystemProfile&) = default;
};

SystemProfile builtin_profile(BuiltinProfile which);

/// Case-insensitive lookup ("nr5g", "lte4g", "g39"). Throws UnknownProfileError.
SystemProfile builtin_profile(std::string_view name);

BuiltinProfile parse_builtin_name(std::string_view name);
std::string_view builtin_name(BuiltinProfile which);
std::vector<BuiltinProfile> all_builtins();

struct Violation {
    std::string field;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_profile(const SystemProfile& p);

}  // namespace emf

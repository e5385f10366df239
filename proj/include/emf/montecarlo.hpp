#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "emf/exposure.hpp"
#include "emf/profiles.hpp"
#include "emf/radio.hpp"

namespace emf {

enum class Direction { Downlink, Uplink };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// How base stations along the sweep line combine at a distance mark.
enum class Aggregation { ServingOnly, AllStations };

std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view text);

struct SweepSpec {
    Direction direction = Direction::Downlink;
    double start_m = 0.0;
    double stop_m = 1000.0;
    double step_m = 5.0;
    SystemProfile profile;
    PathlossModel pathloss;
    TissueModel tissue;
    double bs_line_extent_m = 1000.0;

    /// floor((stop - start) / step) + 1, tolerant of rounding in the quotient.
    std::size_t mark_count() const;
    double mark(std::size_t i) const;
};

/// Downlink: 0..1000 m in 5 m steps. Uplink: 0.01..1 m in 1 cm steps.
SweepSpec default_sweep(Direction direction, const SystemProfile& profile);

struct CampaignSpec {
    SweepSpec sweep;
    int trials = 10000;
    int users_per_sector = 10;
    std::uint64_t seed = 0;
    /// Multiplier on the nominal jitter (downlink ±ISD/4 lateral, uplink ±step/2 radial).
    double jitter_scale = 1.0;
    /// Transmit duty fraction; unset means 1/users_per_sector downlink, 1/2 uplink.
    std::optional<double> duty;
    Aggregation aggregation = Aggregation::ServingOnly;
    /// Gain reduction of the transmit beam in the direction of the exposed person.
    double beam_offset_db = 0.0;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    int threads = 0;
};

/// Campaign with default settings for the given direction and the profile's user count.
CampaignSpec default_campaign(Direction direction, const SystemProfile& profile);

/// 1/users_per_sector downlink, 1/2 uplink, or the override.
double effective_duty(const CampaignSpec& c);

/// The transmitting station for the campaign's direction.
const StationConfig& transmitter(const CampaignSpec& c);

/// Throws ValidationError listing every failed rule (DomainError for an uplink
/// sweep starting at contact).
void validate_campaign(const CampaignSpec& c);

struct DistanceRecord {
    double distance_m = 0.0;
    double mean_pd = 0.0;
    double std_pd = 0.0;
    double p95_pd = 0.0;
    double mean_sar = 0.0;
    double std_sar = 0.0;
    double p95_sar = 0.0;
    double near_field_fraction = 0.0;

    friend bool operator==(const DistanceRecord&, const DistanceRecord&) = default;
};

struct CampaignResult {
    Direction direction = Direction::Downlink;
    std::string profile_name;
    double duty = 1.0;
    std::vector<DistanceRecord> records;

    friend bool operator==(const CampaignResult&, const CampaignResult&) = default;
};

CampaignResult downlink_sweep(const CampaignSpec& c);
CampaignResult uplink_sweep(const CampaignSpec& c);
CampaignResult run_campaign(const CampaignSpec& c);

/// Base-station positions along the sweep line: 0, ISD, 2 ISD, ... <= extent.
std::vector<double> base_station_positions(double inter_site_distance_m, double line_extent_m);

/// First distance where the mean curve drops below `threshold`, interpolated
/// log-log between the bracketing marks. Empty when there is no downward crossing.
std::optional<double> crossing_distance(const CampaignResult& r, Metric metric, double threshold);

/// Indices of strict local maxima of the mean curve (endpoints compare to their one neighbour).
std::vector<std::size_t> local_maxima(const CampaignResult& r, Metric metric);

inline constexpr std::string_view kCampaignCsvHeader =
    "distance_m,mean_pd_w_m2,std_pd,p95_pd,mean_sar_w_kg,std_sar,p95_sar,near_field_fraction";

/// CSV with kCampaignCsvHeader, %.9g values and LF line endings.
void write_campaign_csv(const CampaignResult& r, std::ostream& out);

}  // namespace emf

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emf/exposure.hpp"
#include "emf/montecarlo.hpp"
#include "emf/profiles.hpp"

namespace emf {

enum class Authority { ICNIRP, FCC };

std::string_view to_string(Authority a);
std::string_view to_string(Metric m);
std::string_view metric_unit(Metric m);

struct RegulatoryLimit {
    std::string id;  // "icnirp-pd", "icnirp-sar", "fcc-sar"
    Authority authority = Authority::ICNIRP;
    Metric metric = Metric::PD;
    double value = 0.0;
    std::string averaging_basis;
    double min_frequency_hz = 0.0;
    double max_frequency_hz = 0.0;
    bool extrapolated = false;
    // Value not given by the source study; shipped for completeness only.
    bool sourced_outside_paper = false;

    bool applies_at(double frequency_hz) const;

    friend bool operator==(const RegulatoryLimit&, const RegulatoryLimit&) = default;
};

/// Immutable, validated on first use.
const std::vector<RegulatoryLimit>& limit_registry();

/// Throws std::invalid_argument for an unknown id.
const RegulatoryLimit& find_limit(std::string_view id);

/// Copy of `limit` with `extrapolated` set when `frequency_hz` falls outside its range.
RegulatoryLimit limit_at_frequency(const RegulatoryLimit& limit, double frequency_hz);

struct Measurement {
    Metric metric = Metric::PD;
    double value = 0.0;
};

struct ComplianceVerdict {
    bool pass = false;
    double margin_db = 0.0;  // positive = headroom
    RegulatoryLimit limit;
    bool extrapolated = false;
};

/// margin = 10 log10(limit / value). Throws MetricMismatchError.
ComplianceVerdict check(const Measurement& m, const RegulatoryLimit& limit);

/// Picks PD or SAR from the sample to match the limit's metric.
ComplianceVerdict check(const ExposureSample& sample, const RegulatoryLimit& limit);

enum class StationKind { BS, UE };

std::string_view to_string(StationKind s);
StationKind parse_station(std::string_view text);

struct SafeDistance {
    double distance_m = 0.0;
    bool always_compliant = false;
    int iterations = 0;
};

/// Time-averaged free-space exposure at radial distance d from an isotropic
/// source of `eirp_w` watts, in the limit's metric.
double free_space_exposure(double eirp_w, double distance_m, Metric metric, const TissueModel& tissue, double duty);

inline constexpr double kSolverLowerBound = 1e-4;
inline constexpr double kSolverUpperBound = 1e4;

/// Bisection (geometric midpoint) on [1e-4, 1e4] m for exposure(d) = limit.
/// Returns always_compliant when the exposure is already below the limit at
/// the lower bound; throws BracketExhaustedError when it is still above at the
/// upper bound.
SafeDistance min_safe_distance(double eirp_w, const RegulatoryLimit& limit, const TissueModel& tissue, double duty);

/// Profile form: EIRP of the chosen station, reduced by `beam_offset_db`.
SafeDistance min_safe_distance(const SystemProfile& profile, StationKind station, const RegulatoryLimit& limit,
                               const TissueModel& tissue, double duty, double beam_offset_db = 0.0);

/// Model assumptions echoed into every report and output directory.
struct Assumptions {
    std::string pathloss;
    double reflection_coefficient = 0.0;
    double penetration_depth_m = 0.0;
    double mass_density_kg_m3 = 0.0;
    double duty = 0.0;
    double jitter_scale = 0.0;
    std::string aggregation;
    double beam_offset_db = 0.0;
    int users_per_sector = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    bool any_near_field = false;

    friend bool operator==(const Assumptions&, const Assumptions&) = default;
};

struct CheckpointVerdict {
    double distance_m = 0.0;
    std::string label;  // "peak", "cell-edge", "farthest"
    double value = 0.0;
    ComplianceVerdict verdict;
};

struct ScenarioReport {
    Direction direction = Direction::Downlink;
    Assumptions assumptions;
    CampaignResult result;
    std::vector<CheckpointVerdict> verdicts;
};

struct SafeDistanceEntry {
    StationKind station = StationKind::BS;
    std::string limit_id;
    double duty = 0.0;
    bool solved = false;  // false when the bracket was exhausted
    SafeDistance distance;
};

struct ExposureReport {
    std::string profile_name;
    double carrier_frequency_hz = 0.0;
    std::vector<ScenarioReport> scenarios;
    std::vector<SafeDistanceEntry> safe_distances;
};

Assumptions assumptions_for(const CampaignSpec& c);

/// Runs each campaign, checks every registry limit at the peak, cell-edge
/// (downlink, ISD/2) or farthest (uplink) marks, and solves the minimum safe
/// distance for both stations.
ExposureReport exposure_report(const SystemProfile& profile, std::span<const CampaignSpec> scenarios);

std::string render_text(const ExposureReport& report);

}  // namespace emf

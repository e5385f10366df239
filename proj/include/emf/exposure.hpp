#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace emf {

enum class Metric { PD, SAR };

struct DielectricPoint {
    double frequency_hz = 0.0;
    double relative_permittivity = 1.0;
    double conductivity_s_per_m = 0.0;

    friend bool operator==(const DielectricPoint&, const DielectricPoint&) = default;
};

/// Skin absorption parameters. Defaults: δ = 1 mm and ρ = 1 g/cm³. R = 0.6 is
/// a configurable placeholder with no measured basis; derive it from dielectric
/// data with reflection_coefficient() for real assessments.
struct TissueModel {
    double reflection_coefficient = 0.6;
    double penetration_depth_m = 1e-3;
    double mass_density_kg_m3 = 1000.0;
    std::vector<DielectricPoint> dielectric_table;

    friend bool operator==(const TissueModel&, const TissueModel&) = default;
};

/// Rule violations of a tissue model; empty when valid.
std::vector<std::string> validate_tissue(const TissueModel& t);

struct ExposureSample {
    double distance_m = 0.0;
    double pd_w_m2 = 0.0;
    double sar_w_kg = 0.0;
    bool near_field = false;
    bool time_averaged = false;
};

/// Surface SAR from incident power density: 2 PD (1 - R^2) / (δ ρ).
double sar_from_pd(double pd_w_m2, const TissueModel& t);

/// 1/α of a lossy dielectric (meters); +inf for σ = 0.
double penetration_depth(double frequency_hz, double relative_permittivity, double conductivity_s_per_m);

/// |Γ| at normal incidence from free space onto a half-space with complex
/// relative permittivity ε_r - jσ/(ωε0).
double reflection_coefficient(double relative_permittivity, double conductivity_s_per_m, double frequency_hz);

/// Linear interpolation in frequency, clamped at the table ends. The table must be
/// non-empty and sorted.
DielectricPoint interpolate_dielectric(const std::vector<DielectricPoint>& table, double frequency_hz);

/// Copy of `base` with δ and R derived from its dielectric table at the given
/// frequency. Without a table the base model is returned unchanged.
TissueModel tissue_at_frequency(const TissueModel& base, double frequency_hz);

/// SAR(z) = SAR(0) exp(-2 z / δ).
struct DepthPoint {
    double depth_m;
    double sar_w_kg;
};
std::vector<DepthPoint> depth_profile(double surface_sar_w_kg, double penetration_depth_m, double max_depth_m,
                                      int points);

/// Parses `frequency_hz,eps_r,sigma_s_per_m` CSV. Throws std::invalid_argument
/// with a line number on malformed or unsorted input.
std::vector<DielectricPoint> read_dielectric_csv(std::istream& in);
std::vector<DielectricPoint> read_dielectric_csv(const std::filesystem::path& path);

}  // namespace emf

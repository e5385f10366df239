#pragma once

#include <string_view>

#include "emf/profiles.hpp"

namespace emf {

struct LinkGeometry {
    double horizontal_distance_m = 0.0;
    double tx_height_m = 1.0;
    double rx_height_m = 1.0;

    /// Straight-line separation between the two antennas.
    double distance_3d() const;
};

enum class PathlossKind { FreeSpace, UMaLineOfSight };

struct PathlossModel {
    PathlossKind kind = PathlossKind::FreeSpace;
};

std::string_view to_string(PathlossKind kind);
PathlossKind parse_pathloss_kind(std::string_view text);

/// Total conducted power plus total antenna gain of the station (dBm).
/// Per-element quantities pick up 10*log10(N) each: N-fold conducted power
/// and N-fold coherent beamforming gain.
double eirp_dbm(const StationConfig& s);

/// Free-space pathloss 20*log10(4*pi*d*f/c) in dB.
double free_space_pathloss_db(double d3d_m, double frequency_hz);

struct UmaLosPathloss {
    double loss_db = 0.0;
    double breakpoint_m = 0.0;
    bool in_validity_range = true;
};

/// Dual-slope urban-macro line-of-sight pathloss with an effective-height
/// breakpoint d'BP = 4 (hBS - hE)(hUT - hE) f / c, hE = 1 m:
///
///   PL1 = 28 + 22 log10(d3D) + 20 log10(f_GHz)                        d2D <= d'BP
///   PL2 = 28 + 40 log10(d3D) + 20 log10(f_GHz) - 9 log10(d'BP^2 + (hBS - hUT)^2)
///
/// The same LOS form is used for 28 GHz and for the sub-6 GHz profiles.
/// Outside 10 m <= d2D <= 5 km (or hUT outside [1.5, 22.5] m) the value is
/// still computed and in_validity_range is cleared.
UmaLosPathloss uma_los_pathloss_db(double d3d_m, double frequency_hz, double bs_height_m, double ue_height_m);

/// Received power density (W/m^2) at the far end of the link.
///
/// FreeSpace spreads the EIRP over a sphere. UMaLineOfSight scales that by the
/// excess of the UMa LOS loss over free space, clamped to >= 0 dB so the result
/// never exceeds the free-space bound. Throws DomainError when the 3D distance
/// is zero.
double power_density(double eirp_dbm, const LinkGeometry& g, PathlossModel m, double frequency_hz);

/// Same as power_density but with EIRP already in watts.
double power_density_w(double eirp_w, const LinkGeometry& g, PathlossModel m, double frequency_hz);

/// Largest extent of the station's array: the diagonal of a square
/// ceil(sqrt(N)) x ceil(sqrt(N)) lattice with λ/2 spacing (λ/2 for one element).
double aperture_extent(const StationConfig& s, double frequency_hz);

/// Fraunhofer distance 2 D^2 / λ.
double fraunhofer_distance(const StationConfig& s, double frequency_hz);

}  // namespace emf

#include "emf/radio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emf/errors.hpp"
#include "emf/units.hpp"

namespace emf {

namespace {
constexpr double kEffectiveEnvironmentHeight = 1.0;
}

double LinkGeometry::distance_3d() const {
    return std::hypot(horizontal_distance_m, tx_height_m - rx_height_m);
}

std::string_view to_string(PathlossKind kind) {
    switch (kind) {
        case PathlossKind::FreeSpace:
            return "free-space";
        case PathlossKind::UMaLineOfSight:
            return "uma-los";
    }
    return "unknown";
}

PathlossKind parse_pathloss_kind(std::string_view text) {
    if (text == "free-space" || text == "freespace" || text == "fs") return PathlossKind::FreeSpace;
    if (text == "uma-los" || text == "uma") return PathlossKind::UMaLineOfSight;
    throw std::invalid_argument("unknown pathloss kind: '" + std::string(text) + "'");
}

double eirp_dbm(const StationConfig& s) {
    const double array_db = 10.0 * std::log10(static_cast<double>(s.antenna_count));
    const double conducted_dbm = s.power_is_total ? s.tx_power_dbm : s.tx_power_dbm + array_db;
    const double gain_dbi = s.gain_is_total ? s.element_gain_dbi : s.element_gain_dbi + array_db;
    return conducted_dbm + gain_dbi;
}

double free_space_pathloss_db(double d3d_m, double frequency_hz) {
    return 20.0 * std::log10(4.0 * constants::pi * d3d_m * frequency_hz / constants::speed_of_light);
}

UmaLosPathloss uma_los_pathloss_db(double d3d_m, double frequency_hz, double bs_height_m, double ue_height_m) {
    if (!(frequency_hz > 0.0)) {
        throw DomainError("uma_los_pathloss_db: frequency must be positive");
    }
    if (!(d3d_m > 0.0)) {
        throw DomainError("uma_los_pathloss_db: distance must be positive");
    }
    const double dh = bs_height_m - ue_height_m;
    const double d2d = std::sqrt(std::max(0.0, d3d_m * d3d_m - dh * dh));
    const double f_ghz = frequency_hz / 1e9;

    UmaLosPathloss out;
    out.breakpoint_m = 4.0 * (bs_height_m - kEffectiveEnvironmentHeight) *
                       (ue_height_m - kEffectiveEnvironmentHeight) * frequency_hz / constants::speed_of_light;
    out.in_validity_range = d2d >= 10.0 && d2d <= 5000.0 && ue_height_m >= 1.5 && ue_height_m <= 22.5;

    if (d2d <= out.breakpoint_m || out.breakpoint_m <= 0.0) {
        out.loss_db = 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(f_ghz);
    } else {
        out.loss_db = 28.0 + 40.0 * std::log10(d3d_m) + 20.0 * std::log10(f_ghz) -
                      9.0 * std::log10(out.breakpoint_m * out.breakpoint_m + dh * dh);
    }
    return out;
}

double power_density_w(double eirp_w, const LinkGeometry& g, PathlossModel m, double frequency_hz) {
    const double d = g.distance_3d();
    if (!(d > 0.0)) {
        throw DomainError("power_density: zero separation between transmitter and receiver");
    }
    const double spherical = eirp_w / (4.0 * constants::pi * d * d);
    if (m.kind == PathlossKind::FreeSpace) {
        return spherical;
    }
    const auto uma = uma_los_pathloss_db(d, frequency_hz, g.tx_height_m, g.rx_height_m);
    const double excess_db = std::max(0.0, uma.loss_db - free_space_pathloss_db(d, frequency_hz));
    return spherical * std::pow(10.0, -excess_db / 10.0);
}

double power_density(double eirp_dbm_value, const LinkGeometry& g, PathlossModel m, double frequency_hz) {
    return power_density_w(dbm_to_watts(eirp_dbm_value), g, m, frequency_hz);
}

double aperture_extent(const StationConfig& s, double frequency_hz) {
    const double spacing = wavelength(frequency_hz) / 2.0;
    if (s.antenna_count <= 1) {
        return spacing;
    }
    const double side = std::ceil(std::sqrt(static_cast<double>(s.antenna_count)));
    return std::hypot(side * spacing, side * spacing);
}

double fraunhofer_distance(const StationConfig& s, double frequency_hz) {
    const double extent = aperture_extent(s, frequency_hz);
    return 2.0 * extent * extent / wavelength(frequency_hz);
}

}  // namespace emf

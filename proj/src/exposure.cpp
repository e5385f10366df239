#include "emf/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>

#include "emf/errors.hpp"
#include "emf/units.hpp"

namespace emf {

std::vector<std::string> validate_tissue(const TissueModel& t) {
    std::vector<std::string> out;
    if (!(t.reflection_coefficient >= 0.0 && t.reflection_coefficient <= 1.0)) {
        out.emplace_back("reflection_coefficient must lie in [0, 1]");
    }
    if (!(t.penetration_depth_m > 0.0)) {
        out.emplace_back("penetration_depth_m must be > 0");
    }
    if (!(t.mass_density_kg_m3 > 0.0)) {
        out.emplace_back("mass_density_kg_m3 must be > 0");
    }
    for (std::size_t i = 0; i < t.dielectric_table.size(); ++i) {
        const auto& p = t.dielectric_table[i];
        if (!(p.relative_permittivity > 0.0) || !(p.conductivity_s_per_m >= 0.0)) {
            out.emplace_back("dielectric_table[" + std::to_string(i) + "] has non-physical values");
        }
        if (i > 0 && !(p.frequency_hz > t.dielectric_table[i - 1].frequency_hz)) {
            out.emplace_back("dielectric_table must be sorted by increasing frequency");
        }
    }
    return out;
}

double sar_from_pd(double pd_w_m2, const TissueModel& t) {
    const double r = t.reflection_coefficient;
    return 2.0 * pd_w_m2 * (1.0 - r * r) / (t.penetration_depth_m * t.mass_density_kg_m3);
}

double penetration_depth(double frequency_hz, double relative_permittivity, double conductivity_s_per_m) {
    if (!(frequency_hz > 0.0)) {
        throw DomainError("penetration_depth: frequency must be positive");
    }
    if (conductivity_s_per_m == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double omega = 2.0 * constants::pi * frequency_hz;
    const double eps = constants::vacuum_permittivity * relative_permittivity;
    const double loss_tangent = conductivity_s_per_m / (omega * eps);
    // sqrt(1 + x^2) - 1 loses precision for small x; x^2 / (sqrt(1 + x^2) + 1) does not.
    const double x2 = loss_tangent * loss_tangent;
    const double bracket = x2 / (std::sqrt(1.0 + x2) + 1.0);
    const double alpha = omega * std::sqrt(constants::vacuum_permeability * eps / 2.0) * std::sqrt(bracket);
    return 1.0 / alpha;
}

double reflection_coefficient(double relative_permittivity, double conductivity_s_per_m, double frequency_hz) {
    if (!(frequency_hz > 0.0)) {
        throw DomainError("reflection_coefficient: frequency must be positive");
    }
    const double omega = 2.0 * constants::pi * frequency_hz;
    const std::complex<double> eps_c(relative_permittivity,
                                     -conductivity_s_per_m / (omega * constants::vacuum_permittivity));
    // Normalised wave impedance of the medium is 1/sqrt(eps_c).
    const std::complex<double> n = std::sqrt(eps_c);
    return std::abs((1.0 - n) / (1.0 + n));
}

DielectricPoint interpolate_dielectric(const std::vector<DielectricPoint>& table, double frequency_hz) {
    if (table.empty()) {
        throw std::invalid_argument("interpolate_dielectric: empty table");
    }
    if (frequency_hz <= table.front().frequency_hz) {
        return {frequency_hz, table.front().relative_permittivity, table.front().conductivity_s_per_m};
    }
    if (frequency_hz >= table.back().frequency_hz) {
        return {frequency_hz, table.back().relative_permittivity, table.back().conductivity_s_per_m};
    }
    const auto hi = std::upper_bound(table.begin(), table.end(), frequency_hz,
                                     [](double f, const DielectricPoint& p) { return f < p.frequency_hz; });
    const auto lo = hi - 1;
    const double w = (frequency_hz - lo->frequency_hz) / (hi->frequency_hz - lo->frequency_hz);
    return {frequency_hz, lo->relative_permittivity + w * (hi->relative_permittivity - lo->relative_permittivity),
            lo->conductivity_s_per_m + w * (hi->conductivity_s_per_m - lo->conductivity_s_per_m)};
}

TissueModel tissue_at_frequency(const TissueModel& base, double frequency_hz) {
    if (base.dielectric_table.empty()) {
        return base;
    }
    const auto d = interpolate_dielectric(base.dielectric_table, frequency_hz);
    TissueModel out = base;
    out.penetration_depth_m = penetration_depth(frequency_hz, d.relative_permittivity, d.conductivity_s_per_m);
    out.reflection_coefficient = reflection_coefficient(d.relative_permittivity, d.conductivity_s_per_m, frequency_hz);
    return out;
}

std::vector<DepthPoint> depth_profile(double surface_sar_w_kg, double penetration_depth_m, double max_depth_m,
                                      int points) {
    if (points < 1) {
        throw std::invalid_argument("depth_profile: points must be >= 1");
    }
    if (!(penetration_depth_m > 0.0) || !(max_depth_m >= 0.0)) {
        throw DomainError("depth_profile: depth arguments must be positive");
    }
    std::vector<DepthPoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double z = points == 1 ? 0.0 : max_depth_m * i / (points - 1);
        out.push_back({z, surface_sar_w_kg * std::exp(-2.0 * z / penetration_depth_m)});
    }
    return out;
}

std::vector<DielectricPoint> read_dielectric_csv(std::istream& in) {
    std::vector<DielectricPoint> table;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "frequency_hz,eps_r,sigma_s_per_m") {
                throw std::invalid_argument("dielectric CSV: expected header 'frequency_hz,eps_r,sigma_s_per_m'");
            }
            header_seen = true;
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        double values[3];
        int n = 0;
        while (std::getline(row, cell, ',')) {
            if (n == 3) {
                n = 4;
                break;
            }
            try {
                std::size_t used = 0;
                values[n] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::invalid_argument("dielectric CSV line " + std::to_string(line_no) + ": bad number '" +
                                            cell + "'");
            }
            ++n;
        }
        if (n != 3) {
            throw std::invalid_argument("dielectric CSV line " + std::to_string(line_no) + ": expected 3 columns");
        }
        DielectricPoint p{values[0], values[1], values[2]};
        if (!(p.frequency_hz > 0.0) || !(p.relative_permittivity > 0.0) || !(p.conductivity_s_per_m >= 0.0)) {
            throw std::invalid_argument("dielectric CSV line " + std::to_string(line_no) + ": non-physical values");
        }
        if (!table.empty() && !(p.frequency_hz > table.back().frequency_hz)) {
            throw std::invalid_argument("dielectric CSV line " + std::to_string(line_no) +
                                        ": frequencies must be strictly increasing");
        }
        table.push_back(p);
    }
    if (!header_seen) {
        throw std::invalid_argument("dielectric CSV: missing header");
    }
    return table;
}

std::vector<DielectricPoint> read_dielectric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dielectric table '" + path.string() + "'");
    }
    return read_dielectric_csv(in);
}

}  // namespace emf

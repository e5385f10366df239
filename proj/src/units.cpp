#include "emf/units.hpp"

#include <cmath>
#include <stdexcept>

namespace emf {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double wavelength(double frequency_hz) {
    if (!(frequency_hz > 0.0)) {
        throw std::domain_error("wavelength: frequency must be positive");
    }
    return constants::speed_of_light / frequency_hz;
}

}  // namespace emf

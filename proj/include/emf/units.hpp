#pragma once

#include <numbers>

namespace emf {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;           // m/s
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // H/m
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

// g/cm^3 -> kg/m^3
inline constexpr double grams_per_cm3_to_kg_per_m3 = 1000.0;

double db_to_linear(double db);
double linear_to_db(double ratio);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

double wavelength(double frequency_hz);

}  // namespace emf

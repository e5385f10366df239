#pragma once

// Reference computations for the tests. Each one follows a different route
// from the library so that agreement is meaningful.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline constexpr double c0 = 299792458.0;
inline constexpr double mu0 = 1.25663706212e-6;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double pi = std::numbers::pi;

inline double watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

/// Attenuation from the complex propagation constant γ = jω sqrt(μ0 ε0 (ε_r - jσ/(ωε0))).
inline double penetration_depth(double f, double eps_r, double sigma) {
    const double w = 2.0 * pi * f;
    const std::complex<double> eps(eps_r, -sigma / (w * eps0));
    const std::complex<double> gamma = std::complex<double>(0.0, w) * std::sqrt(mu0 * eps0 * eps);
    return 1.0 / gamma.real();
}

/// Γ from wave impedances η = sqrt(μ/ε).
inline double reflection(double eps_r, double sigma, double f) {
    const double w = 2.0 * pi * f;
    const std::complex<double> eps = eps0 * std::complex<double>(eps_r, -sigma / (w * eps0));
    const std::complex<double> eta1 = std::sqrt(mu0 / eps0);
    const std::complex<double> eta2 = std::sqrt(std::complex<double>(mu0) / eps);
    return std::abs((eta2 - eta1) / (eta2 + eta1));
}

/// Closed-form free-space SAR inversion: d = sqrt(P 2 (1-R^2) duty / (4π δ ρ L)).
inline double sar_distance(double eirp_w, double r, double depth, double rho, double duty, double limit) {
    return std::sqrt(eirp_w * 2.0 * (1.0 - r * r) * duty / (4.0 * pi * depth * rho * limit));
}

inline double pd_distance(double eirp_w, double duty, double limit) {
    return std::sqrt(eirp_w * duty / (4.0 * pi * limit));
}

/// E[1/(x^2 + y^2 + h^2)] with y ~ U(-a, a): atan(a/c) / (a c), c^2 = x^2 + h^2.
inline double mean_inverse_square_lateral(double x, double h, double a) {
    const double c = std::hypot(x, h);
    if (a == 0.0) return 1.0 / (c * c);
    return std::atan(a / c) / (a * c);
}

/// E[1/d^2] with d ~ U(d0 - h, d0 + h).
inline double mean_inverse_square_radial(double d0, double h) { return 1.0 / ((d0 - h) * (d0 + h)); }

}  // namespace oracle

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "emf/errors.hpp"
#include "emf/exposure.hpp"
#include "emf/units.hpp"
#include "oracles.hpp"

using namespace emf;

TEST_CASE("SAR worked values") {
    TissueModel t{.reflection_coefficient = 0.0};
    CHECK(sar_from_pd(10.0, t) == 20.0);
    t.reflection_coefficient = 1.0;
    CHECK(sar_from_pd(123.0, t) == 0.0);
    t.reflection_coefficient = 0.6;
    CHECK(sar_from_pd(1.0, t) == doctest::Approx(1.28).epsilon(1e-14));
    CHECK(sar_from_pd(0.0, t) == 0.0);
}

TEST_CASE("tissue defaults and density unit conversion") {
    const TissueModel t;
    CHECK(t.penetration_depth_m == 1e-3);
    CHECK(t.mass_density_kg_m3 == 1.0 * grams_per_cm3_to_kg_per_m3);
    CHECK(t.reflection_coefficient == 0.6);
    CHECK(validate_tissue(t).empty());
    CHECK(validate_tissue(TissueModel{.reflection_coefficient = 1.2}).size() == 1);
    CHECK(validate_tissue(TissueModel{.penetration_depth_m = 0.0, .mass_density_kg_m3 = -1.0}).size() == 2);
}

TEST_CASE("SAR linearity, monotonicity and inversion") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        TissueModel t{.reflection_coefficient = 0.99 * u(rng),
                      .penetration_depth_m = 1e-4 + 1e-2 * u(rng),
                      .mass_density_kg_m3 = 500.0 + 1500.0 * u(rng)};
        const double pd = 100.0 * u(rng);
        const double a = 1.0 + 9.0 * u(rng);
        const double s = sar_from_pd(pd, t);
        CHECK(std::abs(sar_from_pd(a * pd, t) - a * s) <= 1e-14 * a * s);
        const double back = s * t.penetration_depth_m * t.mass_density_kg_m3 /
                            (2.0 * (1.0 - t.reflection_coefficient * t.reflection_coefficient));
        CHECK(std::abs(back - pd) <= 1e-12 * std::max(pd, 1e-300));

        auto more = t;
        more.reflection_coefficient = std::min(1.0, t.reflection_coefficient + 0.01);
        CHECK(sar_from_pd(pd, more) <= s);
        more = t;
        more.penetration_depth_m *= 1.5;
        CHECK(sar_from_pd(pd, more) <= s);
        more = t;
        more.mass_density_kg_m3 *= 1.5;
        CHECK(sar_from_pd(pd, more) <= s);
    }
}

TEST_CASE("penetration depth") {
    CHECK(std::isinf(penetration_depth(28e9, 40.0, 0.0)));
    CHECK_THROWS_AS(penetration_depth(0.0, 40.0, 1.0), DomainError);
    CHECK(penetration_depth(28e9, 40.0, 20.0) == doctest::Approx(0.0016997620410034448).epsilon(1e-10));

    // Agreement with the propagation-constant route on random media.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double f = std::pow(10.0, 8.0 + 3.0 * u(rng));
        const double er = 1.0 + 80.0 * u(rng);
        const double sigma = std::pow(10.0, -3.0 + 5.0 * u(rng));
        CHECK(penetration_depth(f, er, sigma) == doctest::Approx(oracle::penetration_depth(f, er, sigma)).epsilon(1e-9));
        CHECK(penetration_depth(f * 1.2, er, sigma) < penetration_depth(f, er, sigma));
        CHECK(penetration_depth(f, er, sigma * 1.2) < penetration_depth(f, er, sigma));
    }
}

TEST_CASE("penetration depth good-dielectric limit") {
    const double f = 1e9;
    const double omega = 2.0 * oracle::pi * f;
    const double eps = oracle::eps0;
    const double sigma = 1e-3 * omega * eps;  // σ/(ωε) = 1e-3
    const double approx = (2.0 / sigma) * std::sqrt(eps / oracle::mu0);
    CHECK(std::abs(penetration_depth(f, 1.0, sigma) - approx) / approx < 1e-3);
}

TEST_CASE("reflection coefficient") {
    CHECK(reflection_coefficient(1.0, 0.0, 1e9) == doctest::Approx(0.0));
    CHECK(reflection_coefficient(4.0, 0.0, 1e9) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(reflection_coefficient(1.0, 1e6, 1e9) > 0.99);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double f = std::pow(10.0, 8.0 + 3.0 * u(rng));
        const double er = 1.0 + 80.0 * u(rng);
        const double sigma = std::pow(10.0, -3.0 + 8.0 * u(rng));
        const double r = reflection_coefficient(er, sigma, f);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(r == doctest::Approx(oracle::reflection(er, sigma, f)).epsilon(1e-10));
    }
}

TEST_CASE("depth profile decays as exp(-2z/delta)") {
    const auto prof = depth_profile(4.0, 1e-3, 5e-3, 11);
    REQUIRE(prof.size() == 11);
    CHECK(prof.front().sar_w_kg == 4.0);
    CHECK(prof[2].depth_m == doctest::Approx(1e-3));
    CHECK(prof[2].sar_w_kg == doctest::Approx(4.0 * std::exp(-2.0)));
    CHECK(prof.back().sar_w_kg == doctest::Approx(4.0 * std::exp(-10.0)));
    CHECK_THROWS(depth_profile(1.0, 0.0, 1.0, 5));
}

TEST_CASE("dielectric CSV parsing and interpolation") {
    std::istringstream in("frequency_hz,eps_r,sigma_s_per_m\n1e9,40,1\n3e9,38,2\r\n\n");
    const auto table = read_dielectric_csv(in);
    REQUIRE(table.size() == 2);
    const auto mid = interpolate_dielectric(table, 2e9);
    CHECK(mid.relative_permittivity == doctest::Approx(39.0));
    CHECK(mid.conductivity_s_per_m == doctest::Approx(1.5));
    CHECK(interpolate_dielectric(table, 1e8).relative_permittivity == 40.0);
    CHECK(interpolate_dielectric(table, 1e10).conductivity_s_per_m == 2.0);

    TissueModel t{.dielectric_table = table};
    const auto at = tissue_at_frequency(t, 2e9);
    CHECK(at.penetration_depth_m == doctest::Approx(penetration_depth(2e9, 39.0, 1.5)));
    CHECK(at.reflection_coefficient == doctest::Approx(reflection_coefficient(39.0, 1.5, 2e9)));

    std::istringstream bad_header("f,e,s\n1,2,3\n");
    CHECK_THROWS_AS(read_dielectric_csv(bad_header), std::invalid_argument);
    std::istringstream unsorted("frequency_hz,eps_r,sigma_s_per_m\n2e9,40,1\n1e9,38,2\n");
    CHECK_THROWS_WITH_AS(read_dielectric_csv(unsorted), doctest::Contains("line 3"), std::invalid_argument);
    std::istringstream bad_num("frequency_hz,eps_r,sigma_s_per_m\n2e9,4x,1\n");
    CHECK_THROWS_AS(read_dielectric_csv(bad_num), std::invalid_argument);
    std::istringstream cols("frequency_hz,eps_r,sigma_s_per_m\n2e9,4,1,5\n");
    CHECK_THROWS_AS(read_dielectric_csv(cols), std::invalid_argument);
    CHECK_THROWS_AS(read_dielectric_csv(std::filesystem::path("/nonexistent/table.csv")), IoError);
}

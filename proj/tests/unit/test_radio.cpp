#include <doctest.h>

#include <cmath>
#include <random>

#include "emf/errors.hpp"
#include "emf/radio.hpp"
#include "emf/units.hpp"
#include "oracles.hpp"

using namespace emf;

TEST_CASE("EIRP composition") {
    const auto nr = builtin_profile(BuiltinProfile::NR5G);
    // 18 + 8 + 2 * 10 log10(256)
    CHECK(eirp_dbm(nr.bs) == doctest::Approx(18.0 + 8.0 + 2.0 * 24.08239965311849).epsilon(1e-14));
    CHECK(std::abs(eirp_dbm(nr.bs) - 74.164) < 1e-3);
    CHECK(eirp_dbm(nr.ue) == 55.0);
    CHECK(eirp_dbm(StationConfig{.element_gain_dbi = 0, .tx_power_dbm = 0, .antenna_count = 1}) == 0.0);
    // Total power 44 dBm, 8 dBi per element over 4 elements.
    CHECK(eirp_dbm(builtin_profile(BuiltinProfile::LTE4G).bs) == doctest::Approx(58.020599913280).epsilon(1e-13));
    CHECK(eirp_dbm(builtin_profile(BuiltinProfile::G39).bs) == 60.0);
}

TEST_CASE("EIRP is monotone in power, gain and element count") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(-10.0, 40.0);
    std::uniform_int_distribution<int> count(1, 512);
    for (int i = 0; i < 500; ++i) {
        StationConfig s{.element_gain_dbi = val(rng), .tx_power_dbm = val(rng), .antenna_count = count(rng)};
        s.gain_is_total = i % 2 == 0;
        s.power_is_total = i % 3 == 0;
        const double base = eirp_dbm(s);
        auto more = s;
        more.tx_power_dbm += 0.5;
        CHECK(eirp_dbm(more) >= base);
        more = s;
        more.element_gain_dbi += 0.5;
        CHECK(eirp_dbm(more) >= base);
        more = s;
        more.antenna_count += 1;
        CHECK(eirp_dbm(more) >= base);
    }
}

TEST_CASE("free-space power density") {
    const double eirp = eirp_dbm(builtin_profile(BuiltinProfile::NR5G).bs);
    const LinkGeometry at100{100.0, 1.0, 1.0};
    const double pd = power_density(eirp, at100, {}, 28e9);
    CHECK(pd == doctest::Approx(oracle::watts(eirp) / (4.0 * oracle::pi * 1e4)).epsilon(1e-13));
    CHECK(std::abs(pd - 0.2076) < 5e-5);
    CHECK(power_density(0.0, LinkGeometry{1.0, 1.0, 1.0}, {}, 1e9) ==
          doctest::Approx(1e-3 / (4.0 * oracle::pi)).epsilon(1e-14));
    CHECK(power_density(0.0, LinkGeometry{1.0, 1.0, 1.0}, {}, 1e9) == doctest::Approx(7.9577e-5).epsilon(1e-4));
}

TEST_CASE("zero separation is a domain error") {
    CHECK_THROWS_AS(power_density(30.0, LinkGeometry{0.0, 2.0, 2.0}, {}, 1e9), DomainError);
}

TEST_CASE("inverse-square scaling") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logd(-2.0, 3.0);
    std::uniform_real_distribution<double> alpha(1.1, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double d = std::pow(10.0, logd(rng));
        const double a = alpha(rng);
        const double pd1 = power_density(40.0, LinkGeometry{d, 1.0, 1.0}, {}, 2e9);
        const double pda = power_density(40.0, LinkGeometry{a * d, 1.0, 1.0}, {}, 2e9);
        CHECK(std::abs(pda * a * a - pd1) <= 1e-12 * pd1);
    }
}

TEST_CASE("dBm/W conversion round trip") {
    for (double dbm = -60.0; dbm <= 90.0; dbm += 0.37) {
        CHECK(std::abs(watts_to_dbm(dbm_to_watts(dbm)) - dbm) <= 1e-12 * std::max(1.0, std::abs(dbm)));
        const double w = dbm_to_watts(dbm);
        CHECK(std::abs(dbm_to_watts(watts_to_dbm(w)) - w) <= 1e-12 * w);
    }
}

TEST_CASE("UMa LOS pathloss pinned coefficients") {
    const auto short_range = uma_los_pathloss_db(100.0, 28e9, 25.0, 1.5);
    CHECK(short_range.loss_db == doctest::Approx(100.943160626844).epsilon(1e-12));
    CHECK(short_range.breakpoint_m == doctest::Approx(4.0 * 24.0 * 0.5 * 28e9 / oracle::c0));
    const double d3 = std::hypot(1000.0, 33.5);
    const auto long_range = uma_los_pathloss_db(d3, 2e9, 35.0, 1.5);
    CHECK(long_range.loss_db == doctest::Approx(106.188157656697).epsilon(1e-12));
    CHECK(long_range.in_validity_range);
    CHECK_FALSE(uma_los_pathloss_db(24.0, 28e9, 25.0, 1.5).in_validity_range);
}

TEST_CASE("UMa LOS monotone in distance and frequency; excess over free space clamps at zero") {
    for (double f : {1.9e9, 2e9, 28e9}) {
        double prev = -1e9;
        for (double d = 24.0; d < 6000.0; d *= 1.01) {
            const double pl = uma_los_pathloss_db(d, f, 25.0, 1.5).loss_db;
            CHECK(pl >= prev - 1e-12);
            prev = pl;
            CHECK(uma_los_pathloss_db(d, f * 1.1, 25.0, 1.5).loss_db > pl);
        }
    }
    for (double f : {1.9e9, 2e9, 28e9}) {
        for (double d = 24.0; d < 6000.0; d *= 1.05) {
            const LinkGeometry g{std::sqrt(d * d - 23.5 * 23.5), 25.0, 1.5};
            const double fs = power_density(50.0, g, {PathlossKind::FreeSpace}, f);
            const double uma = power_density(50.0, g, {PathlossKind::UMaLineOfSight}, f);
            CHECK(uma <= fs);
            const double fspl = 20.0 * std::log10(4.0 * oracle::pi * d * f / oracle::c0);
            CHECK(free_space_pathloss_db(d, f) == doctest::Approx(fspl).epsilon(1e-13));
        }
    }
}

TEST_CASE("power density strictly decreasing in distance for both pathloss kinds") {
    for (auto kind : {PathlossKind::FreeSpace, PathlossKind::UMaLineOfSight}) {
        double prev = INFINITY;
        for (double x = 0.0; x < 3000.0; x += 3.7) {
            const double pd = power_density(60.0, LinkGeometry{x, 25.0, 1.5}, {kind}, 28e9);
            CHECK(pd < prev);
            prev = pd;
        }
    }
}

TEST_CASE("Fraunhofer distance of the 16-element 28 GHz handset array") {
    const auto ue = builtin_profile(BuiltinProfile::NR5G).ue;
    const double lambda = oracle::c0 / 28e9;
    const double side = 4.0 * lambda / 2.0;
    const double extent = std::sqrt(2.0) * side;
    CHECK(fraunhofer_distance(ue, 28e9) == doctest::Approx(2.0 * extent * extent / lambda).epsilon(1e-13));
    // Straddles the uplink sweep range.
    CHECK(fraunhofer_distance(ue, 28e9) > 0.01);
    CHECK(fraunhofer_distance(ue, 28e9) < 1.0);
    StationConfig single{.antenna_count = 1};
    CHECK(aperture_extent(single, 28e9) == doctest::Approx(lambda / 2.0));
}

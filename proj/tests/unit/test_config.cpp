#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "emf/config.hpp"
#include "emf/errors.hpp"

using namespace emf;

namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
    fs::path p = fs::path(EMF_TEST_TMPDIR) / "config";
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("profile JSON round trip") {
    for (auto b : all_builtins()) {
        const auto p = builtin_profile(b);
        CHECK(profile_from_json(to_json(p)) == p);
        CHECK(profile_from_json(nlohmann::json::parse(to_json(p).dump())) == p);
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 100.0);
    for (int i = 0; i < 100; ++i) {
        SystemProfile p = builtin_profile(BuiltinProfile::NR5G);
        p.name = "random" + std::to_string(i);
        p.carrier_frequency_hz = u(rng) * 1e9;
        p.inter_site_distance_m = u(rng) * 10.0;
        p.bs.tx_power_dbm = u(rng) / 3.0;
        p.ue.element_gain_dbi = u(rng) / 7.0;
        p.bs.antenna_count = 1 + i;
        p.ue.gain_is_total = i % 2 == 0;
        p.users_per_sector = 1 + i % 12;
        CHECK(profile_from_json(nlohmann::json::parse(to_json(p).dump())) == p);
    }
}

TEST_CASE("profile files") {
    const auto path = tmpdir() / "custom.json";
    auto p = builtin_profile(BuiltinProfile::NR5G);
    p.name = "nr5g-64";
    p.bs.antenna_count = 64;
    save_profile(p, path);
    CHECK(load_profile(path.string()) == p);
    CHECK(load_profile("nr5g") == builtin_profile(BuiltinProfile::NR5G));
    CHECK_THROWS_AS(load_profile("no-such-profile"), UnknownProfileError);

    auto j = to_json(p);
    j["bs"]["antenna_count"] = 0;
    const auto bad = tmpdir() / "bad.json";
    std::ofstream(bad) << j.dump();
    CHECK_THROWS_AS(load_profile(bad.string()), ValidationError);
}

TEST_CASE("strict profile parsing") {
    auto j = to_json(builtin_profile(BuiltinProfile::G39));
    j["colour"] = "blue";
    CHECK_THROWS_WITH_AS(profile_from_json(j), doctest::Contains("colour"), ConfigError);
    j = to_json(builtin_profile(BuiltinProfile::G39));
    j.erase("carrier_frequency_hz");
    CHECK_THROWS_AS(profile_from_json(j), ConfigError);
    j = to_json(builtin_profile(BuiltinProfile::G39));
    j["bandwidth_hz"] = "wide";
    CHECK_THROWS_AS(profile_from_json(j), ConfigError);
    j = to_json(builtin_profile(BuiltinProfile::G39));
    j["duplexing"] = "FDD";
    CHECK_THROWS_AS(profile_from_json(j), ConfigError);
}

TEST_CASE("run config round trip") {
    RunConfig r;
    r.profiles = {"nr5g", "lte4g", "/tmp/x.json"};
    r.direction = Direction::Uplink;
    r.overrides = {{"trials", "500"}, {"seed", "18446744073709551615"}, {"R", "0.5"}, {"pathloss", "uma-los"}};
    r.output_dir = "results";
    r.emit_plots = false;
    r.threads = 3;
    r.dielectrics = "skin.csv";
    CHECK(run_config_from_json(nlohmann::json::parse(to_json(r).dump())) == r);
    const auto path = tmpdir() / "run.json";
    save_run_config(r, path);
    CHECK(load_run_config(path) == r);
    CHECK(run_config_from_json(nlohmann::json::object()) == RunConfig{});
}

TEST_CASE("unknown override keys are rejected") {
    CHECK_THROWS_WITH_AS(check_override_keys({{"trails", "5"}}), doctest::Contains("trails"), ConfigError);
    nlohmann::json j = {{"overrides", {{"bogus", "1"}}}};
    CHECK_THROWS_AS(run_config_from_json(j), ConfigError);
}

TEST_CASE("overrides apply to the campaign") {
    RunConfig r;
    r.direction = Direction::Uplink;
    r.overrides = {{"trials", "123"}, {"seed", "9"},          {"R", "0.3"},          {"duty", "0.25"},
                   {"jitter", "0"},   {"antenna_count", "4"}, {"beam_offset_db", "6"}, {"step", "0.05"}};
    const auto c = campaign_for(r, builtin_profile(BuiltinProfile::NR5G));
    CHECK(c.trials == 123);
    CHECK(c.seed == 9);
    CHECK(c.sweep.tissue.reflection_coefficient == 0.3);
    CHECK(c.duty == 0.25);
    CHECK(c.jitter_scale == 0.0);
    CHECK(c.sweep.profile.ue.antenna_count == 4);
    CHECK(c.sweep.profile.bs.antenna_count == 256);
    CHECK(c.beam_offset_db == 6.0);
    CHECK(c.sweep.step_m == 0.05);

    CampaignSpec d = default_campaign(Direction::Downlink, builtin_profile(BuiltinProfile::NR5G));
    apply_overrides(d, {{"antenna_count", "64"}, {"pathloss", "uma-los"}, {"aggregation", "all-stations"}});
    CHECK(d.sweep.profile.bs.antenna_count == 64);
    CHECK(d.sweep.pathloss.kind == PathlossKind::UMaLineOfSight);
    CHECK(d.aggregation == Aggregation::AllStations);
    CHECK_THROWS_AS(apply_overrides(d, {{"trials", "many"}}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(d, {{"seed", "-1"}}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(d, {{"pathloss", "nlos"}}), ConfigError);
}

TEST_CASE("report assumption block round trips") {
    const auto nr = builtin_profile(BuiltinProfile::NR5G);
    auto c = default_campaign(Direction::Downlink, nr);
    c.trials = 50;
    c.seed = 12345678901234ULL;
    const auto report = exposure_report(nr, std::span<const CampaignSpec>(&c, 1));
    const auto j = nlohmann::json::parse(to_json(report).dump());
    const auto a = assumptions_from_json(j["scenarios"][0]["assumptions"]);
    CHECK(a == report.scenarios[0].assumptions);
    CHECK(a.seed == 12345678901234ULL);
    bool flagged = false;
    for (const auto& l : j["limits"]) {
        if (l["id"] == "icnirp-sar") flagged = l["extrapolated"].get<bool>();
    }
    CHECK(flagged);
}

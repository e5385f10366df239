#include <doctest.h>

#include <expat.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "emf/errors.hpp"
#include "emf/output.hpp"

using namespace emf;

namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
    fs::path p = fs::path(EMF_TEST_TMPDIR) / "output";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct XmlStats {
    int polylines = 0;
    int guidelines = 0;
    std::vector<std::string> texts;
    std::string current;
    bool in_text = false;
};

// Parses with expat; returns false on any well-formedness error.
bool parse_svg(const std::string& svg, XmlStats& stats) {
    XML_Parser parser = XML_ParserCreate(nullptr);
    XML_SetUserData(parser, &stats);
    XML_SetElementHandler(
        parser,
        [](void* data, const XML_Char* name, const XML_Char** attrs) {
            auto* s = static_cast<XmlStats*>(data);
            const std::string n = name;
            if (n == "polyline") ++s->polylines;
            if (n == "line") {
                for (int i = 0; attrs[i]; i += 2) {
                    if (std::string(attrs[i]) == "class" && std::string(attrs[i + 1]) == "guideline") ++s->guidelines;
                }
            }
            if (n == "text") {
                s->in_text = true;
                s->current.clear();
            }
        },
        [](void* data, const XML_Char* name) {
            auto* s = static_cast<XmlStats*>(data);
            if (std::string(name) == "text") {
                s->texts.push_back(s->current);
                s->in_text = false;
            }
        });
    XML_SetCharacterDataHandler(parser, [](void* data, const XML_Char* text, int len) {
        auto* s = static_cast<XmlStats*>(data);
        if (s->in_text) s->current.append(text, static_cast<std::size_t>(len));
    });
    const bool ok = XML_Parse(parser, svg.data(), static_cast<int>(svg.size()), 1) == XML_STATUS_OK;
    XML_ParserFree(parser);
    return ok;
}

bool has_text(const XmlStats& s, const std::string& needle) {
    for (const auto& t : s.texts) {
        if (t.find(needle) != std::string::npos) return true;
    }
    return false;
}

CampaignResult small_result(const std::string& name, double scale, std::size_t marks) {
    CampaignResult r;
    r.profile_name = name;
    for (std::size_t i = 0; i < marks; ++i) {
        const double d = 10.0 * static_cast<double>(i) + 1.0;
        r.records.push_back({d, scale / (d * d), 0.0, scale / (d * d), 2.0 * scale / (d * d), 0.0, 2.0 * scale / (d * d), 0.0});
    }
    return r;
}

}  // namespace

TEST_CASE("CSV shape") {
    const auto path = tmpdir() / "eleven.csv";
    emit_csv(small_result("x", 1.0, 11), path);
    const std::string text = slurp(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.substr(0, text.find('\n')) == kCampaignCsvHeader);
    CHECK(text.find("\n1,1,0,1,2,0,2,0\n") != std::string::npos);

    emit_csv(CampaignResult{}, tmpdir() / "empty.csv");
    CHECK(slurp(tmpdir() / "empty.csv") == std::string(kCampaignCsvHeader) + "\n");
}

TEST_CASE("CSV uses nine significant digits") {
    CampaignResult r;
    r.records.push_back({0.01, 1.0 / 3.0, 0, 0, 0, 0, 0, 0});
    std::ostringstream s;
    write_campaign_csv(r, s);
    CHECK(s.str().find("0.01,0.333333333,") != std::string::npos);
}

TEST_CASE("CSV is byte-identical for the same seed") {
    auto c = default_campaign(Direction::Uplink, builtin_profile(BuiltinProfile::NR5G));
    c.trials = 300;
    c.seed = 4;
    emit_csv(run_campaign(c), tmpdir() / "a.csv");
    emit_csv(run_campaign(c), tmpdir() / "b.csv");
    CHECK(slurp(tmpdir() / "a.csv") == slurp(tmpdir() / "b.csv"));
}

TEST_CASE("unwritable path names the path") {
    const fs::path bad = "/nonexistent-dir/sub/out.csv";
    CHECK_THROWS_WITH_AS(emit_csv(CampaignResult{}, bad), doctest::Contains(bad.string().c_str()), IoError);
}

TEST_CASE("downlink comparison plot") {
    std::vector<PlotSeries> series;
    for (auto b : all_builtins()) {
        auto c = default_campaign(Direction::Downlink, builtin_profile(b));
        c.trials = 20;
        series.push_back({std::string(builtin_name(b)), run_campaign(c)});
    }
    std::vector<RegulatoryLimit> limits(limit_registry().begin(), limit_registry().end());
    const auto path = tmpdir() / "dl_pd.svg";
    emit_plot(series, limits, PlotOptions{.metric = Metric::PD, .title = "PD & <downlink>"}, path);
    XmlStats stats;
    REQUIRE(parse_svg(slurp(path), stats));
    CHECK(stats.polylines == 3);
    CHECK(stats.guidelines == 1);
    CHECK(has_text(stats, "ICNIRP 10 W/m^2"));
    CHECK(has_text(stats, "PD & <downlink>"));
}

TEST_CASE("uplink SAR plot carries the 2 W/kg guideline") {
    auto c = default_campaign(Direction::Uplink, builtin_profile(BuiltinProfile::NR5G));
    c.trials = 20;
    std::vector<PlotSeries> series{{"nr5g", run_campaign(c)}};
    const std::vector<RegulatoryLimit> limits{find_limit("icnirp-sar")};
    XmlStats stats;
    REQUIRE(parse_svg(render_svg(series, limits, PlotOptions{.metric = Metric::SAR}), stats));
    CHECK(stats.guidelines == 1);
    CHECK(has_text(stats, "ICNIRP 2 W/kg"));
}

TEST_CASE("degenerate plots") {
    std::vector<PlotSeries> one{{"single", small_result("single", 1.0, 1)}};
    XmlStats stats;
    const std::string svg = render_svg(one, {}, PlotOptions{});
    REQUIRE(parse_svg(svg, stats));
    CHECK(stats.polylines == 1);

    std::vector<PlotSeries> empty{{"none", CampaignResult{}}};
    CHECK_THROWS_AS(emit_plot(empty, {}, PlotOptions{}, tmpdir() / "never.svg"), std::invalid_argument);
    CHECK_FALSE(fs::exists(tmpdir() / "never.svg"));
}

TEST_CASE("assumptions text lists every model choice") {
    Assumptions a;
    a.pathloss = "free-space";
    a.reflection_coefficient = 0.6;
    a.duty = 0.1;
    a.aggregation = "serving-only";
    const std::string text = render_assumptions("nr5g", Direction::Downlink, a);
    for (const char* key : {"pathloss = free-space", "reflection_coefficient = 0.6", "duty = 0.1", "seed = 0",
                            "penetration_depth_m", "mass_density_kg_m3", "beam_offset_db", "near_field_marks"}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

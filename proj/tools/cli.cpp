#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emf/errors.hpp"
#include "emf/output.hpp"
#include "emf/units.hpp"

namespace emf::cli {

namespace fs = std::filesystem;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "out";
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw UsageError("--set expects key=value, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}


void add_station_flags(CLI::App& sub, MinDistanceCommand& md, std::string& station) {
    sub.add_option("--profile", md.profile, "Built-in profile (nr5g, lte4g, g39) or JSON profile path");
    sub.add_option("--station", station, "Transmitting station")
        ->check(CLI::IsMember({"bs", "ue"}))
        ->default_val("ue");
    sub.add_option("--limit", md.limit, "Regulatory limit")
        ->check(CLI::IsMember({"icnirp-sar", "icnirp-pd", "fcc-sar"}))
        ->default_val("icnirp-sar");
}

std::string format_g(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

void print_station(std::ostream& out, const char* label, const StationConfig& s, double f) {
    out << "  " << label << ": gain " << format_g("%g", s.element_gain_dbi) << " dBi"
        << (s.gain_is_total ? " total" : " per element") << ", power " << format_g("%g", s.tx_power_dbm) << " dBm"
        << (s.power_is_total ? " total" : " per element") << ", " << s.antenna_count << (s.antenna_count == 1 ? " antenna" : " antennas") << " (lambda/2), height "
        << format_g("%g", s.antenna_height_m) << " m, NF " << format_g("%g", s.noise_figure_db) << " dB, EIRP "
        << format_g("%.3f", eirp_dbm(s)) << " dBm, far field beyond " << format_g("%.4g", fraunhofer_distance(s, f))
        << " m\n";
}

int run_sweep(const SweepCommand& cmd, std::ostream& out) {
    const RunConfig& run = cmd.run;
    const fs::path dir(run.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }

    std::vector<PlotSeries> series;
    std::string assumptions;
    for (const auto& selector : run.profiles) {
        const SystemProfile profile = load_profile(selector);
        const CampaignSpec campaign = campaign_for(run, profile);
        const ExposureReport report = exposure_report(profile, std::span<const CampaignSpec>(&campaign, 1));
        const ScenarioReport& scenario = report.scenarios.front();

        const std::string stem = profile.name + "_" + std::string(to_string(run.direction));
        emit_csv(scenario.result, dir / (stem + ".csv"));
        write_text_file(to_json(report).dump(2) + "\n", dir / (stem + "_report.json"));
        write_text_file(render_text(report), dir / (stem + "_report.txt"));
        if (!assumptions.empty()) assumptions += "\n";
        assumptions += render_assumptions(profile.name, run.direction, scenario.assumptions);
        series.push_back({profile.name, scenario.result});

        out << stem << ": " << scenario.result.records.size() << " marks, " << campaign.trials << " trials -> "
            << (dir / (stem + ".csv")).string() << "\n";
    }
    write_text_file(assumptions, dir / "assumptions.txt");
    save_run_config(run, dir / "run_config.json");

    if (run.emit_plots) {
        std::vector<RegulatoryLimit> limits;
        const double f = series.empty() ? 0.0 : load_profile(run.profiles.front()).carrier_frequency_hz;
        for (const auto& l : limit_registry()) {
            if (!l.sourced_outside_paper) limits.push_back(limit_at_frequency(l, f));
        }
        for (Metric m : {Metric::PD, Metric::SAR}) {
            PlotOptions opts;
            opts.metric = m;
            opts.title = "Time-averaged " + std::string(to_string(m)) + " (" + std::string(to_string(run.direction)) + ")";
            const fs::path path =
                dir / (std::string(to_string(run.direction)) + "_" + (m == Metric::PD ? "pd" : "sar") + ".svg");
            emit_plot(series, limits, opts, path);
            out << "plot -> " << path.string() << "\n";
        }
    }
    return kExitOk;
}

int run_min_distance(const MinDistanceCommand& cmd, std::ostream& out, std::ostream& err) {
    const SystemProfile profile = load_profile(cmd.profile);
    TissueModel tissue;
    if (cmd.reflection) tissue.reflection_coefficient = *cmd.reflection;
    if (!cmd.dielectrics.empty()) tissue.dielectric_table = read_dielectric_csv(fs::path(cmd.dielectrics));
    if (const auto problems = validate_tissue(tissue); !problems.empty()) {
        throw ValidationError("invalid tissue model: " + problems.front());
    }
    const double f = profile.carrier_frequency_hz;
    const RegulatoryLimit limit = limit_at_frequency(find_limit(cmd.limit), f);
    const double duty = cmd.duty.value_or(cmd.station == StationKind::BS
                                              ? 1.0 / static_cast<double>(profile.users_per_sector)
                                              : 0.5);
    const StationConfig& station = cmd.station == StationKind::BS ? profile.bs : profile.ue;
    const TissueModel effective = tissue_at_frequency(tissue, f);

    out << "profile = " << profile.name << "\n";
    out << "station = " << to_string(cmd.station) << "\n";
    out << "limit = " << limit.id << " (" << format_g("%g", limit.value) << " " << metric_unit(limit.metric) << ", "
        << limit.averaging_basis << ")" << (limit.extrapolated ? " extrapolated" : "") << "\n";
    out << "eirp_dbm = " << format_g("%.6g", eirp_dbm(station) - cmd.beam_offset_db) << "\n";
    out << "beam_offset_db = " << format_g("%g", cmd.beam_offset_db) << "\n";
    out << "duty = " << format_g("%.6g", duty) << "\n";
    out << "reflection_coefficient = " << format_g("%.6g", effective.reflection_coefficient) << "\n";
    out << "penetration_depth_m = " << format_g("%.6g", effective.penetration_depth_m) << "\n";
    out << "mass_density_kg_m3 = " << format_g("%.6g", effective.mass_density_kg_m3) << "\n";
    out << "pathloss = free-space\n";
    try {
        const SafeDistance d = min_safe_distance(profile, cmd.station, limit, tissue, duty, cmd.beam_offset_db);
        if (d.always_compliant) {
            out << "min_distance_m = 0 (always compliant)\n";
        } else {
            out << "min_distance_m = " << format_g("%.9g", d.distance_m) << "\n";
            out << "near_field = " << (d.distance_m < fraunhofer_distance(station, f) ? "yes" : "no") << "\n";
        }
    } catch (const BracketExhaustedError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

int run_profiles(const ProfilesCommand& cmd, std::ostream& out) {
    if (cmd.json) {
        nlohmann::json all = nlohmann::json::array();
        for (auto b : all_builtins()) all.push_back(to_json(builtin_profile(b)));
        out << all.dump(2) << "\n";
        return kExitOk;
    }
    for (auto b : all_builtins()) {
        const SystemProfile p = builtin_profile(b);
        out << p.name << ": " << format_g("%g", p.carrier_frequency_hz / 1e9) << " GHz, ISD "
            << format_g("%g", p.inter_site_distance_m) << " m, bandwidth " << format_g("%g", p.bandwidth_hz / 1e6)
            << " MHz, layout UMa, " << p.sectors_per_site << " sectors/site, " << p.users_per_sector
            << " users/sector, TDD, SU-MIMO, outdoor 100%\n";
        print_station(out, "bs", p.bs, p.carrier_frequency_hz);
        print_station(out, "ue", p.ue, p.carrier_frequency_hz);
    }
    return kExitOk;
}

int run_depth_profile(const DepthProfileCommand& cmd, std::ostream& out) {
    TissueModel tissue;
    if (!cmd.dielectrics.empty()) {
        tissue.dielectric_table = read_dielectric_csv(fs::path(cmd.dielectrics));
        tissue = tissue_at_frequency(tissue, cmd.frequency_hz);
    } else if (cmd.eps_r && cmd.sigma) {
        tissue.penetration_depth_m = penetration_depth(cmd.frequency_hz, *cmd.eps_r, *cmd.sigma);
        tissue.reflection_coefficient = reflection_coefficient(*cmd.eps_r, *cmd.sigma, cmd.frequency_hz);
    }
    if (!std::isfinite(tissue.penetration_depth_m)) {
        throw DomainError("lossless medium: penetration depth is infinite");
    }
    const double surface = sar_from_pd(cmd.incident_pd, tissue);
    const double max_depth = cmd.max_depth_m.value_or(5.0 * tissue.penetration_depth_m);
    const auto profile = depth_profile(surface, tissue.penetration_depth_m, max_depth, cmd.points);

    std::ostringstream csv;
    csv << "depth_m,sar_w_kg\n";
    for (const auto& p : profile) {
        csv << format_g("%.9g", p.depth_m) << ',' << format_g("%.9g", p.sar_w_kg) << '\n';
    }
    if (cmd.out.empty()) {
        out << csv.str();
    } else {
        write_text_file(csv.str(), cmd.out);
        out << "frequency_hz = " << format_g("%.9g", cmd.frequency_hz) << "\n";
        out << "penetration_depth_m = " << format_g("%.9g", tissue.penetration_depth_m) << "\n";
        out << "reflection_coefficient = " << format_g("%.9g", tissue.reflection_coefficient) << "\n";
        out << "surface_sar_w_kg = " << format_g("%.9g", surface) << "\n";
        out << "depth profile -> " << cmd.out << "\n";
    }
    return kExitOk;
}

}  // namespace

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Human RF exposure (PD/SAR) simulator for 5G/4G/3.9G links", "emfexpo"};
    app.require_subcommand(1);

    // sweep
    RunConfig run;
    run.output_dir = default_out_dir();
    std::string direction = "downlink";
    std::vector<std::string> profiles;
    std::vector<std::string> sets;
    std::string config_path;
    std::string trials, seed;
    bool no_plots = false;
    int threads = 0;
    std::string dielectrics;
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo distance sweep with CSV, SVG and report output");
    sweep->add_option("--direction", direction, "downlink or uplink")->check(CLI::IsMember({"downlink", "uplink"}));
    sweep->add_option("--profile", profiles, "Built-in name or JSON profile path (repeatable)");
    sweep->add_option("--trials", trials, "Monte Carlo trials");
    sweep->add_option("--seed", seed, "64-bit RNG seed");
    sweep->add_option("--out", run.output_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
    sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sweep->add_option("--set", sets, "Override key=value (repeatable)");
    sweep->add_option("--config", config_path, "JSON run configuration");
    sweep->add_option("--dielectrics", dielectrics, "Dielectric CSV (frequency_hz,eps_r,sigma_s_per_m)");
    sweep->add_flag("--no-plots", no_plots, "Skip SVG plots");

    // min-distance
    MinDistanceCommand md;
    std::string station = "ue";
    double duty = 0.0;
    double reflection = 0.0;
    auto* mind = app.add_subcommand("min-distance", "Minimum separation meeting a regulatory limit");
    add_station_flags(*mind, md, station);
    auto* duty_opt = mind->add_option("--duty", duty, "Transmit duty fraction (default 1/users for bs, 0.5 for ue)");
    mind->add_option("--beam-offset-db", md.beam_offset_db, "Beam gain reduction toward the user (dB)");
    auto* r_opt = mind->add_option("--reflection", reflection, "Skin reflection coefficient R");
    mind->add_option("--dielectrics", md.dielectrics, "Dielectric CSV; derives R and depth at the carrier");

    // profiles
    ProfilesCommand pc;
    auto* prof = app.add_subcommand("profiles", "List built-in system profiles");
    prof->add_flag("--json", pc.json, "Emit JSON");

    // depth-profile
    DepthProfileCommand dp;
    double eps_r = 0.0, sigma = 0.0, max_depth = 0.0;
    auto* depth = app.add_subcommand("depth-profile", "SAR versus depth below the skin surface");
    depth->add_option("--frequency", dp.frequency_hz, "Carrier frequency (Hz)")->required()->check(CLI::PositiveNumber);
    depth->add_option("--dielectrics", dp.dielectrics, "Dielectric CSV (frequency_hz,eps_r,sigma_s_per_m)");
    auto* eps_opt = depth->add_option("--eps-r", eps_r, "Relative permittivity");
    auto* sigma_opt = depth->add_option("--sigma", sigma, "Conductivity (S/m)");
    depth->add_option("--pd", dp.incident_pd, "Incident power density (W/m^2)");
    auto* max_opt = depth->add_option("--max-depth", max_depth, "Deepest point (m); default 5 depths");
    depth->add_option("--points", dp.points, "Number of depth samples")->check(CLI::PositiveNumber);
    depth->add_option("--out", dp.out, "CSV path (default stdout)");
    eps_opt->needs(sigma_opt);
    sigma_opt->needs(eps_opt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!args.empty() && !args.front().starts_with('-') && app.get_subcommand_no_throw(args.front()) == nullptr) {
        throw UsageError("unknown command '" + args.front() + "'");
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto* sub : app.get_subcommands()) {
            if (sub->parsed()) msg = sub->get_name() + ": " + msg;
        }
        throw UsageError(msg);
    }

    if (sweep->parsed()) {
        if (!config_path.empty()) {
            const std::string out_dir = run.output_dir;
            try {
                run = load_run_config(config_path);
            } catch (const std::exception& e) {
                throw UsageError(std::string("--config: ") + e.what());
            }
            if (sweep->count("--out") > 0) run.output_dir = out_dir;
        }
        if (sweep->count("--direction") > 0 || config_path.empty()) run.direction = parse_direction(direction);
        if (!profiles.empty()) run.profiles = profiles;
        if (!trials.empty()) run.overrides["trials"] = trials;
        if (!seed.empty()) run.overrides["seed"] = seed;
        if (sweep->count("--threads") > 0) run.threads = threads;
        if (!dielectrics.empty()) run.dielectrics = dielectrics;
        if (no_plots) run.emit_plots = false;
        for (const auto& s : sets) {
            const auto [k, v] = split_assignment(s);
            run.overrides[k] = v;
        }
        try {
            check_override_keys(run.overrides);
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return SweepCommand{run};
    }
    if (mind->parsed()) {
        md.station = parse_station(station);
        if (duty_opt->count() > 0) md.duty = duty;
        if (r_opt->count() > 0) md.reflection = reflection;
        return md;
    }
    if (prof->parsed()) {
        return pc;
    }
    if (eps_opt->count() > 0) dp.eps_r = eps_r;
    if (sigma_opt->count() > 0) dp.sigma = sigma;
    if (max_opt->count() > 0) dp.max_depth_m = max_depth;
    return dp;
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
    return std::visit(
        [&](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SweepCommand>) {
                return run_sweep(c, out);
            } else if constexpr (std::is_same_v<T, MinDistanceCommand>) {
                return run_min_distance(c, out, err);
            } else if constexpr (std::is_same_v<T, ProfilesCommand>) {
                return run_profiles(c, out);
            } else {
                return run_depth_profile(c, out);
            }
        },
        cmd);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Command cmd;
    try {
        cmd = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        return execute(cmd, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

}  // namespace emf::cli

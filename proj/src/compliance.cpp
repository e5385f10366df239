#include "emf/compliance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "emf/errors.hpp"
#include "emf/radio.hpp"
#include "emf/units.hpp"

namespace emf {

namespace {

std::vector<RegulatoryLimit> build_registry() {
    std::vector<RegulatoryLimit> reg{
        {.id = "icnirp-pd",
         .authority = Authority::ICNIRP,
         .metric = Metric::PD,
         .value = 10.0,
         .averaging_basis = "whole-body reference level",
         .min_frequency_hz = 2e9,
         .max_frequency_hz = 300e9},
        {.id = "icnirp-sar",
         .authority = Authority::ICNIRP,
         .metric = Metric::SAR,
         .value = 2.0,
         .averaging_basis = "10 g tissue",
         .min_frequency_hz = 100e3,
         .max_frequency_hz = 10e9},
        {.id = "fcc-sar",
         .authority = Authority::FCC,
         .metric = Metric::SAR,
         .value = 1.6,
         .averaging_basis = "1 g tissue",
         .min_frequency_hz = 100e3,
         .max_frequency_hz = 6e9,
         .sourced_outside_paper = true},
    };
    for (const auto& l : reg) {
        if (!(l.value > 0.0) || !(l.min_frequency_hz < l.max_frequency_hz)) {
            throw std::logic_error("invalid regulatory limit entry '" + l.id + "'");
        }
    }
    return reg;
}

const CampaignSpec* find_direction(std::span<const CampaignSpec> scenarios, Direction d) {
    for (const auto& c : scenarios) {
        if (c.sweep.direction == d) return &c;
    }
    return nullptr;
}

std::size_t nearest_mark(const CampaignResult& r, double distance) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.records.size(); ++i) {
        if (std::abs(r.records[i].distance_m - distance) < std::abs(r.records[best].distance_m - distance)) best = i;
    }
    return best;
}

double metric_value(const DistanceRecord& rec, Metric m) { return m == Metric::PD ? rec.mean_pd : rec.mean_sar; }

}  // namespace

std::string_view to_string(Authority a) { return a == Authority::ICNIRP ? "ICNIRP" : "FCC"; }

std::string_view to_string(Metric m) { return m == Metric::PD ? "PD" : "SAR"; }

std::string_view metric_unit(Metric m) { return m == Metric::PD ? "W/m^2" : "W/kg"; }

bool RegulatoryLimit::applies_at(double frequency_hz) const {
    return frequency_hz >= min_frequency_hz && frequency_hz <= max_frequency_hz;
}

const std::vector<RegulatoryLimit>& limit_registry() {
    static const std::vector<RegulatoryLimit> registry = build_registry();
    return registry;
}

const RegulatoryLimit& find_limit(std::string_view id) {
    for (const auto& l : limit_registry()) {
        if (l.id == id) return l;
    }
    throw std::invalid_argument("unknown regulatory limit: '" + std::string(id) + "'");
}

RegulatoryLimit limit_at_frequency(const RegulatoryLimit& limit, double frequency_hz) {
    RegulatoryLimit out = limit;
    out.extrapolated = !limit.applies_at(frequency_hz);
    return out;
}

ComplianceVerdict check(const Measurement& m, const RegulatoryLimit& limit) {
    if (m.metric != limit.metric) {
        throw MetricMismatchError("cannot compare " + std::string(to_string(m.metric)) + " against " + limit.id);
    }
    ComplianceVerdict v;
    v.limit = limit;
    v.extrapolated = limit.extrapolated;
    v.pass = m.value <= limit.value;
    v.margin_db = m.value > 0.0 ? 10.0 * std::log10(limit.value / m.value) : std::numeric_limits<double>::infinity();
    return v;
}

ComplianceVerdict check(const ExposureSample& sample, const RegulatoryLimit& limit) {
    const double value = limit.metric == Metric::PD ? sample.pd_w_m2 : sample.sar_w_kg;
    return check(Measurement{limit.metric, value}, limit);
}

std::string_view to_string(StationKind s) { return s == StationKind::BS ? "bs" : "ue"; }

StationKind parse_station(std::string_view text) {
    if (text == "bs") return StationKind::BS;
    if (text == "ue") return StationKind::UE;
    throw std::invalid_argument("unknown station: '" + std::string(text) + "'");
}

double free_space_exposure(double eirp_w, double distance_m, Metric metric, const TissueModel& tissue, double duty) {
    const double pd = duty * eirp_w / (4.0 * constants::pi * distance_m * distance_m);
    return metric == Metric::PD ? pd : sar_from_pd(pd, tissue);
}

SafeDistance min_safe_distance(double eirp_w, const RegulatoryLimit& limit, const TissueModel& tissue, double duty) {
    if (!(eirp_w >= 0.0) || !(duty >= 0.0)) {
        throw DomainError("min_safe_distance: EIRP and duty must be non-negative");
    }
    auto exposure = [&](double d) { return free_space_exposure(eirp_w, d, limit.metric, tissue, duty); };

    double lo = kSolverLowerBound;
    double hi = kSolverUpperBound;
    if (exposure(lo) <= limit.value) {
        return {.distance_m = 0.0, .always_compliant = true, .iterations = 0};
    }
    if (exposure(hi) > limit.value) {
        throw BracketExhaustedError("exposure exceeds " + limit.id + " over the whole search bracket [1e-4, 1e4] m");
    }
    int iterations = 0;
    while ((hi - lo > 1e-6 || hi - lo > 1e-10 * hi) && iterations < 400) {
        const double mid = std::sqrt(lo * hi);
        if (exposure(mid) > limit.value) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iterations;
    }
    return {.distance_m = 0.5 * (lo + hi), .always_compliant = false, .iterations = iterations};
}

SafeDistance min_safe_distance(const SystemProfile& profile, StationKind station, const RegulatoryLimit& limit,
                               const TissueModel& tissue, double duty, double beam_offset_db) {
    const StationConfig& s = station == StationKind::BS ? profile.bs : profile.ue;
    const double eirp_w = dbm_to_watts(eirp_dbm(s) - beam_offset_db);
    return min_safe_distance(eirp_w, limit, tissue_at_frequency(tissue, profile.carrier_frequency_hz), duty);
}

Assumptions assumptions_for(const CampaignSpec& c) {
    const TissueModel t = tissue_at_frequency(c.sweep.tissue, c.sweep.profile.carrier_frequency_hz);
    Assumptions a;
    a.pathloss = c.sweep.direction == Direction::Uplink ? std::string(to_string(PathlossKind::FreeSpace))
                                                        : std::string(to_string(c.sweep.pathloss.kind));
    a.reflection_coefficient = t.reflection_coefficient;
    a.penetration_depth_m = t.penetration_depth_m;
    a.mass_density_kg_m3 = t.mass_density_kg_m3;
    a.duty = effective_duty(c);
    a.jitter_scale = c.jitter_scale;
    a.aggregation = std::string(to_string(c.aggregation));
    a.beam_offset_db = c.beam_offset_db;
    a.users_per_sector = c.users_per_sector;
    a.trials = c.trials;
    a.seed = c.seed;
    return a;
}

ExposureReport exposure_report(const SystemProfile& profile, std::span<const CampaignSpec> scenarios) {
    ExposureReport report;
    report.profile_name = profile.name;
    report.carrier_frequency_hz = profile.carrier_frequency_hz;
    const double f = profile.carrier_frequency_hz;

    for (const auto& spec : scenarios) {
        ScenarioReport sr;
        sr.direction = spec.sweep.direction;
        sr.assumptions = assumptions_for(spec);
        sr.result = run_campaign(spec);
        for (const auto& rec : sr.result.records) {
            if (rec.near_field_fraction > 0.0) sr.assumptions.any_near_field = true;
        }
        if (sr.result.records.empty()) {
            report.scenarios.push_back(std::move(sr));
            continue;
        }
        std::vector<std::pair<std::string, std::size_t>> checkpoints;
        for (const auto& base : limit_registry()) {
            const RegulatoryLimit limit = limit_at_frequency(base, f);
            checkpoints.clear();
            std::size_t peak = 0;
            for (std::size_t i = 1; i < sr.result.records.size(); ++i) {
                if (metric_value(sr.result.records[i], limit.metric) > metric_value(sr.result.records[peak], limit.metric)) {
                    peak = i;
                }
            }
            checkpoints.emplace_back("peak", peak);
            if (sr.direction == Direction::Downlink) {
                checkpoints.emplace_back("cell-edge", nearest_mark(sr.result, profile.inter_site_distance_m / 2.0));
            } else {
                checkpoints.emplace_back("farthest", sr.result.records.size() - 1);
            }
            for (const auto& [label, idx] : checkpoints) {
                const auto& rec = sr.result.records[idx];
                const double value = metric_value(rec, limit.metric);
                sr.verdicts.push_back({rec.distance_m, label, value, check(Measurement{limit.metric, value}, limit)});
            }
        }
        report.scenarios.push_back(std::move(sr));
    }

    const TissueModel tissue = scenarios.empty() ? TissueModel{} : scenarios.front().sweep.tissue;
    for (StationKind station : {StationKind::BS, StationKind::UE}) {
        const Direction dir = station == StationKind::BS ? Direction::Downlink : Direction::Uplink;
        const CampaignSpec* match = find_direction(scenarios, dir);
        CampaignSpec defaults = default_campaign(dir, profile);
        const CampaignSpec& ref = match ? *match : defaults;
        for (const auto& base : limit_registry()) {
            SafeDistanceEntry e;
            e.station = station;
            e.limit_id = base.id;
            e.duty = effective_duty(ref);
            try {
                e.distance = min_safe_distance(profile, station, base, tissue, e.duty, ref.beam_offset_db);
                e.solved = true;
            } catch (const BracketExhaustedError&) {
                e.solved = false;
            }
            report.safe_distances.push_back(e);
        }
    }
    return report;
}

std::string render_text(const ExposureReport& report) {
    std::ostringstream out;
    char buf[256];
    out << "Exposure report: " << report.profile_name << "\n";
    std::snprintf(buf, sizeof buf, "Carrier frequency: %.6g GHz\n", report.carrier_frequency_hz / 1e9);
    out << buf;
    for (const auto& sr : report.scenarios) {
        const auto& a = sr.assumptions;
        out << "\n[" << to_string(sr.direction) << "]\n";
        std::snprintf(buf, sizeof buf,
                      "  pathloss=%s R=%.4g depth=%.4g m density=%.6g kg/m^3 duty=%.6g jitter=%.4g\n",
                      a.pathloss.c_str(), a.reflection_coefficient, a.penetration_depth_m, a.mass_density_kg_m3,
                      a.duty, a.jitter_scale);
        out << buf;
        std::snprintf(buf, sizeof buf, "  aggregation=%s beam_offset=%.4g dB users=%d trials=%d seed=%llu near_field=%s\n",
                      a.aggregation.c_str(), a.beam_offset_db, a.users_per_sector, a.trials,
                      static_cast<unsigned long long>(a.seed), a.any_near_field ? "yes" : "no");
        out << buf;
        for (const auto& cv : sr.verdicts) {
            const auto& v = cv.verdict;
            std::snprintf(buf, sizeof buf, "  %-10s %-9s d=%-10.6g %s=%-12.6g limit=%g %s  %s  margin=%+.3f dB%s\n",
                          v.limit.id.c_str(), cv.label.c_str(), cv.distance_m, std::string(to_string(v.limit.metric)).c_str(),
                          cv.value, v.limit.value, std::string(metric_unit(v.limit.metric)).c_str(),
                          v.pass ? "PASS" : "FAIL", v.margin_db, v.extrapolated ? "  (extrapolated)" : "");
            out << buf;
        }
    }
    out << "\nMinimum safe distances (free space)\n";
    for (const auto& e : report.safe_distances) {
        if (!e.solved) {
            std::snprintf(buf, sizeof buf, "  %s %-10s duty=%-8.4g above limit across [1e-4, 1e4] m\n",
                          std::string(to_string(e.station)).c_str(), e.limit_id.c_str(), e.duty);
        } else if (e.distance.always_compliant) {
            std::snprintf(buf, sizeof buf, "  %s %-10s duty=%-8.4g always compliant\n",
                          std::string(to_string(e.station)).c_str(), e.limit_id.c_str(), e.duty);
        } else {
            std::snprintf(buf, sizeof buf, "  %s %-10s duty=%-8.4g d*=%.6g m\n", std::string(to_string(e.station)).c_str(),
                          e.limit_id.c_str(), e.duty, e.distance.distance_m);
        }
        out << buf;
    }
    return out.str();
}

}  // namespace emf

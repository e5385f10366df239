#include "emf/montecarlo.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "emf/errors.hpp"
#include "emf/units.hpp"

namespace emf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(seed ^ splitmix64(trial));
}

// Uniform on [-1, 1) from the top 53 bits; avoids implementation-defined distributions.
double symmetric_uniform(std::mt19937_64& engine) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

// Samples for one campaign stored mark-major: value(mark, trial) = pd[mark * trials + trial].
struct SampleMatrix {
    std::size_t marks;
    std::size_t trials;
    std::vector<double> pd;
    std::vector<unsigned char> near_field;

    SampleMatrix(std::size_t m, std::size_t t) : marks(m), trials(t), pd(m * t, 0.0), near_field(m * t, 0) {}
};

// Evaluates trial -> (per-mark samples) for every trial, split across threads.
template <typename TrialFn>
void run_trials(const CampaignSpec& c, SampleMatrix& samples, TrialFn&& fn) {
    const std::size_t trials = samples.trials;
    std::size_t workers = c.threads > 0 ? static_cast<std::size_t>(c.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, trials);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            std::mt19937_64 engine(trial_seed(c.seed, t));
            fn(t, engine);
        }
    };
    if (workers <= 1) {
        work(0, trials);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(trials, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(work, begin, end);
    }
}

struct Summary {
    double mean;
    double std;
    double p95;
};

Summary summarize(std::vector<double>& values) {
    const std::size_t n = values.size();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        return {*lo, 0.0, *lo};
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

    // Linear interpolation between order statistics at rank 0.95 (n - 1).
    const double rank = 0.95 * static_cast<double>(n - 1);
    const auto k = static_cast<std::size_t>(std::floor(rank));
    const double frac = rank - static_cast<double>(k);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    const double below = values[k];
    double above = below;
    if (k + 1 < n) {
        above = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(k + 1), values.end());
    }
    return {mean, sd, below + frac * (above - below)};
}

CampaignResult aggregate(const CampaignSpec& c, const SampleMatrix& samples, const TissueModel& tissue) {
    CampaignResult out;
    out.direction = c.sweep.direction;
    out.profile_name = c.sweep.profile.name;
    out.duty = effective_duty(c);
    out.records.reserve(samples.marks);

    std::vector<double> pd(samples.trials);
    std::vector<double> sar(samples.trials);
    for (std::size_t m = 0; m < samples.marks; ++m) {
        std::size_t near = 0;
        for (std::size_t t = 0; t < samples.trials; ++t) {
            pd[t] = samples.pd[m * samples.trials + t];
            sar[t] = sar_from_pd(pd[t], tissue);
            near += samples.near_field[m * samples.trials + t];
        }
        DistanceRecord rec;
        rec.distance_m = c.sweep.mark(m);
        const Summary spd = summarize(pd);
        const Summary ssar = summarize(sar);
        rec.mean_pd = spd.mean;
        rec.std_pd = spd.std;
        rec.p95_pd = spd.p95;
        rec.mean_sar = ssar.mean;
        rec.std_sar = ssar.std;
        rec.p95_sar = ssar.p95;
        rec.near_field_fraction = static_cast<double>(near) / static_cast<double>(samples.trials);
        out.records.push_back(rec);
    }
    return out;
}

double effective_eirp_w(const CampaignSpec& c) {
    return dbm_to_watts(eirp_dbm(transmitter(c)) - c.beam_offset_db);
}

// Applies the TDD duty; the default downlink split divides so that the
// time-averaged value is exactly beam-on / users_per_sector.
double time_average(const CampaignSpec& c, double beam_on) {
    if (!c.duty && c.sweep.direction == Direction::Downlink) {
        return beam_on / static_cast<double>(c.users_per_sector);
    }
    return beam_on * effective_duty(c);
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::Downlink ? "downlink" : "uplink"; }

Direction parse_direction(std::string_view text) {
    if (text == "downlink" || text == "dl") return Direction::Downlink;
    if (text == "uplink" || text == "ul") return Direction::Uplink;
    throw std::invalid_argument("unknown direction: '" + std::string(text) + "'");
}

std::string_view to_string(Aggregation a) { return a == Aggregation::ServingOnly ? "serving-only" : "all-stations"; }

Aggregation parse_aggregation(std::string_view text) {
    if (text == "serving-only" || text == "serving") return Aggregation::ServingOnly;
    if (text == "all-stations" || text == "sum") return Aggregation::AllStations;
    throw std::invalid_argument("unknown aggregation: '" + std::string(text) + "'");
}

std::size_t SweepSpec::mark_count() const {
    if (!(step_m > 0.0) || stop_m < start_m) return 0;
    return static_cast<std::size_t>(std::floor((stop_m - start_m) / step_m + 1e-9)) + 1;
}

double SweepSpec::mark(std::size_t i) const { return start_m + static_cast<double>(i) * step_m; }

SweepSpec default_sweep(Direction direction, const SystemProfile& profile) {
    SweepSpec s;
    s.direction = direction;
    s.profile = profile;
    if (direction == Direction::Downlink) {
        s.start_m = 0.0;
        s.stop_m = 1000.0;
        s.step_m = 5.0;
    } else {
        s.start_m = 0.01;
        s.stop_m = 1.0;
        s.step_m = 0.01;
    }
    return s;
}

CampaignSpec default_campaign(Direction direction, const SystemProfile& profile) {
    CampaignSpec c;
    c.sweep = default_sweep(direction, profile);
    c.users_per_sector = profile.users_per_sector;
    return c;
}

double effective_duty(const CampaignSpec& c) {
    if (c.duty) return *c.duty;
    if (c.sweep.direction == Direction::Downlink) return 1.0 / static_cast<double>(c.users_per_sector);
    return 0.5;
}

const StationConfig& transmitter(const CampaignSpec& c) {
    return c.sweep.direction == Direction::Downlink ? c.sweep.profile.bs : c.sweep.profile.ue;
}

void validate_campaign(const CampaignSpec& c) {
    const SweepSpec& s = c.sweep;
    if (s.direction == Direction::Uplink && s.start_m == 0.0) {
        throw DomainError("uplink sweep cannot start at 0 m (contact singularity)");
    }
    std::vector<std::string> problems;
    if (!(s.start_m >= 0.0)) problems.emplace_back("sweep.start_m must be >= 0");
    if (!(s.stop_m > s.start_m)) problems.emplace_back("sweep.stop_m must exceed sweep.start_m");
    if (!(s.step_m > 0.0)) problems.emplace_back("sweep.step_m must be > 0");
    if (s.direction == Direction::Downlink && !(s.bs_line_extent_m >= 0.0)) {
        problems.emplace_back("sweep.bs_line_extent_m must be >= 0");
    }
    if (c.trials < 1) problems.emplace_back("trials must be >= 1");
    if (c.users_per_sector < 1) problems.emplace_back("users_per_sector must be >= 1");
    if (!(c.jitter_scale >= 0.0)) problems.emplace_back("jitter_scale must be >= 0");
    if (c.duty && !(*c.duty > 0.0 && *c.duty <= 1.0)) problems.emplace_back("duty must lie in (0, 1]");
    if (!std::isfinite(c.beam_offset_db)) problems.emplace_back("beam_offset_db must be finite");
    for (const auto& v : validate_profile(s.profile)) problems.push_back("profile." + v.field + " " + v.rule);
    for (const auto& v : validate_tissue(s.tissue)) problems.push_back("tissue." + v);
    if (!problems.empty()) {
        std::string msg = "invalid campaign:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ValidationError(msg);
    }
}

std::vector<double> base_station_positions(double inter_site_distance_m, double line_extent_m) {
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor(line_extent_m / inter_site_distance_m + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(static_cast<double>(k) * inter_site_distance_m);
    return out;
}

CampaignResult downlink_sweep(const CampaignSpec& c) {
    if (c.sweep.direction != Direction::Downlink) {
        throw ValidationError("downlink_sweep called with an uplink spec");
    }
    validate_campaign(c);
    const SweepSpec& s = c.sweep;
    const SystemProfile& p = s.profile;
    const double f = p.carrier_frequency_hz;
    const double eirp_w = effective_eirp_w(c);
    const double far_field = fraunhofer_distance(p.bs, f);
    const double lateral_half_width = c.jitter_scale * p.inter_site_distance_m / 4.0;
    const std::vector<double> stations = base_station_positions(p.inter_site_distance_m, s.bs_line_extent_m);
    const TissueModel tissue = tissue_at_frequency(s.tissue, f);

    SampleMatrix samples(s.mark_count(), static_cast<std::size_t>(c.trials));
    run_trials(c, samples, [&](std::size_t t, std::mt19937_64& engine) {
        for (std::size_t m = 0; m < samples.marks; ++m) {
            const double x = s.mark(m);
            const double lateral = lateral_half_width * symmetric_uniform(engine);

            std::size_t serving = 0;
            for (std::size_t k = 1; k < stations.size(); ++k) {
                if (std::abs(x - stations[k]) < std::abs(x - stations[serving])) serving = k;
            }
            auto beam_on_at = [&](double station_x) {
                const LinkGeometry g{std::hypot(x - station_x, lateral), p.bs.antenna_height_m, p.ue.antenna_height_m};
                return power_density_w(eirp_w, g, s.pathloss, f);
            };
            double beam_on = 0.0;
            if (c.aggregation == Aggregation::ServingOnly) {
                beam_on = beam_on_at(stations[serving]);
            } else {
                for (double sx : stations) beam_on += beam_on_at(sx);
            }
            const LinkGeometry serving_geom{std::hypot(x - stations[serving], lateral), p.bs.antenna_height_m,
                                            p.ue.antenna_height_m};
            const std::size_t idx = m * samples.trials + t;
            samples.pd[idx] = time_average(c, beam_on);
            samples.near_field[idx] = serving_geom.distance_3d() < far_field ? 1 : 0;
        }
    });
    return aggregate(c, samples, tissue);
}

CampaignResult uplink_sweep(const CampaignSpec& c) {
    if (c.sweep.direction != Direction::Uplink) {
        throw ValidationError("uplink_sweep called with a downlink spec");
    }
    validate_campaign(c);
    const SweepSpec& s = c.sweep;
    const SystemProfile& p = s.profile;
    const double f = p.carrier_frequency_hz;
    const double eirp_w = effective_eirp_w(c);
    const double far_field = fraunhofer_distance(p.ue, f);
    const TissueModel tissue = tissue_at_frequency(s.tissue, f);

    SampleMatrix samples(s.mark_count(), static_cast<std::size_t>(c.trials));
    run_trials(c, samples, [&](std::size_t t, std::mt19937_64& engine) {
        for (std::size_t m = 0; m < samples.marks; ++m) {
            const double nominal = s.mark(m);
            const double half_width = std::min(c.jitter_scale * s.step_m / 2.0, nominal / 2.0);
            const double d = nominal + half_width * symmetric_uniform(engine);
            // Head and handset face each other; separation is purely radial.
            const LinkGeometry g{d, 1.0, 1.0};
            const std::size_t idx = m * samples.trials + t;
            samples.pd[idx] = time_average(c, power_density_w(eirp_w, g, PathlossModel{PathlossKind::FreeSpace}, f));
            samples.near_field[idx] = d < far_field ? 1 : 0;
        }
    });
    return aggregate(c, samples, tissue);
}

CampaignResult run_campaign(const CampaignSpec& c) {
    return c.sweep.direction == Direction::Downlink ? downlink_sweep(c) : uplink_sweep(c);
}

std::optional<double> crossing_distance(const CampaignResult& r, Metric metric, double threshold) {
    auto value = [&](const DistanceRecord& rec) { return metric == Metric::PD ? rec.mean_pd : rec.mean_sar; };
    for (std::size_t i = 0; i + 1 < r.records.size(); ++i) {
        const double a = value(r.records[i]);
        const double b = value(r.records[i + 1]);
        if (a >= threshold && b < threshold) {
            const double da = r.records[i].distance_m;
            const double db = r.records[i + 1].distance_m;
            if (a == threshold) return da;
            if (da > 0.0 && a > 0.0 && b > 0.0) {
                const double w = std::log(a / threshold) / std::log(a / b);
                return std::exp(std::log(da) + w * (std::log(db) - std::log(da)));
            }
            return da + (a - threshold) / (a - b) * (db - da);
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> local_maxima(const CampaignResult& r, Metric metric) {
    auto value = [&](std::size_t i) { return metric == Metric::PD ? r.records[i].mean_pd : r.records[i].mean_sar; };
    std::vector<std::size_t> out;
    const std::size_t n = r.records.size();
    if (n == 1) {
        out.push_back(0);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool above_left = i == 0 || value(i) > value(i - 1);
        const bool above_right = i + 1 == n || value(i) > value(i + 1);
        if (above_left && above_right) out.push_back(i);
    }
    return out;
}

void write_campaign_csv(const CampaignResult& r, std::ostream& out) {
    out << kCampaignCsvHeader << '\n';
    char buf[512];
    for (const auto& rec : r.records) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", rec.distance_m, rec.mean_pd,
                      rec.std_pd, rec.p95_pd, rec.mean_sar, rec.std_sar, rec.p95_sar, rec.near_field_fraction);
        out << buf;
    }
}

}  // namespace emf

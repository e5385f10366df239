#include "emf/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "emf/errors.hpp"

namespace emf {

namespace {

const char* const kPalette[] = {"#000000", "#1f4fd1", "#d12f1f", "#2a9d3a", "#9b39c9", "#d18f1f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

double metric_of(const DistanceRecord& r, Metric m) { return m == Metric::PD ? r.mean_pd : r.mean_sar; }

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    return out;
}

}  // namespace

void emit_csv(const CampaignResult& result, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_campaign_csv(result, out);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::string render_svg(std::span<const PlotSeries> series, std::span<const RegulatoryLimit> limits,
                       const PlotOptions& options) {
    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    for (const auto& s : series) {
        for (const auto& r : s.result.records) {
            x_min = std::min(x_min, r.distance_m);
            x_max = std::max(x_max, r.distance_m);
            const double v = metric_of(r, options.metric);
            if (v > 0.0) {
                y_min = std::min(y_min, v);
                y_max = std::max(y_max, v);
            }
        }
    }
    if (!std::isfinite(x_min)) {
        throw std::invalid_argument("render_svg: no data points to plot");
    }
    std::vector<const RegulatoryLimit*> guides;
    for (const auto& l : limits) {
        if (l.metric == options.metric) {
            guides.push_back(&l);
            y_min = std::min(y_min, l.value);
            y_max = std::max(y_max, l.value);
        }
    }
    if (!std::isfinite(y_min)) {
        y_min = 1e-3;
        y_max = 1.0;
    }
    // Whole decades on the log axis.
    double log_lo = std::floor(std::log10(y_min));
    double log_hi = std::ceil(std::log10(y_max));
    if (log_hi <= log_lo) log_hi = log_lo + 1.0;
    if (x_max <= x_min) x_max = x_min + 1.0;

    const double left = 80.0, right = 170.0, top = 40.0, bottom = 60.0;
    const double w = options.width, h = options.height;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return top + (log_hi - std::log10(y)) / (log_hi - log_lo) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << fmt("%.1f", left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << xml_escape(options.title) << "</text>\n";
    }
    svg << "<g class=\"axes\" stroke=\"#444\" fill=\"none\">\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << fmt("%.1f", pw) << "\" height=\""
        << fmt("%.1f", ph) << "\"/>\n";
    svg << "</g>\n";

    svg << "<g class=\"ticks\" font-size=\"11\" fill=\"#222\">\n";
    for (double e = log_lo; e <= log_hi; e += 1.0) {
        const double y = py(std::pow(10.0, e));
        svg << "<line x1=\"" << left << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\"" << fmt("%.2f", left + pw)
            << "\" y2=\"" << fmt("%.2f", y) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt("%.2f", y + 4) << "\" text-anchor=\"end\">1e"
            << static_cast<int>(e) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        svg << "<text x=\"" << fmt("%.2f", px(xv)) << "\" y=\"" << fmt("%.2f", top + ph + 18)
            << "\" text-anchor=\"middle\">" << fmt("%.4g", xv) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << fmt("%.1f", left + pw / 2) << "\" y=\"" << fmt("%.1f", h - 18)
        << "\" text-anchor=\"middle\" font-size=\"13\">Distance (m)</text>\n";
    const std::string y_label = options.metric == Metric::PD ? "Power density (W/m^2)" : "SAR (W/kg)";
    svg << "<text x=\"20\" y=\"" << fmt("%.1f", top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << fmt("%.1f", top + ph / 2) << ")\">" << y_label << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        std::ostringstream pts;
        bool first = true;
        for (const auto& r : series[i].result.records) {
            const double v = metric_of(r, options.metric);
            if (!(v > 0.0)) continue;
            if (!first) pts << ' ';
            pts << fmt("%.2f", px(r.distance_m)) << ',' << fmt("%.2f", py(v));
            first = false;
        }
        std::string points = pts.str();
        // A single point still renders as a zero-length segment.
        if (!points.empty() && points.find(' ') == std::string::npos) points += ' ' + points;
        svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
            << points << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(i + 1);
        svg << "<line x1=\"" << fmt("%.1f", left + pw + 12) << "\" y1=\"" << fmt("%.1f", ly) << "\" x2=\""
            << fmt("%.1f", left + pw + 32) << "\" y2=\"" << fmt("%.1f", ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt("%.1f", left + pw + 36) << "\" y=\"" << fmt("%.1f", ly + 4)
            << "\" font-size=\"12\">" << xml_escape(series[i].label) << "</text>\n";
    }

    for (const auto* l : guides) {
        const double y = py(l->value);
        svg << "<line class=\"guideline\" x1=\"" << left << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
            << fmt("%.2f", left + pw) << "\" y2=\"" << fmt("%.2f", y)
            << "\" stroke=\"#c00\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<text x=\"" << fmt("%.1f", left + pw - 4) << "\" y=\"" << fmt("%.2f", y - 4)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#c00\">"
            << xml_escape(std::string(to_string(l->authority)) + " " + fmt("%g", l->value) + " " +
                          std::string(metric_unit(l->metric)))
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(std::span<const PlotSeries> series, std::span<const RegulatoryLimit> limits,
               const PlotOptions& options, const std::filesystem::path& path) {
    bool any = false;
    for (const auto& s : series) any = any || !s.result.records.empty();
    if (!any) {
        throw std::invalid_argument("emit_plot: empty result");
    }
    write_text_file(render_svg(series, limits, options), path);
}

std::string render_assumptions(const std::string& profile_name, Direction direction, const Assumptions& a) {
    std::ostringstream out;
    out << "profile = " << profile_name << '\n';
    out << "direction = " << to_string(direction) << '\n';
    out << "pathloss = " << a.pathloss << '\n';
    out << "reflection_coefficient = " << fmt("%.9g", a.reflection_coefficient) << '\n';
    out << "penetration_depth_m = " << fmt("%.9g", a.penetration_depth_m) << '\n';
    out << "mass_density_kg_m3 = " << fmt("%.9g", a.mass_density_kg_m3) << '\n';
    out << "duty = " << fmt("%.9g", a.duty) << '\n';
    out << "jitter_scale = " << fmt("%.9g", a.jitter_scale) << '\n';
    out << "aggregation = " << a.aggregation << '\n';
    out << "beam_offset_db = " << fmt("%.9g", a.beam_offset_db) << '\n';
    out << "users_per_sector = " << a.users_per_sector << '\n';
    out << "trials = " << a.trials << '\n';
    out << "seed = " << a.seed << '\n';
    out << "near_field_marks = " << (a.any_near_field ? "yes" : "no") << '\n';
    return out.str();
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << text;
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

}  // namespace emf

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emf/compliance.hpp"
#include "emf/montecarlo.hpp"

namespace emf {

/// Writes the campaign CSV; throws IoError naming the path when it cannot be written.
void emit_csv(const CampaignResult& result, const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    CampaignResult result;
};

struct PlotOptions {
    Metric metric = Metric::PD;
    std::string title;
    int width = 800;
    int height = 500;
};

/// Standalone SVG: distance on x, log-scaled exposure on y, one polyline per
/// series and a dashed, labelled guideline per limit whose metric matches.
/// Throws std::invalid_argument when there is no data to plot.
std::string render_svg(std::span<const PlotSeries> series, std::span<const RegulatoryLimit> limits,
                       const PlotOptions& options);

void emit_plot(std::span<const PlotSeries> series, std::span<const RegulatoryLimit> limits,
               const PlotOptions& options, const std::filesystem::path& path);

/// Human-readable key = value listing written next to every output set.
std::string render_assumptions(const std::string& profile_name, Direction direction, const Assumptions& a);

void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace emf

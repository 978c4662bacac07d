#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "totient/metrics.hpp"
#include "totient/rational.hpp"

namespace totient {

// Self-contained SVG figures. Coordinates are normalized to the unit box in
// exact arithmetic before anything is rendered, so 512-bit values plot the
// same way 8-bit ones do. Output bytes depend only on the inputs.

inline constexpr std::size_t kMaxPlotPoints = 5000;

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Down-sampled (x, y) pairs as exact strings ("123" or "-7/2").
struct PlotSeries {
    std::vector<std::pair<std::string, std::string>> points;
    PlotLabels labels;
};

/// Indices 0, k, 2k, ... with k = ceil(size / max_points).
std::vector<std::size_t> downsample_indices(std::size_t size, std::size_t max_points = kMaxPlotPoints);

std::string exact_string(const Rational& v);

PlotSeries scatter_series(std::span<const Rational> truth, std::span<const Rational> predicted,
                          const PlotLabels& labels);

/// Predicted-vs-true scatter with the y = x reference line.
std::string render_scatter_svg(std::span<const Rational> truth, std::span<const Rational> predicted,
                               const PlotLabels& labels);
void scatter_svg(std::span<const Rational> truth, std::span<const Rational> predicted,
                 const std::filesystem::path& destination, const PlotLabels& labels);
/// "true,predicted" rows for exactly the plotted points.
std::string scatter_csv(std::span<const Rational> truth, std::span<const Rational> predicted);

std::string render_histogram_svg(const Histogram& hist, const PlotLabels& labels);
void histogram_svg(const Histogram& hist, const std::filesystem::path& destination, const PlotLabels& labels);
/// "bin_low,bin_high,count" rows.
std::string histogram_csv(const Histogram& hist);

/// Writes `content` to `destination`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& destination, const std::string& content);

}  // namespace totient

#include "totient/plot.hpp"

#include <algorithm>
#include <fstream>

#include "totient/errors.hpp"

namespace totient {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kLeft = 90;
constexpr int kRight = 20;
constexpr int kTop = 40;
constexpr int kBottom = 60;
constexpr int kPlotW = kWidth - kLeft - kRight;
constexpr int kPlotH = kHeight - kTop - kBottom;

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Affine map of [lo, hi] onto [0, 1], rounded to 6 decimals.
struct UnitMap {
    Rational lo, span;

    UnitMap(Rational low, Rational high) : lo(std::move(low)) {
        if (lo == high) {
            lo -= 1;
            high += 1;
        }
        span = high - lo;
    }

    Rational operator()(const Rational& v) const {
        Rational t = (v - lo) / span;
        t.canonicalize();
        const mpz_class scale = 1000000;
        Rational scaled = t * scale;
        return make_rational(round_nearest(scaled), scale);
    }

    Rational at(const Rational& t) const {
        Rational v = lo + t * span;
        v.canonicalize();
        return v;
    }
};

std::string px_x(const Rational& t) { return render_fixed(Rational(kLeft + t * kPlotW), 3); }
std::string px_y(const Rational& t) { return render_fixed(Rational(kTop + (1 - t) * kPlotH), 3); }

std::string svg_open(const PlotLabels& labels) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
         std::to_string(kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
         "\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape_xml(labels.title) + "</text>\n";
    s += "<text x=\"" + std::to_string(kLeft + kPlotW / 2) + "\" y=\"" + std::to_string(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(labels.x_label) +
         "</text>\n";
    s += "<text x=\"16\" y=\"" + std::to_string(kTop + kPlotH / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         std::to_string(kTop + kPlotH / 2) + ")\">" + escape_xml(labels.y_label) + "</text>\n";
    s += "<rect x=\"" + std::to_string(kLeft) + "\" y=\"" + std::to_string(kTop) + "\" width=\"" +
         std::to_string(kPlotW) + "\" height=\"" + std::to_string(kPlotH) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    return s;
}

void x_ticks(std::string& s, const UnitMap& map) {
    for (int i = 0; i <= 4; ++i) {
        const Rational t(i, 4);
        s += "<line class=\"tick\" x1=\"" + px_x(t) + "\" y1=\"" + std::to_string(kTop + kPlotH) + "\" x2=\"" +
             px_x(t) + "\" y2=\"" + std::to_string(kTop + kPlotH + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + px_x(t) + "\" y=\"" + std::to_string(kTop + kPlotH + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">" +
             render_decimal(map.at(t), 6) + "</text>\n";
    }
}

void y_ticks(std::string& s, const UnitMap& map) {
    for (int i = 0; i <= 4; ++i) {
        const Rational t(i, 4);
        s += "<line class=\"tick\" x1=\"" + std::to_string(kLeft - 5) + "\" y1=\"" + px_y(t) + "\" x2=\"" +
             std::to_string(kLeft) + "\" y2=\"" + px_y(t) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + px_y(t) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\">" + render_decimal(map.at(t), 6) +
             "</text>\n";
    }
}

void check_series(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.empty()) throw DomainError("scatter: empty series");
    if (a.size() != b.size()) throw DomainError("scatter: series lengths differ");
}

}  // namespace

std::vector<std::size_t> downsample_indices(std::size_t size, std::size_t max_points) {
    max_points = std::max<std::size_t>(max_points, 1);
    const std::size_t k = std::max<std::size_t>(1, (size + max_points - 1) / max_points);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size; i += k) out.push_back(i);
    return out;
}

std::string exact_string(const Rational& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

PlotSeries scatter_series(std::span<const Rational> truth, std::span<const Rational> predicted,
                          const PlotLabels& labels) {
    check_series(truth, predicted);
    PlotSeries series;
    series.labels = labels;
    for (std::size_t i : downsample_indices(truth.size()))
        series.points.emplace_back(exact_string(truth[i]), exact_string(predicted[i]));
    return series;
}

std::string render_scatter_svg(std::span<const Rational> truth, std::span<const Rational> predicted,
                               const PlotLabels& labels) {
    check_series(truth, predicted);
    const auto idx = downsample_indices(truth.size());
    Rational lo = truth[idx.front()], hi = lo;
    for (std::size_t i : idx) {
        for (const Rational* v : {&truth[i], &predicted[i]}) {
            if (*v < lo) lo = *v;
            if (*v > hi) hi = *v;
        }
    }
    const UnitMap map(lo, hi);

    std::string s = svg_open(labels);
    x_ticks(s, map);
    y_ticks(s, map);
    s += "<g fill=\"blue\" fill-opacity=\"0.6\">\n";
    for (std::size_t i : idx)
        s += "<circle class=\"pt\" cx=\"" + px_x(map(truth[i])) + "\" cy=\"" + px_y(map(predicted[i])) +
             "\" r=\"2\"/>\n";
    s += "</g>\n";
    s += "<line class=\"fit-line\" x1=\"" + px_x(0) + "\" y1=\"" + px_y(0) + "\" x2=\"" + px_x(1) + "\" y2=\"" +
         px_y(1) + "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    s += "<!-- plot-data\n" + scatter_csv(truth, predicted) + "-->\n";
    s += "</svg>\n";
    return s;
}

std::string scatter_csv(std::span<const Rational> truth, std::span<const Rational> predicted) {
    check_series(truth, predicted);
    std::string out = "true,predicted\n";
    for (std::size_t i : downsample_indices(truth.size()))
        out += exact_string(truth[i]) + "," + exact_string(predicted[i]) + "\n";
    return out;
}

void scatter_svg(std::span<const Rational> truth, std::span<const Rational> predicted,
                 const std::filesystem::path& destination, const PlotLabels& labels) {
    write_text_file(destination, render_scatter_svg(truth, predicted, labels));
}

std::string render_histogram_svg(const Histogram& hist, const PlotLabels& labels) {
    if (hist.counts.empty() || hist.edges.size() != hist.counts.size() + 1)
        throw DomainError("histogram_svg: malformed histogram");
    const UnitMap map(hist.edges.front(), hist.edges.back());
    const std::uint64_t peak = std::max<std::uint64_t>(1, *std::max_element(hist.counts.begin(), hist.counts.end()));

    std::string s = svg_open(labels);
    x_ticks(s, map);
    s += "<g fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const Rational x0 = map(hist.edges[i]);
        const Rational x1 = map(hist.edges[i + 1]);
        const Rational h(static_cast<unsigned long>(hist.counts[i]), static_cast<unsigned long>(peak));
        Rational height = h * kPlotH;
        height.canonicalize();
        s += "<rect class=\"bar\" x=\"" + px_x(x0) + "\" y=\"" + px_y(h) + "\" width=\"" +
             render_fixed(Rational((x1 - x0) * kPlotW), 3) + "\" height=\"" + render_fixed(height, 3) +
             "\" data-count=\"" + std::to_string(hist.counts[i]) + "\"/>\n";
    }
    s += "</g>\n";
    if (hist.edges.front() <= 0 && hist.edges.back() >= 0) {
        const Rational zero = map(Rational(0));
        s += "<line class=\"zero\" x1=\"" + px_x(zero) + "\" y1=\"" + px_y(0) + "\" x2=\"" + px_x(zero) +
             "\" y2=\"" + px_y(1) + "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
    }
    s += "<!-- plot-data\n" + histogram_csv(hist) + "-->\n";
    s += "</svg>\n";
    return s;
}

void histogram_svg(const Histogram& hist, const std::filesystem::path& destination, const PlotLabels& labels) {
    write_text_file(destination, render_histogram_svg(hist, labels));
}

std::string histogram_csv(const Histogram& hist) {
    std::string out = "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        out += exact_string(hist.edges[i]) + "," + exact_string(hist.edges[i + 1]) + "," +
               std::to_string(hist.counts[i]) + "\n";
    return out;
}

void write_text_file(const std::filesystem::path& destination, const std::string& content) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + destination.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + destination.string());
}

}  // namespace totient

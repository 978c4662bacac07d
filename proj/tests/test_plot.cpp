#include <doctest.h>

#include <regex>

#include "test_support.hpp"
#include "totient/plot.hpp"

using namespace totient;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Every opened element is closed or self-closing, in order. Comments and the
// XML declaration are skipped.
bool tags_balanced(const std::string& svg) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = svg.find('<', pos)) != std::string::npos) {
        if (svg.compare(pos, 4, "<!--") == 0) {
            pos = svg.find("-->", pos);
            if (pos == std::string::npos) return false;
            continue;
        }
        const auto close = svg.find('>', pos);
        if (close == std::string::npos) return false;
        const std::string tag = svg.substr(pos + 1, close - pos - 1);
        pos = close;
        if (tag.empty() || tag[0] == '?') continue;
        if (tag.back() == '/') continue;
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
        } else {
            stack.push_back(tag.substr(0, tag.find_first_of(" \n")));
        }
    }
    return stack.empty();
}

}  // namespace

TEST_CASE("downsample_indices") {
    CHECK(downsample_indices(3) == std::vector<std::size_t>{0, 1, 2});
    CHECK(downsample_indices(10, 4) == std::vector<std::size_t>{0, 3, 6, 9});
    CHECK(downsample_indices(0).empty());
    CHECK(downsample_indices(12345).size() <= kMaxPlotPoints);
    CHECK(downsample_indices(5000).size() == 5000);
}

TEST_CASE("exact_string") {
    CHECK(exact_string(Rational(-7, 2)) == "-7/2");
    CHECK(exact_string(123) == "123");
}

TEST_CASE("scatter SVG") {
    const std::vector<Rational> t{1, 2, 3}, p{Rational(3, 2), 2, Rational(5, 2)};
    const auto svg = render_scatter_svg(t, p, {"title", "true", "predicted"});
    CHECK(count_of(svg, "<circle class=\"pt\"") == 3);
    CHECK(count_of(svg, "class=\"fit-line\"") == 1);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
    CHECK(tags_balanced(svg));
    CHECK(svg == render_scatter_svg(t, p, {"title", "true", "predicted"}));
    CHECK(svg.find("<!-- plot-data\ntrue,predicted\n1,3/2\n2,2\n3,5/2\n-->") != std::string::npos);
    CHECK(scatter_csv(t, p) == "true,predicted\n1,3/2\n2,2\n3,5/2\n");

    std::vector<Rational> big_t, big_p;
    for (int i = 0; i < 12000; ++i) {
        big_t.emplace_back((mpz_class(1) << 500) + i);
        big_p.emplace_back((mpz_class(1) << 500) + 2 * i);
    }
    const auto big = render_scatter_svg(big_t, big_p, {});
    CHECK(count_of(big, "<circle class=\"pt\"") <= kMaxPlotPoints);
    CHECK(count_of(big, "<circle class=\"pt\"") == downsample_indices(12000).size());
    CHECK(tags_balanced(big));

    const std::vector<Rational> shorter{1};
    CHECK_THROWS(render_scatter_svg(t, shorter, {}));
}

TEST_CASE("histogram SVG") {
    const std::vector<Rational> v{-1, 0, 0, 1};
    const auto h = histogram(v, {2});
    const auto svg = render_histogram_svg(h, {"residuals", "r", "count"});
    CHECK(count_of(svg, "<rect class=\"bar\"") == 2);
    CHECK(svg.find("data-count=\"1\"") != std::string::npos);
    CHECK(svg.find("data-count=\"3\"") != std::string::npos);
    CHECK(count_of(svg, "class=\"zero\"") == 1);
    CHECK(tags_balanced(svg));
    CHECK(histogram_csv(h) == "bin_low,bin_high,count\n-1,0,1\n0,1,3\n");

    // The taller bar is drawn taller.
    const std::regex bar(R"re(<rect class="bar" x="[^"]*" y="[^"]*" width="[^"]*" height="([^"]*)")re");
    std::vector<double> heights;
    for (std::sregex_iterator it(svg.begin(), svg.end(), bar), end; it != end; ++it)
        heights.push_back(std::stod((*it)[1]));
    REQUIRE(heights.size() == 2);
    CHECK(heights[1] == doctest::Approx(3 * heights[0]));

    const std::vector<Rational> positive{1, 2, 3};
    CHECK(count_of(render_histogram_svg(histogram(positive, {3}), {}), "class=\"zero\"") == 0);
}

TEST_CASE("SVG files are written") {
    test_support::TempDir dir("plot");
    const std::vector<Rational> t{1, 2}, p{1, 3};
    scatter_svg(t, p, dir / "s.svg", {});
    CHECK(test_support::slurp(dir / "s.svg") == render_scatter_svg(t, p, {}));
    CHECK_THROWS(write_text_file(dir / "missing" / "x.svg", "x"));
}

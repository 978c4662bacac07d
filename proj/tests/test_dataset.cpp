#include <doctest.h>

#include <sstream>

#include "test_support.hpp"
#include "totient/dataset.hpp"
#include "totient/errors.hpp"

using namespace totient;

namespace {

const RsaSample k15 = RsaSample::from_primes(3, 5);
const RsaSample k35 = RsaSample::from_primes(5, 7);

std::string with_header(const std::string& rows, std::uint64_t count) {
    return "# totient-dataset v1 bits=4 count=" + std::to_string(count) + " seed=0\np,q,n,epsilon\n" + rows;
}

}  // namespace

TEST_CASE("write_csv format") {
    std::ostringstream os;
    const std::vector<RsaSample> one{k15};
    CHECK(write_csv({4, 1, 9, 1}, one, os) == 1);
    CHECK(os.str() == "# totient-dataset v1 bits=4 count=1 seed=9\np,q,n,epsilon\n3,5,15,3\n");

    std::ostringstream empty;
    CHECK(write_csv({8, 0, 1, 1}, {}, empty) == 0);
    CHECK(empty.str() == "# totient-dataset v1 bits=8 count=0 seed=1\np,q,n,epsilon\n");
}

TEST_CASE("read_csv parses rows and header") {
    std::istringstream in(with_header("3,5,15,3\n5,7,35,11\n", 2));
    const auto d = read_csv(in, "mem");
    CHECK(d.header == DatasetHeader{4, 2, 0, 1});
    REQUIRE(d.samples.size() == 2);
    CHECK(d.samples[0] == k15);
    CHECK(d.samples[1] == k35);
}

TEST_CASE("read_csv errors carry the line number") {
    auto line_of = [](const std::string& text, bool strict = true) -> std::size_t {
        std::istringstream in(text);
        try {
            read_csv(in, "mem", strict);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of(with_header("3,5,15,3\n3,5,16,3\n", 2)) == 4);  // n != pq
    CHECK(line_of(with_header("3,5,15\n", 1)) == 3);              // column count
    CHECK(line_of(with_header("3,5,15,3,1\n", 1)) == 3);
    CHECK(line_of(with_header("3,5,15,4\n", 1)) == 3);            // epsilon wrong
    CHECK(line_of(with_header("3,5,1x5,3\n", 1)) == 3);           // malformed integer
    CHECK(line_of(with_header("3,-5,15,3\n", 1)) == 3);
    CHECK(line_of(with_header("3, 5,15,3\n", 1)) == 3);
    CHECK(line_of(with_header("3,5,15,3\r\n", 1)) == 3);
    CHECK(line_of(with_header("3,5,15,3\n", 2)) == 3);            // count mismatch at EOF
    CHECK(line_of("p,q,n,epsilon\n") == 1);
    CHECK(line_of("# totient-dataset v2 bits=4 count=0 seed=0\np,q,n,epsilon\n") == 1);
    CHECK(line_of("# totient-dataset v1 bits=4 count=0 seed=0\nP,Q,N,E\n") == 2);

    // Non-strict mode skips invariant and count checks but not syntax.
    CHECK(line_of(with_header("3,5,16,3\n", 7), false) == 0);
    CHECK(line_of(with_header("3,5,16\n", 1), false) == 3);
}

TEST_CASE("CSV round-trip keeps 512-bit values exact") {
    test_support::TempDir dir("dataset");
    const auto samples = generate_dataset(512, 40, 3);
    REQUIRE(samples.front().n.get_str().size() >= 154);
    const DatasetHeader header{512, samples.size(), 3, 1};
    CHECK(write_csv(header, samples, dir / "d.csv") == samples.size());
    const auto back = read_csv(dir / "d.csv");
    CHECK(back.header == header);
    CHECK(back.samples == samples);

    DatasetFile file(dir / "d.csv");
    std::size_t rows = 0;
    while (auto s = file.next()) {
        REQUIRE(*s == samples[rows]);
        ++rows;
    }
    CHECK(rows == samples.size());
    CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("split is deterministic, disjoint and near the requested fraction") {
    const std::size_t rows = 100000;
    const Splitter splitter(SplitSpec{});
    std::size_t train = 0;
    for (std::size_t i = 0; i < rows; ++i) train += splitter.is_train(i);
    const double share = static_cast<double>(train) / rows;
    CHECK(share > 0.795);
    CHECK(share < 0.805);

    const Splitter again(SplitSpec{});
    const Splitter other(SplitSpec{Rational(4, 5), 99});
    bool differs = false;
    for (std::size_t i = 0; i < 1000; ++i) {
        REQUIRE(splitter.is_train(i) == again.is_train(i));
        differs |= splitter.is_train(i) != other.is_train(i);
    }
    CHECK(differs);

    const auto samples = generate_dataset(16, 500, 2);
    const auto parts = split(samples, SplitSpec{Rational(1, 2), 5});
    CHECK(parts.train.size() + parts.test.size() == samples.size());
    // Order-preserving partition: merging by the splitter reproduces the input.
    const Splitter s2(SplitSpec{Rational(1, 2), 5});
    std::size_t a = 0, b = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& got = s2.is_train(i) ? parts.train[a++] : parts.test[b++];
        REQUIRE(got == samples[i]);
    }

    CHECK_THROWS_AS(Splitter(SplitSpec{Rational(1), 0}), DomainError);
    CHECK_THROWS_AS(Splitter(SplitSpec{Rational(0), 0}), DomainError);
}

TEST_CASE("stats are exact") {
    const std::vector<RsaSample> one{k15};
    const auto s1 = stats(one);
    CHECK(s1.count == 1);
    CHECK(s1.n.mean == 15);
    CHECK(s1.prime_sum.mean == 8);
    CHECK(s1.epsilon.mean == 3);

    const std::vector<RsaSample> two{k15, k35};
    const auto s2 = stats(two);
    CHECK(s2.n.mean == 25);
    CHECK(s2.epsilon.mean == 7);
    CHECK(s2.n.min == 15);
    CHECK(s2.n.max == 35);
    CHECK(s2.prime_sum.mean == 10);

    CHECK_THROWS_AS(stats({}), DomainError);

    const auto samples = generate_dataset(32, 300, 4);
    StatsAccumulator left, right;
    for (std::size_t i = 0; i < samples.size(); ++i) (i % 3 ? left : right).add(samples[i]);
    left.merge(right);
    const auto merged = left.result();
    const auto direct = stats(samples);
    CHECK(merged.n.mean == direct.n.mean);
    CHECK(merged.epsilon.min == direct.epsilon.min);
    CHECK(merged.prime_sum.max == direct.prime_sum.max);
    for (const auto* q : {&direct.n, &direct.prime_sum, &direct.epsilon}) {
        CHECK(Rational(q->min) <= q->mean);
        CHECK(q->mean <= Rational(q->max));
    }
    // n/2 - epsilon = (p + q + 1)/2 holds row by row, hence for the means.
    CHECK(direct.n.mean / 2 - direct.epsilon.mean == (direct.prime_sum.mean + 1) / 2);
}

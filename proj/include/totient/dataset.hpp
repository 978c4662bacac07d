#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "totient/rational.hpp"
#include "totient/samples.hpp"

namespace totient {

// On-disk layout:
//   # totient-dataset v1 bits=<B> count=<C> seed=<S>
//   p,q,n,epsilon
//   <p>,<q>,<n>,<epsilon>        one row per sample, LF terminated
inline constexpr unsigned kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetColumns = "p,q,n,epsilon";

struct DatasetHeader {
    unsigned modulus_bits = 0;
    std::uint64_t count = 0;
    std::uint64_t master_seed = 0;
    unsigned format_version = kDatasetFormatVersion;

    bool operator==(const DatasetHeader&) const = default;
};

std::string format_header_line(const DatasetHeader& header);

/// Single-writer streaming CSV sink. The header's count is written up front,
/// so callers must know it before the first row.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const DatasetHeader& header);

    void write(const RsaSample& sample);
    void write(std::span<const RsaSample> samples);
    std::uint64_t rows() const noexcept { return rows_; }

private:
    std::ostream& out_;
    std::uint64_t rows_ = 0;
    std::string buf_;
};

/// Writes header lines plus one row per sample; returns the row count.
std::uint64_t write_csv(const DatasetHeader& header, std::span<const RsaSample> samples, std::ostream& out);
std::uint64_t write_csv(const DatasetHeader& header, std::span<const RsaSample> samples,
                        const std::filesystem::path& destination);

/// Streaming row reader. In strict mode each row is checked for
/// n = p*q and epsilon = (p-1)(q-1)/2 - 1, and the header count against the
/// number of rows actually present.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name, bool strict = true);

    const DatasetHeader& header() const noexcept { return header_; }

    /// Next row, or nullopt at end of input. Throws ParseError.
    std::optional<RsaSample> next();

    std::size_t line() const noexcept { return line_; }

private:
    [[noreturn]] void fail(const std::string& what) const;

    std::istream& in_;
    std::string source_;
    bool strict_;
    DatasetHeader header_;
    std::size_t line_ = 0;
    std::uint64_t rows_ = 0;
    std::string buf_;
};

/// CsvReader that owns its file stream.
class DatasetFile {
public:
    explicit DatasetFile(const std::filesystem::path& path, bool strict = true);

    const DatasetHeader& header() const noexcept { return reader_.header(); }
    std::optional<RsaSample> next() { return reader_.next(); }

private:
    std::ifstream file_;
    CsvReader reader_;
};

struct Dataset {
    DatasetHeader header;
    std::vector<RsaSample> samples;
};

Dataset read_csv(std::istream& in, const std::string& source_name, bool strict = true);
Dataset read_csv(const std::filesystem::path& source, bool strict = true);

struct SplitSpec {
    Rational train_fraction{4, 5};
    std::uint64_t split_seed = 0;
};

/// Per-row train/test assignment: row i goes to train iff
/// mix64(seed, i) / 2^64 < train_fraction. Pure in (seed, i), so it works on
/// streams of any length.
class Splitter {
public:
    explicit Splitter(const SplitSpec& spec);

    bool is_train(std::uint64_t index) const noexcept;

private:
    std::uint64_t seed_;
    unsigned __int128 threshold_;  // train iff hash < threshold; 2^64 means always
};

struct SplitResult {
    std::vector<RsaSample> train;
    std::vector<RsaSample> test;
};

SplitResult split(std::span<const RsaSample> samples, const SplitSpec& spec);

struct QuantityStats {
    Natural min;
    Natural max;
    Rational mean;
};

struct DatasetStats {
    std::uint64_t count = 0;
    QuantityStats n;
    QuantityStats prime_sum;  // p + q
    QuantityStats epsilon;
};

/// Exact running min/max/sum; merge() is order-independent.
class StatsAccumulator {
public:
    void add(const RsaSample& s);
    void merge(const StatsAccumulator& other);
    std::uint64_t count() const noexcept { return count_; }

    /// Throws DomainError when empty.
    DatasetStats result() const;

private:
    struct Track {
        Natural min, max, sum;
        void add(const Natural& v, bool first);
        void merge(const Track& o);
    };
    std::uint64_t count_ = 0;
    Track n_, sum_, eps_;
};

DatasetStats stats(std::span<const RsaSample> samples);

}  // namespace totient

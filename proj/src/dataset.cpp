#include "totient/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include "totient/errors.hpp"

namespace totient {

namespace {

bool parse_u64_field(std::string_view token, std::string_view key, std::uint64_t& out) {
    if (token.substr(0, key.size()) != key) return false;
    token.remove_prefix(key.size());
    if (token.empty()) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

void append_decimal(std::string& buf, const Natural& v) {
    const std::size_t at = buf.size();
    buf.resize(at + mpz_sizeinbase(v.get_mpz_t(), 10) + 2);
    mpz_get_str(buf.data() + at, 10, v.get_mpz_t());
    buf.resize(at + std::char_traits<char>::length(buf.data() + at));
}

}  // namespace

std::string format_header_line(const DatasetHeader& header) {
    std::ostringstream os;
    os << "# totient-dataset v" << header.format_version << " bits=" << header.modulus_bits
       << " count=" << header.count << " seed=" << header.master_seed;
    return os.str();
}

CsvWriter::CsvWriter(std::ostream& out, const DatasetHeader& header) : out_(out) {
    out_ << format_header_line(header) << '\n' << kDatasetColumns << '\n';
    if (!out_) throw IoError("failed to write dataset header");
}

void CsvWriter::write(const RsaSample& s) {
    buf_.clear();
    append_decimal(buf_, s.p);
    buf_ += ',';
    append_decimal(buf_, s.q);
    buf_ += ',';
    append_decimal(buf_, s.n);
    buf_ += ',';
    append_decimal(buf_, s.epsilon);
    buf_ += '\n';
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out_) throw IoError("failed to write dataset row " + std::to_string(rows_ + 1));
    ++rows_;
}

void CsvWriter::write(std::span<const RsaSample> samples) {
    for (const auto& s : samples) write(s);
}

std::uint64_t write_csv(const DatasetHeader& header, std::span<const RsaSample> samples, std::ostream& out) {
    CsvWriter w(out, header);
    w.write(samples);
    return w.rows();
}

std::uint64_t write_csv(const DatasetHeader& header, std::span<const RsaSample> samples,
                        const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + destination.string() + " for writing");
    try {
        const auto rows = write_csv(header, samples, out);
        out.flush();
        if (!out) throw IoError("write failed");
        return rows;
    } catch (const IoError& e) {
        throw IoError(destination.string() + ": " + e.what());
    }
}

CsvReader::CsvReader(std::istream& in, std::string source_name, bool strict)
    : in_(in), source_(std::move(source_name)), strict_(strict) {
    if (!std::getline(in_, buf_)) {
        line_ = 1;
        fail("missing dataset header");
    }
    line_ = 1;
    std::istringstream hs(buf_);
    std::string hash, magic, version, bits, count, seed, extra;
    hs >> hash >> magic >> version >> bits >> count >> seed;
    std::uint64_t v = 0, b = 0;
    if (hash != "#" || magic != "totient-dataset" || version.size() < 2 || version[0] != 'v' ||
        !parse_u64_field(version, "v", v) || !parse_u64_field(bits, "bits=", b) ||
        !parse_u64_field(count, "count=", header_.count) || !parse_u64_field(seed, "seed=", header_.master_seed) ||
        (hs >> extra)) {
        fail("malformed dataset header: '" + buf_ + "'");
    }
    if (v != kDatasetFormatVersion) fail("unsupported dataset format version " + std::to_string(v));
    header_.format_version = static_cast<unsigned>(v);
    header_.modulus_bits = static_cast<unsigned>(b);

    if (!std::getline(in_, buf_)) {
        line_ = 2;
        fail("missing column header");
    }
    line_ = 2;
    if (buf_ != kDatasetColumns) fail("expected column header '" + std::string(kDatasetColumns) + "'");
}

void CsvReader::fail(const std::string& what) const { throw ParseError(source_, line_, what); }

std::optional<RsaSample> CsvReader::next() {
    if (!std::getline(in_, buf_)) {
        if (strict_ && rows_ != header_.count)
            fail("header declares " + std::to_string(header_.count) + " rows, found " + std::to_string(rows_));
        return std::nullopt;
    }
    ++line_;

    Natural fields[4];
    std::size_t start = 0;
    std::size_t column = 0;
    for (;;) {
        const std::size_t comma = buf_.find(',', start);
        const std::size_t end = comma == std::string::npos ? buf_.size() : comma;
        if (column == 4) fail("expected 4 columns, found more");
        if (!parse_decimal(buf_.substr(start, end - start), fields[column]))
            fail("malformed integer in column " + std::to_string(column + 1));
        ++column;
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (column != 4) fail("expected 4 columns, found " + std::to_string(column));

    RsaSample s{std::move(fields[0]), std::move(fields[1]), std::move(fields[2]), std::move(fields[3])};
    if (strict_) {
        if (s.n != s.p * s.q) fail("n != p*q");
        if (s.p < 2 || s.q < 2) fail("factors must be >= 2");
        if (s.epsilon != (s.p - 1) * (s.q - 1) / 2 - 1) fail("epsilon != (p-1)(q-1)/2 - 1");
        if (rows_ + 1 > header_.count) fail("more rows than the header declares");
    }
    ++rows_;
    return s;
}

DatasetFile::DatasetFile(const std::filesystem::path& path, bool strict)
    : file_([&] {
          std::ifstream f(path, std::ios::binary);
          if (!f) throw IoError("cannot open " + path.string() + " for reading");
          return f;
      }()),
      reader_(file_, path.string(), strict) {}

Dataset read_csv(std::istream& in, const std::string& source_name, bool strict) {
    CsvReader reader(in, source_name, strict);
    Dataset d;
    d.header = reader.header();
    d.samples.reserve(std::min<std::uint64_t>(d.header.count, 1u << 20));
    while (auto s = reader.next()) d.samples.push_back(std::move(*s));
    return d;
}

Dataset read_csv(const std::filesystem::path& source, bool strict) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw IoError("cannot open " + source.string() + " for reading");
    return read_csv(in, source.string(), strict);
}

Splitter::Splitter(const SplitSpec& spec) : seed_(spec.split_seed) {
    if (spec.train_fraction <= 0 || spec.train_fraction >= 1)
        throw DomainError("train_fraction must lie strictly between 0 and 1");
    // threshold = ceil(fraction * 2^64), so hash < threshold <=> hash / 2^64 < fraction.
    mpz_class scaled = spec.train_fraction.get_num() << 64;
    mpz_class t;
    mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), spec.train_fraction.get_den_mpz_t());
    std::uint64_t words[2] = {0, 0};
    mpz_export(words, nullptr, -1, sizeof(std::uint64_t), 0, 0, t.get_mpz_t());
    threshold_ = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
}

bool Splitter::is_train(std::uint64_t index) const noexcept {
    const std::uint64_t h = mix64(mix64(seed_) ^ index);
    return static_cast<unsigned __int128>(h) < threshold_;
}

SplitResult split(std::span<const RsaSample> samples, const SplitSpec& spec) {
    const Splitter splitter(spec);
    SplitResult out;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (splitter.is_train(i) ? out.train : out.test).push_back(samples[i]);
    return out;
}

void StatsAccumulator::Track::add(const Natural& v, bool first) {
    if (first) {
        min = max = v;
    } else {
        if (v < min) min = v;
        if (v > max) max = v;
    }
    sum += v;
}

void StatsAccumulator::Track::merge(const Track& o) {
    if (o.min < min) min = o.min;
    if (o.max > max) max = o.max;
    sum += o.sum;
}

void StatsAccumulator::add(const RsaSample& s) {
    const bool first = count_ == 0;
    n_.add(s.n, first);
    sum_.add(s.p + s.q, first);
    eps_.add(s.epsilon, first);
    ++count_;
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    n_.merge(other.n_);
    sum_.merge(other.sum_);
    eps_.merge(other.eps_);
    count_ += other.count_;
}

DatasetStats StatsAccumulator::result() const {
    if (count_ == 0) throw DomainError("stats: empty sample set");
    const mpz_class count(static_cast<unsigned long>(count_));
    auto finish = [&](const Track& t) { return QuantityStats{t.min, t.max, make_rational(t.sum, count)}; };
    return DatasetStats{count_, finish(n_), finish(sum_), finish(eps_)};
}

DatasetStats stats(std::span<const RsaSample> samples) {
    StatsAccumulator acc;
    for (const auto& s : samples) acc.add(s);
    return acc.result();
}

}  // namespace totient

#include "totient/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "totient/errors.hpp"

namespace totient {

nlohmann::json rational_to_json(const Rational& r) {
    return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

Rational rational_from_json(const nlohmann::json& j) {
    mpz_class num, den;
    if (!parse_signed_decimal(j.at("num").get<std::string>(), num) ||
        !parse_decimal(j.at("den").get<std::string>(), den) || den == 0)
        throw DomainError("malformed rational " + j.dump());
    return make_rational(num, den);
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
    auto field = [&](const Rational& v) {
        auto j = rational_to_json(v);
        j["decimal"] = render_decimal(v, report.digits);
        return j;
    };
    return {{"count", report.count}, {"digits", report.digits}, {"mae", field(report.mae)},
            {"mse", field(report.mse)}, {"r2", field(report.r2)}};
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
    MetricsReport r;
    r.count = j.at("count").get<std::uint64_t>();
    r.digits = j.value("digits", kDefaultMetricDigits);
    r.mae = rational_from_json(j.at("mae"));
    r.mse = rational_from_json(j.at("mse"));
    r.r2 = rational_from_json(j.at("r2"));
    return r;
}

std::vector<Rational> residuals(const LinearModel& model, std::span<const RsaSample> samples) {
    std::vector<Rational> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        Rational r = Rational(s.epsilon) - predict(model, s.n);
        r.canonicalize();
        out.push_back(std::move(r));
    }
    return out;
}

void MetricsAccumulator::add(const Rational& y_true, const Rational& y_pred) {
    add_residual(Rational(y_true - y_pred));
    sum_y_ += y_true;
    sum_yy_ += y_true * y_true;
}

void MetricsAccumulator::add_residual(const Rational& r) {
    ++count_;
    sum_abs_ += abs(r);
    sum_sq_ += r * r;
}

MetricsAccumulator& MetricsAccumulator::merge(const MetricsAccumulator& o) {
    count_ += o.count_;
    sum_abs_ += o.sum_abs_;
    sum_sq_ += o.sum_sq_;
    sum_y_ += o.sum_y_;
    sum_yy_ += o.sum_yy_;
    return *this;
}

void MetricsAccumulator::require_nonempty(const char* what) const {
    if (count_ == 0) throw DomainError(std::string(what) + ": no residuals");
}

Rational MetricsAccumulator::mae() const {
    require_nonempty("mae");
    Rational v = sum_abs_ / Rational(static_cast<unsigned long>(count_));
    v.canonicalize();
    return v;
}

Rational MetricsAccumulator::mse() const {
    require_nonempty("mse");
    Rational v = sum_sq_ / Rational(static_cast<unsigned long>(count_));
    v.canonicalize();
    return v;
}

Rational MetricsAccumulator::r2() const {
    require_nonempty("r2");
    const Rational n(static_cast<unsigned long>(count_));
    const Rational ss_tot = sum_yy_ - sum_y_ * sum_y_ / n;
    if (ss_tot == 0) throw DomainError("r2: zero total variance");
    Rational v = 1 - sum_sq_ / ss_tot;
    v.canonicalize();
    return v;
}

MetricsReport MetricsAccumulator::report(unsigned digits) const {
    return MetricsReport{count_, mae(), mse(), r2(), digits};
}

Rational mae(std::span<const Rational> rs) {
    MetricsAccumulator acc;
    for (const auto& r : rs) acc.add_residual(r);
    return acc.mae();
}

Rational mse(std::span<const Rational> rs) {
    MetricsAccumulator acc;
    for (const auto& r : rs) acc.add_residual(r);
    return acc.mse();
}

Rational r2(std::span<const Rational> y_true, std::span<const Rational> y_pred) {
    if (y_true.size() != y_pred.size()) throw DomainError("r2: series lengths differ");
    MetricsAccumulator acc;
    for (std::size_t i = 0; i < y_true.size(); ++i) acc.add(y_true[i], y_pred[i]);
    return acc.r2();
}

MetricsReport evaluate(const LinearModel& model, std::span<const RsaSample> samples, unsigned threads,
                       unsigned digits) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(samples.size(), 1));
    std::vector<MetricsAccumulator> parts(workers);
    auto run = [&](std::size_t w) {
        const std::size_t lo = samples.size() * w / workers;
        const std::size_t hi = samples.size() * (w + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i) parts[w].add(Rational(samples[i].epsilon), predict(model, samples[i].n));
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    MetricsAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return total.report(digits);
}

namespace {

mpz_class pow10(unsigned long e) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
    return out;
}

// Round-half-even of a non-negative rational to an integer.
mpz_class round_half_even(const Rational& v) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    const int c = cmp(Rational(2 * r), Rational(v.get_den()));
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
    return q;
}

// Exponent e with 10^e <= v < 10^(e+1), for v > 0.
long decimal_exponent(const Rational& v) {
    long e = static_cast<long>(mpz_sizeinbase(v.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(v.get_den_mpz_t(), 10));
    // The digit-count estimate is within one of the true exponent.
    auto scaled_cmp = [&](long k) {  // sign of v - 10^k
        if (k >= 0) return cmp(v, Rational(pow10(k)));
        return cmp(Rational(v * pow10(-k)), Rational(1));
    };
    while (scaled_cmp(e) < 0) --e;
    while (scaled_cmp(e + 1) >= 0) ++e;
    return e;
}

}  // namespace

std::string render_decimal(const Rational& value, unsigned significant_digits) {
    const unsigned sig = std::max(significant_digits, 1u);
    if (value == 0) return sig == 1 ? "0" : "0." + std::string(sig - 1, '0');

    const bool negative = value < 0;
    const Rational mag = abs(value);
    long e = decimal_exponent(mag);
    const long shift = static_cast<long>(sig) - 1 - e;
    Rational scaled = shift >= 0 ? Rational(mag * pow10(shift)) : Rational(mag / pow10(-shift));
    scaled.canonicalize();
    mpz_class m = round_half_even(scaled);
    if (m == pow10(sig)) {
        m /= 10;
        ++e;
    }
    const std::string digits = m.get_str();

    std::string out = negative ? "-" : "";
    if (e >= 21) {
        out += digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e+" + std::to_string(e);
    } else if (e < 0) {
        out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
    } else {
        const auto int_len = static_cast<std::size_t>(e + 1);
        if (int_len >= digits.size()) {
            out += digits + std::string(int_len - digits.size(), '0');
        } else {
            out += digits.substr(0, int_len) + "." + digits.substr(int_len);
        }
    }
    return out;
}

std::string render_fixed(const Rational& value, unsigned decimals) {
    const bool negative = value < 0;
    const mpz_class scale = pow10(decimals);
    Rational scaled = abs(value) * scale;
    scaled.canonicalize();
    const mpz_class m = round_half_even(scaled);
    std::string digits = m.get_str();
    if (digits.size() <= decimals) digits = std::string(decimals + 1 - digits.size(), '0') + digits;
    std::string out = (negative && m != 0) ? "-" : "";
    out += digits.substr(0, digits.size() - decimals);
    if (decimals) out += "." + digits.substr(digits.size() - decimals);
    return out;
}

std::uint64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

Histogram histogram(std::span<const Rational> values, const HistogramSpec& spec) {
    if (values.empty()) throw DomainError("histogram: no values");
    if (spec.bin_count == 0) throw DomainError("histogram: bin_count must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    Rational lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        lo -= 1;
        hi += 1;
    }
    const unsigned bins = spec.bin_count;
    const Rational width = (hi - lo) / Rational(bins);

    Histogram h;
    h.edges.reserve(bins + 1);
    for (unsigned i = 0; i <= bins; ++i) {
        Rational edge = lo + width * i;
        edge.canonicalize();
        h.edges.push_back(std::move(edge));
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (const auto& v : values) {
        Rational pos = (v - lo) / width;
        pos.canonicalize();
        mpz_class idx = floor(pos);
        const unsigned long i = idx >= bins ? bins - 1 : idx.get_ui();
        ++h.counts[i];
    }
    return h;
}

}  // namespace totient

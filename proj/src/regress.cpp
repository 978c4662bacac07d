#include "totient/regress.hpp"

#include <fstream>
#include <ostream>

#include "totient/errors.hpp"

namespace totient {

std::string_view to_string(FitMode mode) {
    switch (mode) {
        case FitMode::free_ols: return "free_ols";
        case FitMode::half_slope: return "half_slope";
        case FitMode::conservative: return "conservative";
        case FitMode::provable: return "provable";
    }
    return "unknown";
}

std::optional<FitMode> parse_fit_mode(std::string_view text) {
    for (FitMode m : {FitMode::free_ols, FitMode::half_slope, FitMode::conservative, FitMode::provable})
        if (to_string(m) == text) return m;
    return std::nullopt;
}

void OlsSums::add(const Integer& x, const Integer& y) {
    ++n_;
    sx_ += x;
    sy_ += y;
    sxy_ += x * y;
    sxx_ += x * x;
}

OlsSums& OlsSums::merge(const OlsSums& o) {
    n_ += o.n_;
    sx_ += o.sx_;
    sy_ += o.sy_;
    sxy_ += o.sxy_;
    sxx_ += o.sxx_;
    return *this;
}

OlsSums accumulate(std::span<const Point> points) {
    OlsSums s;
    for (const auto& p : points) s.add(p.x, p.y);
    return s;
}

OlsSums accumulate(std::span<const RsaSample> samples) {
    OlsSums s;
    for (const auto& r : samples) s.add(r);
    return s;
}

void ConservativeAccumulator::add(const Integer& x, const Integer& y) {
    Integer v = 2 * y - x;
    if (count_ == 0 || v < min_) min_ = std::move(v);
    ++count_;
}

ConservativeAccumulator& ConservativeAccumulator::merge(const ConservativeAccumulator& o) {
    if (o.count_ == 0) return *this;
    if (count_ == 0 || o.min_ < min_) min_ = o.min_;
    count_ += o.count_;
    return *this;
}

namespace {

std::uint64_t to_count(const Natural& n) {
    if (!n.fits_ulong_p()) throw FitError("training count exceeds 64 bits");
    return n.get_ui();
}

}  // namespace

LinearModel fit_free_ols(const OlsSums& s) {
    if (s.count() < 2) throw FitError("free OLS needs at least 2 samples");
    const Integer denom = s.count() * s.sum_xx() - s.sum_x() * s.sum_x();
    if (denom == 0) throw FitError("degenerate fit: all x values are equal");
    LinearModel m;
    m.mode = FitMode::free_ols;
    m.slope = make_rational(s.count() * s.sum_xy() - s.sum_x() * s.sum_y(), denom);
    m.intercept = (Rational(s.sum_y()) - m.slope * s.sum_x()) / Rational(s.count());
    m.intercept.canonicalize();
    m.train_count = to_count(s.count());
    return m;
}

LinearModel fit_half_slope(const OlsSums& s) {
    if (s.count() < 1) throw FitError("half-slope fit needs at least 1 sample");
    LinearModel m;
    m.mode = FitMode::half_slope;
    m.slope = Rational(1, 2);
    m.intercept = make_rational(2 * s.sum_y() - s.sum_x(), 2 * s.count());
    m.train_count = to_count(s.count());
    return m;
}

LinearModel fit_conservative(const ConservativeAccumulator& acc) {
    if (acc.count() == 0) throw FitError("conservative fit needs at least 1 sample");
    LinearModel m;
    m.mode = FitMode::conservative;
    m.slope = Rational(1, 2);
    m.intercept = make_rational(acc.min_twice_offset(), 2);
    m.train_count = acc.count();
    return m;
}

LinearModel fit_conservative(std::span<const Point> points) {
    ConservativeAccumulator acc;
    for (const auto& p : points) acc.add(p.x, p.y);
    return fit_conservative(acc);
}

LinearModel fit_conservative(std::span<const RsaSample> samples) {
    ConservativeAccumulator acc;
    for (const auto& s : samples) acc.add(s);
    return fit_conservative(acc);
}

LinearModel fit_provable(unsigned modulus_bits) {
    if (modulus_bits % 2 != 0) throw DomainError("fit_provable: modulus bit size must be even");
    if (modulus_bits < 8) throw DomainError("fit_provable: modulus bit size must be >= 8");
    LinearModel m;
    m.mode = FitMode::provable;
    m.slope = Rational(1, 2);
    Integer bound = 1;
    bound <<= modulus_bits / 2;
    m.intercept = Rational(-bound);
    m.modulus_bits = modulus_bits;
    return m;
}

Rational predict(const LinearModel& model, const Integer& x) {
    Rational y = model.slope * x + model.intercept;
    y.canonicalize();
    return y;
}

Rational phi_lower_bound(const LinearModel& model, const Natural& n) {
    if (!model.has_half_slope()) throw DomainError("phi_lower_bound needs a slope-1/2 model");
    Rational b = 2 * (predict(model, n) + 1);
    b.canonicalize();
    return b;
}

nlohmann::json model_to_json(const LinearModel& model) {
    nlohmann::json j;
    j["format"] = kModelFormat;
    j["bits"] = model.modulus_bits;
    j["mode"] = std::string(to_string(model.mode));
    j["slope"] = rational_to_json(model.slope);
    j["intercept"] = rational_to_json(model.intercept);
    j["train_count"] = model.train_count;
    j["seed"] = model.master_seed;
    if (model.metrics) j["metrics"] = metrics_to_json(*model.metrics);
    return j;
}

LinearModel model_from_json(const nlohmann::json& j, const std::string& source) {
    try {
        if (!j.is_object()) throw ParseError(source, 0, "model must be a JSON object");
        if (j.at("format").get<std::string>() != kModelFormat)
            throw ParseError(source, 0, "unsupported model format '" + j.at("format").get<std::string>() + "'");
        LinearModel m;
        const auto mode_text = j.at("mode").get<std::string>();
        const auto mode = parse_fit_mode(mode_text);
        if (!mode) throw ParseError(source, 0, "unknown fit mode '" + mode_text + "'");
        m.mode = *mode;
        m.modulus_bits = j.at("bits").get<unsigned>();
        m.slope = rational_from_json(j.at("slope"));
        m.intercept = rational_from_json(j.at("intercept"));
        m.train_count = j.at("train_count").get<std::uint64_t>();
        m.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("metrics")) m.metrics = metrics_from_json(j.at("metrics"));
        if (m.mode != FitMode::free_ols && !m.has_half_slope())
            throw ParseError(source, 0, "mode '" + mode_text + "' requires slope 1/2");
        return m;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(source, 0, std::string("malformed model: ") + e.what());
    }
}

void save_model(const LinearModel& model, std::ostream& out) {
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw IoError("failed to write model");
}

void save_model(const LinearModel& model, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + destination.string() + " for writing");
    save_model(model, out);
}

LinearModel load_model(std::istream& in, const std::string& source) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
    }
    return model_from_json(j, source);
}

LinearModel load_model(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw IoError("cannot open " + source.string() + " for reading");
    return load_model(in, source.string());
}

}  // namespace totient

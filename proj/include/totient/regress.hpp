#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include <json.hpp>

#include "totient/metrics_report.hpp"
#include "totient/ntheory.hpp"
#include "totient/rational.hpp"
#include "totient/samples.hpp"

namespace totient {

// Linear predictors of epsilon from n. Everything here is exact rational
// arithmetic; no floating point is involved in fitting or prediction.

enum class FitMode { free_ols, half_slope, conservative, provable };

std::string_view to_string(FitMode mode);
std::optional<FitMode> parse_fit_mode(std::string_view text);

struct Point {
    Integer x;
    Integer y;
};

/// Sufficient statistics (N, Sx, Sy, Sxy, Sxx) for least squares.
/// merge() is exact, so any partition of the input gives the same sums.
class OlsSums {
public:
    void add(const Integer& x, const Integer& y);
    void add(const RsaSample& s) { add(s.n, s.epsilon); }
    OlsSums& merge(const OlsSums& other);

    const Natural& count() const noexcept { return n_; }
    const Integer& sum_x() const noexcept { return sx_; }
    const Integer& sum_y() const noexcept { return sy_; }
    const Integer& sum_xy() const noexcept { return sxy_; }
    const Integer& sum_xx() const noexcept { return sxx_; }

    bool operator==(const OlsSums&) const = default;

private:
    Natural n_ = 0;
    Integer sx_ = 0, sy_ = 0, sxy_ = 0, sxx_ = 0;
};

OlsSums accumulate(std::span<const Point> points);
OlsSums accumulate(std::span<const RsaSample> samples);

/// Tracks min(y - x/2) for the conservative fit, stored as min(2y - x).
class ConservativeAccumulator {
public:
    void add(const Integer& x, const Integer& y);
    void add(const RsaSample& s) { add(s.n, s.epsilon); }
    ConservativeAccumulator& merge(const ConservativeAccumulator& other);

    std::uint64_t count() const noexcept { return count_; }
    /// min over samples of 2y - x; meaningless when count() == 0.
    const Integer& min_twice_offset() const noexcept { return min_; }

private:
    std::uint64_t count_ = 0;
    Integer min_;
};

/// y_hat = slope * x + intercept. The half_slope, conservative and provable models have slope 1/2 and
/// intercept -alpha.
struct LinearModel {
    Rational slope;
    Rational intercept;
    FitMode mode = FitMode::free_ols;
    unsigned modulus_bits = 0;
    std::uint64_t train_count = 0;
    std::uint64_t master_seed = 0;
    std::optional<MetricsReport> metrics;

    Rational alpha() const { return Rational(-intercept); }
    bool has_half_slope() const { return slope == Rational(1, 2); }

    bool operator==(const LinearModel&) const = default;
};

/// Unconstrained least squares. Throws FitError for N < 2 or zero x-variance.
LinearModel fit_free_ols(const OlsSums& sums);

/// Least-squares intercept with the slope pinned at 1/2. Throws FitError when empty.
LinearModel fit_half_slope(const OlsSums& sums);

/// Slope 1/2, intercept = min(y - x/2): never over-predicts a training sample.
LinearModel fit_conservative(std::span<const Point> points);
LinearModel fit_conservative(std::span<const RsaSample> samples);
LinearModel fit_conservative(const ConservativeAccumulator& acc);

/// Slope 1/2, intercept -2^(bits/2). Under-predicts epsilon for every modulus
/// whose two prime factors each have bits/2 bits, with no training data:
/// epsilon - n/2 = -(p+q+1)/2 > -2^(bits/2).
LinearModel fit_provable(unsigned modulus_bits);

Rational predict(const LinearModel& model, const Integer& x);

/// Lower bound on phi(n) implied by a slope-1/2 model: n - 2*alpha + 2,
/// i.e. 2*(predict(n) + 1). Throws DomainError for any other slope.
Rational phi_lower_bound(const LinearModel& model, const Natural& n);

inline constexpr const char* kModelFormat = "totient-model/v1";

nlohmann::json model_to_json(const LinearModel& model);
LinearModel model_from_json(const nlohmann::json& j, const std::string& source = "<json>");

void save_model(const LinearModel& model, std::ostream& out);
void save_model(const LinearModel& model, const std::filesystem::path& destination);
LinearModel load_model(std::istream& in, const std::string& source = "<stream>");
LinearModel load_model(const std::filesystem::path& source);

}  // namespace totient

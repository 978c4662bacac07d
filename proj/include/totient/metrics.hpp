#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "totient/metrics_report.hpp"
#include "totient/rational.hpp"
#include "totient/regress.hpp"
#include "totient/samples.hpp"

namespace totient {

/// r_i = epsilon_i - predict(model, n_i), exact.
std::vector<Rational> residuals(const LinearModel& model, std::span<const RsaSample> samples);

/// Streaming exact MAE / MSE / R^2. Keeps sum|r|, sum r^2, sum y and sum y^2;
/// merge() is exact and order-independent. R^2 is taken against the mean of
/// the y values seen by this accumulator (the evaluation split).
class MetricsAccumulator {
public:
    void add(const Rational& y_true, const Rational& y_pred);
    void add_residual(const Rational& r);
    MetricsAccumulator& merge(const MetricsAccumulator& other);

    std::uint64_t count() const noexcept { return count_; }

    Rational mae() const;
    Rational mse() const;
    /// 1 - SSres / SStot. Throws DomainError when SStot == 0.
    Rational r2() const;

    MetricsReport report(unsigned digits = kDefaultMetricDigits) const;

private:
    void require_nonempty(const char* what) const;

    std::uint64_t count_ = 0;
    Rational sum_abs_ = 0;
    Rational sum_sq_ = 0;
    Rational sum_y_ = 0;
    Rational sum_yy_ = 0;
};

Rational mae(std::span<const Rational> residuals);
Rational mse(std::span<const Rational> residuals);
Rational r2(std::span<const Rational> y_true, std::span<const Rational> y_pred);

/// Evaluates `model` over `samples` (x = n, y = epsilon) on up to `threads` workers.
MetricsReport evaluate(const LinearModel& model, std::span<const RsaSample> samples, unsigned threads = 1,
                       unsigned digits = kDefaultMetricDigits);

/// Correctly rounded (round-half-even) decimal with `significant_digits`
/// digits. Plain positional notation below 10^21, "d.ddde+N" above.
std::string render_decimal(const Rational& value, unsigned significant_digits = kDefaultMetricDigits);

/// Round-half-even to `decimals` places after the point, positional notation.
std::string render_fixed(const Rational& value, unsigned decimals);

struct HistogramSpec {
    unsigned bin_count = 100;
};

/// Bins are [edges[i], edges[i+1]) except the last, which is closed.
struct Histogram {
    std::vector<Rational> edges;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

/// Equal-width exact bins over [min, max]. A zero-width range is widened to
/// [min - 1, max + 1].
Histogram histogram(std::span<const Rational> values, const HistogramSpec& spec = {});

}  // namespace totient

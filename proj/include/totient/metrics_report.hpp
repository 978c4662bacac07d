#pragma once

#include <cstdint>

#include <json.hpp>

#include "totient/rational.hpp"

namespace totient {

inline constexpr unsigned kDefaultMetricDigits = 17;

/// Evaluation summary. All values are exact; decimals are rendered only on output.
struct MetricsReport {
    std::uint64_t count = 0;
    Rational mae;
    Rational mse;
    Rational r2;
    unsigned digits = kDefaultMetricDigits;

    bool operator==(const MetricsReport&) const = default;
};

/// {"count", "digits", "mae"|"mse"|"r2": {"num", "den", "decimal"}}
nlohmann::json metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& j);

/// {"num": "<dec>", "den": "<dec>"}
nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

}  // namespace totient

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "totient/bigfloat.hpp"
#include "totient/metrics_report.hpp"
#include "totient/rational.hpp"
#include "totient/regress.hpp"

namespace totient::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2, kBudgetExhausted = 3 };

inline constexpr std::uint64_t kDefaultCount = 10'000;
inline constexpr std::uint64_t kDefaultBudget = 100'000;
// Counts above this need --large.
inline constexpr std::uint64_t kDeskScaleLimit = 100'000;

struct RunConfig {
    std::string subcommand;
    unsigned bits = 0;
    std::uint64_t count = kDefaultCount;
    std::uint64_t master_seed = 1;
    Rational train_fraction{4, 5};
    FitMode mode = FitMode::half_slope;
    unsigned metric_digits = kDefaultMetricDigits;
    unsigned bound_precision = kDefaultBoundPrecision;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 1;
    bool strict = true;
    std::filesystem::path input;
    std::filesystem::path output;
    std::filesystem::path model;

    // Subcommand-specific.
    std::string split = "test";  // all | train | test
    std::string n_text, p_text, q_text;
    std::optional<std::uint64_t> row;
    bool baseline = false;
    bool force = false;
    bool large = false;
    unsigned bins = 100;
};

/// Split seed used for a dataset whose generation seed is `master_seed`.
std::uint64_t split_seed_for(std::uint64_t master_seed);

/// Parses argv and runs the selected subcommand. Never throws; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_generate(const RunConfig& config, std::ostream& out);
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_eval(const RunConfig& config, std::ostream& out);
int cmd_bounds(const RunConfig& config, std::ostream& out);
int cmd_attack(const RunConfig& config, std::ostream& out);
int cmd_plot(const RunConfig& config, std::ostream& out);
int cmd_pipeline(const RunConfig& config, std::ostream& out);

}  // namespace totient::cli

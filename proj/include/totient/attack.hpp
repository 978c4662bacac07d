#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "totient/ntheory.hpp"
#include "totient/rational.hpp"
#include "totient/regress.hpp"
#include "totient/samples.hpp"

namespace totient {

// How much a slope-1/2 predictor helps factor n. A model with intercept
// -alpha implies phi_hat = n - 2*alpha + 2 and therefore a predicted prime
// sum s_hat = n + 1 - phi_hat = 2*alpha - 1, the same for every n. A
// Fermat-style search then walks even candidate sums outward from s_hat.

struct AttackOutcome {
    bool success = false;
    Natural p;  // p <= q, set on success
    Natural q;
    std::uint64_t iterations_used = 0;  // discriminant tests performed
    Integer start_sum;
    std::optional<Natural> window;  // |true sum - start|, filled by harnesses that know p, q
};

/// Exact factors from exact phi: s = n + 1 - phi, t = sqrt(s^2 - 4n),
/// (p, q) = ((s - t)/2, (s + t)/2). Throws InconsistentPhiError when no such
/// factorization exists.
std::pair<Natural, Natural> recover_factors_from_phi(const Natural& n, const Natural& phi);

/// 2*alpha - 1, rounded to the nearest integer when 2*alpha is not integral.
/// Throws DomainError unless the model slope is 1/2.
Integer predicted_sum(const LinearModel& model, const Natural& n);

/// Smallest even s with s^2 >= 4n. Candidates below it cannot be prime sums.
Integer fermat_floor(const Natural& n);

/// Tests even candidate sums in the order e, e-2, e+2, e-4, e+4, ... where e
/// is start_sum rounded up to even. Candidates with s^2 < 4n are skipped
/// without consuming budget. At most `budget` discriminant tests are run.
AttackOutcome fermat_search(const Natural& n, const Integer& start_sum, std::uint64_t budget);

/// Classic Fermat: the same search started at fermat_floor(n), which
/// degenerates to a pure upward scan.
AttackOutcome fermat_baseline(const Natural& n, std::uint64_t budget);

/// Exact number of discriminant tests fermat_search(n, start_sum, .) needs to
/// reach `true_sum`: the 1-based position of true_sum in the alternating
/// order, minus the skipped candidates before it. With w = |true_sum - start|
/// this is at most w + 1.
Natural search_cost(const Natural& n, const Integer& start_sum, const Integer& true_sum);

/// ceil(w/2) + 1: tests needed when the direction to the true sum is known.
Natural directed_cost(const Natural& window);

struct WindowEntry {
    Natural n;
    Integer true_sum;
    Integer predicted_sum;
    Natural window;
    Natural directed_cost;
    Natural search_cost;
};

struct WindowSummary {
    std::uint64_t count = 0;
    Natural min_window;
    Rational median_window;
    Natural max_window;
    Rational mean_window;
    Rational mean_search_cost;
    std::size_t max_window_bits = 0;
};

struct WindowReport {
    std::vector<WindowEntry> entries;
    WindowSummary summary;
};

WindowReport window_report(const LinearModel& model, std::span<const RsaSample> samples);

/// Searches with true windows above this are reported, not attempted.
inline constexpr unsigned kMaxSearchWindowBits = 40;

std::string window_csv_header();
std::string window_csv_row(const WindowEntry& e);
nlohmann::json window_summary_json(const WindowSummary& s, unsigned digits);
nlohmann::json outcome_json(const AttackOutcome& o);

}  // namespace totient

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "totient/bigfloat.hpp"
#include "totient/ntheory.hpp"
#include "totient/rational.hpp"
#include "totient/regress.hpp"

namespace totient {

// Classical analytic bounds on phi(n), evaluated with directed rounding:
// upper bounds are rounded toward +inf and lower bounds toward -inf.

/// n - sqrt(n), rounded up. Valid for composite n only (phi(p) = p - 1 exceeds it).
BigFloat sierpinski_upper(const Natural& n, unsigned precision = kDefaultBoundPrecision);

/// floor(n^(2/3)) = iroot(n^2, 3). Requires n > 30.
Natural kendall_lower(const Natural& n);

/// Exact test of phi > n^(2/3), i.e. phi^3 > n^2.
bool exceeds_kendall(const Natural& phi, const Natural& n);

/// (ln 2 / 2) * n / ln n, rounded down. Requires n >= 3.
BigFloat hatalova_lower(const Natural& n, unsigned precision = kDefaultBoundPrecision);

/// n / (e^gamma * ln ln n). Reference curve only: the bound carries an
/// O(n / (ln ln n)^2) term that is never evaluated, so it is not checked.
/// Requires n >= 16.
BigFloat fang_main_term(const Natural& n, unsigned precision = kDefaultBoundPrecision);

struct BoundReport {
    Natural n;
    unsigned precision = kDefaultBoundPrecision;
    std::optional<Natural> phi;

    // Present only when a slope-1/2 model is supplied. `learned_lower` is the
    // floor of the exact bound, which preserves the strict comparison with phi.
    std::optional<Rational> learned_lower_exact;
    std::optional<Integer> learned_lower;

    BigFloat sierpinski_upper{kDefaultBoundPrecision};
    std::optional<Natural> kendall_lower;     // n > 30
    std::optional<BigFloat> hatalova_lower;   // n >= 3
    std::optional<BigFloat> fang_main_term;   // n >= 16, heuristic

    // Verdicts, present when phi is known and the bound applies.
    std::optional<bool> learned_ok;     // learned < phi
    std::optional<bool> kendall_ok;     // phi > n^(2/3)
    std::optional<bool> hatalova_ok;    // hatalova < phi
    std::optional<bool> sierpinski_ok;  // phi <= sierpinski

    // (bound - phi) / phi, present alongside the verdicts.
    std::optional<BigFloat> learned_tightness;
    std::optional<BigFloat> kendall_tightness;
    std::optional<BigFloat> hatalova_tightness;
    std::optional<BigFloat> sierpinski_tightness;
    std::optional<BigFloat> fang_tightness;
};

/// Evaluates every bound for n. `factors`, when given, must multiply to n
/// (DomainError otherwise) and enables the verdicts. `model` must have
/// slope 1/2 when given.
BoundReport compare(const Natural& n, const std::optional<std::pair<Natural, Natural>>& factors,
                    const LinearModel* model, unsigned precision = kDefaultBoundPrecision);

/// "n,phi,learned_lower,kendall_lower,hatalova_lower,sierpinski_upper,fang_main_term,
///  learned_ok,kendall_ok,hatalova_ok,sierpinski_ok"
std::string bounds_csv_header();
std::string bounds_csv_row(const BoundReport& report);

}  // namespace totient

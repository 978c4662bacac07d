#include "totient/attack.hpp"

#include <algorithm>

#include "totient/errors.hpp"
#include "totient/metrics.hpp"
#include "totient/rng.hpp"

namespace totient {

namespace {

Integer round_up_even(const Integer& s) { return mpz_odd_p(s.get_mpz_t()) ? Integer(s + 1) : s; }

bool is_prime_factor(const Natural& v) {
    RngStream rng(0, 0);
    return is_probable_prime(v, PrimalityPolicy::deterministic(), rng);
}

Natural clamp(const Integer& v, const Integer& lo, const Integer& hi) {
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

}  // namespace

std::pair<Natural, Natural> recover_factors_from_phi(const Natural& n, const Natural& phi) {
    require_natural(n, "recover_factors_from_phi");
    const Integer s = n + 1 - phi;
    const Integer disc = s * s - 4 * n;
    if (s < 0 || disc < 0) throw InconsistentPhiError("phi inconsistent with n: negative discriminant");
    auto [square, t] = is_perfect_square(disc);
    if (!square) throw InconsistentPhiError("phi inconsistent with n: discriminant is not a square");
    if (mpz_odd_p(Integer(s - t).get_mpz_t()))
        throw InconsistentPhiError("phi inconsistent with n: odd factor sum");
    Natural p = (s - t) / 2;
    Natural q = (s + t) / 2;
    if (p * q != n || p < 2) throw InconsistentPhiError("phi inconsistent with n");
    return {std::move(p), std::move(q)};
}

Integer predicted_sum(const LinearModel& model, const Natural& n) {
    if (!model.has_half_slope()) throw DomainError("predicted_sum needs a slope-1/2 model");
    // n + 1 - phi_lower_bound(n) simplifies to 2*alpha - 1.
    Rational s = Rational(n + 1) - phi_lower_bound(model, n);
    s.canonicalize();
    return round_nearest(s);
}

Integer fermat_floor(const Natural& n) {
    const Natural four_n = 4 * n;
    auto [square, r] = is_perfect_square(four_n);
    if (!square) ++r;
    return round_up_even(r);
}

AttackOutcome fermat_search(const Natural& n, const Integer& start_sum, std::uint64_t budget) {
    require_natural(n, "fermat_search");
    AttackOutcome out;
    out.start_sum = start_sum;
    if (budget == 0 || n < 4) return out;

    const Natural four_n = 4 * n;
    const Integer floor_sum = fermat_floor(n);
    const Integer e = round_up_even(start_sum);

    // Returns true when the candidate factors n.
    auto test = [&](const Integer& s) {
        ++out.iterations_used;
        auto [square, t] = is_perfect_square(Integer(s * s - four_n));
        if (!square) return false;
        Natural p = (s - t) / 2, q = (s + t) / 2;
        if (p * q != n || !is_prime_factor(p) || !is_prime_factor(q)) return false;
        out.success = true;
        out.p = std::move(p);
        out.q = std::move(q);
        return true;
    };

    // For k < (floor_sum - e)/2 both e - 2k and e + 2k are below the floor.
    Integer k = 0;
    if (e < floor_sum) k = (floor_sum - e) / 2;
    if (k == 0) {
        if (test(e)) return out;
        k = 1;
    }
    while (out.iterations_used < budget) {
        const Integer lower = e - 2 * k;
        if (lower >= floor_sum && test(lower)) return out;
        if (out.iterations_used >= budget) break;
        const Integer upper = e + 2 * k;
        if (upper >= floor_sum && test(upper)) return out;
        ++k;
    }
    return out;
}

AttackOutcome fermat_baseline(const Natural& n, std::uint64_t budget) {
    return fermat_search(n, fermat_floor(n), budget);
}

Natural search_cost(const Natural& n, const Integer& start_sum, const Integer& true_sum) {
    const Integer e = round_up_even(start_sum);
    const Integer m0 = fermat_floor(n);
    if (mpz_odd_p(true_sum.get_mpz_t()) || true_sum < m0)
        throw DomainError("search_cost: true_sum must be even and >= fermat_floor(n)");
    const Integer d = (true_sum - e) / 2;
    Integer position, lower_count, upper_count;  // upper_count includes e itself
    if (d == 0) {
        return 1;
    } else if (d < 0) {
        position = -2 * d;
        lower_count = -d - 1;
        upper_count = -d;
    } else {
        position = 2 * d + 1;
        lower_count = d;
        upper_count = d;
    }
    const Integer h = (e - m0) / 2;
    const Integer skipped_lower = lower_count - clamp(h, 0, lower_count);
    const Integer skipped_upper = clamp(Integer(-h), 0, upper_count);
    return position - skipped_lower - skipped_upper;
}

Natural directed_cost(const Natural& window) {
    Natural half;
    mpz_cdiv_q_2exp(half.get_mpz_t(), window.get_mpz_t(), 1);
    return half + 1;
}

WindowReport window_report(const LinearModel& model, std::span<const RsaSample> samples) {
    if (!model.has_half_slope()) throw DomainError("window_report needs a slope-1/2 model");
    WindowReport report;
    report.entries.reserve(samples.size());
    Natural total_window = 0, total_cost = 0;
    for (const auto& s : samples) {
        WindowEntry e;
        e.n = s.n;
        e.true_sum = s.p + s.q;
        e.predicted_sum = predicted_sum(model, s.n);
        e.window = abs(e.true_sum - e.predicted_sum);
        e.directed_cost = directed_cost(e.window);
        e.search_cost = search_cost(s.n, e.predicted_sum, e.true_sum);
        total_window += e.window;
        total_cost += e.search_cost;
        report.entries.push_back(std::move(e));
    }
    auto& sum = report.summary;
    sum.count = samples.size();
    if (report.entries.empty()) return report;

    std::vector<Natural> windows;
    windows.reserve(report.entries.size());
    for (const auto& e : report.entries) windows.push_back(e.window);
    std::sort(windows.begin(), windows.end());
    const std::size_t m = windows.size();
    sum.min_window = windows.front();
    sum.max_window = windows.back();
    sum.median_window = m % 2 ? Rational(windows[m / 2]) : make_rational(windows[m / 2 - 1] + windows[m / 2], 2);
    const Natural count(static_cast<unsigned long>(m));
    sum.mean_window = make_rational(total_window, count);
    sum.mean_search_cost = make_rational(total_cost, count);
    sum.max_window_bits = bit_length(sum.max_window);
    return report;
}

std::string window_csv_header() { return "n,true_sum,predicted_sum,window,window_bits,directed_cost,search_cost"; }

std::string window_csv_row(const WindowEntry& e) {
    return e.n.get_str() + ',' + e.true_sum.get_str() + ',' + e.predicted_sum.get_str() + ',' + e.window.get_str() +
           ',' + std::to_string(bit_length(e.window)) + ',' + e.directed_cost.get_str() + ',' +
           e.search_cost.get_str();
}

nlohmann::json window_summary_json(const WindowSummary& s, unsigned digits) {
    auto field = [&](const Rational& v) {
        auto j = rational_to_json(v);
        j["decimal"] = render_decimal(v, digits);
        return j;
    };
    return {{"count", s.count},
            {"min_window", s.min_window.get_str()},
            {"median_window", field(s.median_window)},
            {"max_window", s.max_window.get_str()},
            {"max_window_bits", s.max_window_bits},
            {"mean_window", field(s.mean_window)},
            {"mean_search_cost", field(s.mean_search_cost)},
            {"searchable", s.max_window_bits <= kMaxSearchWindowBits}};
}

nlohmann::json outcome_json(const AttackOutcome& o) {
    nlohmann::json j{{"success", o.success},
                     {"iterations_used", o.iterations_used},
                     {"start_sum", o.start_sum.get_str()}};
    if (o.success) {
        j["p"] = o.p.get_str();
        j["q"] = o.q.get_str();
    }
    if (o.window) j["window"] = o.window->get_str();
    return j;
}

}  // namespace totient

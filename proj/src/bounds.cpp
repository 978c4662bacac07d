#include "totient/bounds.hpp"

#include <cmath>

#include "totient/errors.hpp"

namespace totient {

BigFloat sierpinski_upper(const Natural& n, unsigned precision) {
    require_natural(n, "sierpinski_upper");
    BigFloat root(n, precision, MPFR_RNDD);
    mpfr_sqrt(root.get(), root.get(), MPFR_RNDD);  // <= sqrt(n)
    BigFloat out(n, precision, MPFR_RNDU);           // >= n
    mpfr_sub(out.get(), out.get(), root.get(), MPFR_RNDU);
    return out;
}

Natural kendall_lower(const Natural& n) {
    if (n <= 30) throw DomainError("kendall_lower: requires n > 30");
    return iroot(n * n, 3);
}

bool exceeds_kendall(const Natural& phi, const Natural& n) {
    Natural cube;
    mpz_pow_ui(cube.get_mpz_t(), phi.get_mpz_t(), 3);
    return cube > n * n;
}

BigFloat hatalova_lower(const Natural& n, unsigned precision) {
    if (n < 3) throw DomainError("hatalova_lower: requires n >= 3");
    BigFloat log_n(n, precision, MPFR_RNDU);
    mpfr_log(log_n.get(), log_n.get(), MPFR_RNDU);  // >= ln n
    BigFloat out(precision);
    mpfr_const_log2(out.get(), MPFR_RNDD);
    BigFloat num(n, precision, MPFR_RNDD);
    mpfr_mul(out.get(), out.get(), num.get(), MPFR_RNDD);
    mpfr_div_2ui(out.get(), out.get(), 1, MPFR_RNDD);
    mpfr_div(out.get(), out.get(), log_n.get(), MPFR_RNDD);
    return out;
}

BigFloat fang_main_term(const Natural& n, unsigned precision) {
    if (n < 16) throw DomainError("fang_main_term: requires n >= 16");
    BigFloat denom(n, precision, MPFR_RNDN);
    mpfr_log(denom.get(), denom.get(), MPFR_RNDN);
    mpfr_log(denom.get(), denom.get(), MPFR_RNDN);
    BigFloat eg(precision);
    mpfr_const_euler(eg.get(), MPFR_RNDN);
    mpfr_exp(eg.get(), eg.get(), MPFR_RNDN);
    mpfr_mul(denom.get(), denom.get(), eg.get(), MPFR_RNDN);
    BigFloat out(n, precision, MPFR_RNDN);
    mpfr_div(out.get(), out.get(), denom.get(), MPFR_RNDN);
    return out;
}

namespace {

BigFloat tightness(const BigFloat& bound, const Natural& phi, unsigned precision) {
    BigFloat out(precision);
    mpfr_sub_z(out.get(), bound.get(), phi.get_mpz_t(), MPFR_RNDN);
    mpfr_div_z(out.get(), out.get(), phi.get_mpz_t(), MPFR_RNDN);
    return out;
}

BigFloat tightness(const Rational& bound, const Natural& phi, unsigned precision) {
    BigFloat out(precision);
    Rational rel = (bound - phi) / phi;
    rel.canonicalize();
    mpfr_set_q(out.get(), rel.get_mpq_t(), MPFR_RNDN);
    return out;
}

unsigned decimal_digits_for(unsigned precision) {
    return static_cast<unsigned>(std::ceil(precision * 0.30102999566398120)) + 1;
}

std::string verdict(const std::optional<bool>& v) {
    if (!v) return "";
    return *v ? "pass" : "fail";
}

}  // namespace

BoundReport compare(const Natural& n, const std::optional<std::pair<Natural, Natural>>& factors,
                    const LinearModel* model, unsigned precision) {
    require_natural(n, "compare");
    if (n < 1) throw DomainError("compare: n must be >= 1");
    BoundReport r;
    r.n = n;
    r.precision = precision;
    r.sierpinski_upper = sierpinski_upper(n, precision);

    if (factors) {
        const auto& [p, q] = *factors;
        if (p * q != n) throw DomainError("compare: p*q != n");
        if (p == q) throw DomainError("compare: p == q, not a squarefree semiprime");
        r.phi = (p - 1) * (q - 1);
    }
    if (model) {
        r.learned_lower_exact = phi_lower_bound(*model, n);
        r.learned_lower = floor(*r.learned_lower_exact);
    }
    if (n > 30) r.kendall_lower = kendall_lower(n);
    if (n >= 3) r.hatalova_lower = hatalova_lower(n, precision);
    if (n >= 16) r.fang_main_term = fang_main_term(n, precision);

    if (!r.phi || *r.phi == 0) return r;
    const Natural& phi = *r.phi;
    r.sierpinski_ok = r.sierpinski_upper.compare(phi) >= 0;
    r.sierpinski_tightness = tightness(r.sierpinski_upper, phi, precision);
    if (r.kendall_lower) {
        r.kendall_ok = exceeds_kendall(phi, n);
        r.kendall_tightness = tightness(Rational(*r.kendall_lower), phi, precision);
    }
    if (r.hatalova_lower) {
        r.hatalova_ok = r.hatalova_lower->compare(phi) < 0;
        r.hatalova_tightness = tightness(*r.hatalova_lower, phi, precision);
    }
    if (r.learned_lower_exact) {
        r.learned_ok = *r.learned_lower_exact < phi;
        r.learned_tightness = tightness(*r.learned_lower_exact, phi, precision);
    }
    if (r.fang_main_term) r.fang_tightness = tightness(*r.fang_main_term, phi, precision);
    return r;
}

std::string bounds_csv_header() {
    return "n,phi,learned_lower,kendall_lower,hatalova_lower,sierpinski_upper,fang_main_term,"
           "learned_ok,kendall_ok,hatalova_ok,sierpinski_ok";
}

std::string bounds_csv_row(const BoundReport& r) {
    const unsigned digits = decimal_digits_for(r.precision);
    std::string row = r.n.get_str();
    row += ',' + (r.phi ? r.phi->get_str() : "");
    row += ',' + (r.learned_lower ? r.learned_lower->get_str() : "");
    row += ',' + (r.kendall_lower ? r.kendall_lower->get_str() : "");
    row += ',' + (r.hatalova_lower ? r.hatalova_lower->to_string(digits, MPFR_RNDD) : "");
    row += ',' + r.sierpinski_upper.to_string(digits, MPFR_RNDU);
    row += ',' + (r.fang_main_term ? r.fang_main_term->to_string(digits, MPFR_RNDN) : "");
    row += ',' + verdict(r.learned_ok);
    row += ',' + verdict(r.kendall_ok);
    row += ',' + verdict(r.hatalova_ok);
    row += ',' + verdict(r.sierpinski_ok);
    return row;
}

}  // namespace totient

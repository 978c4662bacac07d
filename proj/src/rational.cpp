#include "totient/rational.hpp"

#include <algorithm>
#include <cctype>

#include "totient/errors.hpp"

namespace totient {

Rational make_rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

mpz_class floor(const Rational& r) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

mpz_class ceil(const Rational& r) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

mpz_class round_nearest(const Rational& r) {
    const Rational half(1, 2);
    if (r >= 0) return floor(Rational(r + half));
    return ceil(Rational(r - half));
}

bool parse_decimal(const std::string& text, mpz_class& out) {
    if (text.empty()) return false;
    if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) return false;
    return out.set_str(text, 10) == 0;
}

bool parse_signed_decimal(const std::string& text, mpz_class& out) {
    if (!text.empty() && text.front() == '-') {
        if (!parse_decimal(text.substr(1), out)) return false;
        out = -out;
        return true;
    }
    return parse_decimal(text, out);
}

bool parse_rational(const std::string& text, Rational& out) {
    const auto slash = text.find('/');
    mpz_class num, den = 1;
    if (slash == std::string::npos) {
        if (!parse_signed_decimal(text, num)) return false;
    } else {
        if (!parse_signed_decimal(text.substr(0, slash), num)) return false;
        if (!parse_decimal(text.substr(slash + 1), den) || den == 0) return false;
    }
    out = make_rational(num, den);
    return true;
}

}  // namespace totient

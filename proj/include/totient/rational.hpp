#pragma once

#include <string>

#include <gmpxx.h>

namespace totient {

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = mpq_class;

/// num/den in lowest terms. Throws DomainError for den == 0.
Rational make_rational(const mpz_class& num, const mpz_class& den);

mpz_class floor(const Rational& r);
mpz_class ceil(const Rational& r);

/// Nearest integer, ties away from zero.
mpz_class round_nearest(const Rational& r);

/// Parses an unsigned base-10 integer: digits only, no sign, no whitespace.
/// Returns false on anything else.
bool parse_decimal(const std::string& text, mpz_class& out);

/// As parse_decimal but accepts a single leading '-'.
bool parse_signed_decimal(const std::string& text, mpz_class& out);

/// Parses "a/b" or a plain integer into a canonical rational.
bool parse_rational(const std::string& text, Rational& out);

}  // namespace totient

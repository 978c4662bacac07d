#include "totient/ntheory.hpp"

#include <array>
#include <cassert>

#include "totient/errors.hpp"
#include "totient/rng.hpp"

namespace totient {

namespace {

constexpr std::array<std::uint64_t, 12> kWitnesses64 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

constexpr std::array<unsigned, 24> kSmallPrimes = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                   43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// One Miller-Rabin round: n - 1 = d * 2^s with d odd.
bool witness_passes_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
    a %= n;
    if (a == 0) return true;
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool witness_passes(const Natural& n, const Natural& a, const Natural& d, unsigned long s) {
    const Natural n_minus_1 = n - 1;
    Natural x = mod_pow(a, d, n);
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

bool fits_u64(const Natural& n) { return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const Natural& n) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
    return out;
}

}  // namespace

PrimalityPolicy PrimalityPolicy::probabilistic(unsigned rounds) {
    if (rounds == 0) throw DomainError("PrimalityPolicy: probabilistic mode needs rounds >= 1");
    return {Mode::probabilistic, rounds};
}

void require_natural(const Integer& n, const char* what) {
    if (n < 0) throw DomainError(std::string(what) + ": negative value");
}

std::size_t bit_length(const Natural& n) {
    return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus) {
    require_natural(exponent, "mod_pow exponent");
    if (modulus <= 0) throw DomainError("mod_pow: modulus must be >= 1");
    Natural out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : kWitnesses64) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : kWitnesses64)
        if (!witness_passes_u64(n, a, d, s)) return false;
    return true;
}

bool is_probable_prime(const Natural& n, const PrimalityPolicy& policy, RngStream& rng) {
    if (n < 2) return false;
    const bool small = fits_u64(n);
    if (small && policy.mode == PrimalityPolicy::Mode::deterministic_small) return is_prime_u64(to_u64(n));
    if (n == 2) return true;
    if (mpz_even_p(n.get_mpz_t())) return false;
    for (unsigned p : kSmallPrimes) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }

    Natural d = n - 1;
    const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    const Natural lo = 2;
    const Natural hi = n - 2;
    const unsigned rounds = policy.rounds == 0 ? 1 : policy.rounds;
    for (unsigned i = 0; i < rounds; ++i) {
        const Natural a = rng.uniform(lo, hi);
        if (!witness_passes(n, a, d, s)) return false;
    }
    return true;
}

Natural isqrt(const Natural& n) {
    require_natural(n, "isqrt");
    if (n < 2) return n;
    // 2^ceil(bits/2) is an upper bound on sqrt(n); Newton then decreases monotonically.
    Natural x = 1;
    x <<= (bit_length(n) + 1) / 2;
    for (;;) {
        Natural y = (x + n / x) >> 1;
        if (y >= x) break;
        x = std::move(y);
    }
    assert(x * x <= n && (x + 1) * (x + 1) > n);
    return x;
}

Natural iroot(const Natural& n, unsigned k) {
    if (k == 0) throw DomainError("iroot: k must be >= 1");
    require_natural(n, "iroot");
    if (k == 1 || n < 2) return n;
    Natural x = 1;
    x <<= (bit_length(n) + k - 1) / k;
    Natural xk1;
    for (;;) {
        mpz_pow_ui(xk1.get_mpz_t(), x.get_mpz_t(), k - 1);
        Natural y = ((k - 1) * x + n / xk1) / k;
        if (y >= x) break;
        x = std::move(y);
    }
#ifndef NDEBUG
    Natural lo, hi;
    mpz_pow_ui(lo.get_mpz_t(), x.get_mpz_t(), k);
    Natural x1 = x + 1;
    mpz_pow_ui(hi.get_mpz_t(), x1.get_mpz_t(), k);
    assert(lo <= n && n < hi);
#endif
    return x;
}

std::pair<bool, Natural> is_perfect_square(const Natural& n) {
    if (n < 0) return {false, Natural(0)};
    Natural r = isqrt(n);
    const bool square = r * r == n;
    return {square, std::move(r)};
}

}  // namespace totient

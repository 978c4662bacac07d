#pragma once

#include <cstdint>
#include <utility>

#include <gmpxx.h>

namespace totient {

using Natural = mpz_class;
using Integer = mpz_class;

class RngStream;

struct PrimalityPolicy {
    enum class Mode { deterministic_small, probabilistic };

    Mode mode = Mode::deterministic_small;
    // Random witness rounds, used when probabilistic or when n >= 2^64.
    unsigned rounds = 64;

    static PrimalityPolicy deterministic() { return {}; }
    static PrimalityPolicy probabilistic(unsigned rounds);
};

/// base^exponent mod modulus. Throws DomainError for modulus == 0.
Natural mod_pow(const Natural& base, const Natural& exponent, const Natural& modulus);

/// Miller-Rabin. In deterministic_small mode inputs below 2^64 are decided
/// exactly with the witnesses {2, 3, ..., 37}; larger inputs fall back to
/// `policy.rounds` random witnesses drawn from `rng`.
bool is_probable_prime(const Natural& n, const PrimalityPolicy& policy, RngStream& rng);

/// Exact 64-bit Miller-Rabin with the fixed witness set.
bool is_prime_u64(std::uint64_t n);

/// floor(sqrt(n)), Newton iteration on integers.
Natural isqrt(const Natural& n);

/// floor(n^(1/k)). Throws DomainError for k == 0.
Natural iroot(const Natural& n, unsigned k);

/// (true, r) with r*r == n, or (false, floor(sqrt(n))).
std::pair<bool, Natural> is_perfect_square(const Natural& n);

/// Number of significant bits; 0 for n == 0.
std::size_t bit_length(const Natural& n);

/// Throws DomainError when n < 0; used to guard Natural-typed inputs.
void require_natural(const Integer& n, const char* what);

}  // namespace totient

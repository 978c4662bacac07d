#pragma once

#include "totient/ntheory.hpp"

namespace totient {

/// Hyperbola coordinates of a modulus: X = 2(n-e)(n+1) - (n-1)^2, Y = 4n(n-e)^2.
/// X is signed because the formula admits arbitrary (n, epsilon) pairs; for a
/// genuine semiprime row it equals n(p+q+4) + p + q and is positive.
struct HyperPoint {
    Integer x;
    Natural y;

    bool operator==(const HyperPoint&) const = default;
};

/// (p-1)(q-1). Throws DomainError when p == q.
Natural totient_semiprime(const Natural& p, const Natural& q);

/// phi/2 - 1. Requires phi even and >= 4.
Natural epsilon_of_phi(const Natural& phi);

/// 2(epsilon + 1).
Natural phi_of_epsilon(const Natural& epsilon);

/// Requires epsilon < n.
HyperPoint hyper_point(const Natural& n, const Natural& epsilon);

/// Counts 1 <= k < n with gcd(k, n) = 1, with the convention f(1) = 1.
/// Test oracle only: n is capped at 10^7.
Natural totient_bruteforce(const Natural& n);

}  // namespace totient

#include "totient/totient.hpp"

#include <numeric>

#include "totient/errors.hpp"

namespace totient {

namespace {
constexpr unsigned long kBruteforceLimit = 10'000'000;
}

Natural totient_semiprime(const Natural& p, const Natural& q) {
    if (p == q) throw DomainError("totient_semiprime: p == q");
    if (p < 2 || q < 2) throw DomainError("totient_semiprime: factors must be primes >= 2");
    return (p - 1) * (q - 1);
}

Natural epsilon_of_phi(const Natural& phi) {
    if (mpz_odd_p(phi.get_mpz_t())) throw DomainError("epsilon_of_phi: phi must be even");
    if (phi < 4) throw DomainError("epsilon_of_phi: phi must be >= 4");
    return phi / 2 - 1;
}

Natural phi_of_epsilon(const Natural& epsilon) {
    require_natural(epsilon, "phi_of_epsilon");
    return 2 * (epsilon + 1);
}

HyperPoint hyper_point(const Natural& n, const Natural& epsilon) {
    require_natural(epsilon, "hyper_point");
    if (epsilon >= n) throw DomainError("hyper_point: epsilon must be < n");
    const Natural d = n - epsilon;
    HyperPoint h;
    h.x = 2 * d * (n + 1) - (n - 1) * (n - 1);
    h.y = 4 * n * d * d;
    return h;
}

Natural totient_bruteforce(const Natural& n) {
    if (n < 1 || n > kBruteforceLimit) throw DomainError("totient_bruteforce: n outside [1, 10^7]");
    const unsigned long m = n.get_ui();
    if (m == 1) return 1;
    unsigned long count = 0;
    for (unsigned long k = 1; k < m; ++k)
        if (std::gcd(k, m) == 1) ++count;
    return count;
}

}  // namespace totient

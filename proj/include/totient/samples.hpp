#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "totient/ntheory.hpp"
#include "totient/rng.hpp"

namespace totient {

/// One dataset row: n = p*q and epsilon = phi(n)/2 - 1.
struct RsaSample {
    Natural p;
    Natural q;
    Natural n;
    Natural epsilon;

    /// Builds a row from two primes, filling n and epsilon.
    static RsaSample from_primes(Natural p, Natural q);

    bool operator==(const RsaSample&) const = default;
};

/// Random prime with exactly `bits` bits (top bit set), by rejection
/// sampling of odd candidates. Requires bits >= 3.
Natural random_prime(unsigned bits, RngStream& rng);

/// Balanced semiprime whose modulus has exactly `modulus_bits` bits, p != q.
/// Requires modulus_bits even and >= 8.
RsaSample generate_sample(unsigned modulus_bits, RngStream& rng);

/// Sample `index` of the dataset identified by (modulus_bits, master_seed).
RsaSample generate_indexed_sample(unsigned modulus_bits, std::uint64_t master_seed, std::uint64_t index);

/// Samples [first, first + out.size()) into `out`, spread over `threads` workers.
void generate_range(unsigned modulus_bits, std::uint64_t master_seed, std::uint64_t first,
                    std::span<RsaSample> out, unsigned threads = 1);

/// Whole dataset in index order; identical for every `threads` value.
std::vector<RsaSample> generate_dataset(unsigned modulus_bits, std::uint64_t count, std::uint64_t master_seed,
                                        unsigned threads = 1);

/// Streams the dataset in index-ordered blocks so that very large counts
/// never have to be held in memory at once.
void generate_dataset_blocks(unsigned modulus_bits, std::uint64_t count, std::uint64_t master_seed,
                             unsigned threads, std::size_t block_size,
                             const std::function<void(std::span<const RsaSample>)>& sink);

/// Checks every RsaSample invariant for `modulus_bits`, including primality.
bool sample_is_valid(const RsaSample& s, unsigned modulus_bits);

void require_modulus_bits(unsigned modulus_bits);

}  // namespace totient

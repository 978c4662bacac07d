#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace totient {

/// SplitMix64 finalizer. Stable across platforms and releases, unlike std::hash.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream identified by (master_seed, stream_index).
/// Streams for different indices are independent, so sample i can be drawn
/// on any worker and still come out the same.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer with exactly `bits` random bits (value < 2^bits).
    mpz_class random_bits(std::size_t bits);

    /// Uniform in [lo, hi]; requires lo <= hi.
    mpz_class uniform(const mpz_class& lo, const mpz_class& hi);

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

}  // namespace totient

#include "totient/samples.hpp"

#include <algorithm>
#include <thread>

#include "totient/errors.hpp"

namespace totient {

namespace {

// Odd primes below 100, for cheap rejection before Miller-Rabin.
constexpr unsigned kSieve[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                               47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool has_small_factor(const Natural& c) {
    for (unsigned p : kSieve) {
        if (c == p) return false;
        if (mpz_divisible_ui_p(c.get_mpz_t(), p)) return true;
    }
    return false;
}

}  // namespace

void require_modulus_bits(unsigned modulus_bits) {
    if (modulus_bits < 8 || modulus_bits % 2 != 0)
        throw DomainError("modulus bit size must be even and >= 8, got " + std::to_string(modulus_bits));
}

RsaSample RsaSample::from_primes(Natural p, Natural q) {
    RsaSample s;
    s.n = p * q;
    s.epsilon = (p - 1) * (q - 1) / 2 - 1;
    s.p = std::move(p);
    s.q = std::move(q);
    return s;
}

Natural random_prime(unsigned bits, RngStream& rng) {
    if (bits < 3) throw DomainError("random_prime: bits must be >= 3");
    const auto policy = PrimalityPolicy::deterministic();
    for (;;) {
        Natural c = rng.random_bits(bits);
        mpz_setbit(c.get_mpz_t(), bits - 1);
        mpz_setbit(c.get_mpz_t(), 0);
        if (has_small_factor(c)) continue;
        if (is_probable_prime(c, policy, rng)) return c;
    }
}

RsaSample generate_sample(unsigned modulus_bits, RngStream& rng) {
    require_modulus_bits(modulus_bits);
    const unsigned half = modulus_bits / 2;
    for (;;) {
        Natural p = random_prime(half, rng);
        Natural q = random_prime(half, rng);
        if (p == q) continue;
        if (bit_length(p * q) != modulus_bits) continue;
        return RsaSample::from_primes(std::move(p), std::move(q));
    }
}

RsaSample generate_indexed_sample(unsigned modulus_bits, std::uint64_t master_seed, std::uint64_t index) {
    RngStream rng(master_seed, index);
    return generate_sample(modulus_bits, rng);
}

void generate_range(unsigned modulus_bits, std::uint64_t master_seed, std::uint64_t first,
                    std::span<RsaSample> out, unsigned threads) {
    require_modulus_bits(modulus_bits);
    const std::size_t total = out.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(total, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) out[i] = generate_indexed_sample(modulus_bits, master_seed, first + i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < total; i += workers)
                out[i] = generate_indexed_sample(modulus_bits, master_seed, first + i);
        });
    }
}

std::vector<RsaSample> generate_dataset(unsigned modulus_bits, std::uint64_t count, std::uint64_t master_seed,
                                        unsigned threads) {
    std::vector<RsaSample> out(count);
    generate_range(modulus_bits, master_seed, 0, out, threads);
    return out;
}

void generate_dataset_blocks(unsigned modulus_bits, std::uint64_t count, std::uint64_t master_seed,
                             unsigned threads, std::size_t block_size,
                             const std::function<void(std::span<const RsaSample>)>& sink) {
    require_modulus_bits(modulus_bits);
    block_size = std::max<std::size_t>(block_size, 1);
    std::vector<RsaSample> block;
    for (std::uint64_t first = 0; first < count; first += block_size) {
        block.resize(std::min<std::uint64_t>(block_size, count - first));
        generate_range(modulus_bits, master_seed, first, block, threads);
        sink(block);
    }
}

bool sample_is_valid(const RsaSample& s, unsigned modulus_bits) {
    if (s.p == s.q) return false;
    if (mpz_even_p(s.p.get_mpz_t()) || mpz_even_p(s.q.get_mpz_t())) return false;
    if (s.n != s.p * s.q) return false;
    if (bit_length(s.n) != modulus_bits) return false;
    if (s.epsilon != (s.p - 1) * (s.q - 1) / 2 - 1) return false;
    if (mpz_even_p(s.epsilon.get_mpz_t())) return false;
    if (2 * (s.epsilon + 1) != (s.p - 1) * (s.q - 1)) return false;
    RngStream rng(0, 0);
    const auto policy = PrimalityPolicy::deterministic();
    return is_probable_prime(s.p, policy, rng) && is_probable_prime(s.q, policy, rng);
}

}  // namespace totient

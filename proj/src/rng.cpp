#include "totient/rng.hpp"

#include <stdexcept>
#include <vector>

#include "totient/errors.hpp"

namespace totient {

namespace {

std::seed_seq make_seed(std::uint64_t master, std::uint64_t index) {
    const std::uint64_t a = mix64(master);
    const std::uint64_t b = mix64(index ^ 0x5851f42d4c957f2dULL);
    return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                         static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                         static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
    auto seq = make_seed(master_seed, stream_index);
    engine_.seed(seq);
}

mpz_class RngStream::random_bits(std::size_t bits) {
    mpz_class out = 0;
    if (bits == 0) return out;
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    for (auto& w : buf) w = engine_();
    const std::size_t excess = words * 64 - bits;
    if (excess) buf.back() >>= excess;
    // Least significant word first.
    mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    return out;
}

mpz_class RngStream::uniform(const mpz_class& lo, const mpz_class& hi) {
    if (lo > hi) throw DomainError("RngStream::uniform: empty range");
    const mpz_class span = hi - lo + 1;
    const std::size_t bits = mpz_sizeinbase(span.get_mpz_t(), 2);
    for (;;) {
        mpz_class r = random_bits(bits);
        if (r < span) return lo + r;
    }
}

}  // namespace totient

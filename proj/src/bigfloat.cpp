#include "totient/bigfloat.hpp"

#include <algorithm>
#include <utility>

#include "totient/errors.hpp"

namespace totient {

BigFloat::BigFloat(unsigned precision_bits) {
    if (precision_bits < 53) throw DomainError("BigFloat precision must be >= 53 bits");
    mpfr_init2(value_, precision_bits);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const mpz_class& value, unsigned precision_bits, mpfr_rnd_t rnd) : BigFloat(precision_bits) {
    mpfr_set_z(value_, value.get_mpz_t(), rnd);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    // MPFR has no move primitive; swap with a fresh minimal value.
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(BigFloat other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(unsigned digits, mpfr_rnd_t rnd) const {
    digits = std::max(digits, 1u);
    char* buf = nullptr;
    const char rc = rnd == MPFR_RNDU ? 'U' : rnd == MPFR_RNDD ? 'D' : rnd == MPFR_RNDZ ? 'Z' : 'N';
    const std::string fmt = std::string("%.*R") + rc + "e";
    if (mpfr_asprintf(&buf, fmt.c_str(), static_cast<int>(digits - 1), value_) < 0)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

}  // namespace totient

#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace totient {

inline constexpr unsigned kDefaultBoundPrecision = 128;

/// RAII wrapper over an MPFR value. Every producing operation takes an
/// explicit rounding direction so bound evaluations can round to the safe side.
class BigFloat {
public:
    explicit BigFloat(unsigned precision_bits = kDefaultBoundPrecision);
    BigFloat(const mpz_class& value, unsigned precision_bits, mpfr_rnd_t rnd);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(BigFloat other) noexcept;
    ~BigFloat();

    unsigned precision() const noexcept { return static_cast<unsigned>(mpfr_get_prec(value_)); }

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }

    /// Sign of (*this - z), exact.
    int compare(const mpz_class& z) const { return mpfr_cmp_z(value_, z.get_mpz_t()); }
    int compare(const BigFloat& o) const { return mpfr_cmp(value_, o.value_); }

    bool is_finite() const { return mpfr_number_p(value_) != 0; }

    /// Scientific notation with `digits` significant digits, rounded in `rnd`.
    std::string to_string(unsigned digits = 25, mpfr_rnd_t rnd = MPFR_RNDN) const;

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

private:
    mpfr_t value_;
};

}  // namespace totient

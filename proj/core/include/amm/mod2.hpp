#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "amm/errors.hpp"

namespace amm {

/**
 * Residue arithmetic modulo 2^w for 1 <= w <= 512.
 *
 * Little-endian 64-bit limbs, width rounded up to whole limbs internally but
 * logically truncated to w after every operation (the top limb is masked
 * eagerly, so limbs always hold the canonical value < 2^w). Values are
 * immutable in spirit: every operation returns a fresh residue, nothing here
 * locks or shares state.
 */
class Residue2 {
public:
    static constexpr uint32_t max_width = 512;
    static constexpr uint32_t max_limbs = max_width / 64;

    Residue2() : Residue2(1) {}
    explicit Residue2(uint32_t width) : width_(check_width(width)), limbs_{} {}

    static Residue2 from_u64(uint64_t v, uint32_t width);
    static Residue2 from_mpz(const mpz_class& v, uint32_t width);

    uint32_t width() const { return width_; }
    uint32_t limb_count() const { return (width_ + 63) / 64; }
    uint64_t limb(uint32_t i) const { return limbs_[i]; }

    bool is_zero() const;
    bool bit(uint32_t i) const { return (limbs_[i / 64] >> (i % 64)) & 1; }
    /// 2-adic valuation of the residue; requires a nonzero residue.
    uint32_t ctz() const;
    /// Low 64 bits (the full value when width <= 64).
    uint64_t low_u64() const { return limbs_[0]; }
    mpz_class to_mpz() const;

    /// Value reinterpreted at a different width; narrowing truncates mod 2^w,
    /// widening zero-extends. Width changes are always explicit.
    Residue2 with_width(uint32_t w) const;

    Residue2 operator+(const Residue2& o) const;
    Residue2 operator-(const Residue2& o) const;
    Residue2 operator*(const Residue2& o) const;
    Residue2 mul_u64(uint64_t m) const;
    Residue2& operator+=(const Residue2& o) { return *this = *this + o; }
    Residue2& operator-=(const Residue2& o) { return *this = *this - o; }
    Residue2& operator*=(const Residue2& o) { return *this = *this * o; }

    bool operator==(const Residue2& o) const;
    bool operator!=(const Residue2& o) const { return !(*this == o); }

private:
    static uint32_t check_width(uint32_t w);
    void mask_top();
    static void check_same_width(const Residue2& a, const Residue2& b);

    uint32_t width_;
    std::array<uint64_t, max_limbs> limbs_;
};

/// nu2(z) = exponent of 2 in z. Undefined at zero: rejected.
uint32_t nu2(uint64_t z);
unsigned long nu2(const mpz_class& z);

/// t^e mod 2^w with square-and-multiply; 0^0 = 1.
Residue2 pow_mod2(uint64_t t, uint64_t e, uint32_t w);
/// t^(2^m) mod 2^w by m squarings (exponents too large for a machine word).
Residue2 pow_mod2_2exp(uint64_t t, uint32_t m, uint32_t w);

/// Multiplicative inverse of an odd residue mod 2^w (Hensel/Newton lifting).
Residue2 inv_mod2(const Residue2& a);

/// Digits c_0..c_s of the binary expansion of a = (t^(2^(s+1)) - 1)/2^(s+3),
/// i.e. its low s+1 bits; t odd. These are the coefficients through which
/// t^(2^m) is reconstructed mod 2^(m+s+3) for every m >= s+1.
struct BinDigits {
    uint64_t t = 0;
    uint32_t s = 0;
    std::vector<uint8_t> digits; // digits[i] = c_i, size s+1
};
BinDigits binrep_digits(uint64_t t, uint32_t s);

} // namespace amm

#include "amm/mod2.hpp"

#include <bit>
#include <stdexcept>

namespace amm {

uint32_t Residue2::check_width(uint32_t w) {
    if (w < 1 || w > max_width)
        throw ResourceError("residue-width", w, max_width);
    return w;
}

void Residue2::mask_top() {
    uint32_t nl = limb_count();
    uint32_t top_bits = width_ % 64;
    if (top_bits != 0)
        limbs_[nl - 1] &= (~uint64_t{0}) >> (64 - top_bits);
    for (uint32_t i = nl; i < max_limbs; ++i) limbs_[i] = 0;
}

void Residue2::check_same_width(const Residue2& a, const Residue2& b) {
    if (a.width_ != b.width_)
        throw std::invalid_argument("Residue2: width mismatch (" +
                                    std::to_string(a.width_) + " vs " +
                                    std::to_string(b.width_) + ")");
}

Residue2 Residue2::from_u64(uint64_t v, uint32_t width) {
    Residue2 r(width);
    r.limbs_[0] = v;
    r.mask_top();
    return r;
}

Residue2 Residue2::from_mpz(const mpz_class& v, uint32_t width) {
    if (v < 0) throw std::invalid_argument("Residue2: negative value");
    Residue2 r(width);
    mpz_class tmp = v;
    for (uint32_t i = 0; i < r.limb_count() && tmp != 0; ++i) {
        r.limbs_[i] = mpz_get_ui(mpz_class(tmp & mpz_class(~uint64_t{0})).get_mpz_t());
        tmp >>= 64;
    }
    r.mask_top();
    return r;
}

bool Residue2::is_zero() const {
    for (uint32_t i = 0; i < limb_count(); ++i)
        if (limbs_[i] != 0) return false;
    return true;
}

uint32_t Residue2::ctz() const {
    for (uint32_t i = 0; i < limb_count(); ++i)
        if (limbs_[i] != 0)
            return i * 64 + static_cast<uint32_t>(std::countr_zero(limbs_[i]));
    throw std::domain_error("Residue2::ctz: zero residue has no 2-adic valuation");
}

mpz_class Residue2::to_mpz() const {
    mpz_class out = 0;
    for (uint32_t i = limb_count(); i-- > 0;) {
        out <<= 64;
        mpz_class limb;
        mpz_import(limb.get_mpz_t(), 1, 1, sizeof(uint64_t), 0, 0, &limbs_[i]);
        out += limb;
    }
    return out;
}

Residue2 Residue2::with_width(uint32_t w) const {
    Residue2 r(w);
    r.limbs_ = limbs_;
    r.mask_top();
    return r;
}

Residue2 Residue2::operator+(const Residue2& o) const {
    check_same_width(*this, o);
    Residue2 r(width_);
    unsigned __int128 carry = 0;
    for (uint32_t i = 0; i < limb_count(); ++i) {
        carry += limbs_[i];
        carry += o.limbs_[i];
        r.limbs_[i] = static_cast<uint64_t>(carry);
        carry >>= 64;
    }
    r.mask_top();
    return r;
}

Residue2 Residue2::operator-(const Residue2& o) const {
    check_same_width(*this, o);
    Residue2 r(width_);
    uint64_t borrow = 0;
    for (uint32_t i = 0; i < limb_count(); ++i) {
        uint64_t a = limbs_[i], b = o.limbs_[i];
        uint64_t d = a - b - borrow;
        borrow = (a < b + borrow) || (b == ~uint64_t{0} && borrow);
        r.limbs_[i] = d;
    }
    r.mask_top();
    return r;
}

Residue2 Residue2::operator*(const Residue2& o) const {
    check_same_width(*this, o);
    Residue2 r(width_);
    uint32_t nl = limb_count();
    // schoolbook, truncated: only columns below the width survive
    for (uint32_t i = 0; i < nl; ++i) {
        if (limbs_[i] == 0) continue;
        unsigned __int128 carry = 0;
        for (uint32_t j = 0; j + i < nl; ++j) {
            carry += static_cast<unsigned __int128>(limbs_[i]) * o.limbs_[j];
            carry += r.limbs_[i + j];
            r.limbs_[i + j] = static_cast<uint64_t>(carry);
            carry >>= 64;
        }
    }
    r.mask_top();
    return r;
}

Residue2 Residue2::mul_u64(uint64_t m) const {
    Residue2 r(width_);
    unsigned __int128 carry = 0;
    for (uint32_t i = 0; i < limb_count(); ++i) {
        carry += static_cast<unsigned __int128>(limbs_[i]) * m;
        r.limbs_[i] = static_cast<uint64_t>(carry);
        carry >>= 64;
    }
    r.mask_top();
    return r;
}

bool Residue2::operator==(const Residue2& o) const {
    if (width_ != o.width_) return false;
    for (uint32_t i = 0; i < limb_count(); ++i)
        if (limbs_[i] != o.limbs_[i]) return false;
    return true;
}

uint32_t nu2(uint64_t z) {
    if (z == 0) throw std::invalid_argument("nu2: undefined at zero");
    return static_cast<uint32_t>(std::countr_zero(z));
}

unsigned long nu2(const mpz_class& z) {
    if (z == 0) throw std::invalid_argument("nu2: undefined at zero");
    return mpz_scan1(z.get_mpz_t(), 0);
}

Residue2 pow_mod2(uint64_t t, uint64_t e, uint32_t w) {
    Residue2 acc = Residue2::from_u64(1, w);
    Residue2 base = Residue2::from_u64(t, w);
    while (e != 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Residue2 pow_mod2_2exp(uint64_t t, uint32_t m, uint32_t w) {
    Residue2 acc = Residue2::from_u64(t, w);
    for (uint32_t i = 0; i < m; ++i) acc *= acc;
    return acc;
}

Residue2 inv_mod2(const Residue2& a) {
    if (!a.bit(0)) throw std::invalid_argument("inv_mod2: even residue has no inverse");
    uint32_t w = a.width();
    Residue2 x = Residue2::from_u64(1, w);
    Residue2 two = Residue2::from_u64(2, w);
    // doubles the number of correct low bits each round
    for (uint32_t bits = 1; bits < w; bits *= 2) x = x * (two - a * x);
    return x;
}

BinDigits binrep_digits(uint64_t t, uint32_t s) {
    if (t % 2 == 0) throw std::invalid_argument("binrep_digits: t must be odd");
    uint32_t w = 2 * s + 4; // bits s+3 .. 2s+3 of t^(2^(s+1)) - 1 are the digits
    Residue2 p = pow_mod2_2exp(t, s + 1, w);
    Residue2 am = p - Residue2::from_u64(1, w);
    for (uint32_t i = 0; i < s + 3; ++i)
        if (am.bit(i)) throw std::logic_error("binrep_digits: 2^(s+3) must divide t^(2^(s+1))-1");
    BinDigits out;
    out.t = t;
    out.s = s;
    out.digits.resize(s + 1);
    for (uint32_t i = 0; i <= s; ++i) out.digits[i] = am.bit(s + 3 + i) ? 1 : 0;
    return out;
}

} // namespace amm

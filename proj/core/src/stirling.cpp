#include "amm/stirling.hpp"

#include <bit>
#include <stdexcept>

namespace amm {

mpz_class stirling_exact(uint64_t n, uint32_t k, uint64_t oracle_bound) {
    if (n > oracle_bound)
        throw ResourceError("oracle-bound", n, oracle_bound);
    if (k > n) return 0;
    std::vector<mpz_class> row(k + 1, 0);
    row[0] = 1; // S(0,0)
    for (uint64_t i = 1; i <= n; ++i) {
        uint32_t top = static_cast<uint32_t>(std::min<uint64_t>(i, k));
        for (uint32_t j = top; j >= 1; --j)
            row[j] = j * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

mpz_class stirling_exact(const StirlingQuery& q, uint64_t oracle_bound) {
    return stirling_exact(q.n, q.k, oracle_bound);
}

StirlingRowMod2::StirlingRowMod2(uint32_t k, uint32_t width)
    : k_(k), width_(width), narrow_(width <= 64) {
    if (narrow_) {
        mask_ = width == 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
        row64_.assign(k_ + 1, 0);
        row64_[0] = 1;
    } else {
        row_.assign(k_ + 1, Residue2(width));
        row_[0] = Residue2::from_u64(1, width);
    }
}

void StirlingRowMod2::advance() {
    ++n_;
    uint32_t top = static_cast<uint32_t>(std::min<uint64_t>(n_, k_));
    if (narrow_) {
        for (uint32_t j = top; j >= 1; --j)
            row64_[j] = (j * row64_[j] + row64_[j - 1]) & mask_;
        row64_[0] = 0;
    } else {
        for (uint32_t j = top; j >= 1; --j)
            row_[j] = row_[j].mul_u64(j) + row_[j - 1];
        row_[0] = Residue2(width_);
    }
}

Residue2 StirlingRowMod2::value() const {
    if (narrow_) return Residue2::from_u64(row64_[k_], width_);
    return row_[k_];
}

uint64_t StirlingRowMod2::value_u64() const {
    return narrow_ ? row64_[k_] : row_[k_].low_u64();
}

Residue2 stirling_mod2(uint64_t n, uint32_t k, uint32_t w) {
    if (n < k) return Residue2(w);
    StirlingRowMod2 row(k, w);
    while (row.n() < n) row.advance();
    return row.value();
}

Residue2 stirling_sum_mod2(uint64_t n, uint32_t k, uint32_t w) {
    if (k < 1 || n < k)
        throw std::invalid_argument("stirling_sum_mod2: requires n >= k >= 1");
    uint32_t v = nu2_factorial(k);
    uint32_t wide = w + v;
    if (wide > Residue2::max_width)
        throw ResourceError("residue-width", wide, Residue2::max_width);

    // (-1)^k * sum_t (-1)^t C(k,t) t^n  =  k! * S(n,k)
    Residue2 acc(wide);
    mpz_class binom;
    for (uint32_t t = 1; t <= k; ++t) {
        mpz_bin_uiui(binom.get_mpz_t(), k, t);
        Residue2 term = Residue2::from_mpz(binom, wide) * pow_mod2(t, n, wide);
        if ((k + t) % 2 == 0) acc += term;
        else acc -= term;
    }

    mpz_class whole = acc.to_mpz();
    if (mpz_scan1(whole.get_mpz_t(), 0) < v && whole != 0)
        throw std::logic_error("stirling_sum_mod2: sum not divisible by 2^nu2(k!)");
    whole >>= v;

    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), k);
    fact >>= v; // odd part
    Residue2 inv = inv_mod2(Residue2::from_mpz(fact, w));
    return Residue2::from_mpz(whole, w) * inv;
}

uint32_t nu2_stirling(uint64_t n, uint32_t k, uint32_t width_hint,
                      uint64_t oracle_bound) {
    if (k < 1 || n < k)
        throw std::invalid_argument("nu2_stirling: requires n >= k >= 1");
    for (uint32_t w = 8; w <= Residue2::max_width; w *= 2) {
        if (w < width_hint) continue;
        Residue2 r = stirling_mod2(n, k, w);
        if (!r.is_zero()) return r.ctz();
    }
    if (n <= oracle_bound)
        return static_cast<uint32_t>(nu2(stirling_exact(n, k, oracle_bound)));
    throw ResourceError("nu2-escalation", n, oracle_bound);
}

uint32_t nu2_factorial(uint32_t k) {
    return k - static_cast<uint32_t>(std::popcount(k));
}

uint32_t b_of_k(uint32_t k) {
    if (k < 5) throw std::invalid_argument("b_of_k: requires k >= 5");
    return static_cast<uint32_t>(std::bit_width(k - 1)) - 2;
}

} // namespace amm

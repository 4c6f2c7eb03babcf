#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "amm/mod2.hpp"

namespace amm {

struct StirlingQuery {
    uint64_t n;
    uint32_t k;
};

inline constexpr uint64_t default_oracle_bound = 8192;

/// Exact S(n,k) via the row recurrence; the reference oracle for everything
/// in this library. Guarded by a row bound because values grow like k^n.
mpz_class stirling_exact(uint64_t n, uint32_t k,
                         uint64_t oracle_bound = default_oracle_bound);
mpz_class stirling_exact(const StirlingQuery& q,
                         uint64_t oracle_bound = default_oracle_bound);

/**
 * Rolling row of S(n, 0..k) mod 2^width, advanced one n at a time with
 * S(n+1,j) = j*S(n,j) + S(n,j-1) updated in place (descending j).
 * This is the workhorse behind the residue screens: one pass over n serves
 * every congruence class at once. Widths <= 64 run on raw machine words.
 */
class StirlingRowMod2 {
public:
    StirlingRowMod2(uint32_t k, uint32_t width);

    void advance();
    uint64_t n() const { return n_; }
    uint32_t k() const { return k_; }
    uint32_t width() const { return width_; }

    /// S(n, k) mod 2^width for the current n.
    Residue2 value() const;
    /// Same, low 64 bits only (exact when width <= 64).
    uint64_t value_u64() const;

private:
    uint32_t k_;
    uint32_t width_;
    uint64_t n_ = 0;
    bool narrow_;
    uint64_t mask_ = 0;
    std::vector<uint64_t> row64_;
    std::vector<Residue2> row_;
};

/// S(n,k) mod 2^w by running the row recurrence.
Residue2 stirling_mod2(uint64_t n, uint32_t k, uint32_t w);

/// S(n,k) mod 2^w through the alternating binomial sum: the k! multiple is
/// computed at inflated width w + nu2(k!), the guaranteed power of two is
/// stripped, and the odd part of k! inverted. Requires n >= k >= 1.
Residue2 stirling_sum_mod2(uint64_t n, uint32_t k, uint32_t w);

/**
 * nu2(S(n,k)) for n >= k >= 1. Escalates the residue width 8, 16, 32, ...
 * up to the width cap until the residue is nonzero; below the oracle bound
 * an exact fallback settles anything the cap misses. width_hint skips the
 * schedule ahead when a lower bound on the valuation is already known.
 */
uint32_t nu2_stirling(uint64_t n, uint32_t k, uint32_t width_hint = 0,
                      uint64_t oracle_bound = default_oracle_bound);

/// nu2(k!) = k - popcount(k) (Legendre).
uint32_t nu2_factorial(uint32_t k);
/// b_k = ceil(log2 k) - 2, defined for k >= 5.
uint32_t b_of_k(uint32_t k);

} // namespace amm

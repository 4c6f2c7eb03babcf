#pragma once

#include <cstdint>

#include <gmpxx.h>

// Reference values computed by a deliberately different algorithm from the
// library: the explicit alternating binomial sum over arbitrary-precision
// integers, divided by k! exactly.  Anything the library computes modulo a
// power of two can be checked against these.
namespace oracle {

inline mpz_class stirling(uint64_t n, uint64_t k) {
    if (k == 0) return n == 0 ? 1 : 0;
    mpz_class acc = 0;
    for (uint64_t t = 1; t <= k; ++t) {
        mpz_class term;
        mpz_bin_uiui(term.get_mpz_t(), static_cast<unsigned long>(k),
                     static_cast<unsigned long>(t));
        mpz_class power;
        mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(t),
                      static_cast<unsigned long>(n));
        term *= power;
        if ((k - t) % 2 == 1) {
            acc -= term;
        } else {
            acc += term;
        }
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
    return acc / fact;
}

inline uint64_t nu2(const mpz_class& z) {
    return mpz_scan1(z.get_mpz_t(), 0);
}

inline uint64_t nu2_stirling(uint64_t n, uint64_t k) {
    return nu2(stirling(n, k));
}

inline mpz_class mod_pow2(const mpz_class& z, uint32_t bits) {
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), z.get_mpz_t(), bits);
    return r;
}

inline bool congruent_pow2(const mpz_class& a, const mpz_class& b, uint32_t bits) {
    return mod_pow2(a - b, bits) == 0;
}

}  // namespace oracle

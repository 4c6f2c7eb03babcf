#include "amm/fcheck.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <thread>

#include "amm/errors.hpp"
#include "amm/stirling.hpp"

namespace amm {

namespace {

constexpr uint32_t kMaxScanLevel = 26;  // verdict storage: 2^level entries

uint64_t pow_u64(uint64_t base, uint64_t exp) {
    // Exact arithmetic mod 2^64; callers mask down to the working modulus.
    uint64_t acc = 1;
    while (exp != 0) {
        if (exp & 1) acc *= base;
        base *= base;
        exp >>= 1;
    }
    return acc;
}

uint64_t binom_u64(uint64_t k, uint64_t t) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(t));
    mpz_class low = b & mpz_class(~uint64_t{0});
    return mpz_get_ui(low.get_mpz_t());
}

// Per-term state of the scan kernel: f(n) = sum_i coef[i] * t[i]^n mod 2^modulus_bits.
struct Terms {
    std::vector<uint64_t> t;
    std::vector<uint64_t> coef;  // C(k, t) * (t^(2^(s+1)) - 1) mod 2^64
};

Terms make_terms(const FParams& p) {
    Terms out;
    for (uint64_t t = 3; t <= p.k; t += 2) {
        const uint64_t factor = pow_u64(t, uint64_t{1} << (p.s + 1)) - 1;
        const uint64_t coef = binom_u64(p.k, t) * factor;
        if (coef == 0) continue;  // term is 0 mod 2^64, hence 0 mod 2^(2s+4)
        out.t.push_back(t);
        out.coef.push_back(coef);
    }
    return out;
}

}  // namespace

FParams FParams::make(uint64_t k, uint32_t ell) {
    if (k < 5) throw std::invalid_argument("FParams: requires k >= 5");
    FParams p;
    p.k = k;
    p.ell = ell;
    p.b_k = b_of_k(k);
    const uint64_t lhs = nu2_factorial(k) + ell;
    const uint64_t rhs = uint64_t{p.b_k} + 3;
    if (lhs < rhs) throw std::invalid_argument("FParams: nu2(k!) + ell < b_k + 3");
    const uint64_t s = lhs - rhs;
    const uint64_t bits = 2 * s + 4;
    if (bits > Residue2::max_width) {
        throw ResourceError("f-modulus-bits", bits, Residue2::max_width);
    }
    p.s = static_cast<uint32_t>(s);
    p.modulus_bits = static_cast<uint32_t>(bits);
    return p;
}

Residue2 f_eval(const FParams& p, uint64_t n) {
    const uint32_t w = p.modulus_bits;
    const Residue2 one = Residue2::from_u64(1, w);
    Residue2 acc(w);
    for (uint64_t t = 3; t <= p.k; t += 2) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p.k),
                     static_cast<unsigned long>(t));
        const Residue2 coef = Residue2::from_mpz(b, w);
        const Residue2 factor = pow_mod2_2exp(t, p.s + 1, w) - one;
        acc += coef * factor * pow_mod2(t, n, w);
    }
    return acc;
}

std::vector<Residue2> f_eval_seq(const FParams& p, uint64_t n0, uint64_t count) {
    const uint32_t w = p.modulus_bits;
    const Residue2 one = Residue2::from_u64(1, w);
    std::vector<uint64_t> ts;
    std::vector<Residue2> term;
    std::vector<Residue2> step;
    for (uint64_t t = 3; t <= p.k; t += 2) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p.k),
                     static_cast<unsigned long>(t));
        const Residue2 coef = Residue2::from_mpz(b, w);
        const Residue2 factor = pow_mod2_2exp(t, p.s + 1, w) - one;
        ts.push_back(t);
        term.push_back(coef * factor * pow_mod2(t, n0, w));
        step.push_back(Residue2::from_u64(t, w));
    }
    std::vector<Residue2> out;
    out.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        Residue2 f(w);
        for (const Residue2& v : term) f += v;
        out.push_back(f);
        for (size_t j = 0; j < term.size(); ++j) term[j] *= step[j];
    }
    return out;
}

namespace {

// One worker's pass over n in [n_begin, n_end): records which residues mod
// 2^M saw a zero / nonzero value of f.  Bit arrays are indexed by residue.
void scan_block(const Terms& terms, uint64_t fmask, uint32_t M, uint64_t n_begin,
                uint64_t n_end, std::vector<uint64_t>& zero_bits,
                std::vector<uint64_t>& nonzero_bits) {
    const size_t nt = terms.t.size();
    std::vector<uint64_t> term(nt);
    for (size_t i = 0; i < nt; ++i) {
        term[i] = terms.coef[i] * pow_u64(terms.t[i], n_begin);
    }
    const uint64_t res_mask = (uint64_t{1} << M) - 1;
    for (uint64_t n = n_begin; n < n_end; ++n) {
        uint64_t f = 0;
        for (size_t i = 0; i < nt; ++i) f += term[i];
        f &= fmask;
        const uint64_t j = n & res_mask;
        const uint64_t z = (f == 0) ? 1 : 0;
        zero_bits[j >> 6] |= z << (j & 63);
        nonzero_bits[j >> 6] |= (z ^ 1) << (j & 63);
        for (size_t i = 0; i < nt; ++i) term[i] *= terms.t[i];
    }
}

MixedWitness probe_mixed(const Terms& terms, uint64_t fmask, uint64_t j,
                         uint64_t stride, uint64_t period) {
    const size_t nt = terms.t.size();
    std::vector<uint64_t> term(nt), mul(nt);
    for (size_t i = 0; i < nt; ++i) {
        term[i] = terms.coef[i] * pow_u64(terms.t[i], j);
        mul[i] = pow_u64(terms.t[i], stride);
    }
    MixedWitness w;
    bool have_zero = false, have_nonzero = false;
    for (uint64_t n = j; n < period; n += stride) {
        uint64_t f = 0;
        for (size_t i = 0; i < nt; ++i) f += term[i];
        f &= fmask;
        if (f == 0 && !have_zero) {
            w.zero_n = n;
            have_zero = true;
        } else if (f != 0 && !have_nonzero) {
            w.nonzero_n = n;
            have_nonzero = true;
        }
        if (have_zero && have_nonzero) return w;
        for (size_t i = 0; i < nt; ++i) term[i] *= mul[i];
    }
    throw std::logic_error("scan_residues: mixed class lost its witnesses");
}

}  // namespace

FScanResult scan_residues(const FParams& p, uint32_t M, const ScanOptions& opt) {
    if (M < 1) throw std::invalid_argument("scan_residues: requires M >= 1");
    if (M > kMaxScanLevel) throw ResourceError("scan-level", M, kMaxScanLevel);
    const uint32_t period_bits = std::max(2 * p.s + 2, M);
    if (period_bits > opt.budget_log2_steps) {
        throw ResourceError("scan-steps", period_bits, opt.budget_log2_steps);
    }
    if (p.modulus_bits > 64) {
        // The incremental kernel is 64-bit; wider moduli would need periods
        // beyond any practical budget anyway.
        throw ResourceError("scan-modulus-bits", p.modulus_bits, 64);
    }

    const uint64_t period = uint64_t{1} << period_bits;
    const uint64_t fmask =
        p.modulus_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << p.modulus_bits) - 1;
    const Terms terms = make_terms(p);

    uint32_t workers = opt.threads != 0
                           ? opt.threads
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<uint32_t>(std::min<uint64_t>(workers, period));
    const uint64_t block = (period + workers - 1) / workers;

    const size_t words = (size_t{1} << M) / 64 + 1;
    std::vector<std::vector<uint64_t>> zero_bits(workers, std::vector<uint64_t>(words));
    std::vector<std::vector<uint64_t>> nonzero_bits(workers,
                                                    std::vector<uint64_t>(words));

    auto run = [&](uint32_t w) {
        const uint64_t lo = w * block;
        const uint64_t hi = std::min(period, lo + block);
        if (lo < hi) scan_block(terms, fmask, M, lo, hi, zero_bits[w], nonzero_bits[w]);
    };
    std::vector<std::thread> pool;
    for (uint32_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (std::thread& t : pool) t.join();

    // Merge is a commutative OR, so verdicts cannot depend on the partition.
    for (uint32_t w = 1; w < workers; ++w) {
        for (size_t i = 0; i < words; ++i) {
            zero_bits[0][i] |= zero_bits[w][i];
            nonzero_bits[0][i] |= nonzero_bits[w][i];
        }
    }

    FScanResult out;
    out.params = p;
    out.level = M;
    out.period_bits = period_bits;
    out.steps = period;
    const uint64_t classes = uint64_t{1} << M;
    out.verdicts.resize(classes);
    for (uint64_t j = 0; j < classes; ++j) {
        const bool z = (zero_bits[0][j >> 6] >> (j & 63)) & 1;
        const bool nz = (nonzero_bits[0][j >> 6] >> (j & 63)) & 1;
        if (z && nz) {
            out.verdicts[j] = ClassVerdict::Mixed;
            out.mixed.emplace(j, probe_mixed(terms, fmask, j, classes, period));
        } else if (z) {
            out.verdicts[j] = ClassVerdict::AllZero;
        } else if (nz) {
            out.verdicts[j] = ClassVerdict::AllNonzero;
        } else {
            throw std::logic_error("scan_residues: class never visited");
        }
    }
    return out;
}

}  // namespace amm

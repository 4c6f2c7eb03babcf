#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "amm/mod2.hpp"

namespace amm {

// Parameters of the auxiliary sum
//
//   f_k(n) = sum over odd t in [3, k] of  C(k, t) * t^n * (t^(2^(s+1)) - 1)
//
// reduced modulo 2^(2s+4), where s = nu2(k!) + ell - b_k - 3.  The t = 1 term
// of the defining sum vanishes identically and is omitted.  f_k(n) == 0 is
// equivalent to the valuation class of n being constant one exponent deeper
// than the baseline, which is what the level scans classify.
struct FParams {
    uint64_t k = 0;
    uint32_t ell = 0;
    uint32_t b_k = 0;
    uint32_t s = 0;
    uint32_t modulus_bits = 0;  // 2s + 4

    // Throws std::invalid_argument if k < 5 or ell is too small for s >= 0,
    // ResourceError if the modulus exceeds the residue width cap.
    static FParams make(uint64_t k, uint32_t ell);
};

// Direct evaluation at one point, full generality (width up to the cap).
Residue2 f_eval(const FParams& params, uint64_t n);

// Incremental evaluation at n0, n0+1, ..., n0+count-1 (one modular multiply
// per odd t per step).  Test hook: must agree with f_eval pointwise.
std::vector<Residue2> f_eval_seq(const FParams& params, uint64_t n0, uint64_t count);

enum class ClassVerdict : uint8_t { AllZero, AllNonzero, Mixed };

struct MixedWitness {
    uint64_t zero_n = 0;
    uint64_t nonzero_n = 0;
};

struct ScanOptions {
    uint32_t threads = 0;            // 0 = use available parallelism
    uint32_t budget_log2_steps = 34; // refuse scans longer than 2^budget steps
};

struct FScanResult {
    FParams params;
    uint32_t level = 0;        // residues are classified mod 2^level
    uint32_t period_bits = 0;  // scan covered n in [0, 2^period_bits)
    uint64_t steps = 0;
    std::vector<ClassVerdict> verdicts;   // size 2^level, index = n mod 2^level
    std::map<uint64_t, MixedWitness> mixed;  // one zero and one nonzero n per Mixed class

    ClassVerdict verdict(uint64_t j) const {
        return verdicts[j & ((uint64_t{1} << level) - 1)];
    }
};

// Classifies every residue class mod 2^M by the values f_k takes on it over
// one full period 2^max(2s+2, M).  Deterministic for any worker count.
FScanResult scan_residues(const FParams& params, uint32_t M, const ScanOptions& opt = {});

}  // namespace amm

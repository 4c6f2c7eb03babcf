#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amm/classes.hpp"
#include "amm/fcheck.hpp"

namespace amm {

// Smallest level M at which every stabilisation precondition holds for all
// scan exponents up to max_ell + 1: M >= b_k, 2^M >= M - b_k + nu2(k!),
// M >= s + 1 and 2^M - M >= s + 3 with s taken at ell = max_ell + 1.
uint32_t choose_level(uint64_t k, uint32_t max_ell);

// Memoizes scan_residues per scan exponent for one (k, M) run and totals the
// work performed, so repeated residue lookups share a single scan.
class ScanCache {
public:
    ScanCache(uint64_t k, uint32_t M, const ScanOptions& opt)
        : k_(k), M_(M), opt_(opt) {}

    // May throw ResourceError (budget) like scan_residues itself.
    const FScanResult& at(uint32_t scan_ell);

    uint64_t steps() const { return steps_; }
    uint32_t period_bits_max() const { return period_bits_max_; }
    uint32_t modulus_bits_max() const { return modulus_bits_max_; }

private:
    uint64_t k_;
    uint32_t M_;
    ScanOptions opt_;
    std::map<uint32_t, FScanResult> cache_;
    uint64_t steps_ = 0;
    uint32_t period_bits_max_ = 0;
    uint32_t modulus_bits_max_ = 0;
};

struct EllResult {
    bool found = false;
    uint32_t ell = 0;     // when found
    std::string reason;   // when not found
};

// Smallest ell in [0, max_ell] with: the scan at ell AllZero on j's class
// (constancy one exponent deeper; granted without a scan at ell = 0) and the
// scan at ell + 1 AllNonzero (non-constancy at the next exponent).  Resource
// errors surface as not-found reasons, never as verdicts.
EllResult find_ell(uint64_t k, uint32_t M, uint64_t j, uint32_t max_ell,
                   ScanCache& cache);
EllResult find_ell(uint64_t k, uint32_t M, uint64_t j, uint32_t max_ell,
                   const ScanOptions& opt = {});

enum class FindingStatus { NonConstantBranching, ConstantClass, Unresolved };

struct ResidueFinding {
    uint64_t j = 0;
    FindingStatus status = FindingStatus::Unresolved;
    // NonConstantBranching: the located ell plus a concrete non-constancy
    // witness pair (two members of the class with different valuations).
    uint32_t ell = 0;
    uint64_t witness_a = 0;
    uint64_t witness_b = 0;
    uint32_t nu_a = 0;
    uint32_t nu_b = 0;
    // ConstantClass: the shared valuation.  Recorded for the classes the
    // scans are blind to (auxiliary sum identically zero at every exponent
    // the branching proofs used), where the exponent search must come up
    // empty and constancy is the fallback evidence.
    uint32_t value = 0;
    // Unresolved:
    std::string reason;
};

struct SmallLevel {
    uint32_t m = 0;
    std::vector<uint64_t> nonconstant;  // window labels in [k, k + 2^m)
    bool complete = true;               // false if any class was unresolved
    bool branching_ok = true;  // every nonconstant class has exactly one
                               // nonconstant child one level down
};

enum class Outcome { Verified, Refuted, Inconclusive };

struct ProofCertificate {
    uint64_t k = 0;
    uint32_t b_k = 0;
    uint32_t nu2_k_factorial = 0;
    uint32_t M = 0;
    uint64_t mu_k = 0;
    uint32_t M_k = 0;
    Outcome outcome = Outcome::Inconclusive;
    std::vector<ResidueFinding> findings;   // ascending j: every nonconstant
                                            // class, plus the scan-blind
                                            // constant classes
    std::vector<SmallLevel> small_levels;   // levels 1 .. M-1
    uint32_t scan_modulus_bits = 0;         // widest scan modulus used
    uint32_t scan_period_bits = 0;          // longest scan period used
    uint64_t scan_steps = 0;                // total scan steps across the run
    uint64_t elapsed_ms = 0;
    // Diagnostics, not part of the serialized certificate:
    std::string refutation;             // set when outcome == Refuted
    std::vector<std::string> audit_errors;  // small-level resource failures
};

struct VerifyOptions {
    uint32_t max_ell = 6;
    uint32_t budget_log2_steps = 34;
    uint32_t threads = 0;
    uint64_t oracle_bound = default_oracle_bound;
    bool revalidate = true;  // recheck findings against fresh scans and an
                             // independent class representative
};

// Per-level audit for 1 <= m < M: the nonconstant window labels and whether
// each splits into exactly one nonconstant child.
std::vector<SmallLevel> small_level_report(uint64_t k, uint32_t M,
                                           const ClassifyOptions& opt = {});

ProofCertificate verify_amm(uint64_t k, const VerifyOptions& opt = {});

}  // namespace amm

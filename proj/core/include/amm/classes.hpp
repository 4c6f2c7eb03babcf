#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amm/stirling.hpp"

namespace amm {

/**
 * The congruence class [n]_{2^m} = { j >= max(n, 2^m) : j == n (mod 2^m) }.
 * Stored canonically as residue < 2^m plus the member floor max(n, 2^m);
 * classes with the same member set compare equal.
 */
struct CongruenceClass {
    uint64_t residue = 0;
    uint32_t level = 0;
    uint64_t floor = 1;

    static CongruenceClass of(uint64_t n, uint32_t m);

    uint64_t modulus() const { return uint64_t{1} << level; }
    /// The defining n (the floor when it exceeds 2^m, otherwise the residue).
    uint64_t rep() const { return floor == modulus() ? residue : floor; }
    uint64_t first_member() const { return first_member_at_least(floor); }
    uint64_t first_member_at_least(uint64_t lo) const;
    bool contains(uint64_t j) const {
        return j >= floor && (j & (modulus() - 1)) == residue;
    }

    /// The two level-(m+1) classes [n]_{2^(m+1)} and [n+2^m]_{2^(m+1)}.
    /// Their members partition this class's members >= 2^(m+1).
    std::pair<CongruenceClass, CongruenceClass> children() const;

    bool operator==(const CongruenceClass&) const = default;
};

std::pair<CongruenceClass, CongruenceClass> children(const CongruenceClass& c);

/// Outcome of deciding whether nu2(S(., k)) is constant on a class.
struct ValuationVerdict {
    bool constant = false;
    uint32_t value = 0;        // the common valuation, when constant
    uint64_t representative = 0; // member anchoring the decision
    // two members with differing valuations, when non-constant
    uint64_t witness_a = 0, witness_b = 0;
    uint32_t nu_a = 0, nu_b = 0;
};

struct ClassifyOptions {
    uint32_t rep_index = 0;          // 0 = first member; >0 picks a later one
    uint32_t width_hint = 0;         // known lower bound on valuations
    uint64_t oracle_bound = default_oracle_bound;
    uint64_t dp_row_budget = uint64_t{1} << 28; // longest finite-check row scan
};

/// True when level m admits the 2-adic congruence machinery for k
/// (m >= b_k and 2^m >= m - b_k + nu2(k!)).
bool kwong_level_ok(uint64_t k, uint32_t m);

/**
 * Decides nu-constancy exactly. At levels satisfying kwong_level_ok the
 * valuation c of one member either forces constancy outright (m > c + b_k)
 * or reduces it to the finite window of 2^(c + b_k - m) members that the
 * decision procedure checks directly. Below that threshold the class is
 * split into its children until the threshold is reached, plus the finitely
 * many leftover members. Never guesses: every verdict carries a checkable
 * representative or witness pair.
 */
ValuationVerdict nu_constancy(const CongruenceClass& cls, uint64_t k,
                              const ClassifyOptions& opt = {});

/// Window labels n in [k, k+2^m) whose class [n]_{2^m} is not nu-constant,
/// ascending. These are the sets N_{k,m}.
std::vector<uint64_t> enumerate_nkm(uint64_t k, uint32_t m,
                                    const ClassifyOptions& opt = {});

/// One fully classified window level: every label's class is either ruled
/// constant wholesale by the congruence screen (valuation below the level
/// floor m - b_k) or individually decided. The individually decided ones are
/// the screen survivors; the non-constant ones among them form N_{k,m}.
struct SurveyEntry {
    uint64_t j = 0;
    bool resolved = true;
    ValuationVerdict verdict;
    std::string error; // set when a budget made the class undecidable
};
struct LevelSurvey {
    uint64_t k = 0;
    uint32_t m = 0;
    bool screened = false;               // whether the congruence screen applied
    std::vector<SurveyEntry> survivors;  // ascending by j
    std::vector<uint64_t> nonconstant;   // ascending; subset of survivors
    // Indexed by j - k over the window: the constant valuation the screen
    // assigned to the class, or 0xFF where the class was not ruled constant
    // by the screen (survivors, and every class when screened is false).
    std::vector<uint8_t> constant_value;
};
LevelSurvey level_survey(uint64_t k, uint32_t m, const ClassifyOptions& opt = {});

} // namespace amm

#include "amm/classes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "amm/errors.hpp"

namespace amm {

namespace {

constexpr uint32_t kMaxLevel = 62;  // modulus must fit in uint64_t with headroom

void check_level(uint32_t m) {
    if (m > kMaxLevel) throw ResourceError("class-level", m, kMaxLevel);
}

}  // namespace

CongruenceClass CongruenceClass::of(uint64_t n, uint32_t m) {
    check_level(m);
    const uint64_t mod = uint64_t{1} << m;
    CongruenceClass c;
    c.residue = n & (mod - 1);
    c.level = m;
    c.floor = std::max(n, mod);
    return c;
}

uint64_t CongruenceClass::first_member_at_least(uint64_t lo) const {
    const uint64_t mod = modulus();
    const uint64_t base = std::max(floor, lo);
    const uint64_t delta = (residue - base) & (mod - 1);
    return base + delta;
}

std::pair<CongruenceClass, CongruenceClass> CongruenceClass::children() const {
    check_level(level + 1);
    // Deriving both from the effective representative keeps the union of the
    // children's member sets equal to the members of this class that are
    // >= 2^(level+1); the residues differ by 2^level.
    const uint64_t n_eff = rep();
    return {CongruenceClass::of(n_eff, level + 1),
            CongruenceClass::of(n_eff + modulus(), level + 1)};
}

std::pair<CongruenceClass, CongruenceClass> children(const CongruenceClass& c) {
    return c.children();
}

bool kwong_level_ok(uint64_t k, uint32_t m) {
    const uint32_t b = b_of_k(k);
    if (m < b) return false;
    if (m > kMaxLevel) return true;
    const uint64_t need = static_cast<uint64_t>(m) - b + nu2_factorial(k);
    return (uint64_t{1} << m) >= need;
}

namespace {

ValuationVerdict constant_verdict(uint32_t value, uint64_t rep) {
    ValuationVerdict v;
    v.constant = true;
    v.value = value;
    v.representative = rep;
    return v;
}

ValuationVerdict nonconstant_verdict(uint64_t rep, uint64_t a, uint32_t nu_a,
                                     uint64_t b, uint32_t nu_b) {
    ValuationVerdict v;
    v.constant = false;
    v.representative = rep;
    v.witness_a = a;
    v.nu_a = nu_a;
    v.witness_b = b;
    v.nu_b = nu_b;
    return v;
}

// Below the stabilisation threshold there is no finite criterion for the
// whole class at once, but the two half-classes one level down cover all
// members >= 2^(m+1) and only finitely many members are left in between.
ValuationVerdict nu_constancy_by_refinement(const CongruenceClass& cls,
                                            uint64_t k,
                                            const ClassifyOptions& opt) {
    const auto [lo_child, hi_child] = cls.children();
    const ValuationVerdict v1 = nu_constancy(lo_child, k, opt);
    if (!v1.constant) return v1;
    const ValuationVerdict v2 = nu_constancy(hi_child, k, opt);
    if (!v2.constant) return v2;
    if (v1.value != v2.value) {
        return nonconstant_verdict(v1.representative, v1.representative, v1.value,
                                   v2.representative, v2.value);
    }
    const uint64_t lim = uint64_t{1} << (cls.level + 1);
    for (uint64_t j = cls.first_member_at_least(k); j < lim; j += cls.modulus()) {
        const uint32_t c = nu2_stirling(j, k, opt.width_hint, opt.oracle_bound);
        if (c != v1.value) {
            return nonconstant_verdict(j, j, c, v1.representative, v1.value);
        }
    }
    return constant_verdict(v1.value, cls.first_member_at_least(k));
}

}  // namespace

ValuationVerdict nu_constancy(const CongruenceClass& cls, uint64_t k,
                              const ClassifyOptions& opt) {
    if (k < 5) throw std::invalid_argument("nu_constancy: requires k >= 5");
    const uint32_t m = cls.level;
    if (!kwong_level_ok(k, m)) {
        return nu_constancy_by_refinement(cls, k, opt);
    }

    const uint32_t b = b_of_k(k);
    const uint64_t r = cls.first_member_at_least(k) + opt.rep_index * cls.modulus();
    const uint32_t c = nu2_stirling(r, k, opt.width_hint, opt.oracle_bound);
    if (m > c + b) return constant_verdict(c, r);

    // Constancy is decided by the members r + 2^m, ..., r + 2^(c+b-m) * 2^m.
    const uint32_t window_bits = c + b - m;
    if (window_bits > 40) throw ResourceError("constancy-window-bits", window_bits, 40);
    const uint64_t count = uint64_t{1} << window_bits;
    const uint64_t last = r + count * cls.modulus();
    if (last > opt.dp_row_budget) throw ResourceError("dp-row-length", last, opt.dp_row_budget);

    const uint32_t w = c + 1;  // enough bits to distinguish nu2 == c from nu2 > c
    StirlingRowMod2 row(k, w);
    uint64_t n = r + cls.modulus();
    for (uint64_t i = 1; i <= count; ++i, n += cls.modulus()) {
        while (row.n() < n) row.advance();
        const Residue2 val = row.value();
        if (!val.is_zero() && val.ctz() == c) continue;
        const uint32_t nu = val.is_zero()
                                ? nu2_stirling(n, k, w + 1, opt.oracle_bound)
                                : val.ctz();
        return nonconstant_verdict(r, r, c, n, nu);
    }
    return constant_verdict(c, r);
}

LevelSurvey level_survey(uint64_t k, uint32_t m, const ClassifyOptions& opt) {
    if (k < 5) throw std::invalid_argument("level_survey: requires k >= 5");
    if (m < 1) throw std::invalid_argument("level_survey: requires m >= 1");
    if (m > 40) throw ResourceError("survey-level", m, 40);

    LevelSurvey out;
    out.k = k;
    out.m = m;
    const uint64_t mod = uint64_t{1} << m;

    auto classify = [&](uint64_t j, const ClassifyOptions& o) {
        SurveyEntry e;
        e.j = j;
        try {
            e.verdict = nu_constancy(CongruenceClass::of(j, m), k, o);
        } catch (const ResourceError& ex) {
            e.resolved = false;
            e.error = ex.what();
        }
        if (e.resolved && !e.verdict.constant) out.nonconstant.push_back(j);
        out.survivors.push_back(std::move(e));
    };

    out.constant_value.assign(mod, 0xFF);

    if (!kwong_level_ok(k, m)) {
        out.screened = false;
        for (uint64_t j = k; j < k + mod; ++j) classify(j, opt);
        return out;
    }

    // One row pass at 64-bit width covers every class in the window: a class
    // whose representative value has a nonzero bit among the low m - b_k bits
    // is constant outright, with value equal to that trailing-zero count.
    out.screened = true;
    const uint32_t b = b_of_k(k);
    const uint32_t screen_bits = m - b;
    const uint64_t screen_mask =
        screen_bits == 0 ? 0 : (screen_bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << screen_bits) - 1);
    const uint64_t lo = std::max<uint64_t>(k, mod);

    std::vector<uint64_t> rep_val(mod);
    StirlingRowMod2 row(k, 64);
    while (row.n() < lo) row.advance();
    for (uint64_t i = 0; i < mod; ++i) {
        rep_val[i] = row.value_u64();
        if (i + 1 < mod) row.advance();
    }

    ClassifyOptions o = opt;
    o.width_hint = std::max<uint32_t>(opt.width_hint, 64);
    for (uint64_t j = k; j < k + mod; ++j) {
        const uint64_t rep = j >= mod ? j : j + mod;
        const uint64_t val = rep_val[rep - lo];
        if ((val & screen_mask) != 0) {
            out.constant_value[j - k] =
                static_cast<uint8_t>(std::countr_zero(val));
            continue;
        }
        classify(j, o);
    }
    return out;
}

std::vector<uint64_t> enumerate_nkm(uint64_t k, uint32_t m, const ClassifyOptions& opt) {
    const LevelSurvey s = level_survey(k, m, opt);
    for (const SurveyEntry& e : s.survivors) {
        if (!e.resolved) throw ResourceError("class-unresolved", e.j, 0);
    }
    return s.nonconstant;
}

}  // namespace amm

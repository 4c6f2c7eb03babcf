#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "amm/classes.hpp"
#include "amm/stirling.hpp"
#include "amm/verifier.hpp"
#include "oracles.hpp"

using amm::CongruenceClass;
using amm::FindingStatus;
using amm::Outcome;
using amm::ProofCertificate;
using amm::ResidueFinding;
using amm::VerifyOptions;

namespace {

std::vector<const ResidueFinding*> with_status(const ProofCertificate& cert,
                                               FindingStatus st) {
    std::vector<const ResidueFinding*> out;
    for (const auto& f : cert.findings) {
        if (f.status == st) out.push_back(&f);
    }
    return out;
}

}  // namespace

TEST_CASE("choose_level picks the least level satisfying every precondition") {
    auto level_ok = [](uint64_t k, uint32_t max_ell, uint32_t M) {
        const uint32_t b = amm::b_of_k(static_cast<uint32_t>(k));
        const uint32_t s = amm::nu2_factorial(static_cast<uint32_t>(k)) +
                           (max_ell + 1) - b - 3;
        if (M < b || M < s + 1) return false;
        if ((uint64_t{1} << M) < M - b + amm::nu2_factorial(static_cast<uint32_t>(k)))
            return false;
        return (uint64_t{1} << M) - M >= s + 3;
    };
    for (uint64_t k = 5; k <= 20; ++k) {
        const uint32_t M = amm::choose_level(k, 6);
        CHECK(level_ok(k, 6, M));
        CHECK(!level_ok(k, 6, M - 1));
    }
    CHECK(amm::choose_level(5, 6) == 7);
    CHECK(amm::choose_level(13, 6) == 13);
    CHECK(amm::choose_level(20, 6) == 20);
}

TEST_CASE("the smallest case verifies with a fully pinned certificate") {
    const ProofCertificate cert = amm::verify_amm(5);
    CHECK(cert.outcome == Outcome::Verified);
    CHECK(cert.k == 5);
    CHECK(cert.b_k == 1);
    CHECK(cert.nu2_k_factorial == 3);
    CHECK(cert.M == 7);
    CHECK(cert.mu_k == 2);
    CHECK(cert.M_k == 1);
    CHECK(cert.audit_errors.empty());
    CHECK(cert.refutation.empty());

    REQUIRE(cert.findings.size() == 2);
    CHECK(cert.findings[0].j == 28);
    CHECK(cert.findings[1].j == 31);
    for (const auto& f : cert.findings) {
        CHECK(f.status == FindingStatus::NonConstantBranching);
        CHECK(f.ell == 0);
        const CongruenceClass cls = CongruenceClass::of(f.j, cert.M);
        CHECK(cls.contains(f.witness_a));
        CHECK(cls.contains(f.witness_b));
        CHECK(oracle::nu2_stirling(f.witness_a, 5) == f.nu_a);
        CHECK(oracle::nu2_stirling(f.witness_b, 5) == f.nu_b);
        CHECK(f.nu_a != f.nu_b);
    }

    REQUIRE(cert.small_levels.size() == 6);
    using V = std::vector<uint64_t>;
    const V want[6] = {{5, 6}, {7, 8}, {7, 12}, {12, 15}, {28, 31}, {28, 31}};
    for (uint32_t i = 0; i < 6; ++i) {
        CHECK(cert.small_levels[i].m == i + 1);
        CHECK(cert.small_levels[i].nonconstant == want[i]);
        CHECK(cert.small_levels[i].complete);
        CHECK(cert.small_levels[i].branching_ok);
    }

    CHECK(cert.scan_modulus_bits == 4);
    CHECK(cert.scan_period_bits == 7);
    CHECK(cert.scan_steps == 256);
}

TEST_CASE("the standalone small-level report matches the certificate") {
    const ProofCertificate cert = amm::verify_amm(5);
    const auto levels = amm::small_level_report(5, cert.M);
    REQUIRE(levels.size() == cert.small_levels.size());
    for (size_t i = 0; i < levels.size(); ++i) {
        CHECK(levels[i].m == cert.small_levels[i].m);
        CHECK(levels[i].nonconstant == cert.small_levels[i].nonconstant);
        CHECK(levels[i].branching_ok == cert.small_levels[i].branching_ok);
    }
}

TEST_CASE("the irregular case: branching settles only at level four") {
    const ProofCertificate cert = amm::verify_amm(13);
    CHECK(cert.outcome == Outcome::Verified);
    CHECK(cert.M == 13);
    CHECK(cert.mu_k == 4);
    CHECK(cert.M_k == 4);
    CHECK(cert.audit_errors.empty());

    // Levels 1..3 each hold a nonconstant class without exactly one
    // nonconstant child; from level 4 on the branching is clean.
    for (const auto& lvl : cert.small_levels) {
        CHECK(lvl.branching_ok == (lvl.m >= 4));
        CHECK(lvl.complete);
    }
    const uint64_t counts_1_10[10] = {2, 4, 5, 4, 4, 4, 4, 4, 4, 4};
    REQUIRE(cert.small_levels.size() == 12);
    for (uint32_t i = 0; i < 10; ++i) {
        CHECK(cert.small_levels[i].nonconstant.size() == counts_1_10[i]);
    }
    using V = std::vector<uint64_t>;
    CHECK(cert.small_levels[2].nonconstant == V{16, 17, 18, 19, 20});
    CHECK(cert.small_levels[3].nonconstant == V{24, 25, 26, 28});

    // Four branching classes; two need exponent 0, two need exponent 1.
    const auto ncb = with_status(cert, FindingStatus::NonConstantBranching);
    REQUIRE(ncb.size() == 4);
    std::vector<uint32_t> ells;
    for (const auto* f : ncb) ells.push_back(f->ell);
    std::sort(ells.begin(), ells.end());
    CHECK(ells == std::vector<uint32_t>{0, 0, 1, 1});

    // The classes the scans cannot separate are exactly the window labels
    // congruent to 3 mod 4, and each is genuinely valuation-constant.
    const auto cc = with_status(cert, FindingStatus::ConstantClass);
    std::set<uint64_t> got;
    for (const auto* f : cc) got.insert(f->j);
    std::set<uint64_t> want;
    for (uint64_t j = 13; j < 13 + (uint64_t{1} << 13); ++j) {
        if (j % 4 == 3) want.insert(j);
    }
    CHECK(got == want);
    CHECK(cc.size() == 2048);

    int checked = 0;
    for (size_t i = 0; i < cc.size(); i += 64, ++checked) {
        const ResidueFinding& f = *cc[i];
        const CongruenceClass cls = CongruenceClass::of(f.j, cert.M);
        const uint64_t n = cls.first_member_at_least(13);
        CHECK(oracle::nu2_stirling(n, 13) == f.value);
        CHECK(oracle::nu2_stirling(n + cls.modulus(), 13) == f.value);
    }
    CHECK(checked == 32);

    CHECK(with_status(cert, FindingStatus::Unresolved).empty());
    CHECK(cert.findings.size() == 4 + 2048);
    for (size_t i = 1; i < cert.findings.size(); ++i) {
        CHECK(cert.findings[i - 1].j < cert.findings[i].j);
    }
}

TEST_CASE("exponent search: shallow depth reports the blind spot") {
    const amm::EllResult shallow = amm::find_ell(13, 13, 15, 1);
    CHECK(!shallow.found);
    CHECK(shallow.reason == "constancy persists through scan exponent 2");

    // The same class yields an exponent when the search digs deeper; the
    // shallow failure above is what the verifier's constancy fallback covers.
    const amm::EllResult deep = amm::find_ell(13, 13, 15, 6);
    CHECK(deep.found);
    CHECK(deep.ell == 3);
}

TEST_CASE("exponent search is cache-transparent") {
    amm::ScanCache cache(13, 13, amm::ScanOptions{});
    const amm::EllResult a = amm::find_ell(13, 13, 15, 6, cache);
    const amm::EllResult b = amm::find_ell(13, 13, 15, 6);
    CHECK(a.found == b.found);
    CHECK(a.ell == b.ell);
    CHECK(cache.steps() > 0);
}

TEST_CASE("starved scan budgets yield inconclusive, never refuted") {
    VerifyOptions opt;
    opt.budget_log2_steps = 4;
    const ProofCertificate cert = amm::verify_amm(13, opt);
    CHECK(cert.outcome == Outcome::Inconclusive);
    CHECK(cert.refutation.empty());
    bool starved = !cert.audit_errors.empty();
    for (const auto& f : cert.findings) {
        if (f.status == FindingStatus::Unresolved) starved = true;
    }
    CHECK(starved);
}

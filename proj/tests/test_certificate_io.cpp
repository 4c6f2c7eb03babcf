#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "amm/certificate_io.hpp"
#include "amm/verifier.hpp"

using amm::FindingStatus;
using amm::Outcome;
using amm::ProofCertificate;
using amm::ResidueFinding;
using nlohmann::ordered_json;

namespace {

ProofCertificate sample_cert() {
    ProofCertificate c;
    c.k = 13;
    c.b_k = 2;
    c.nu2_k_factorial = 10;
    c.M = 13;
    c.mu_k = 4;
    c.M_k = 4;
    c.outcome = Outcome::Verified;

    ResidueFinding ncb;
    ncb.j = 8200;
    ncb.status = FindingStatus::NonConstantBranching;
    ncb.ell = 1;
    ncb.witness_a = 8200;
    ncb.witness_b = 16392;
    ncb.nu_a = 3;
    ncb.nu_b = 7;
    c.findings.push_back(ncb);

    ResidueFinding cc;
    cc.j = 15;
    cc.status = FindingStatus::ConstantClass;
    cc.value = 5;
    c.findings.push_back(cc);

    ResidueFinding un;
    un.j = 99;
    un.status = FindingStatus::Unresolved;
    un.reason = "scan budget exhausted";
    c.findings.push_back(un);

    amm::SmallLevel lvl;
    lvl.m = 3;
    lvl.nonconstant = {16, 17, 18, 19, 20};
    c.small_levels.push_back(lvl);

    c.scan_modulus_bits = 16;
    c.scan_period_bits = 14;
    c.scan_steps = 16384;
    c.elapsed_ms = 41;
    return c;
}

}  // namespace

TEST_CASE("serialization round-trips to identical bytes") {
    const ProofCertificate orig = sample_cert();
    const std::string text = amm::certificate_to_json(orig);
    const ProofCertificate back = amm::certificate_from_json(text);
    CHECK(amm::certificate_to_json(back) == text);

    CHECK(back.k == orig.k);
    CHECK(back.b_k == orig.b_k);
    CHECK(back.nu2_k_factorial == orig.nu2_k_factorial);
    CHECK(back.M == orig.M);
    CHECK(back.mu_k == orig.mu_k);
    CHECK(back.M_k == orig.M_k);
    CHECK(back.outcome == orig.outcome);
    REQUIRE(back.findings.size() == 3);
    CHECK(back.findings[0].witness_b == 16392);
    CHECK(back.findings[1].value == 5);
    CHECK(back.findings[2].reason == "scan budget exhausted");
    REQUIRE(back.small_levels.size() == 1);
    CHECK(back.small_levels[0].nonconstant == orig.small_levels[0].nonconstant);
    CHECK(back.scan_steps == 16384);
    CHECK(back.elapsed_ms == 41);
}

TEST_CASE("a live certificate round-trips too") {
    const ProofCertificate cert = amm::verify_amm(5);
    const std::string text = amm::certificate_to_json(cert);
    CHECK(amm::certificate_to_json(amm::certificate_from_json(text)) == text);
    CHECK(text.back() == '\n');
}

TEST_CASE("keys appear in the pinned order") {
    const std::string text = amm::certificate_to_json(sample_cert());
    const char* keys[] = {"\"version\"", "\"k\"",    "\"b_k\"",
                          "\"nu2_k_factorial\"",     "\"M\"",
                          "\"mu_k\"",    "\"M_k\"",  "\"outcome\"",
                          "\"findings\"",            "\"small_levels\"",
                          "\"scan\"",    "\"elapsed_ms\""};
    size_t pos = 0;
    for (const char* key : keys) {
        const size_t at = text.find(key, pos);
        REQUIRE(at != std::string::npos);
        pos = at + 1;
    }
    // Scan subobject order.
    const size_t scan = text.find("\"scan\"");
    CHECK(text.find("\"modulus_bits\"", scan) < text.find("\"period_bits\"", scan));
    CHECK(text.find("\"period_bits\"", scan) < text.find("\"steps\"", scan));
}

TEST_CASE("names are stable") {
    CHECK(amm::outcome_name(Outcome::Verified) == "verified");
    CHECK(amm::outcome_name(Outcome::Refuted) == "refuted");
    CHECK(amm::outcome_name(Outcome::Inconclusive) == "inconclusive");
    CHECK(amm::status_name(FindingStatus::NonConstantBranching) ==
          "nonconstant-branching");
    CHECK(amm::status_name(FindingStatus::ConstantClass) == "constant-class");
    CHECK(amm::status_name(FindingStatus::Unresolved) == "unresolved");
}

TEST_CASE("malformed and schema-violating inputs are rejected") {
    CHECK_THROWS_AS(amm::certificate_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(amm::certificate_from_json("[1,2]"), std::invalid_argument);

    ordered_json good =
        ordered_json::parse(amm::certificate_to_json(sample_cert()));

    ordered_json bad = good;
    bad["version"] = 2;
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);

    bad = good;
    bad.erase("M");
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);

    bad = good;
    bad["outcome"] = "maybe";
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);

    bad = good;
    bad["findings"][0]["status"] = "sideways";
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);

    bad = good;
    bad["findings"][0]["witness"]["members"] = ordered_json::array({8200});
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);

    bad = good;
    bad["findings"][0]["j"] = "twenty";
    CHECK_THROWS_AS(amm::certificate_from_json(bad.dump()),
                    std::invalid_argument);
}

#include "amm/certificate_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace amm {

using ojson = nlohmann::ordered_json;

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Verified: return "verified";
        case Outcome::Refuted: return "refuted";
        case Outcome::Inconclusive: return "inconclusive";
    }
    throw std::logic_error("outcome_name: bad enum");
}

std::string status_name(FindingStatus s) {
    switch (s) {
        case FindingStatus::NonConstantBranching: return "nonconstant-branching";
        case FindingStatus::ConstantClass: return "constant-class";
        case FindingStatus::Unresolved: return "unresolved";
    }
    throw std::logic_error("status_name: bad enum");
}

namespace {

Outcome outcome_from_name(const std::string& s) {
    if (s == "verified") return Outcome::Verified;
    if (s == "refuted") return Outcome::Refuted;
    if (s == "inconclusive") return Outcome::Inconclusive;
    throw std::invalid_argument("certificate: unknown outcome \"" + s + "\"");
}

FindingStatus status_from_name(const std::string& s) {
    if (s == "nonconstant-branching") return FindingStatus::NonConstantBranching;
    if (s == "constant-class") return FindingStatus::ConstantClass;
    if (s == "unresolved") return FindingStatus::Unresolved;
    throw std::invalid_argument("certificate: unknown finding status \"" + s + "\"");
}

}  // namespace

std::string certificate_to_json(const ProofCertificate& c) {
    ojson j;
    j["version"] = 1;
    j["k"] = c.k;
    j["b_k"] = c.b_k;
    j["nu2_k_factorial"] = c.nu2_k_factorial;
    j["M"] = c.M;
    j["mu_k"] = c.mu_k;
    j["M_k"] = c.M_k;
    j["outcome"] = outcome_name(c.outcome);

    ojson findings = ojson::array();
    for (const ResidueFinding& f : c.findings) {
        ojson e;
        e["j"] = f.j;
        e["status"] = status_name(f.status);
        switch (f.status) {
            case FindingStatus::NonConstantBranching: {
                e["ell"] = f.ell;
                ojson w;
                w["members"] = ojson::array({f.witness_a, f.witness_b});
                w["nu2"] = ojson::array({f.nu_a, f.nu_b});
                e["witness"] = std::move(w);
                break;
            }
            case FindingStatus::ConstantClass:
                e["value"] = f.value;
                break;
            case FindingStatus::Unresolved: {
                ojson w;
                w["reason"] = f.reason;
                e["witness"] = std::move(w);
                break;
            }
        }
        findings.push_back(std::move(e));
    }
    j["findings"] = std::move(findings);

    ojson levels = ojson::array();
    for (const SmallLevel& lvl : c.small_levels) {
        ojson e;
        e["m"] = lvl.m;
        e["nonconstant"] = lvl.nonconstant;
        levels.push_back(std::move(e));
    }
    j["small_levels"] = std::move(levels);

    ojson scan;
    scan["modulus_bits"] = c.scan_modulus_bits;
    scan["period_bits"] = c.scan_period_bits;
    scan["steps"] = c.scan_steps;
    j["scan"] = std::move(scan);

    j["elapsed_ms"] = c.elapsed_ms;
    return j.dump(2) + "\n";
}

ProofCertificate certificate_from_json(const std::string& text) {
    try {
        const ojson j = ojson::parse(text);
        if (!j.is_object()) throw std::invalid_argument("certificate: not an object");
        if (j.at("version").get<uint64_t>() != 1) {
            throw std::invalid_argument("certificate: unsupported version");
        }
        ProofCertificate c;
        c.k = j.at("k").get<uint64_t>();
        c.b_k = j.at("b_k").get<uint32_t>();
        c.nu2_k_factorial = j.at("nu2_k_factorial").get<uint32_t>();
        c.M = j.at("M").get<uint32_t>();
        c.mu_k = j.at("mu_k").get<uint64_t>();
        c.M_k = j.at("M_k").get<uint32_t>();
        c.outcome = outcome_from_name(j.at("outcome").get<std::string>());

        for (const ojson& e : j.at("findings")) {
            ResidueFinding f;
            f.j = e.at("j").get<uint64_t>();
            f.status = status_from_name(e.at("status").get<std::string>());
            switch (f.status) {
                case FindingStatus::NonConstantBranching: {
                    f.ell = e.at("ell").get<uint32_t>();
                    const ojson& w = e.at("witness");
                    const ojson& members = w.at("members");
                    const ojson& nu2 = w.at("nu2");
                    if (members.size() != 2 || nu2.size() != 2) {
                        throw std::invalid_argument("certificate: witness arity");
                    }
                    f.witness_a = members[0].get<uint64_t>();
                    f.witness_b = members[1].get<uint64_t>();
                    f.nu_a = nu2[0].get<uint32_t>();
                    f.nu_b = nu2[1].get<uint32_t>();
                    break;
                }
                case FindingStatus::ConstantClass:
                    f.value = e.at("value").get<uint32_t>();
                    break;
                case FindingStatus::Unresolved:
                    f.reason = e.at("witness").at("reason").get<std::string>();
                    break;
            }
            c.findings.push_back(std::move(f));
        }

        for (const ojson& e : j.at("small_levels")) {
            SmallLevel lvl;
            lvl.m = e.at("m").get<uint32_t>();
            lvl.nonconstant = e.at("nonconstant").get<std::vector<uint64_t>>();
            c.small_levels.push_back(std::move(lvl));
        }

        const ojson& scan = j.at("scan");
        c.scan_modulus_bits = scan.at("modulus_bits").get<uint32_t>();
        c.scan_period_bits = scan.at("period_bits").get<uint32_t>();
        c.scan_steps = scan.at("steps").get<uint64_t>();
        c.elapsed_ms = j.at("elapsed_ms").get<uint64_t>();
        return c;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& ex) {
        throw std::invalid_argument(std::string("certificate: ") + ex.what());
    }
}

}  // namespace amm

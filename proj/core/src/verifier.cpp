#include "amm/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "amm/errors.hpp"

namespace amm {

uint32_t choose_level(uint64_t k, uint32_t max_ell) {
    const uint32_t b = b_of_k(k);
    const uint64_t v = nu2_factorial(k);
    // s at the deepest scan exponent this run may use (max_ell + 1).
    const uint64_t s = v + max_ell + 1 - (uint64_t{b} + 3);
    for (uint32_t M = 1; M < 62; ++M) {
        if (M < b || M < s + 1) continue;
        const uint64_t pow = uint64_t{1} << M;
        if (pow < M - b + v) continue;
        if (pow - M < s + 3) continue;
        return M;
    }
    throw ResourceError("choose-level", 62, 61);
}

const FScanResult& ScanCache::at(uint32_t scan_ell) {
    auto it = cache_.find(scan_ell);
    if (it != cache_.end()) return it->second;
    FScanResult r = scan_residues(FParams::make(k_, scan_ell), M_, opt_);
    steps_ += r.steps;
    period_bits_max_ = std::max(period_bits_max_, r.period_bits);
    modulus_bits_max_ = std::max(modulus_bits_max_, r.params.modulus_bits);
    return cache_.emplace(scan_ell, std::move(r)).first->second;
}

EllResult find_ell(uint64_t k, uint32_t M, uint64_t j, uint32_t max_ell,
                   ScanCache& cache) {
    (void)k;
    (void)M;
    // Constancy at exponent 0 is the baseline granted by the level screen, so
    // the loop only ever consults scans at exponents >= 1.  An AllZero scan at
    // ell + 1 grants the baseline for the next candidate ell.
    for (uint32_t ell = 0; ell <= max_ell; ++ell) {
        const FScanResult* scan = nullptr;
        try {
            scan = &cache.at(ell + 1);
        } catch (const ResourceError& e) {
            EllResult r;
            r.reason = e.what();
            return r;
        }
        switch (scan->verdict(j)) {
            case ClassVerdict::AllNonzero: {
                EllResult r;
                r.found = true;
                r.ell = ell;
                return r;
            }
            case ClassVerdict::AllZero:
                continue;
            case ClassVerdict::Mixed: {
                EllResult r;
                std::ostringstream os;
                os << "mixed scan verdict at scan exponent " << (ell + 1);
                r.reason = os.str();
                return r;
            }
        }
    }
    EllResult r;
    std::ostringstream os;
    os << "constancy persists through scan exponent " << (max_ell + 1);
    r.reason = os.str();
    return r;
}

EllResult find_ell(uint64_t k, uint32_t M, uint64_t j, uint32_t max_ell,
                   const ScanOptions& opt) {
    ScanCache cache(k, M, opt);
    return find_ell(k, M, j, max_ell, cache);
}

namespace {

struct LevelData {
    std::vector<uint64_t> labels;  // nonconstant window labels, ascending
    bool complete = true;
    std::vector<std::string> errors;
};

LevelData level_nonconstant(uint64_t k, uint32_t m, const ClassifyOptions& opt) {
    LevelData d;
    try {
        const LevelSurvey s = level_survey(k, m, opt);
        d.labels = s.nonconstant;
        for (const SurveyEntry& e : s.survivors) {
            if (e.resolved) continue;
            d.complete = false;
            d.errors.push_back("level " + std::to_string(m) + " class " +
                               std::to_string(e.j) + ": " + e.error);
        }
    } catch (const ResourceError& ex) {
        d.complete = false;
        d.errors.push_back("level " + std::to_string(m) + ": " + ex.what());
    }
    return d;
}

bool contains_label(const std::vector<uint64_t>& sorted, uint64_t j) {
    return std::binary_search(sorted.begin(), sorted.end(), j);
}

}  // namespace

std::vector<SmallLevel> small_level_report(uint64_t k, uint32_t M,
                                           const ClassifyOptions& opt) {
    if (M < 1) throw std::invalid_argument("small_level_report: requires M >= 1");
    std::vector<LevelData> levels(M + 1);
    for (uint32_t m = 1; m <= M; ++m) levels[m] = level_nonconstant(k, m, opt);

    std::vector<SmallLevel> out;
    for (uint32_t m = 1; m < M; ++m) {
        SmallLevel lvl;
        lvl.m = m;
        lvl.nonconstant = levels[m].labels;
        lvl.complete = levels[m].complete && levels[m + 1].complete;
        lvl.branching_ok = lvl.complete;
        if (lvl.complete) {
            for (uint64_t j : levels[m].labels) {
                const int cnt = (contains_label(levels[m + 1].labels, j) ? 1 : 0) +
                                (contains_label(levels[m + 1].labels,
                                                j + (uint64_t{1} << m))
                                     ? 1
                                     : 0);
                if (cnt != 1) lvl.branching_ok = false;
            }
        }
        out.push_back(std::move(lvl));
    }
    return out;
}

ProofCertificate verify_amm(uint64_t k, const VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0]() {
        return static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count());
    };

    ProofCertificate cert;
    cert.k = k;
    cert.b_k = b_of_k(k);
    cert.nu2_k_factorial = static_cast<uint32_t>(nu2_factorial(k));
    const uint32_t M = choose_level(k, opt.max_ell);
    cert.M = M;

    ScanOptions sopt;
    sopt.threads = opt.threads;
    sopt.budget_log2_steps = opt.budget_log2_steps;
    ClassifyOptions copt;
    copt.oracle_bound = opt.oracle_bound;

    bool resource_trouble = false;

    LevelSurvey survey;
    try {
        survey = level_survey(k, M, copt);
    } catch (const ResourceError& ex) {
        cert.outcome = Outcome::Inconclusive;
        cert.audit_errors.push_back(std::string("level ") + std::to_string(M) +
                                    ": " + ex.what());
        cert.elapsed_ms = elapsed();
        return cert;
    }
    cert.mu_k = survey.nonconstant.size();

    // Findings itemize the two kinds of per-class evidence.  Every
    // nonconstant class gets its branching exponent from the scans.  A
    // constant class gets an explicit entry only when the scans are blind to
    // it -- the auxiliary sum identically zero at every exponent the
    // branching proofs used -- because for such a class the exponent search
    // can only ever come up empty and its constancy has to be recorded
    // directly.  Constant classes that some scan does distinguish are
    // certified by the level survey's screen and need no entry.
    ScanCache cache(k, M, sopt);
    uint32_t deepest_exp = 1;  // highest scan exponent any branching proof used
    for (const SurveyEntry& e : survey.survivors) {
        if (!e.resolved) {
            ResidueFinding f;
            f.j = e.j;
            f.status = FindingStatus::Unresolved;
            f.reason = e.error;
            resource_trouble = true;
            cert.findings.push_back(std::move(f));
            continue;
        }
        if (e.verdict.constant) continue;
        ResidueFinding f;
        f.j = e.j;
        const EllResult r = find_ell(k, M, e.j, opt.max_ell, cache);
        if (r.found) {
            f.status = FindingStatus::NonConstantBranching;
            f.ell = r.ell;
            f.witness_a = e.verdict.witness_a;
            f.nu_a = e.verdict.nu_a;
            f.witness_b = e.verdict.witness_b;
            f.nu_b = e.verdict.nu_b;
            deepest_exp = std::max(deepest_exp, r.ell + 1);
        } else {
            f.status = FindingStatus::Unresolved;
            f.reason = r.reason;
            resource_trouble = true;
        }
        cert.findings.push_back(std::move(f));
    }

    try {
        std::vector<const FScanResult*> scans;
        for (uint32_t e = 1; e <= deepest_exp; ++e) scans.push_back(&cache.at(e));
        const uint64_t mod = uint64_t{1} << M;
        auto survivor_at = [&survey](uint64_t j) -> const SurveyEntry* {
            const auto it = std::lower_bound(
                survey.survivors.begin(), survey.survivors.end(), j,
                [](const SurveyEntry& e, uint64_t jj) { return e.j < jj; });
            return it != survey.survivors.end() && it->j == j ? &*it : nullptr;
        };
        for (uint64_t j = k; j < k + mod; ++j) {
            bool opaque = true;
            for (const FScanResult* s : scans) {
                if (s->verdict(j) != ClassVerdict::AllZero) {
                    opaque = false;
                    break;
                }
            }
            if (!opaque) continue;
            const SurveyEntry* e = survivor_at(j);
            // Unresolved and nonconstant survivors already carry a finding.
            if (e != nullptr && (!e->resolved || !e->verdict.constant)) continue;
            ResidueFinding f;
            f.j = j;
            if (e != nullptr) {
                f.status = FindingStatus::ConstantClass;
                f.value = e->verdict.value;
            } else if (survey.constant_value[j - k] != 0xFF) {
                f.status = FindingStatus::ConstantClass;
                f.value = survey.constant_value[j - k];
            } else {
                f.status = FindingStatus::Unresolved;
                f.reason = "class undecided by the level survey";
                resource_trouble = true;
            }
            cert.findings.push_back(std::move(f));
        }
    } catch (const ResourceError& ex) {
        resource_trouble = true;
        cert.audit_errors.push_back(std::string("constant itemization: ") +
                                    ex.what());
    }

    std::sort(cert.findings.begin(), cert.findings.end(),
              [](const ResidueFinding& a, const ResidueFinding& b) {
                  return a.j < b.j;
              });

    // Levels 1..M-1, plus a probe at M+1 so branching can be audited at M.
    std::vector<LevelData> levels(M + 2);
    for (uint32_t m = 1; m < M; ++m) levels[m] = level_nonconstant(k, m, copt);
    levels[M].labels = survey.nonconstant;
    for (const SurveyEntry& e : survey.survivors) {
        if (!e.resolved) levels[M].complete = false;
    }
    levels[M + 1] = level_nonconstant(k, M + 1, copt);
    for (uint32_t m = 1; m <= M + 1; ++m) {
        for (const std::string& err : levels[m].errors) {
            cert.audit_errors.push_back(err);
            resource_trouble = true;
        }
    }

    std::vector<char> branch_ok(M + 1, 1);
    for (uint32_t m = 1; m <= M; ++m) {
        if (!levels[m].complete || !levels[m + 1].complete) {
            branch_ok[m] = 0;
            continue;
        }
        for (uint64_t j : levels[m].labels) {
            const int cnt = (contains_label(levels[m + 1].labels, j) ? 1 : 0) +
                            (contains_label(levels[m + 1].labels,
                                            j + (uint64_t{1} << m))
                                 ? 1
                                 : 0);
            if (cnt == 1) continue;
            branch_ok[m] = 0;
            if (m == M) {
                // A nonconstant class at the chosen level with zero or two
                // nonconstant children contradicts the branching claim.
                cert.outcome = Outcome::Refuted;
                std::ostringstream os;
                os << "class " << j << " mod 2^" << m << " has " << cnt
                   << " nonconstant children";
                cert.refutation = os.str();
            }
        }
    }

    for (uint32_t m = 1; m < M; ++m) {
        SmallLevel lvl;
        lvl.m = m;
        lvl.nonconstant = levels[m].labels;
        lvl.complete = levels[m].complete && levels[m + 1].complete;
        lvl.branching_ok = branch_ok[m] != 0;
        cert.small_levels.push_back(std::move(lvl));
    }

    // Observed stabilization: smallest t with the nonconstant count equal to
    // mu_k and clean branching at every level from t through M.
    uint32_t Mk = M;
    for (uint32_t t = M; t >= 1; --t) {
        if (levels[t].complete && levels[t].labels.size() == cert.mu_k &&
            branch_ok[t] != 0) {
            Mk = t;
        } else {
            break;
        }
    }
    cert.M_k = Mk;

    if (cert.outcome != Outcome::Refuted) {
        bool all_settled = !resource_trouble;
        for (const ResidueFinding& f : cert.findings) {
            if (f.status == FindingStatus::Unresolved) all_settled = false;
        }
        cert.outcome = all_settled ? Outcome::Verified : Outcome::Inconclusive;
    }

    uint64_t extra_steps = 0;
    uint32_t extra_period = 0, extra_modulus = 0;
    if (opt.revalidate && cert.outcome == Outcome::Verified) {
        ScanCache fresh(k, M, sopt);
        ClassifyOptions alt = copt;
        alt.rep_index = 1;
        auto flag = [&cert](uint64_t j, const std::string& what) {
            cert.outcome = Outcome::Inconclusive;
            cert.audit_errors.push_back("revalidation " + what + " on class " +
                                        std::to_string(j));
        };
        // Constant classes recheck against the member after the anchoring
        // one, all in a single shared row pass; for a valuation below the
        // screen floor that one member is exactly what the constancy decision
        // from the second representative would consult.
        std::vector<std::pair<uint64_t, const ResidueFinding*>> constants;
        for (const ResidueFinding& f : cert.findings) {
            if (f.status != FindingStatus::ConstantClass) continue;
            const uint64_t n =
                CongruenceClass::of(f.j, M).first_member_at_least(k) +
                (uint64_t{1} << M);
            constants.emplace_back(n, &f);
        }
        std::sort(constants.begin(), constants.end());
        try {
            if (!constants.empty()) {
                StirlingRowMod2 row(k, 64);
                for (const auto& [n, f] : constants) {
                    bool ok;
                    if (f->value < 64) {
                        while (row.n() < n) row.advance();
                        const Residue2 val = row.value();
                        ok = !val.is_zero() && val.ctz() == f->value;
                    } else {
                        ok = nu2_stirling(n, k, f->value + 1, copt.oracle_bound) ==
                             f->value;
                    }
                    if (!ok) flag(f->j, "mismatch");
                }
            }
            // Classes at or above the screen floor sit on the constancy
            // boundary; rerun the full decision from the second
            // representative for those.
            for (const auto& [n, f] : constants) {
                if (f->value < M - cert.b_k) continue;
                const ValuationVerdict v =
                    nu_constancy(CongruenceClass::of(f->j, M), k, alt);
                if (!v.constant || v.value != f->value) flag(f->j, "mismatch");
            }
            for (const ResidueFinding& f : cert.findings) {
                if (f.status != FindingStatus::NonConstantBranching) continue;
                bool ok = true;
                if (f.ell > 0) {
                    ok = fresh.at(f.ell).verdict(f.j) == ClassVerdict::AllZero;
                }
                ok = ok &&
                     fresh.at(f.ell + 1).verdict(f.j) == ClassVerdict::AllNonzero;
                if (!ok) flag(f.j, "mismatch");
            }
        } catch (const ResourceError& ex) {
            cert.outcome = Outcome::Inconclusive;
            cert.audit_errors.push_back(std::string("revalidation: ") + ex.what());
        }
        extra_steps = fresh.steps();
        extra_period = fresh.period_bits_max();
        extra_modulus = fresh.modulus_bits_max();
    }

    cert.scan_steps = cache.steps() + extra_steps;
    cert.scan_period_bits = std::max(cache.period_bits_max(), extra_period);
    cert.scan_modulus_bits = std::max(cache.modulus_bits_max(), extra_modulus);
    cert.elapsed_ms = elapsed();
    return cert;
}

}  // namespace amm

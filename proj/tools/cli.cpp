#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "amm/certificate_io.hpp"
#include "amm/errors.hpp"
#include "amm/report.hpp"
#include "amm/stirling.hpp"
#include "amm/verifier.hpp"

namespace amm::cli {

namespace {

// AMM_THREADS, when set, wins over --threads.
bool apply_thread_env(uint32_t& threads, std::ostream& err) {
    const char* env = std::getenv("AMM_THREADS");
    if (env == nullptr) return true;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v > 1u << 16) {
        err << "error: AMM_THREADS is not a thread count: \"" << env << "\"\n";
        return false;
    }
    threads = static_cast<uint32_t>(v);
    return true;
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot open " << path << " for writing\n";
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

int run_verify(uint64_t k, VerifyOptions opt, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
    if (!apply_thread_env(opt.threads, err)) return 3;
    const ProofCertificate cert = verify_amm(k, opt);
    const std::string json = certificate_to_json(cert);
    if (!out_path.empty() && !write_file(out_path, json, err)) return 2;
    out << json;
    if (cert.outcome == Outcome::Refuted) {
        err << "refuted: " << cert.refutation << "\n";
        return 1;
    }
    if (cert.outcome == Outcome::Inconclusive) {
        for (const ResidueFinding& f : cert.findings) {
            if (f.status == FindingStatus::Unresolved) {
                err << "unresolved: class " << f.j << ": " << f.reason << "\n";
            }
        }
        for (const std::string& e : cert.audit_errors) err << "audit: " << e << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"2-adic valuations of Stirling numbers of the second kind"};
    app.name("amm");
    app.require_subcommand(1);

    uint64_t verify_k = 0;
    VerifyOptions vopt;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand(
        "verify", "Verify the AMM conjecture for one k; emit a JSON certificate");
    verify->add_option("k", verify_k, "Stirling column, k >= 5")->required();
    verify->add_option("--max-ell", vopt.max_ell, "Largest ell to search");
    verify->add_option("--budget-bits", vopt.budget_log2_steps,
                       "Refuse scans longer than 2^bits steps");
    verify->add_option("--threads", vopt.threads, "Scan workers (0 = all cores)");
    verify->add_option("--out", verify_out, "Also write the certificate to a file");

    uint64_t t_kmin = 0, t_kmax = 0;
    uint32_t t_mmax = 0;
    std::string t_format = "csv";
    CLI::App* table =
        app.add_subcommand("table", "Counts of nonconstant classes per level");
    table->add_option("--k-min", t_kmin, "First k")->required();
    table->add_option("--k-max", t_kmax, "Last k")->required();
    table->add_option("--m-max", t_mmax, "Deepest level")->required();
    table->add_option("--format", t_format, "csv or md")
        ->check(CLI::IsMember({"csv", "md"}));

    uint64_t nkm_k = 0;
    uint32_t nkm_m = 0;
    CLI::App* nkm = app.add_subcommand(
        "nkm", "List the nonconstant residues in [k, k + 2^m)");
    nkm->add_option("k", nkm_k, "Stirling column, k >= 5")->required();
    nkm->add_option("m", nkm_m, "Level")->required();

    uint64_t nu2_n = 0, nu2_k = 0;
    CLI::App* nu2cmd = app.add_subcommand("nu2", "Exact 2-adic valuation of S(n, k)");
    nu2cmd->add_option("n", nu2_n, "Row index")->required();
    nu2cmd->add_option("k", nu2_k, "Column index")->required();

    uint64_t tree_k = 0;
    uint32_t tree_level = 0;
    std::string tree_format = "dot";
    CLI::App* tree =
        app.add_subcommand("tree", "Branching tree of nonconstant classes");
    tree->add_option("k", tree_k, "Stirling column, k >= 5")->required();
    tree->add_option("--max-level", tree_level, "Depth of the tree")->required();
    tree->add_option("--format", tree_format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));

    uint64_t tri_rows = 0;
    std::string tri_out;
    CLI::App* triangle =
        app.add_subcommand("triangle", "Parity bitmap of S(n, k), ASCII P1");
    triangle->add_option("--rows", tri_rows, "Bitmap height and width")->required();
    triangle->add_option("--out", tri_out, "Write the bitmap to a file");

    try {
        std::vector<const char*> argv;
        argv.push_back("amm");
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 3;
    }

    try {
        if (verify->parsed()) {
            return run_verify(verify_k, vopt, verify_out, out, err);
        }
        if (table->parsed()) {
            const NkmTable t = nkm_table(t_kmin, t_kmax, t_mmax);
            out << (t_format == "md" ? render_markdown(t) : render_csv(t));
            return 0;
        }
        if (nkm->parsed()) {
            for (uint64_t j : enumerate_nkm(nkm_k, nkm_m)) out << j << "\n";
            return 0;
        }
        if (nu2cmd->parsed()) {
            out << nu2_stirling(nu2_n, nu2_k) << "\n";
            return 0;
        }
        if (tree->parsed()) {
            const BranchTree t = branch_tree(tree_k, tree_level);
            out << (tree_format == "json" ? render_tree_json(t) : render_dot(t));
            return 0;
        }
        if (triangle->parsed()) {
            const std::string pbm = parity_triangle_pbm(tri_rows);
            if (!tri_out.empty()) {
                if (!write_file(tri_out, pbm, err)) return 2;
            } else {
                out << pbm;
            }
            return 0;
        }
        err << "error: no subcommand\n";
        return 3;
    } catch (const ResourceError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace amm::cli

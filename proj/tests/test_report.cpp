#include <doctest.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "amm/errors.hpp"
#include "amm/report.hpp"
#include "amm/stirling.hpp"

using amm::BranchTree;
using amm::NkmTable;
using amm::TreeNode;

TEST_CASE("the nonconstant-count grid matches the hand-checked values") {
    const NkmTable t = amm::nkm_table(5, 14, 10);
    REQUIRE(t.counts.size() == 10);
    using Row = std::vector<uint64_t>;
    const Row all2(10, 2);
    const Row two_then_fours{2, 4, 4, 4, 4, 4, 4, 4, 4, 4};
    CHECK(t.counts[0] == all2);   // k = 5
    CHECK(t.counts[1] == all2);   // k = 6
    CHECK(t.counts[2] == all2);   // k = 7
    CHECK(t.counts[3] == all2);   // k = 8
    CHECK(t.counts[4] == two_then_fours);  // k = 9
    CHECK(t.counts[5] == two_then_fours);  // k = 10
    CHECK(t.counts[6] == two_then_fours);  // k = 11
    CHECK(t.counts[7] == two_then_fours);  // k = 12
    CHECK(t.counts[8] == Row{2, 4, 5, 4, 4, 4, 4, 4, 4, 4});  // k = 13
    CHECK(t.counts[9] == Row{2, 4, 6, 6, 6, 6, 6, 6, 6, 6});  // k = 14
}

TEST_CASE("table renderers produce the exact golden bytes") {
    const NkmTable t = amm::nkm_table(5, 6, 3);
    CHECK(amm::render_csv(t) == "k,m1,m2,m3\n5,2,2,2\n6,2,2,2\n");
    CHECK(amm::render_markdown(t) ==
          "| k | m1 | m2 | m3 |\n"
          "|---|---|---|---|\n"
          "| 5 | 2 | 2 | 2 |\n"
          "| 6 | 2 | 2 | 2 |\n");
}

TEST_CASE("table construction rejects bad ranges") {
    CHECK_THROWS_AS(amm::nkm_table(4, 6, 3), std::invalid_argument);
    CHECK_THROWS_AS(amm::nkm_table(6, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(amm::nkm_table(5, 6, 0), std::invalid_argument);
}

TEST_CASE("the branching tree splits one nonconstant child per node") {
    const BranchTree t = amm::branch_tree(5, 3);
    CHECK(t.k == 5);
    CHECK(t.max_level == 3);
    REQUIRE(t.roots.size() == 2);
    CHECK(t.nodes[t.roots[0]].label == 5);
    CHECK(t.nodes[t.roots[1]].label == 6);
    CHECK(t.nodes.size() == 10);

    uint64_t deepest_nonconstant = 0;
    for (const TreeNode& n : t.nodes) {
        CHECK(n.label >= 5);
        CHECK(n.label < 5 + (uint64_t{1} << n.m));
        if (n.m == 3 && n.nonconstant) ++deepest_nonconstant;
        if (n.children.empty()) {
            CHECK((!n.nonconstant || n.m == t.max_level));
            continue;
        }
        REQUIRE(n.children.size() == 2);
        CHECK(n.nonconstant);
        const TreeNode& a = t.nodes[n.children[0]];
        const TreeNode& b = t.nodes[n.children[1]];
        CHECK(a.m == n.m + 1);
        CHECK(b.m == n.m + 1);
        CHECK(a.label == n.label);
        CHECK(b.label == n.label + (uint64_t{1} << n.m));
        // The branching property for this k: exactly one child stays
        // nonconstant at every level.
        CHECK((a.nonconstant ^ b.nonconstant));
    }
    CHECK(deepest_nonconstant == 2);
}

TEST_CASE("dot rendering emits each node and edge") {
    const std::string dot = amm::render_dot(amm::branch_tree(5, 2));
    CHECK(dot.find("digraph branching {") == 0);
    CHECK(dot.find("\"5 mod 2^1\"") != std::string::npos);
    CHECK(dot.find("\"6 mod 2^1\"") != std::string::npos);
    CHECK(dot.find("\"5 mod 2^1\" -> \"5 mod 2^2\";") != std::string::npos);
    CHECK(dot.find("\"5 mod 2^1\" -> \"7 mod 2^2\";") != std::string::npos);
    // Nonconstant nodes are boxed; constant leaves are not.
    CHECK(dot.find("\"5 mod 2^1\" [shape=box];") != std::string::npos);
    CHECK(dot.find("\"5 mod 2^2\" [shape=box];") == std::string::npos);
    CHECK(dot.rfind("}\n") == dot.size() - 2);
}

TEST_CASE("json rendering mirrors the tree") {
    const BranchTree t = amm::branch_tree(5, 3);
    const nlohmann::json j = nlohmann::json::parse(amm::render_tree_json(t));
    CHECK(j.at("k") == 5);
    CHECK(j.at("max_level") == 3);
    REQUIRE(j.at("roots").size() == 2);
    const auto& root = j.at("roots").at(0);
    CHECK(root.at("label") == 5);
    CHECK(root.at("m") == 1);
    CHECK(root.at("nonconstant") == true);
    REQUIRE(root.at("children").size() == 2);
    CHECK(root.at("children").at(0).at("label") == 5);
    CHECK(root.at("children").at(1).at("label") == 7);
}

TEST_CASE("parity bitmap: golden header and hand-checked first rows") {
    CHECK(amm::parity_triangle_pbm(4) ==
          "P1\n4 4\n1 0 0 0\n0 1 0 0\n0 1 1 0\n0 1 1 1\n");
}

TEST_CASE("parity bitmap agrees with exact values") {
    const uint64_t rows = 32;
    std::istringstream in(amm::parity_triangle_pbm(rows));
    std::string magic;
    uint64_t w = 0, h = 0;
    in >> magic >> w >> h;
    CHECK(magic == "P1");
    CHECK(w == rows);
    CHECK(h == rows);
    for (uint64_t n = 0; n < rows; ++n) {
        for (uint64_t k = 0; k < rows; ++k) {
            int bit = -1;
            in >> bit;
            const int want =
                k > n ? 0
                      : static_cast<int>(amm::stirling_exact(n, k) % 2 != 0);
            CHECK(bit == want);
        }
    }
}

TEST_CASE("parity bitmap guards its input") {
    CHECK_THROWS_AS(amm::parity_triangle_pbm(0), std::invalid_argument);
    CHECK_THROWS_AS(amm::parity_triangle_pbm(5000), amm::ResourceError);
}

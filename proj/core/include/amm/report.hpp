#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amm/classes.hpp"

namespace amm {

struct NkmTable {
    uint64_t k_min = 0;
    uint64_t k_max = 0;
    uint32_t m_max = 0;
    // counts[i][j] = #N_{k_min+i, j+1}
    std::vector<std::vector<uint64_t>> counts;
};

NkmTable nkm_table(uint64_t k_min, uint64_t k_max, uint32_t m_max,
                   const ClassifyOptions& opt = {});

std::string render_csv(const NkmTable& table);       // header "k,m1,m2,..."
std::string render_markdown(const NkmTable& table);

// Branching tree: all window classes at level 1 as roots; nonconstant nodes
// carry their two children one level down, to the requested depth.
struct TreeNode {
    uint64_t label = 0;  // window label: k <= label < k + 2^m
    uint32_t m = 0;
    bool nonconstant = false;
    std::vector<size_t> children;  // indices into BranchTree::nodes
};

struct BranchTree {
    uint64_t k = 0;
    uint32_t max_level = 0;
    std::vector<TreeNode> nodes;
    std::vector<size_t> roots;
};

BranchTree branch_tree(uint64_t k, uint32_t max_level,
                       const ClassifyOptions& opt = {});

std::string render_dot(const BranchTree& tree);
std::string render_tree_json(const BranchTree& tree);

// ASCII P1 bitmap, width = height = rows; bit at row n, column k is
// S(n,k) mod 2; columns beyond n are zero-padded.
std::string parity_triangle_pbm(uint64_t rows);

}  // namespace amm

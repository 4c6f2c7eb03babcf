#include "amm/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "amm/errors.hpp"

namespace amm {

using ojson = nlohmann::ordered_json;

NkmTable nkm_table(uint64_t k_min, uint64_t k_max, uint32_t m_max,
                   const ClassifyOptions& opt) {
    if (k_min < 5) throw std::invalid_argument("nkm_table: requires k_min >= 5");
    if (k_max < k_min) throw std::invalid_argument("nkm_table: k_max < k_min");
    if (m_max < 1) throw std::invalid_argument("nkm_table: requires m_max >= 1");
    NkmTable t;
    t.k_min = k_min;
    t.k_max = k_max;
    t.m_max = m_max;
    for (uint64_t k = k_min; k <= k_max; ++k) {
        std::vector<uint64_t> row;
        for (uint32_t m = 1; m <= m_max; ++m) {
            row.push_back(enumerate_nkm(k, m, opt).size());
        }
        t.counts.push_back(std::move(row));
    }
    return t;
}

std::string render_csv(const NkmTable& t) {
    std::ostringstream os;
    os << "k";
    for (uint32_t m = 1; m <= t.m_max; ++m) os << ",m" << m;
    os << "\n";
    for (size_t i = 0; i < t.counts.size(); ++i) {
        os << (t.k_min + i);
        for (uint64_t c : t.counts[i]) os << "," << c;
        os << "\n";
    }
    return os.str();
}

std::string render_markdown(const NkmTable& t) {
    std::ostringstream os;
    os << "| k |";
    for (uint32_t m = 1; m <= t.m_max; ++m) os << " m" << m << " |";
    os << "\n|---|";
    for (uint32_t m = 1; m <= t.m_max; ++m) os << "---|";
    os << "\n";
    for (size_t i = 0; i < t.counts.size(); ++i) {
        os << "| " << (t.k_min + i) << " |";
        for (uint64_t c : t.counts[i]) os << " " << c << " |";
        os << "\n";
    }
    return os.str();
}

BranchTree branch_tree(uint64_t k, uint32_t max_level, const ClassifyOptions& opt) {
    if (max_level < 1) throw std::invalid_argument("branch_tree: requires max_level >= 1");
    std::vector<std::vector<uint64_t>> nc(max_level + 1);
    for (uint32_t m = 1; m <= max_level; ++m) nc[m] = enumerate_nkm(k, m, opt);
    auto is_nc = [&nc](uint64_t j, uint32_t m) {
        return std::binary_search(nc[m].begin(), nc[m].end(), j);
    };

    BranchTree t;
    t.k = k;
    t.max_level = max_level;
    std::queue<size_t> work;
    for (uint64_t label : {k, k + 1}) {
        TreeNode n;
        n.label = label;
        n.m = 1;
        n.nonconstant = is_nc(label, 1);
        t.roots.push_back(t.nodes.size());
        work.push(t.nodes.size());
        t.nodes.push_back(std::move(n));
    }
    while (!work.empty()) {
        const size_t i = work.front();
        work.pop();
        const uint64_t label = t.nodes[i].label;
        const uint32_t m = t.nodes[i].m;
        if (!t.nodes[i].nonconstant || m == max_level) continue;
        for (uint64_t child : {label, label + (uint64_t{1} << m)}) {
            TreeNode n;
            n.label = child;
            n.m = m + 1;
            n.nonconstant = is_nc(child, m + 1);
            const size_t idx = t.nodes.size();
            t.nodes[i].children.push_back(idx);
            work.push(idx);
            t.nodes.push_back(std::move(n));
        }
    }
    return t;
}

namespace {

std::string node_name(const TreeNode& n) {
    std::ostringstream os;
    os << n.label << " mod 2^" << n.m;
    return os.str();
}

ojson node_to_json(const BranchTree& t, size_t i) {
    const TreeNode& n = t.nodes[i];
    ojson j;
    j["label"] = n.label;
    j["m"] = n.m;
    j["nonconstant"] = n.nonconstant;
    ojson children = ojson::array();
    for (size_t c : n.children) children.push_back(node_to_json(t, c));
    j["children"] = std::move(children);
    return j;
}

}  // namespace

std::string render_dot(const BranchTree& t) {
    std::ostringstream os;
    os << "digraph branching {\n";
    os << "  node [shape=ellipse];\n";
    for (const TreeNode& n : t.nodes) {
        os << "  \"" << node_name(n) << "\"";
        if (n.nonconstant) os << " [shape=box]";
        os << ";\n";
    }
    for (const TreeNode& n : t.nodes) {
        for (size_t c : n.children) {
            os << "  \"" << node_name(n) << "\" -> \"" << node_name(t.nodes[c])
               << "\";\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string render_tree_json(const BranchTree& t) {
    ojson j;
    j["k"] = t.k;
    j["max_level"] = t.max_level;
    ojson roots = ojson::array();
    for (size_t r : t.roots) roots.push_back(node_to_json(t, r));
    j["roots"] = std::move(roots);
    return j.dump(2) + "\n";
}

std::string parity_triangle_pbm(uint64_t rows) {
    if (rows < 1) throw std::invalid_argument("parity_triangle_pbm: requires rows >= 1");
    if (rows > 4096) throw ResourceError("triangle-rows", rows, 4096);
    std::ostringstream os;
    os << "P1\n" << rows << " " << rows << "\n";
    std::vector<uint8_t> cur{1};  // S(0,0) = 1
    for (uint64_t n = 0; n < rows; ++n) {
        for (uint64_t c = 0; c < rows; ++c) {
            if (c) os << ' ';
            os << (c < cur.size() ? char('0' + cur[c]) : '0');
        }
        os << '\n';
        // next[c] = (c * cur[c] + cur[c-1]) mod 2
        std::vector<uint8_t> next(cur.size() + 1, 0);
        for (uint64_t c = 1; c < next.size(); ++c) {
            const uint8_t self = (c < cur.size() && (c & 1)) ? cur[c] : 0;
            next[c] = self ^ cur[c - 1];
        }
        cur = std::move(next);
    }
    return os.str();
}

}  // namespace amm

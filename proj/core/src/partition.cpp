#include "sf/partition.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace sf {

Partition Partition::canonical(std::vector<std::vector<int>> blocks) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const std::vector<int>& b) { return b.empty(); }),
                 blocks.end());
    std::sort(blocks.begin(), blocks.end());
    return Partition{std::move(blocks)};
}

std::vector<int> Partition::ground() const {
    std::vector<int> g;
    for (const auto& b : blocks) g.insert(g.end(), b.begin(), b.end());
    std::sort(g.begin(), g.end());
    return g;
}

int Partition::block_of(int t) const {
    for (int i = 0; i < (int)blocks.size(); ++i)
        if (std::binary_search(blocks[i].begin(), blocks[i].end(), t)) return i;
    return -1;
}

std::string Partition::str() const {
    std::string s;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) s += "|";
        for (std::size_t j = 0; j < blocks[i].size(); ++j) {
            if (j) s += ",";
            s += std::to_string(blocks[i][j] + 1);
        }
    }
    return s;
}

Partition partition_by_components(const std::vector<int>& ground,
                                  const std::vector<int>& component_of) {
    std::map<int, std::vector<int>> by_comp;
    for (int t : ground) by_comp[component_of[t]].push_back(t);
    std::vector<std::vector<int>> blocks;
    for (auto& [comp, members] : by_comp) blocks.push_back(std::move(members));
    return Partition::canonical(std::move(blocks));
}

u64 PartitionFamily::total_count() const {
    u64 p = 0;
    for (const auto& set : per_node) p += set.size();
    return p;
}

void validate_family(const TreeDecomposition& td, const std::vector<BagContext>& ctxs,
                     const PartitionFamily& fam) {
    if (fam.per_node.size() != td.nodes.size())
        throw InputError("partition family does not cover every node");
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        for (const auto& pi : fam.per_node[x]) {
            std::set<int> seen;
            for (const auto& b : pi.blocks) {
                if (b.empty()) throw InputError("empty block in partition");
                for (int t : b)
                    if (!seen.insert(t).second)
                        throw InputError("overlapping blocks in partition");
            }
            if (std::vector<int>(seen.begin(), seen.end()) != ctxs[x].active)
                throw InputError("partition ground set differs from active terminals at node " +
                                 std::to_string(x));
        }
    }
}

PartitionFamily family_trivial(const Instance& inst, const TreeDecomposition& td) {
    auto ctxs = bag_contexts(inst, td);
    auto groups = demand_groups(inst);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        std::map<int, std::vector<int>> by_group;
        for (int t : ctxs[x].active) by_group[groups.group_of[t]].push_back(t);
        std::vector<std::vector<int>> blocks;
        for (auto& [g, members] : by_group) blocks.push_back(std::move(members));
        fam.per_node[x].push_back(Partition::canonical(std::move(blocks)));
    }
    return fam;
}

void write_family(const PartitionFamily& fam, std::ostream& out) {
    out << "PF 1\n";
    for (int x = 0; x < (int)fam.per_node.size(); ++x) {
        if (fam.per_node[x].empty()) continue;
        out << "NODE " << x << "\n";
        for (const auto& pi : fam.per_node[x]) out << "PART " << pi.str() << "\n";
    }
    out << "END\n";
}

std::string write_family_text(const PartitionFamily& fam) {
    std::ostringstream os;
    write_family(fam, os);
    return os.str();
}

PartitionFamily parse_family(std::istream& in, int node_count) {
    PartitionFamily fam;
    fam.per_node.resize(node_count);
    std::string line;
    bool saw_header = false;
    int cur_node = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (!saw_header) {
            int ver;
            if (tok != "PF" || !(ls >> ver) || ver != 1)
                throw InputError("PF line " + std::to_string(lineno) + ": expected 'PF 1'");
            saw_header = true;
        } else if (tok == "NODE") {
            if (!(ls >> cur_node) || cur_node < 0 || cur_node >= node_count)
                throw InputError("PF line " + std::to_string(lineno) + ": bad node id");
        } else if (tok == "PART") {
            if (cur_node < 0)
                throw InputError("PF line " + std::to_string(lineno) + ": PART before NODE");
            std::string rest;
            std::getline(ls, rest);
            std::vector<std::vector<int>> blocks(1);
            std::string num;
            for (char c : rest) {
                if (c == ' ' || c == '\t') continue;
                if (c == ',' || c == '|') {
                    if (num.empty())
                        throw InputError("PF line " + std::to_string(lineno) + ": empty member");
                    blocks.back().push_back(std::stoi(num) - 1);
                    num.clear();
                    if (c == '|') blocks.emplace_back();
                } else {
                    num += c;
                }
            }
            if (!num.empty()) blocks.back().push_back(std::stoi(num) - 1);
            fam.per_node[cur_node].push_back(Partition::canonical(std::move(blocks)));
        } else if (tok == "END") {
            break;
        } else {
            throw InputError("PF line " + std::to_string(lineno) + ": unknown directive");
        }
    }
    if (!saw_header) throw InputError("PF: missing header");
    return fam;
}

PartitionFamily parse_family_text(const std::string& text, int node_count) {
    std::istringstream in(text);
    return parse_family(in, node_count);
}

}  // namespace sf

#include "sf/sfp_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace sf {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw InputError("SFP line " + std::to_string(line) + ": " + what);
}

}  // namespace

Instance parse_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    int n = -1;
    bool saw_header = false, saw_end = false;
    std::vector<Edge> edges;
    std::vector<Demand> demands;
    std::vector<std::pair<int, std::string>> labels;

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "#") {
            std::string sub;
            if (ls >> sub && sub == "label") {
                int id;
                std::string name;
                if ((ls >> id >> name)) labels.emplace_back(id, name);
            }
            continue;
        }
        if (tok[0] == '#') continue;
        if (saw_end) fail(lineno, "content after END");
        if (!saw_header) {
            int version;
            if (tok != "SFP" || !(ls >> version) || version != 1)
                fail(lineno, "expected header 'SFP 1'");
            saw_header = true;
        } else if (tok == "NODES") {
            if (n >= 0) fail(lineno, "duplicate NODES line");
            if (!(ls >> n) || n < 0) fail(lineno, "bad NODES count");
        } else if (tok == "EDGE") {
            long long u, v, w;
            if (!(ls >> u >> v >> w)) fail(lineno, "bad EDGE line");
            if (n < 0) fail(lineno, "EDGE before NODES");
            if (u < 1 || u > n || v < 1 || v > n) fail(lineno, "edge endpoint out of range");
            if (u == v) fail(lineno, "self-loop edge");
            if (w < 1) fail(lineno, "non-positive weight");
            if ((u64)w > kMaxEdgeWeight) fail(lineno, "edge weight exceeds 2^32 cap");
            edges.push_back(Edge{(int)u - 1, (int)v - 1, (Weight)w});
        } else if (tok == "DEMAND") {
            long long s, t;
            if (!(ls >> s >> t)) fail(lineno, "bad DEMAND line");
            if (n < 0) fail(lineno, "DEMAND before NODES");
            if (s < 1 || s > n || t < 1 || t > n) fail(lineno, "dangling demand id");
            if (s == t) fail(lineno, "demand between a vertex and itself");
            demands.push_back(Demand{(int)s - 1, (int)t - 1});
        } else if (tok == "END") {
            saw_end = true;
        } else {
            fail(lineno, "unknown directive '" + tok + "'");
        }
    }
    if (!saw_header) throw InputError("SFP: missing header");
    if (n < 0) throw InputError("SFP: missing NODES line");
    if (!saw_end) throw InputError("SFP: missing END line");

    std::vector<std::string> label_vec;
    if (!labels.empty()) {
        label_vec.assign(n, "");
        for (auto& [id, name] : labels) {
            if (id < 1 || id > n) throw InputError("SFP: label id out of range");
            label_vec[id - 1] = name;
        }
    }
    try {
        return make_instance(n, std::move(edges), std::move(demands), std::move(label_vec));
    } catch (const InputError& e) {
        throw InputError(std::string("SFP: ") + e.what());
    }
}

Instance parse_instance_text(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file: " + path);
    return parse_instance(in);
}

void write_instance(const Instance& inst, std::ostream& out) {
    out << "SFP 1\n";
    out << "NODES " << inst.n << "\n";
    for (int v = 0; v < (int)inst.labels.size(); ++v)
        if (!inst.labels[v].empty())
            out << "# label " << (v + 1) << " " << inst.labels[v] << "\n";
    // make_instance keeps edges and demands sorted, so this is canonical
    for (const auto& e : inst.edges)
        out << "EDGE " << (e.u + 1) << " " << (e.v + 1) << " " << e.w << "\n";
    for (const auto& d : inst.demands)
        out << "DEMAND " << (d.s + 1) << " " << (d.t + 1) << "\n";
    out << "END\n";
}

std::string write_instance_text(const Instance& inst) {
    std::ostringstream os;
    write_instance(inst, os);
    return os.str();
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write instance file: " + path);
    write_instance(inst, out);
}

}  // namespace sf

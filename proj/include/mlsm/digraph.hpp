#pragma once

// Directed and undirected graph types used by the reduction generators, with
// a DIMACS-like text format and a backtracking isomorphism search.

#include "mlsm/core.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace mlsm {

struct Digraph {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;

    std::vector<std::vector<char>> matrix() const {
        std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
        for (auto [a, b] : arcs) m[a - 1][b - 1] = 1;
        return m;
    }
    std::vector<std::pair<int, int>> sorted_arcs() const {
        auto s = arcs;
        std::sort(s.begin(), s.end());
        return s;
    }
    bool operator==(const Digraph&) const = default;
};

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // stored with first < second

    std::vector<std::vector<char>> matrix() const {
        std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
        for (auto [a, b] : edges) m[a - 1][b - 1] = m[b - 1][a - 1] = 1;
        return m;
    }
    bool operator==(const Graph&) const = default;
};

inline void validate(const Digraph& d) {
    if (d.n < 1) throw std::invalid_argument("digraph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : d.arcs) {
        if (a < 1 || a > d.n || b < 1 || b > d.n) throw std::invalid_argument("arc endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop arc");
        if (!seen.insert({a, b}).second) throw std::invalid_argument("duplicate arc");
    }
}

inline void validate(const Graph& g) {
    if (g.n < 1) throw std::invalid_argument("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : g.edges) {
        if (a < 1 || a > g.n || b < 1 || b > g.n) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop edge");
        if (a > b) throw std::invalid_argument("edge endpoints must be stored low-high");
        if (!seen.insert({a, b}).second) throw std::invalid_argument("duplicate edge");
    }
}

inline bool is_two_cycle_free(const Digraph& d) {
    std::set<std::pair<int, int>> seen(d.arcs.begin(), d.arcs.end());
    for (auto [a, b] : d.arcs)
        if (seen.count({b, a})) return false;
    return true;
}

// Exactly one arc between every vertex pair.
inline bool is_tournament(const Digraph& d) {
    if (static_cast<long long>(d.arcs.size()) != static_cast<long long>(d.n) * (d.n - 1) / 2)
        return false;
    auto m = d.matrix();
    for (int a = 0; a < d.n; ++a)
        for (int b = a + 1; b < d.n; ++b)
            if (m[a][b] + m[b][a] != 1) return false;
    return true;
}

// Text format: optional "c ..." comment lines, one "p digraph n m" (or
// "p graph n m") header, then m lines "a u v" (or "e u v").
inline Digraph parse_digraph(std::istream& in) {
    Digraph d;
    std::string line;
    int lineno = 0, declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (!(ls >> kind >> d.n >> declared) || kind != "digraph")
                throw ParseError("line " + std::to_string(lineno) + ": expected 'p digraph n m'");
        } else if (tok == "a") {
            if (declared < 0) throw ParseError("line " + std::to_string(lineno) + ": arc before header");
            int a, b;
            if (!(ls >> a >> b)) throw ParseError("line " + std::to_string(lineno) + ": expected 'a u v'");
            d.arcs.push_back({a, b});
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown line '" + tok + "'");
        }
    }
    if (declared < 0) throw ParseError("line " + std::to_string(lineno) + ": missing 'p digraph' header");
    if (declared != static_cast<int>(d.arcs.size()))
        throw ParseError("line " + std::to_string(lineno) + ": arc count disagrees with header");
    try {
        validate(d);
    } catch (const std::invalid_argument& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    return d;
}

inline Digraph parse_digraph(const std::string& text) {
    std::istringstream in(text);
    return parse_digraph(in);
}

inline std::string serialize_digraph(const Digraph& d) {
    std::ostringstream out;
    out << "p digraph " << d.n << " " << d.arcs.size() << "\n";
    for (auto [a, b] : d.arcs) out << "a " << a << " " << b << "\n";
    return out.str();
}

inline Graph parse_graph(std::istream& in) {
    Graph g;
    std::string line;
    int lineno = 0, declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (!(ls >> kind >> g.n >> declared) || kind != "graph")
                throw ParseError("line " + std::to_string(lineno) + ": expected 'p graph n m'");
        } else if (tok == "e") {
            if (declared < 0) throw ParseError("line " + std::to_string(lineno) + ": edge before header");
            int a, b;
            if (!(ls >> a >> b)) throw ParseError("line " + std::to_string(lineno) + ": expected 'e u v'");
            g.edges.push_back({std::min(a, b), std::max(a, b)});
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown line '" + tok + "'");
        }
    }
    if (declared < 0) throw ParseError("line " + std::to_string(lineno) + ": missing 'p graph' header");
    if (declared != static_cast<int>(g.edges.size()))
        throw ParseError("line " + std::to_string(lineno) + ": edge count disagrees with header");
    try {
        validate(g);
    } catch (const std::invalid_argument& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    return g;
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << "p graph " << g.n << " " << g.edges.size() << "\n";
    for (auto [a, b] : g.edges) out << "e " << a << " " << b << "\n";
    return out.str();
}

namespace detail {

// Iterative refinement of vertex classes: start from (out-degree,
// in-degree), then repeatedly hash each vertex with the sorted multisets of
// its out- and in-neighbor classes until the partition stops splitting.
inline std::vector<int> refine_classes(const std::vector<std::vector<char>>& m) {
    int n = static_cast<int>(m.size());
    std::vector<int> cls(n, 0);
    auto relabel = [&](std::vector<std::vector<long long>>& keys) {
        std::map<std::vector<long long>, int> ids;
        for (int v = 0; v < n; ++v) ids.emplace(keys[v], 0);
        int next = 0;
        for (auto& kv : ids) kv.second = next++;
        std::vector<int> out(n);
        for (int v = 0; v < n; ++v) out[v] = ids[keys[v]];
        return out;
    };
    {
        std::vector<std::vector<long long>> keys(n);
        for (int v = 0; v < n; ++v) {
            long long outd = 0, ind = 0;
            for (int x = 0; x < n; ++x) {
                outd += m[v][x];
                ind += m[x][v];
            }
            keys[v] = {outd, ind};
        }
        cls = relabel(keys);
    }
    while (true) {
        std::vector<std::vector<long long>> keys(n);
        for (int v = 0; v < n; ++v) {
            std::vector<long long> outk, ink;
            for (int x = 0; x < n; ++x) {
                if (m[v][x]) outk.push_back(cls[x]);
                if (m[x][v]) ink.push_back(cls[x]);
            }
            std::sort(outk.begin(), outk.end());
            std::sort(ink.begin(), ink.end());
            keys[v].push_back(cls[v]);
            keys[v].push_back(-1);
            keys[v].insert(keys[v].end(), outk.begin(), outk.end());
            keys[v].push_back(-2);
            keys[v].insert(keys[v].end(), ink.begin(), ink.end());
        }
        auto next = relabel(keys);
        if (next == cls) break;
        cls = next;
    }
    return cls;
}

} // namespace detail

// Arc-preserving bijection from d1's vertices to d2's, or none. Mapping is
// returned 1-indexed: result[v-1] is the image of v. Backtracking over
// vertices ordered by refined class size, candidates restricted to the same
// class, adjacency checked against all previously mapped vertices.
inline std::optional<std::vector<int>> digraph_isomorphic(const Digraph& d1, const Digraph& d2) {
    validate(d1);
    validate(d2);
    if (d1.n != d2.n)
        throw std::invalid_argument("digraph_isomorphic: vertex-count mismatch");
    if (d1.arcs.size() != d2.arcs.size()) return std::nullopt;
    int n = d1.n;
    auto m1 = d1.matrix(), m2 = d2.matrix();
    auto c1 = detail::refine_classes(m1), c2 = detail::refine_classes(m2);
    std::map<int, int> count1, count2;
    for (int v = 0; v < n; ++v) {
        ++count1[c1[v]];
        ++count2[c2[v]];
    }
    if (count1 != count2) return std::nullopt;

    // map scarce classes first
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (count1[c1[a]] != count1[c1[b]]) return count1[c1[a]] < count1[c1[b]];
        if (c1[a] != c1[b]) return c1[a] < c1[b];
        return a < b;
    });

    std::vector<int> image(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int idx) -> bool {
        if (idx == n) return true;
        int v = order[idx];
        for (int x = 0; x < n; ++x) {
            if (used[x] || c2[x] != c1[v]) continue;
            bool ok = true;
            for (int j = 0; j < idx && ok; ++j) {
                int u = order[j];
                if (m1[v][u] != m2[x][image[u]] || m1[u][v] != m2[image[u]][x]) ok = false;
            }
            if (!ok) continue;
            image[v] = x;
            used[x] = 1;
            if (self(self, idx + 1)) return true;
            used[x] = 0;
            image[v] = -1;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    std::vector<int> out(n);
    for (int v = 0; v < n; ++v) out[v] = image[v] + 1;
    return out;
}

} // namespace mlsm

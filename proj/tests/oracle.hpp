#pragma once

// Plain-loop reference implementations of the stability definitions, kept
// deliberately naive and separate from the library so the two can be judged
// against each other.

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <mlsm/core.hpp>

namespace oracle {

inline int rank_of(const mlsm::Profile& p, mlsm::Side side, int layer, int agent, int other) {
    const auto& lst = p.list(side, layer, agent);
    for (std::size_t i = 0; i < lst.size(); ++i)
        if (lst[i] == other) return static_cast<int>(i);
    return static_cast<int>(lst.size());
}

inline bool prefers(const mlsm::Profile& p, mlsm::Side side, int layer, int agent, int a, int b) {
    return rank_of(p, side, layer, agent, a) < rank_of(p, side, layer, agent, b);
}

inline bool blocks(const mlsm::Profile& p, const mlsm::Matching& m, int u, int w, int layer) {
    return !m.contains(u, w) && prefers(p, mlsm::Side::U, layer, u, w, m.partner_of_u(u)) &&
           prefers(p, mlsm::Side::W, layer, w, u, m.partner_of_w(w));
}

inline bool layer_stable(const mlsm::Profile& p, const mlsm::Matching& m, int layer) {
    for (int u = 1; u <= p.n; ++u)
        for (int w = 1; w <= p.n; ++w)
            if (blocks(p, m, u, w, layer)) return false;
    return true;
}

inline std::vector<int> stable_layers(const mlsm::Profile& p, const mlsm::Matching& m) {
    std::vector<int> out;
    for (int layer = 1; layer <= p.layers; ++layer)
        if (layer_stable(p, m, layer)) out.push_back(layer);
    return out;
}

inline bool global_stable(const mlsm::Profile& p, const mlsm::Matching& m, int alpha) {
    return static_cast<int>(stable_layers(p, m).size()) >= alpha;
}

inline bool pair_stable(const mlsm::Profile& p, const mlsm::Matching& m, int alpha) {
    int beta = p.layers - alpha + 1;
    for (int u = 1; u <= p.n; ++u)
        for (int w = 1; w <= p.n; ++w) {
            if (m.contains(u, w)) continue;
            int count = 0;
            for (int layer = 1; layer <= p.layers; ++layer)
                if (blocks(p, m, u, w, layer)) ++count;
            if (count >= beta) return false;
        }
    return true;
}

inline bool individual_stable(const mlsm::Profile& p, const mlsm::Matching& m, int alpha) {
    int beta = p.layers - alpha + 1;
    for (int u = 1; u <= p.n; ++u)
        for (int w = 1; w <= p.n; ++w) {
            if (m.contains(u, w)) continue;
            int cu = 0, cw = 0;
            for (int layer = 1; layer <= p.layers; ++layer) {
                if (prefers(p, mlsm::Side::U, layer, u, w, m.partner_of_u(u))) ++cu;
                if (prefers(p, mlsm::Side::W, layer, w, u, m.partner_of_w(w))) ++cw;
            }
            if (cu >= beta && cw >= beta) return false;
        }
    return true;
}

inline bool stable(const mlsm::Profile& p, const mlsm::Matching& m, mlsm::Concept c, int alpha) {
    switch (c) {
    case mlsm::Concept::Global: return global_stable(p, m, alpha);
    case mlsm::Concept::Pair: return pair_stable(p, m, alpha);
    default: return individual_stable(p, m, alpha);
    }
}

// Lexicographically lowest offending pair, mirroring the checker's contract.
inline std::optional<std::pair<int, int>> witness(const mlsm::Profile& p, const mlsm::Matching& m,
                                                  mlsm::Concept c, int alpha) {
    if (c == mlsm::Concept::Global) return std::nullopt;
    int beta = p.layers - alpha + 1;
    for (int u = 1; u <= p.n; ++u)
        for (int w = 1; w <= p.n; ++w) {
            if (m.contains(u, w)) continue;
            int cb = 0, cu = 0, cw = 0;
            for (int layer = 1; layer <= p.layers; ++layer) {
                bool pu = prefers(p, mlsm::Side::U, layer, u, w, m.partner_of_u(u));
                bool pw = prefers(p, mlsm::Side::W, layer, w, u, m.partner_of_w(w));
                if (pu) ++cu;
                if (pw) ++cw;
                if (pu && pw) ++cb;
            }
            bool bad = c == mlsm::Concept::Pair ? cb >= beta : (cu >= beta && cw >= beta);
            if (bad) return std::make_pair(u, w);
        }
    return std::nullopt;
}

inline std::vector<mlsm::Matching> all_matchings(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<mlsm::Matching> out;
    do {
        out.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline std::vector<mlsm::Matching> enumerate(const mlsm::Profile& p, mlsm::Concept c, int alpha) {
    std::vector<mlsm::Matching> out;
    for (const auto& m : all_matchings(p.n))
        if (stable(p, m, c, alpha)) out.push_back(m);
    return out;
}

inline bool exists(const mlsm::Profile& p, mlsm::Concept c, int alpha) {
    for (const auto& m : all_matchings(p.n))
        if (stable(p, m, c, alpha)) return true;
    return false;
}

}  // namespace oracle

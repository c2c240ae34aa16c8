#pragma once

// Stability checks for the three concepts.
//
// Throughout, a matching M is perfect and {u,w} ranges over pairs not in M.
// In layer i, {u,w} blocks M when u prefers w to M(u) and w prefers u to
// M(w); {u,w} is beta-blocking when that holds in at least beta layers.
// For individual stability the two sides are counted separately: the pair
// must dominate {u,M(u)} in >= beta layers and {w,M(w)} in >= beta layers,
// where the two layer sets may differ.

#include "mlsm/core.hpp"

#include <optional>
#include <utility>

namespace mlsm {

// rank_of[layer-1][a-1][b-1] = position of b in a's list (0 = top).
struct RankTable {
    int n = 0;
    int layers = 0;
    std::vector<std::vector<std::vector<int>>> u_rank, w_rank;

    explicit RankTable(const Profile& p) : n(p.n), layers(p.layers) {
        auto build = [&](const std::vector<LayerLists>& lls) {
            std::vector<std::vector<std::vector<int>>> r(
                p.layers, std::vector<std::vector<int>>(p.n, std::vector<int>(p.n, 0)));
            for (int layer = 0; layer < p.layers; ++layer)
                for (int a = 0; a < p.n; ++a)
                    for (int pos = 0; pos < p.n; ++pos)
                        r[layer][a][lls[layer][a][pos] - 1] = pos;
            return r;
        };
        u_rank = build(p.u_prefs);
        w_rank = build(p.w_prefs);
    }

    // u prefers w over w2 in the given layer
    bool u_prefers(int layer, int u, int w, int w2) const {
        return u_rank[layer - 1][u - 1][w - 1] < u_rank[layer - 1][u - 1][w2 - 1];
    }
    // w prefers u over u2 in the given layer
    bool w_prefers(int layer, int w, int u, int u2) const {
        return w_rank[layer - 1][w - 1][u - 1] < w_rank[layer - 1][w - 1][u2 - 1];
    }
};

struct AgentPair {
    int u = 0;
    int w = 0;
    bool operator==(const AgentPair&) const = default;
};

// {u,w} dominates a pair sharing one of its endpoints. Sharing u: the test is
// whether u prefers w to the other pair's W agent; sharing w: whether w
// prefers u to the other pair's U agent.
inline bool dominates(const RankTable& r, int layer, AgentPair a, AgentPair b) {
    if (a.u == b.u && a.w == b.w) return false;
    if (a.u == b.u) return r.u_prefers(layer, a.u, a.w, b.w);
    if (a.w == b.w) return r.w_prefers(layer, a.w, a.u, b.u);
    throw std::invalid_argument("dominates requires pairs sharing an endpoint");
}

inline bool dominates(const Profile& p, int layer, AgentPair a, AgentPair b) {
    return dominates(RankTable(p), layer, a, b);
}

inline std::vector<int> dominating_layers(const RankTable& r, AgentPair a, AgentPair b) {
    std::vector<int> out;
    for (int layer = 1; layer <= r.layers; ++layer)
        if (dominates(r, layer, a, b)) out.push_back(layer);
    return out;
}

inline bool is_beta_dominating(const RankTable& r, AgentPair a, AgentPair b, int beta) {
    return static_cast<int>(dominating_layers(r, a, b).size()) >= beta;
}

inline bool blocks(const RankTable& r, const Matching& m, AgentPair pr, int layer) {
    if (m.contains(pr.u, pr.w)) return false;
    return r.u_prefers(layer, pr.u, pr.w, m.partner_of_u(pr.u)) &&
           r.w_prefers(layer, pr.w, pr.u, m.partner_of_w(pr.w));
}

inline bool blocks(const Profile& p, const Matching& m, AgentPair pr, int layer) {
    return blocks(RankTable(p), m, pr, layer);
}

inline std::vector<int> blocking_layers(const RankTable& r, const Matching& m, AgentPair pr) {
    std::vector<int> out;
    for (int layer = 1; layer <= r.layers; ++layer)
        if (blocks(r, m, pr, layer)) out.push_back(layer);
    return out;
}

inline std::vector<int> blocking_layers(const Profile& p, const Matching& m, AgentPair pr) {
    return blocking_layers(RankTable(p), m, pr);
}

inline bool is_beta_blocking(const RankTable& r, const Matching& m, AgentPair pr, int beta) {
    return static_cast<int>(blocking_layers(r, m, pr).size()) >= beta;
}

inline bool is_stable_in_layer(const RankTable& r, const Matching& m, int layer) {
    for (int u = 1; u <= r.n; ++u)
        for (int w = 1; w <= r.n; ++w)
            if (blocks(r, m, {u, w}, layer)) return false;
    return true;
}

inline std::vector<int> stable_layer_set(const RankTable& r, const Matching& m) {
    std::vector<int> out;
    for (int layer = 1; layer <= r.layers; ++layer)
        if (is_stable_in_layer(r, m, layer)) out.push_back(layer);
    return out;
}

inline std::vector<int> stable_layer_set(const Profile& p, const Matching& m) {
    return stable_layer_set(RankTable(p), m);
}

struct CheckResult {
    bool stable = false;
    // Global concept, when stable: the first alpha layers the matching is
    // stable in. Pair/individual concepts, when unstable: the offending pair,
    // lexicographically lowest by (u, w).
    std::vector<int> certificate_layers;
    std::optional<AgentPair> witness;
};

inline void check_query(const Profile& p, const Matching& m, int alpha) {
    if (m.size() != p.n) throw std::invalid_argument("matching size does not match instance");
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
}

inline CheckResult is_globally_stable(const RankTable& r, const Matching& m, int alpha) {
    CheckResult res;
    auto layers = stable_layer_set(r, m);
    if (static_cast<int>(layers.size()) >= alpha) {
        res.stable = true;
        res.certificate_layers.assign(layers.begin(), layers.begin() + alpha);
    }
    return res;
}

inline CheckResult is_globally_stable(const Profile& p, const Matching& m, int alpha) {
    check_query(p, m, alpha);
    return is_globally_stable(RankTable(p), m, alpha);
}

inline CheckResult is_pair_stable(const RankTable& r, const Matching& m, int alpha) {
    CheckResult res;
    res.stable = true;
    int beta = r.layers - alpha + 1;
    for (int u = 1; u <= r.n; ++u)
        for (int w = 1; w <= r.n; ++w) {
            if (m.contains(u, w)) continue;
            int count = 0;
            for (int layer = 1; layer <= r.layers; ++layer)
                if (r.u_prefers(layer, u, w, m.partner_of_u(u)) &&
                    r.w_prefers(layer, w, u, m.partner_of_w(w)))
                    ++count;
            if (count >= beta) {
                res.stable = false;
                res.witness = AgentPair{u, w};
                return res;
            }
        }
    return res;
}

inline CheckResult is_pair_stable(const Profile& p, const Matching& m, int alpha) {
    check_query(p, m, alpha);
    return is_pair_stable(RankTable(p), m, alpha);
}

inline CheckResult is_individually_stable(const RankTable& r, const Matching& m, int alpha) {
    CheckResult res;
    res.stable = true;
    int beta = r.layers - alpha + 1;
    for (int u = 1; u <= r.n; ++u)
        for (int w = 1; w <= r.n; ++w) {
            if (m.contains(u, w)) continue;
            int count_u = 0, count_w = 0;
            for (int layer = 1; layer <= r.layers; ++layer) {
                if (r.u_prefers(layer, u, w, m.partner_of_u(u))) ++count_u;
                if (r.w_prefers(layer, w, u, m.partner_of_w(w))) ++count_w;
            }
            if (count_u >= beta && count_w >= beta) {
                res.stable = false;
                res.witness = AgentPair{u, w};
                return res;
            }
        }
    return res;
}

inline CheckResult is_individually_stable(const Profile& p, const Matching& m, int alpha) {
    check_query(p, m, alpha);
    return is_individually_stable(RankTable(p), m, alpha);
}

inline CheckResult check_stability(const RankTable& r, const Matching& m, Concept c, int alpha) {
    switch (c) {
    case Concept::Global: return is_globally_stable(r, m, alpha);
    case Concept::Pair: return is_pair_stable(r, m, alpha);
    default: return is_individually_stable(r, m, alpha);
    }
}

inline CheckResult check_stability(const Profile& p, const Matching& m, Concept c, int alpha) {
    check_query(p, m, alpha);
    return check_stability(RankTable(p), m, c, alpha);
}

// Largest alpha for which the matching satisfies the concept; 0 when it
// fails even at alpha = 1. Each concept is monotone: holding at alpha
// implies holding at alpha - 1.
inline int max_alpha(const Profile& p, const Matching& m, Concept c) {
    if (m.size() != p.n) throw std::invalid_argument("matching size does not match instance");
    RankTable r(p);
    if (c == Concept::Global) return static_cast<int>(stable_layer_set(r, m).size());
    int best = 0;
    for (int alpha = 1; alpha <= p.layers; ++alpha) {
        if (!check_stability(r, m, c, alpha).stable) break;
        best = alpha;
    }
    return best;
}

} // namespace mlsm

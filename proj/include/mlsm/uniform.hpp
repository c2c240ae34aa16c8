#pragma once

// Solvers for uniform profiles, where within each layer all agents of a side
// share one list. Each layer then has a unique stable matching, and
// individual stability can be phrased on two induced digraphs.

#include "mlsm/check.hpp"
#include "mlsm/core.hpp"
#include "mlsm/digraph.hpp"

#include <optional>

namespace mlsm {

// The unique stable matching of a uniform layer: the k-th U-agent by the
// shared W-side list gets the k-th W-agent by the shared U-side list. Any
// other arrangement lets two k-leaders block.
inline Matching unique_stable_uniform_layer(const Profile& p, int layer) {
    if (!is_uniform(p)) throw std::invalid_argument("profile is not uniform");
    if (layer < 1 || layer > p.layers) throw std::invalid_argument("layer out of range");
    const auto& lu = p.u_prefs[layer - 1][0]; // shared ranking of W agents
    const auto& lw = p.w_prefs[layer - 1][0]; // shared ranking of U agents
    std::vector<int> to_w(p.n, 0);
    for (int k = 0; k < p.n; ++k) to_w[lw[k] - 1] = lu[k];
    return Matching(std::move(to_w));
}

struct UniformGlobalResult {
    std::optional<Matching> matching;
    std::vector<int> stable_layers; // all layers the returned matching is stable in
};

// Only the per-layer unique matchings can be stable anywhere, so collect
// them and count duplicates. Preference among qualifying candidates: the one
// whose earliest stable layer is smallest.
inline UniformGlobalResult solve_global_uniform(const Profile& p, int alpha) {
    if (!is_uniform(p)) throw std::invalid_argument("profile is not uniform");
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
    std::vector<Matching> per_layer;
    per_layer.reserve(p.layers);
    for (int layer = 1; layer <= p.layers; ++layer)
        per_layer.push_back(unique_stable_uniform_layer(p, layer));
    UniformGlobalResult res;
    for (int i = 0; i < p.layers; ++i) {
        bool seen_before = false;
        for (int j = 0; j < i && !seen_before; ++j)
            if (per_layer[j] == per_layer[i]) seen_before = true;
        if (seen_before) continue;
        std::vector<int> layers;
        for (int j = i; j < p.layers; ++j)
            if (per_layer[j] == per_layer[i]) layers.push_back(j + 1);
        if (static_cast<int>(layers.size()) >= alpha) {
            res.matching = per_layer[i];
            res.stable_layers = layers;
            return res;
        }
    }
    return res;
}

// G_I on U-agents: arc (a,b) when the shared W-side list prefers a to b in
// at least ell-alpha+1 layers. H_I symmetrically on W-agents.
inline std::pair<Digraph, Digraph> induce_digraphs(const Profile& p, int alpha) {
    if (!is_uniform(p)) throw std::invalid_argument("profile is not uniform");
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
    int beta = p.layers - alpha + 1;
    RankTable rt(p);
    Digraph g, h;
    g.n = h.n = p.n;
    for (int a = 1; a <= p.n; ++a)
        for (int b = 1; b <= p.n; ++b) {
            if (a == b) continue;
            int cnt_w = 0, cnt_u = 0;
            for (int layer = 1; layer <= p.layers; ++layer) {
                if (rt.w_prefers(layer, 1, a, b)) ++cnt_w; // shared W-side list
                if (rt.u_prefers(layer, 1, a, b)) ++cnt_u; // shared U-side list
            }
            if (cnt_w >= beta) g.arcs.push_back({a, b});
            if (cnt_u >= beta) h.arcs.push_back({a, b});
        }
    return {g, h};
}

// A pair {u,w} individually blocks at this alpha exactly when (u, M(w)) is
// an arc of G_I and (w, M(u)) is an arc of H_I, so stability is: no G_I arc
// (u,u2) has (M(u2),M(u)) in H_I. The H_I-side condition is the same
// statement read from the other digraph; both are checked.
inline bool check_individual_via_digraphs(const Digraph& g, const Digraph& h, const Matching& m) {
    if (g.n != h.n || m.size() != g.n) throw std::invalid_argument("vertex counts disagree");
    auto gm = g.matrix(), hm = h.matrix();
    for (auto [a, b] : g.arcs)
        if (hm[m.partner_of_u(b) - 1][m.partner_of_u(a) - 1]) return false;
    for (auto [a, b] : h.arcs)
        if (gm[m.partner_of_w(b) - 1][m.partner_of_w(a) - 1]) return false;
    return true;
}

struct UniformIndividualResult {
    std::optional<Matching> matching;
    bool two_cycle_found = false;
};

// Threshold 2*alpha >= layers+2 makes beta <= alpha-1, so every vertex pair
// carries at least one arc in each induced digraph. A pair with both arcs
// leaves the digraph conditions unsatisfiable; otherwise both digraphs are
// tournaments and stable matchings are exactly arc-preserving bijections
// from G_I to H_I.
inline UniformIndividualResult solve_individual_uniform(const Profile& p, int alpha) {
    if (!is_uniform(p)) throw std::invalid_argument("profile is not uniform");
    if (2 * alpha < p.layers + 2)
        throw std::invalid_argument("solver requires 2*alpha >= layers+2");
    if (alpha > p.layers) throw std::invalid_argument("alpha exceeds layer count");
    auto [g, h] = induce_digraphs(p, alpha);
    UniformIndividualResult res;
    if (!is_two_cycle_free(g) || !is_two_cycle_free(h)) {
        res.two_cycle_found = true;
        return res;
    }
    if (!is_tournament(g) || !is_tournament(h))
        throw std::logic_error("induced digraphs not tournaments despite threshold");
    auto iso = digraph_isomorphic(g, h);
    if (!iso) return res;
    Matching m(*iso);
    if (!check_individual_via_digraphs(g, h, m))
        throw std::logic_error("tournament isomorphism failed the digraph conditions");
    res.matching = std::move(m);
    return res;
}

} // namespace mlsm

#pragma once

// Solvers that need only the core model: deferred acceptance within one
// layer, the marking algorithm for full individual stability, single-layer
// and multi-layer enumeration, and the layer-subset search for
// single-layered global stability.

#include "mlsm/check.hpp"
#include "mlsm/core.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <set>

namespace mlsm {

// Classic deferred acceptance restricted to one layer. Proposers are
// processed lowest index first, so the result is deterministic. Returns the
// matching in U/W terms regardless of which side proposes.
inline Matching gale_shapley(const Profile& p, int layer, Side proposing = Side::U) {
    if (layer < 1 || layer > p.layers) throw std::invalid_argument("layer out of range");
    const auto& prop_lists = (proposing == Side::U) ? p.u_prefs[layer - 1] : p.w_prefs[layer - 1];
    const auto& recv_lists = (proposing == Side::U) ? p.w_prefs[layer - 1] : p.u_prefs[layer - 1];
    int n = p.n;
    std::vector<std::vector<int>> recv_rank(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int pos = 0; pos < n; ++pos) recv_rank[a][recv_lists[a][pos] - 1] = pos;

    std::vector<int> next_choice(n, 0), holder(n, 0), engaged_to(n, 0);
    std::vector<int> free_stack;
    for (int a = n; a >= 1; --a) free_stack.push_back(a);
    while (!free_stack.empty()) {
        int a = free_stack.back();
        free_stack.pop_back();
        int b = prop_lists[a - 1][next_choice[a - 1]++];
        int cur = holder[b - 1];
        if (cur == 0) {
            holder[b - 1] = a;
            engaged_to[a - 1] = b;
        } else if (recv_rank[b - 1][a - 1] < recv_rank[b - 1][cur - 1]) {
            holder[b - 1] = a;
            engaged_to[a - 1] = b;
            engaged_to[cur - 1] = 0;
            free_stack.push_back(cur);
        } else {
            free_stack.push_back(a);
        }
    }
    std::vector<int> to_w(n);
    if (proposing == Side::U)
        for (int u = 1; u <= n; ++u) to_w[u - 1] = engaged_to[u - 1];
    else
        for (int w = 1; w <= n; ++w) to_w[engaged_to[w - 1] - 1] = w;
    return Matching(std::move(to_w));
}

// ---------------------------------------------------------------------------
// Marking algorithm for individual stability in all layers (alpha = ell).
//
// Pairs get marked when they provably belong to no such matching. Each outer
// pass walks, for every u and every layer, down u's list, processing each
// partner in turn and stopping right after the first partner whose pair with
// u was unmarked when visited. Processing a partner w marks {u2, w} for
// every u2 that w ranks below u in at least one layer. The pass loop stops
// when an agent's whole list is marked (no matching exists) or when a pass
// adds no marks, at which point each u's first unmarked partner is the same
// in every layer and those pairs form the answer. Stopping before the first
// unmarked pair instead breaks the fixpoint guarantee; small instances with
// no solution then end with no fully marked list.
// ---------------------------------------------------------------------------

struct IndividualSolveResult {
    std::optional<Matching> matching;
    long long marks = 0; // distinct pairs marked, at most n*n
    int passes = 0;
    std::optional<std::pair<Side, int>> exhausted_agent; // set on failure
};

inline IndividualSolveResult solve_l_individual(const Profile& p) {
    int n = p.n;
    RankTable rt(p);
    std::vector<std::vector<char>> marked(n, std::vector<char>(n, 0));
    std::vector<int> row_marks(n, 0), col_marks(n, 0);
    IndividualSolveResult res;
    std::optional<std::pair<Side, int>> fail;

    auto mark = [&](int u, int w) {
        if (marked[u - 1][w - 1]) return;
        marked[u - 1][w - 1] = 1;
        ++res.marks;
        if (++row_marks[u - 1] == n && !fail) fail = std::make_pair(Side::U, u);
        if (++col_marks[w - 1] == n && !fail) fail = std::make_pair(Side::W, w);
    };
    auto w_prefers_somewhere = [&](int w, int a, int b) {
        for (int layer = 1; layer <= p.layers; ++layer)
            if (rt.w_prefers(layer, w, a, b)) return true;
        return false;
    };
    auto mark_from = [&](int u, int w) {
        for (int u2 = 1; u2 <= n && !fail; ++u2)
            if (u2 != u && w_prefers_somewhere(w, u, u2)) mark(u2, w);
    };

    while (!fail) {
        ++res.passes;
        long long before = res.marks;
        for (int u = 1; u <= n && !fail; ++u)
            for (int layer = 1; layer <= p.layers && !fail; ++layer) {
                const auto& lst = p.u_prefs[layer - 1][u - 1];
                for (size_t r = 0; r < lst.size(); ++r) {
                    int w = lst[r];
                    bool was_marked = marked[u - 1][w - 1] != 0;
                    mark_from(u, w);
                    if (fail || !was_marked) break;
                }
            }
        if (fail || res.marks == before) break;
    }
    if (fail) {
        res.exhausted_agent = fail;
        return res;
    }

    std::vector<int> to_w(n, 0);
    for (int u = 1; u <= n; ++u) {
        int first = 0;
        for (int w : p.u_prefs[0][u - 1])
            if (!marked[u - 1][w - 1]) {
                first = w;
                break;
            }
        for (int layer = 2; layer <= p.layers; ++layer) {
            int other = 0;
            for (int w : p.u_prefs[layer - 1][u - 1])
                if (!marked[u - 1][w - 1]) {
                    other = w;
                    break;
                }
            if (other != first)
                throw std::logic_error("marking fixpoint left inconsistent first unmarked partners");
        }
        to_w[u - 1] = first;
    }
    try {
        res.matching = Matching(std::move(to_w));
    } catch (const std::invalid_argument&) {
        throw std::logic_error("marking fixpoint did not produce a bijection");
    }
    return res;
}

// ---------------------------------------------------------------------------
// Single-layer enumeration by marriage breaking (McVitie-Wilson style).
//
// Starting from the proposer-optimal matching, breaking the pair of one u
// and letting the displaced agents re-propose down their lists either runs
// somebody off the end of a list or settles into another stable matching.
// The set of all stable matchings of the layer is closed under these moves
// and reachable from the optimum, so a worklist closure with deduplication
// visits exactly the stable matchings of the layer.
// ---------------------------------------------------------------------------

namespace detail {

// Calls sink(to_w) for every stable matching of the layer until the sink
// returns false. Matchings arrive in discovery order, optimum first.
template <typename Sink>
inline void layer_stable_closure(const Profile& p, int layer, Sink&& sink) {
    int n = p.n;
    const auto& ulist = p.u_prefs[static_cast<size_t>(layer) - 1];
    std::vector<std::vector<int>> urank(static_cast<size_t>(n),
                                        std::vector<int>(static_cast<size_t>(n) + 1));
    std::vector<std::vector<int>> wrank(static_cast<size_t>(n),
                                        std::vector<int>(static_cast<size_t>(n) + 1));
    for (int u = 1; u <= n; ++u)
        for (int pos = 0; pos < n; ++pos)
            urank[static_cast<size_t>(u) - 1]
                 [static_cast<size_t>(ulist[static_cast<size_t>(u) - 1][static_cast<size_t>(pos)])] = pos;
    for (int w = 1; w <= n; ++w)
        for (int pos = 0; pos < n; ++pos)
            wrank[static_cast<size_t>(w) - 1]
                 [static_cast<size_t>(p.w_prefs[static_cast<size_t>(layer) - 1]
                                               [static_cast<size_t>(w) - 1]
                                               [static_cast<size_t>(pos)])] = pos;

    auto m0 = gale_shapley(p, layer, Side::U);
    std::vector<int> first(static_cast<size_t>(n));
    for (int u = 1; u <= n; ++u) first[static_cast<size_t>(u) - 1] = m0.partner_of_u(u);
    std::set<std::vector<int>> seen;
    seen.insert(first);
    if (!sink(first)) return;
    std::vector<std::vector<int>> work;
    work.push_back(std::move(first));
    std::vector<int> to_u(static_cast<size_t>(n) + 1), uptr(static_cast<size_t>(n));
    while (!work.empty()) {
        auto base = std::move(work.back());
        work.pop_back();
        for (int k = 1; k <= n; ++k) {
            auto to_w = base;
            for (int u = 1; u <= n; ++u) {
                to_u[static_cast<size_t>(to_w[static_cast<size_t>(u) - 1])] = u;
                uptr[static_cast<size_t>(u) - 1] =
                    urank[static_cast<size_t>(u) - 1][static_cast<size_t>(to_w[static_cast<size_t>(u) - 1])];
            }
            // divorce u_k; its w accepts a new suitor only if she strictly
            // prefers him to u_k
            int w0 = to_w[static_cast<size_t>(k) - 1];
            to_u[static_cast<size_t>(w0)] = 0;
            to_w[static_cast<size_t>(k) - 1] = 0;
            int man = k;
            bool settled = false;
            for (;;) {
                int& ptr = uptr[static_cast<size_t>(man) - 1];
                if (++ptr >= n) break;
                int w = ulist[static_cast<size_t>(man) - 1][static_cast<size_t>(ptr)];
                if (w == w0) {
                    if (wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(man)] <
                        wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(k)]) {
                        to_w[static_cast<size_t>(man) - 1] = w;
                        to_u[static_cast<size_t>(w)] = man;
                        settled = true;
                        break;
                    }
                    continue;
                }
                int cur = to_u[static_cast<size_t>(w)];
                if (wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(man)] <
                    wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(cur)]) {
                    to_u[static_cast<size_t>(w)] = man;
                    to_w[static_cast<size_t>(man) - 1] = w;
                    to_w[static_cast<size_t>(cur) - 1] = 0;
                    man = cur;
                }
            }
            if (!settled) continue;
            if (seen.insert(to_w).second) {
                if (!sink(to_w)) return;
                work.push_back(std::move(to_w));
            }
        }
    }
}

} // namespace detail

// All stable matchings of one layer, in lexicographic partner-vector order.
// Under max_results the returned subset is unspecified.
inline std::vector<Matching> enumerate_layer_stable(
    const Profile& p, int layer,
    std::size_t max_results = std::numeric_limits<std::size_t>::max()) {
    if (layer < 1 || layer > p.layers) throw std::invalid_argument("layer out of range");
    std::vector<Matching> out;
    if (max_results == 0) return out;
    std::set<std::vector<int>> got;
    detail::layer_stable_closure(p, layer, [&](const std::vector<int>& tw) {
        got.insert(tw);
        return got.size() < max_results;
    });
    out.reserve(got.size());
    for (const auto& tw : got) out.emplace_back(tw);
    return out;
}

// ---------------------------------------------------------------------------
// Multi-layer enumeration.
//
// Global concept with pruning on: every alpha-globally stable matching is
// stable in at least one layer (all of them when alpha equals the layer
// count), so the per-layer closures above are a complete candidate source;
// candidates are filtered by their stable-layer count. Other concepts, and
// prune=false as the plain oracle, walk all perfect matchings in
// lexicographic order of the partner vector (u1's partner varies slowest).
// That walk prunes on facts that are final once both endpoints of a pair are
// matched, so it never cuts a stable leaf:
//   global     a layer with a blocking pair among decided pairs stays
//              blocked; prune when fewer than alpha layers survive
//   pair       a decided pair blocking in >= ell-alpha+1 layers stays so
//   individual a decided pair dominating both endpoints' assignments in
//              >= ell-alpha+1 layers each stays so
// Reaching a leaf therefore implies stability; a definitional re-check
// guards the pruning logic anyway.
// ---------------------------------------------------------------------------

struct EnumerateOptions {
    std::size_t max_results = std::numeric_limits<std::size_t>::max();
    bool prune = true;
    unsigned long long* nodes = nullptr; // optional search-node counter
};

inline std::vector<Matching> enumerate_stable(const Profile& p, Concept c, int alpha,
                                              const EnumerateOptions& opt = {}) {
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
    int n = p.n, ell = p.layers;
    int beta = ell - alpha + 1;
    RankTable rt(p);
    std::vector<Matching> out;
    if (c == Concept::Global && opt.prune && opt.max_results > 0) {
        auto enough_layers = [&](const Matching& m) {
            int cnt = 0;
            for (int layer = 1; layer <= ell; ++layer) {
                if (is_stable_in_layer(rt, m, layer)) ++cnt;
                if (cnt >= alpha) return true;
                if (cnt + (ell - layer) < alpha) return false;
            }
            return false;
        };
        std::set<std::vector<int>> accepted, tested;
        // alpha == ell needs stability in every layer, so the first layer's
        // stable set already contains all candidates
        int last_source = alpha == ell ? 1 : ell;
        for (int layer = 1; layer <= last_source; ++layer) {
            bool full = false;
            detail::layer_stable_closure(p, layer, [&](const std::vector<int>& tw) {
                if (last_source > 1 && !tested.insert(tw).second) return true;
                if (opt.nodes) ++*opt.nodes;
                if (enough_layers(Matching(tw))) {
                    accepted.insert(tw);
                    if (accepted.size() >= opt.max_results) {
                        full = true;
                        return false;
                    }
                }
                return true;
            });
            if (full) break;
        }
        out.reserve(accepted.size());
        for (const auto& tw : accepted) out.emplace_back(tw);
        return out;
    }
    std::vector<int> to_w(n, 0), to_u(n + 1, 0);
    std::vector<int> layer_blocks(ell + 1, 0); // global concept bookkeeping
    int dead_layers = 0;

    // Layers in which {u,w} blocks, given both partners. Empty partner
    // arguments never occur here.
    auto pair_block_layers = [&](int u, int w, int mu, int mw) {
        std::vector<int> hit;
        for (int layer = 1; layer <= ell; ++layer)
            if (rt.u_prefers(layer, u, w, mu) && rt.w_prefers(layer, w, u, mw)) hit.push_back(layer);
        return hit;
    };
    auto pair_prunes = [&](int u, int w, int mu, int mw) {
        if (c == Concept::Pair) {
            int cnt = 0;
            for (int layer = 1; layer <= ell; ++layer)
                if (rt.u_prefers(layer, u, w, mu) && rt.w_prefers(layer, w, u, mw)) ++cnt;
            return cnt >= beta;
        }
        int cu = 0, cw = 0;
        for (int layer = 1; layer <= ell; ++layer) {
            if (rt.u_prefers(layer, u, w, mu)) ++cu;
            if (rt.w_prefers(layer, w, u, mw)) ++cw;
        }
        return cu >= beta && cw >= beta;
    };

    // Definitional verdict used at leaves as a safety net.
    auto leaf_ok = [&](const Matching& m) { return check_stability(rt, m, c, alpha).stable; };

    auto rec = [&](auto&& self, int u) -> bool {
        if (opt.nodes) ++*opt.nodes;
        if (u > n) {
            Matching m(to_w);
            if (opt.prune && !leaf_ok(m))
                throw std::logic_error("enumeration pruning admitted an unstable matching");
            if (!opt.prune && !leaf_ok(m)) return true;
            out.push_back(std::move(m));
            return out.size() < opt.max_results;
        }
        for (int w = 1; w <= n; ++w) {
            if (to_u[w] != 0) continue;
            to_w[u - 1] = w;
            to_u[w] = u;
            bool viable = true;
            std::vector<int> touched; // layer increments at this step, with multiplicity
            int became_dead = 0;
            if (opt.prune) {
                // pairs that became decided: {u, w2} for matched w2, {u2, w}
                // for matched u2
                for (int u2 = 1; u2 < u && viable; ++u2) {
                    int w2 = to_w[u2 - 1];
                    if (c == Concept::Global) {
                        for (int layer : pair_block_layers(u, w2, w, u2)) {
                            touched.push_back(layer);
                            if (++layer_blocks[layer] == 1) ++became_dead;
                        }
                        for (int layer : pair_block_layers(u2, w, w2, u)) {
                            touched.push_back(layer);
                            if (++layer_blocks[layer] == 1) ++became_dead;
                        }
                    } else {
                        if (pair_prunes(u, w2, w, u2)) viable = false;
                        if (viable && pair_prunes(u2, w, w2, u)) viable = false;
                    }
                }
                if (c == Concept::Global) {
                    dead_layers += became_dead;
                    if (ell - dead_layers < alpha) viable = false;
                }
            }
            bool keep_going = true;
            if (viable) keep_going = self(self, u + 1);
            if (opt.prune && c == Concept::Global) {
                for (int layer : touched) --layer_blocks[layer];
                dead_layers -= became_dead;
            }
            to_u[w] = 0;
            to_w[u - 1] = 0;
            if (!keep_going) return false;
        }
        return true;
    };
    rec(rec, 1);
    return out;
}

inline std::optional<Matching> first_stable(const Profile& p, Concept c, int alpha) {
    EnumerateOptions opt;
    opt.max_results = 1;
    auto found = enumerate_stable(p, c, alpha, opt);
    if (found.empty()) return std::nullopt;
    return found.front();
}

// ---------------------------------------------------------------------------
// Global stability when one side is single-layered: try every alpha-subset
// of layers in lexicographic order and decide each restriction with the
// marking algorithm. On a single-layered restriction with alpha equal to its
// layer count, globally stable, pair stable and individually stable
// matchings coincide, so the restriction's answer is exact.
// ---------------------------------------------------------------------------

struct GlobalSingleLayeredResult {
    std::optional<Matching> matching;
    std::vector<int> certificate; // layer subset that worked
    long long subsets_tried = 0;
};

inline GlobalSingleLayeredResult solve_global_single_layered(const Profile& p, int alpha) {
    if (!is_single_layered(p, Side::U) && !is_single_layered(p, Side::W))
        throw std::invalid_argument("solver requires one side with identical lists across layers");
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
    GlobalSingleLayeredResult res;
    std::vector<int> subset(alpha);
    for (int i = 0; i < alpha; ++i) subset[i] = i + 1;
    while (true) {
        ++res.subsets_tried;
        auto sub = solve_l_individual(restrict_to_layers(p, subset));
        if (sub.matching) {
            res.matching = sub.matching;
            res.certificate = subset;
            return res;
        }
        // next alpha-combination of {1..layers} in lexicographic order
        int i = alpha - 1;
        while (i >= 0 && subset[i] == p.layers - (alpha - 1 - i)) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < alpha; ++j) subset[j] = subset[j - 1] + 1;
    }
    return res;
}

} // namespace mlsm

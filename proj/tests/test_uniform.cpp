#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include <mlsm/digraph.hpp>
#include <mlsm/fixtures.hpp>
#include <mlsm/uniform.hpp>

#include "oracle.hpp"

using namespace mlsm;

namespace {

// Uniform profile built from one shared list per side and layer.
Profile uniform_from_lists(const std::vector<std::vector<int>>& u_lists,
                           const std::vector<std::vector<int>>& w_lists) {
    int layers = static_cast<int>(u_lists.size());
    int n = static_cast<int>(u_lists[0].size());
    Profile p = make_profile(n, layers);
    for (int layer = 1; layer <= layers; ++layer)
        for (int a = 1; a <= n; ++a) {
            p.list(Side::U, layer, a) = u_lists[static_cast<size_t>(layer - 1)];
            p.list(Side::W, layer, a) = w_lists[static_cast<size_t>(layer - 1)];
        }
    validate(p);
    return p;
}

std::vector<std::vector<int>> permutations_of(int n) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("each uniform layer has exactly one stable matching") {
    for (int iter = 0; iter < 150; ++iter) {
        int n = 2 + iter % 4;
        int layers = 1 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::Uniform, 6100 + iter);
        for (int layer = 1; layer <= layers; ++layer) {
            Matching m = unique_stable_uniform_layer(p, layer);
            Profile single = restrict_to_layers(p, {layer});
            auto all = oracle::enumerate(single, Concept::Global, 1);
            REQUIRE(all.size() == 1);
            REQUIRE(all[0] == m);
        }
    }
    REQUIRE_THROWS_AS(
        unique_stable_uniform_layer(random_profile(3, 2, ProfileMode::Uniform, 3), 3),
        std::invalid_argument);
}

TEST_CASE("uniform global solver agrees with brute force for every alpha") {
    for (int iter = 0; iter < 250; ++iter) {
        int n = 2 + iter % 4;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::Uniform, 20500 + iter);
        for (int alpha = 1; alpha <= layers; ++alpha) {
            auto res = solve_global_uniform(p, alpha);
            bool any = oracle::exists(p, Concept::Global, alpha);
            CAPTURE(n, layers, alpha, iter);
            REQUIRE(res.matching.has_value() == any);
            if (res.matching) {
                REQUIRE(oracle::global_stable(p, *res.matching, alpha));
                REQUIRE(res.stable_layers == oracle::stable_layers(p, *res.matching));
            }
        }
    }
    REQUIRE_THROWS_AS(solve_global_uniform(random_profile(2, 2, ProfileMode::General, 101), 1),
                      std::invalid_argument);
}

TEST_CASE("induced digraph arcs encode layer-count domination") {
    for (int iter = 0; iter < 120; ++iter) {
        int n = 2 + iter % 4;
        int layers = 2 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::Uniform, 9300 + iter);
        for (int alpha = 1; alpha <= layers; ++alpha) {
            auto [g, h] = induce_digraphs(p, alpha);
            int beta = layers - alpha + 1;
            auto gm = g.matrix();
            auto hm = h.matrix();
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    int cnt_w = 0, cnt_u = 0;
                    for (int layer = 1; layer <= layers; ++layer) {
                        if (oracle::prefers(p, Side::W, layer, 1, a, b)) ++cnt_w;
                        if (oracle::prefers(p, Side::U, layer, 1, a, b)) ++cnt_u;
                    }
                    REQUIRE((gm[a - 1][b - 1] != 0) == (cnt_w >= beta));
                    REQUIRE((hm[a - 1][b - 1] != 0) == (cnt_u >= beta));
                }
        }
    }
}

TEST_CASE("digraph conditions decide individual stability on all small uniform profiles") {
    auto perms = permutations_of(3);
    for (int layers = 2; layers <= 3; ++layers) {
        // all uniform profiles with shared lists drawn from perms, sampled on
        // a stride to keep the sweep quick; stride 1 would be exhaustive
        long long total = 1;
        for (int i = 0; i < 2 * layers; ++i) total *= static_cast<long long>(perms.size());
        long long stride = layers == 2 ? 7 : 113;
        for (long long code = 0; code < total; code += stride) {
            long long x = code;
            std::vector<std::vector<int>> ul, wl;
            for (int i = 0; i < layers; ++i) {
                ul.push_back(perms[static_cast<size_t>(x % perms.size())]);
                x /= static_cast<long long>(perms.size());
            }
            for (int i = 0; i < layers; ++i) {
                wl.push_back(perms[static_cast<size_t>(x % perms.size())]);
                x /= static_cast<long long>(perms.size());
            }
            Profile p = uniform_from_lists(ul, wl);
            for (int alpha = 1; alpha <= layers; ++alpha) {
                auto [g, h] = induce_digraphs(p, alpha);
                for (const auto& m : oracle::all_matchings(3)) {
                    CAPTURE(layers, alpha, code, m.to_w);
                    REQUIRE(check_individual_via_digraphs(g, h, m) ==
                            oracle::individual_stable(p, m, alpha));
                }
            }
        }
    }
}

TEST_CASE("digraph conditions decide individual stability on random size-4 uniform profiles") {
    for (int iter = 0; iter < 120; ++iter) {
        int layers = 2 + iter % 3;
        Profile p = random_profile(4, layers, ProfileMode::Uniform, 74000 + iter);
        for (int alpha = 1; alpha <= layers; ++alpha) {
            auto [g, h] = induce_digraphs(p, alpha);
            for (const auto& m : oracle::all_matchings(4))
                REQUIRE(check_individual_via_digraphs(g, h, m) ==
                        oracle::individual_stable(p, m, alpha));
        }
    }
}

TEST_CASE("uniform individual solver agrees with brute force above its threshold") {
    for (int iter = 0; iter < 400; ++iter) {
        int n = 2 + iter % 4;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::Uniform, 88000 + iter);
        for (int alpha = 1; alpha <= layers; ++alpha) {
            if (2 * alpha < layers + 2) {
                REQUIRE_THROWS_AS(solve_individual_uniform(p, alpha), std::invalid_argument);
                continue;
            }
            auto res = solve_individual_uniform(p, alpha);
            bool any = oracle::exists(p, Concept::Individual, alpha);
            CAPTURE(n, layers, alpha, iter);
            REQUIRE(res.matching.has_value() == any);
            if (res.matching) REQUIRE(oracle::individual_stable(p, *res.matching, alpha));
            if (res.two_cycle_found) REQUIRE_FALSE(any);
        }
    }
}

TEST_CASE("a mutual domination pair shows up as a two-cycle") {
    const Fixture& f = fixture("FIX-D");
    auto [g, h] = induce_digraphs(f.profile, 3);
    REQUIRE_FALSE(is_two_cycle_free(g));
    auto res = solve_individual_uniform(f.profile, 3);
    REQUIRE(res.two_cycle_found);
    REQUIRE_FALSE(res.matching.has_value());
}

TEST_CASE("digraph and graph text round-trips") {
    Digraph d;
    d.n = 3;
    d.arcs = {{1, 2}, {3, 1}};
    REQUIRE(parse_digraph(serialize_digraph(d)) == d);
    REQUIRE_THROWS_AS(parse_digraph("p digraph 2 1\na 1 1\n"), ParseError);
    REQUIRE_THROWS_AS(parse_digraph("p digraph 2 2\na 1 2\n"), ParseError);
    Graph g;
    g.n = 3;
    g.edges = {{1, 2}, {2, 3}};
    REQUIRE(parse_graph(serialize_graph(g)) == g);
    REQUIRE_THROWS_AS(parse_graph("p graph 2 1\ne 1 1\n"), ParseError);
}

TEST_CASE("digraph isomorphism search agrees with brute-force permutation checking") {
    auto brute_iso = [](const Digraph& a, const Digraph& b) {
        auto am = a.matrix(), bm = b.matrix();
        std::vector<int> perm(static_cast<size_t>(a.n));
        std::iota(perm.begin(), perm.end(), 1);
        do {
            bool ok = true;
            for (int i = 1; i <= a.n && ok; ++i)
                for (int j = 1; j <= a.n && ok; ++j) {
                    if (i == j) continue;
                    if (am[i - 1][j - 1] != bm[perm[i - 1] - 1][perm[j - 1] - 1]) ok = false;
                }
            if (ok) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    detail::SplitMix rng(424242);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + static_cast<int>(rng.next() % 4);
        auto draw = [&]() {
            Digraph d;
            d.n = n;
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b)
                    if (a != b && rng.next() % 3 == 0) d.arcs.push_back({a, b});
            return d;
        };
        Digraph d1 = draw(), d2 = draw();
        auto iso = digraph_isomorphic(d1, d2);
        REQUIRE(iso.has_value() == brute_iso(d1, d2));
        if (iso) {
            auto m1 = d1.matrix(), m2 = d2.matrix();
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    if (i == j) continue;
                    REQUIRE(m1[i - 1][j - 1] == m2[(*iso)[static_cast<size_t>(i - 1)] - 1]
                                                  [(*iso)[static_cast<size_t>(j - 1)] - 1]);
                }
        }
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <mlsm/check.hpp>
#include <mlsm/fixtures.hpp>

#include "oracle.hpp"

using namespace mlsm;

TEST_CASE("rank tables invert the preference lists") {
    const Profile& p = fixture("FIX-A").profile;
    RankTable r(p);
    for (int layer = 1; layer <= p.layers; ++layer)
        for (int u = 1; u <= p.n; ++u) {
            const auto& lst = p.list(Side::U, layer, u);
            for (std::size_t i = 0; i + 1 < lst.size(); ++i)
                REQUIRE(r.u_prefers(layer, u, lst[i], lst[i + 1]));
        }
}

TEST_CASE("blocking primitives agree with the definition on fixtures") {
    for (const auto& name : fixture_names()) {
        const Fixture& f = fixture(name);
        const Profile& p = f.profile;
        RankTable r(p);
        for (const auto& [mname, m] : f.matchings) {
            for (int u = 1; u <= p.n; ++u)
                for (int w = 1; w <= p.n; ++w) {
                    AgentPair pr{u, w};
                    std::vector<int> expect;
                    for (int layer = 1; layer <= p.layers; ++layer) {
                        REQUIRE(blocks(r, m, pr, layer) == oracle::blocks(p, m, u, w, layer));
                        if (oracle::blocks(p, m, u, w, layer)) expect.push_back(layer);
                    }
                    REQUIRE(blocking_layers(r, m, pr) == expect);
                }
            REQUIRE(stable_layer_set(p, m) == oracle::stable_layers(p, m));
        }
    }
}

TEST_CASE("checker matches the reference on random profiles for every concept and alpha") {
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + static_cast<int>(iter % 3);
        int layers = 2 + static_cast<int>((iter / 3) % 3);
        Profile p = random_profile(n, layers, ProfileMode::General, 900 + iter);
        auto ms = oracle::all_matchings(n);
        const Matching& m = ms[static_cast<std::size_t>(iter) % ms.size()];
        for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
            for (int alpha = 1; alpha <= layers; ++alpha) {
                CAPTURE(n, layers, iter, concept_name(c), alpha);
                CheckResult res = check_stability(p, m, c, alpha);
                REQUIRE(res.stable == oracle::stable(p, m, c, alpha));
                if (!res.stable && c != Concept::Global) {
                    auto want = oracle::witness(p, m, c, alpha);
                    REQUIRE(want.has_value());
                    REQUIRE(res.witness.has_value());
                    REQUIRE(res.witness->u == want->first);
                    REQUIRE(res.witness->w == want->second);
                }
            }
    }
}

TEST_CASE("global certificates list the first alpha stable layers") {
    const Fixture& f = fixture("FIX-C");
    CheckResult res = is_globally_stable(f.profile, f.matching("M"), 2);
    REQUIRE(res.stable);
    REQUIRE(res.certificate_layers == std::vector<int>{1, 2});
    CheckResult full = is_globally_stable(f.profile, f.matching("M"), 4);
    REQUIRE(full.stable);
    REQUIRE(full.certificate_layers == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("max_alpha agrees with scanning every alpha") {
    for (int iter = 0; iter < 100; ++iter) {
        int n = 2 + iter % 2;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::General, 4200 + iter);
        for (const auto& m : oracle::all_matchings(n))
            for (auto c : {Concept::Global, Concept::Pair, Concept::Individual}) {
                int direct = 0;
                for (int alpha = layers; alpha >= 1; --alpha)
                    if (oracle::stable(p, m, c, alpha)) {
                        direct = alpha;
                        break;
                    }
                REQUIRE(max_alpha(p, m, c) == direct);
            }
    }
}

TEST_CASE("stability in each concept is monotone when alpha shrinks") {
    for (int iter = 0; iter < 200; ++iter) {
        Profile p = random_profile(3, 4, ProfileMode::General, 7100 + iter);
        for (const auto& m : oracle::all_matchings(3))
            for (auto c : {Concept::Global, Concept::Pair, Concept::Individual}) {
                bool prev = true;
                for (int alpha = 1; alpha <= 4; ++alpha) {
                    bool now = check_stability(p, m, c, alpha).stable;
                    if (alpha > 1 && now) REQUIRE(prev);
                    prev = now;
                }
            }
    }
}

TEST_CASE("check_query rejects bad queries") {
    const Fixture& f = fixture("FIX-SM");
    REQUIRE_THROWS_AS(check_stability(f.profile, Matching({1, 2, 3}), Concept::Pair, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(check_stability(f.profile, f.matching("M1"), Concept::Pair, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(check_stability(f.profile, f.matching("M1"), Concept::Pair, 3),
                      std::invalid_argument);
}

#include <catch2/catch_amalgamated.hpp>

#include <mlsm/check.hpp>
#include <mlsm/smg.hpp>

#include "oracle.hpp"

using namespace mlsm;

TEST_CASE("validate rejects malformed relation instances") {
    SmgInstance inst = make_smg(2);
    inst.u_lists = {{1, 2}, {2, 1}};
    REQUIRE_NOTHROW(validate(inst));
    SECTION("incomplete list") {
        inst.u_lists[0] = {1};
        REQUIRE_THROWS_AS(validate(inst), std::invalid_argument);
    }
    SECTION("reflexive relation") {
        inst.rel[0][0][0] = 1;
        REQUIRE_THROWS_AS(validate(inst), std::invalid_argument);
    }
    SECTION("symmetric relation") {
        inst.rel[0][0][1] = 1;
        inst.rel[0][1][0] = 1;
        REQUIRE_THROWS_AS(validate(inst), std::invalid_argument);
    }
}

TEST_CASE("relation reduction mirrors layer-count majorities") {
    for (int iter = 0; iter < 100; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::SingleLayeredU, 2600 + iter);
        RankTable rt(p);
        for (int alpha = layers / 2 + 1; alpha <= layers; ++alpha) {
            SmgInstance inst = reduce_single_layered_to_smg(p, alpha);
            REQUIRE_NOTHROW(validate(inst));
            REQUIRE(inst.u_lists[0] == p.list(Side::U, 1, 1));
            for (int w = 1; w <= n; ++w)
                for (int a = 1; a <= n; ++a)
                    for (int b = 1; b <= n; ++b) {
                        if (a == b) continue;
                        int cnt = 0;
                        for (int layer = 1; layer <= layers; ++layer)
                            if (oracle::prefers(p, Side::W, layer, w, a, b)) ++cnt;
                        REQUIRE(inst.related(w, a, b) == (cnt >= alpha));
                    }
        }
    }
    REQUIRE_THROWS_AS(
        reduce_single_layered_to_smg(random_profile(3, 4, ProfileMode::SingleLayeredU, 1), 2),
        std::invalid_argument);
    Profile general = random_profile(3, 3, ProfileMode::General, 17);
    REQUIRE(!is_single_layered(general, Side::U));
    REQUIRE_THROWS_AS(reduce_single_layered_to_smg(general, 2), std::invalid_argument);
}

TEST_CASE("relation stability coincides with pair and individual stability") {
    for (int iter = 0; iter < 250; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::SingleLayeredU, 35000 + iter);
        for (int alpha = layers / 2 + 1; alpha <= layers; ++alpha) {
            SmgInstance inst = reduce_single_layered_to_smg(p, alpha);
            for (const auto& m : oracle::all_matchings(n)) {
                CAPTURE(n, layers, alpha, iter, m.to_w);
                bool smg = smg_is_stable(inst, m);
                REQUIRE(smg == oracle::pair_stable(p, m, alpha));
                REQUIRE(smg == oracle::individual_stable(p, m, alpha));
            }
        }
    }
}

TEST_CASE("proposal process agrees with brute-force search over relation instances") {
    for (int iter = 0; iter < 500; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::SingleLayeredU, 48000 + iter);
        int alpha = layers / 2 + 1 + iter % (layers - layers / 2);
        SmgInstance inst = reduce_single_layered_to_smg(p, alpha);
        SmgSolveResult res = smg_solve(inst);
        auto all = smg_enumerate(inst);
        CAPTURE(n, layers, alpha, iter);
        REQUIRE(res.proposals <= static_cast<long long>(n) * n);
        REQUIRE(res.matching.has_value() == !all.empty());
        if (res.matching) REQUIRE(smg_is_stable(inst, *res.matching));
    }
}

TEST_CASE("single-layered wrapper solves pair and individual stability") {
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + iter % 4;
        int layers = 2 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::SingleLayeredU, 56000 + iter);
        int alpha = layers / 2 + 1 + iter % (layers - layers / 2);
        auto got = solve_pair_individual_single_layered(p, alpha);
        bool any = oracle::exists(p, Concept::Pair, alpha);
        REQUIRE(got.has_value() == any);
        if (got) {
            REQUIRE(oracle::pair_stable(p, *got, alpha));
            REQUIRE(oracle::individual_stable(p, *got, alpha));
        }
    }
}

TEST_CASE("relation instances can lack stable matchings entirely") {
    // A non-transitive refusal cycle: every matching of this instance is
    // blocked, so the proposal process must exhaust a list and say no.
    bool found_empty = false;
    for (int iter = 0; iter < 400 && !found_empty; ++iter) {
        Profile p = random_profile(3, 3, ProfileMode::SingleLayeredU, 130000 + iter);
        SmgInstance inst = reduce_single_layered_to_smg(p, 2);
        if (smg_enumerate(inst).empty()) {
            found_empty = true;
            REQUIRE_FALSE(smg_solve(inst).matching.has_value());
        }
    }
    REQUIRE(found_empty);
}

TEST_CASE("relation description lists each pair once") {
    SmgInstance inst = make_smg(2);
    inst.u_lists = {{1, 2}, {2, 1}};
    inst.rel[0][0][1] = 1;
    std::string text = describe_relations(inst);
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("R_w1 : (u1,u2)"));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("R_w2 : (empty)"));
}

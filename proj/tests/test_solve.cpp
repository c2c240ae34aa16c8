#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include <mlsm/dispatch.hpp>
#include <mlsm/fixtures.hpp>
#include <mlsm/solve.hpp>

#include "oracle.hpp"

using namespace mlsm;

namespace {

std::set<std::vector<int>> key_set(const std::vector<Matching>& ms) {
    std::set<std::vector<int>> out;
    for (const auto& m : ms) out.insert(m.to_w);
    return out;
}

}  // namespace

TEST_CASE("gale_shapley is stable in its layer and deterministic") {
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + iter % 4;
        int layers = 1 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::General, 5000 + iter);
        for (int layer = 1; layer <= layers; ++layer) {
            Matching m = gale_shapley(p, layer);
            REQUIRE(oracle::layer_stable(p, m, layer));
            REQUIRE(gale_shapley(p, layer) == m);
            Matching mw = gale_shapley(p, layer, Side::W);
            REQUIRE(oracle::layer_stable(p, mw, layer));
        }
    }
}

TEST_CASE("enumerate_stable matches the reference for every concept") {
    for (int iter = 0; iter < 400; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + (iter / 3) % 3;
        Profile p = random_profile(n, layers, ProfileMode::General, 31000 + iter);
        for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
            for (int alpha = 1; alpha <= layers; ++alpha) {
                CAPTURE(n, layers, iter, concept_name(c), alpha);
                auto got = enumerate_stable(p, c, alpha);
                auto want = oracle::enumerate(p, c, alpha);
                REQUIRE(key_set(got) == key_set(want));
            }
    }
}

TEST_CASE("pruned and unpruned enumeration agree") {
    for (int iter = 0; iter < 150; ++iter) {
        int n = 3 + iter % 2;
        int layers = 2 + iter % 3;
        Profile p = random_profile(n, layers, ProfileMode::General, 15000 + iter);
        for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
            for (int alpha = 1; alpha <= layers; ++alpha) {
                EnumerateOptions raw;
                raw.prune = false;
                auto plain = enumerate_stable(p, c, alpha, raw);
                auto pruned = enumerate_stable(p, c, alpha);
                REQUIRE(key_set(plain) == key_set(pruned));
            }
    }
}

TEST_CASE("enumeration honours max_results and reports node counts") {
    Profile p = random_profile(4, 2, ProfileMode::General, 99);
    auto all = enumerate_stable(p, Concept::Pair, 1);
    REQUIRE(all.size() > 1);
    EnumerateOptions opt;
    opt.max_results = 1;
    unsigned long long nodes = 0;
    opt.nodes = &nodes;
    auto one = enumerate_stable(p, Concept::Pair, 1, opt);
    REQUIRE(one.size() == 1);
    REQUIRE(nodes > 0);
    REQUIRE(key_set(all).count(one[0].to_w) == 1);
}

TEST_CASE("first_stable agrees with enumeration emptiness") {
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 2;
        Profile p = random_profile(n, layers, ProfileMode::General, 62000 + iter);
        for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
            for (int alpha = 1; alpha <= layers; ++alpha) {
                auto one = first_stable(p, c, alpha);
                bool any = oracle::exists(p, c, alpha);
                REQUIRE(one.has_value() == any);
                if (one) REQUIRE(oracle::stable(p, *one, c, alpha));
            }
    }
}

TEST_CASE("enumerate_stable validates alpha") {
    Profile p = random_profile(2, 2, ProfileMode::General, 1);
    REQUIRE_THROWS_AS(enumerate_stable(p, Concept::Pair, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(enumerate_stable(p, Concept::Pair, 3), std::invalid_argument);
}

TEST_CASE("layer-restricted solver finds matchings stable in all chosen layers") {
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + iter % 4;
        int layers = 2 + iter % 4;
        Profile p = random_profile(n, layers, ProfileMode::General, 77000 + iter);
        auto res = solve_l_individual(p);
        REQUIRE(res.marks <= static_cast<long long>(n) * n);
        bool any = !oracle::enumerate(p, Concept::Individual, layers).empty();
        REQUIRE(res.matching.has_value() == any);
        if (res.matching) REQUIRE(oracle::individual_stable(p, *res.matching, layers));
        if (!res.matching) REQUIRE(res.exhausted_agent.has_value());
    }
}

TEST_CASE("single-layered global solver agrees with brute force over all alpha") {
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 3;
        auto mode = iter % 2 == 0 ? ProfileMode::SingleLayeredU : ProfileMode::SingleLayeredW;
        Profile p = random_profile(n, layers, mode, 83000 + iter);
        for (int alpha = 1; alpha <= layers; ++alpha) {
            auto res = solve_global_single_layered(p, alpha);
            bool any = oracle::exists(p, Concept::Global, alpha);
            CAPTURE(n, layers, alpha, iter);
            REQUIRE(res.matching.has_value() == any);
            if (res.matching) {
                REQUIRE(oracle::global_stable(p, *res.matching, alpha));
                REQUIRE(static_cast<int>(res.certificate.size()) == alpha);
            }
            long long comb = 1;
            for (int i = 1; i <= alpha; ++i) comb = comb * (layers - alpha + i) / i;
            REQUIRE(res.subsets_tried >= 1);
            REQUIRE(res.subsets_tried <= comb);
        }
    }
    Profile general = random_profile(3, 2, ProfileMode::General, 1);
    while (is_single_layered(general, Side::U) || is_single_layered(general, Side::W))
        general = random_profile(3, 2, ProfileMode::General, 2);
    REQUIRE_THROWS_AS(solve_global_single_layered(general, 1), std::invalid_argument);
}

TEST_CASE("solve dispatch picks a valid method and never lies about existence") {
    for (int iter = 0; iter < 150; ++iter) {
        int n = 2 + iter % 3;
        int layers = 2 + iter % 3;
        auto mode = static_cast<ProfileMode>(iter % 4);
        Profile p = random_profile(n, layers, mode, 91000 + iter);
        for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
            for (int alpha = 1; alpha <= layers; ++alpha) {
                SolveReport rep = solve(p, c, alpha, SolveMethod::Auto, 8);
                bool any = oracle::exists(p, c, alpha);
                CAPTURE(n, layers, alpha, concept_name(c), profile_mode_name(mode), rep.method);
                REQUIRE(rep.matching.has_value() == any);
                if (rep.matching) REQUIRE(oracle::stable(p, *rep.matching, c, alpha));
            }
    }
}

TEST_CASE("explicit solve methods reject instances outside their scope") {
    Profile uniform = random_profile(3, 3, ProfileMode::Uniform, 5);
    Profile general = random_profile(3, 3, ProfileMode::General, 6);
    REQUIRE_THROWS_AS(solve(general, Concept::Global, 2, SolveMethod::Xp, 8), std::invalid_argument);
    REQUIRE_THROWS_AS(solve(general, Concept::Individual, 3, SolveMethod::UniformIndividual, 8),
                      std::invalid_argument);
    REQUIRE_NOTHROW(solve(uniform, Concept::Global, 2, SolveMethod::UniformGlobal, 8));
    REQUIRE_THROWS_AS(solve(general, Concept::Pair, 2, SolveMethod::Brute, 2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(method_from_name("bogus"), std::invalid_argument);
    REQUIRE(method_from_name("alg1") == SolveMethod::Alg1);
}

TEST_CASE("named fixtures with empty stable sets solve to nothing") {
    const Fixture& b3 = fixture("FIX-B3");
    REQUIRE_FALSE(solve(b3.profile, Concept::Global, 2, SolveMethod::Auto, 8).matching.has_value());
    REQUIRE_FALSE(solve(b3.profile, Concept::Pair, 3, SolveMethod::Auto, 8).matching.has_value());
    auto pair2 = solve(b3.profile, Concept::Pair, 2, SolveMethod::Auto, 8);
    REQUIRE(pair2.matching.has_value());
    REQUIRE(pair2.matching->to_w == std::vector<int>{2, 1, 3});
}

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include <mlsm/core.hpp>

using namespace mlsm;

namespace {

Profile ascending_profile(int n, int layers) {
    Profile p = make_profile(n, layers);
    std::vector<int> asc(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) asc[static_cast<size_t>(i)] = i + 1;
    for (int layer = 1; layer <= layers; ++layer)
        for (int a = 1; a <= n; ++a) {
            p.list(Side::U, layer, a) = asc;
            p.list(Side::W, layer, a) = asc;
        }
    return p;
}

}  // namespace

TEST_CASE("make_profile sizes the tables and labels") {
    Profile p = make_profile(3, 2);
    REQUIRE(p.n == 3);
    REQUIRE(p.layers == 2);
    REQUIRE(p.u_prefs.size() == 2);
    REQUIRE(p.u_prefs[0].size() == 3);
    REQUIRE(p.u_labels.size() == 3);
    REQUIRE(p.w_labels.size() == 3);
    REQUIRE(p.list(Side::U, 1, 1).empty());
    REQUIRE_THROWS_AS(make_profile(0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(make_profile(1, 0), std::invalid_argument);
}

TEST_CASE("validate accepts a filled profile and rejects malformed ones") {
    REQUIRE_NOTHROW(validate(ascending_profile(3, 2)));
    SECTION("empty list") {
        Profile p = make_profile(2, 1);
        REQUIRE_THROWS_AS(validate(p), std::invalid_argument);
    }
    SECTION("duplicate entry") {
        Profile p = ascending_profile(2, 1);
        p.list(Side::U, 1, 1) = {1, 1};
        REQUIRE_THROWS_AS(validate(p), std::invalid_argument);
    }
    SECTION("out of range entry") {
        Profile p = ascending_profile(2, 1);
        p.list(Side::W, 1, 2) = {1, 3};
        REQUIRE_THROWS_AS(validate(p), std::invalid_argument);
    }
    SECTION("label table size") {
        Profile p = ascending_profile(2, 1);
        p.u_labels.clear();
        REQUIRE_THROWS_AS(validate(p), std::invalid_argument);
    }
}

TEST_CASE("agent labels fall back to positional names") {
    Profile p = ascending_profile(2, 1);
    REQUIRE(p.label(Side::U, 2) == "u2");
    REQUIRE(p.label(Side::W, 1) == "w1");
    p.u_labels[1] = "left-helper";
    REQUIRE(p.label(Side::U, 2) == "left-helper");
}

TEST_CASE("matching construction checks for a bijection") {
    REQUIRE_NOTHROW(Matching({2, 1, 3}));
    REQUIRE_THROWS_AS(Matching({1, 1, 3}), std::invalid_argument);
    REQUIRE_THROWS_AS(Matching({0, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(Matching({3, 1}), std::invalid_argument);
    REQUIRE_THROWS_AS(Matching(std::vector<int>{}), std::invalid_argument);
    Matching m({2, 3, 1});
    REQUIRE(m.size() == 3);
    REQUIRE(m.partner_of_u(1) == 2);
    REQUIRE(m.partner_of_w(2) == 1);
    REQUIRE(m.partner_of_w(1) == 3);
    REQUIRE(m.contains(2, 3));
    REQUIRE_FALSE(m.contains(2, 1));
}

TEST_CASE("instance text round-trips through parse and serialize") {
    Profile p = ascending_profile(3, 2);
    p.list(Side::U, 2, 1) = {3, 1, 2};
    p.list(Side::W, 1, 3) = {2, 3, 1};
    p.u_labels[0] = "x1";
    p.w_labels[2] = "c3 helper";
    std::string text = serialize_instance(p);
    Profile q = parse_instance(text);
    REQUIRE(serialize_instance(q) == text);
    REQUIRE(q == p);
    REQUIRE(q.u_labels[0] == "x1");
    REQUIRE(q.w_labels[2] == "c3 helper");
    REQUIRE(q.list(Side::U, 2, 1) == std::vector<int>{3, 1, 2});
}

TEST_CASE("parse_instance reports line numbers on errors") {
    auto expect_fail = [](const std::string& text, const std::string& needle) {
        try {
            parse_instance(text);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring(needle));
        }
    };
    expect_fail("bogus\n", "mlsm 1");
    expect_fail("mlsm 1\nagents 2\nlayers 1\nlayer 2\n", "layer");
    expect_fail("mlsm 1\nagents 2\nlayers 1\nlayer 1\nU 1 : 1 2\nU 1 : 2 1\n", "line 6");
    expect_fail("mlsm 1\nagents 2\nlayers 1\nlayer 1\nU 1 : 1 2\n", "");
}

TEST_CASE("comments and blank lines are ignored") {
    Profile p = parse_instance(
        "# header comment\n"
        "mlsm 1\n\n"
        "agents 2\n"
        "layers 1\n"
        "layer 1 # trailing words\n"
        "U 1 : 1 2\n"
        "U 2 : 2 1\n"
        "W 1 : 1 2\n"
        "W 2 : 2 1\n");
    REQUIRE(p.n == 2);
    REQUIRE(p.list(Side::U, 1, 2) == std::vector<int>{2, 1});
}

TEST_CASE("matching text round-trips") {
    Matching m({3, 1, 2});
    REQUIRE(serialize_matching(m) == "matching : 3 1 2\n");
    REQUIRE(parse_matching(serialize_matching(m)) == m);
    REQUIRE_THROWS_AS(parse_matching("matching : 1 2\n", 3), ParseError);
    REQUIRE_THROWS_AS(parse_matching("matching : 1 1\n"), ParseError);
    REQUIRE_THROWS_AS(parse_matching("# nothing\n"), ParseError);
}

TEST_CASE("structure predicates spot the special profile shapes") {
    Profile p = ascending_profile(2, 3);
    REQUIRE(is_uniform(p));
    REQUIRE(is_single_layered(p, Side::U));
    REQUIRE(is_single_layered(p, Side::W));
    p.list(Side::U, 2, 1) = {2, 1};
    REQUIRE_FALSE(is_uniform(p));
    REQUIRE_FALSE(is_single_layered(p, Side::U));
    REQUIRE(is_single_layered(p, Side::W));
}

TEST_CASE("restrict_to_layers keeps the chosen layers in order") {
    Profile p = ascending_profile(2, 3);
    p.list(Side::U, 2, 1) = {2, 1};
    p.list(Side::W, 3, 2) = {2, 1};
    Profile q = restrict_to_layers(p, {2, 3});
    REQUIRE(q.layers == 2);
    REQUIRE(q.n == 2);
    REQUIRE(q.list(Side::U, 1, 1) == std::vector<int>{2, 1});
    REQUIRE(q.list(Side::W, 2, 2) == std::vector<int>{2, 1});
    REQUIRE_THROWS_AS(restrict_to_layers(p, {0}), std::invalid_argument);
    REQUIRE_THROWS_AS(restrict_to_layers(p, {4}), std::invalid_argument);
}

TEST_CASE("transpose swaps the two sides") {
    Profile p = ascending_profile(2, 2);
    p.list(Side::U, 1, 2) = {2, 1};
    Profile q = transpose(p);
    REQUIRE(q.list(Side::W, 1, 2) == std::vector<int>{2, 1});
    REQUIRE(q.list(Side::U, 1, 2) == std::vector<int>{1, 2});
    REQUIRE(transpose(q) == p);
    Matching m({2, 1});
    REQUIRE(transpose(m).partner_of_u(1) == 2);
    Matching m3({2, 3, 1});
    REQUIRE(transpose(m3).to_w == std::vector<int>{3, 1, 2});
}

TEST_CASE("random_profile is deterministic in the seed and honours the mode") {
    for (auto mode : {ProfileMode::General, ProfileMode::SingleLayeredU, ProfileMode::SingleLayeredW,
                      ProfileMode::Uniform}) {
        Profile a = random_profile(4, 3, mode, 42);
        Profile b = random_profile(4, 3, mode, 42);
        Profile c = random_profile(4, 3, mode, 43);
        validate(a);
        REQUIRE(a == b);
        REQUIRE_FALSE(a == c);
    }
    REQUIRE(is_single_layered(random_profile(4, 3, ProfileMode::SingleLayeredU, 7), Side::U));
    REQUIRE(is_single_layered(random_profile(4, 3, ProfileMode::SingleLayeredW, 7), Side::W));
    REQUIRE(is_uniform(random_profile(4, 3, ProfileMode::Uniform, 7)));
}

TEST_CASE("random_profile covers distinct permutations across agents and layers") {
    Profile p = random_profile(5, 4, ProfileMode::General, 11);
    std::set<std::vector<int>> lists;
    for (int layer = 1; layer <= 4; ++layer)
        for (int u = 1; u <= 5; ++u) lists.insert(p.list(Side::U, layer, u));
    REQUIRE(lists.size() > 1);
}

TEST_CASE("concept and mode names round-trip") {
    for (auto c : {Concept::Global, Concept::Pair, Concept::Individual})
        REQUIRE(concept_from_name(concept_name(c)) == c);
    REQUIRE_FALSE(concept_from_name("nonsense").has_value());
    for (auto m : {ProfileMode::General, ProfileMode::SingleLayeredU, ProfileMode::SingleLayeredW,
                   ProfileMode::Uniform})
        REQUIRE(profile_mode_from_name(profile_mode_name(m)) == m);
    REQUIRE_FALSE(profile_mode_from_name("nonsense").has_value());
}

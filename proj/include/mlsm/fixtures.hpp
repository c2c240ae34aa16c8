#pragma once

// Built-in catalog of small worked instances with annotated matchings and
// expected verdicts. The same text ships as data/fixtures.txt; the catalog
// format extends the instance format with a handful of directives:
//
//     fixture FIX-A
//     note one line of free text
//     mlsm 1
//     ...instance lines...
//     matching M1 : 3 1 2
//     stable M1 : 1 2            (expected stable_layer_set, may be empty)
//     verdict M1 global 2 true
//     verdict M2 individual 2 false witness 1 1
//     maxalpha M1 pair 3
//     end

#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace mlsm {

struct FixtureVerdict {
    std::string matching;
    Concept kind = Concept::Global;
    int alpha = 0;
    bool expected = false;
    std::optional<std::pair<int, int>> witness; // expected (u,w) when not stable
};

struct FixtureStableSet {
    std::string matching;
    std::vector<int> layers;
};

struct FixtureMaxAlpha {
    std::string matching;
    Concept kind = Concept::Global;
    int alpha = 0;
};

struct Fixture {
    std::string name;
    std::string note;
    Profile profile;
    std::vector<std::pair<std::string, Matching>> matchings;
    std::vector<FixtureVerdict> verdicts;
    std::vector<FixtureStableSet> stable_sets;
    std::vector<FixtureMaxAlpha> max_alphas;

    const Matching& matching(const std::string& mname) const {
        for (const auto& [nm, m] : matchings)
            if (nm == mname) return m;
        throw std::invalid_argument("fixture " + name + " has no matching named " + mname);
    }
};

inline std::vector<Fixture> parse_fixtures(std::istream& in) {
    std::vector<Fixture> out;
    Fixture cur;
    bool open = false;
    bool in_directives = false;
    std::string instance_text;
    std::string raw;
    int lineno = 0;

    auto fail = [&](const std::string& msg) {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto find_matching = [&](const std::string& mname) -> const Matching* {
        for (const auto& [nm, m] : cur.matchings)
            if (nm == mname) return &m;
        return nullptr;
    };
    auto parse_concept = [&](const std::string& t) {
        auto c = concept_from_name(t);
        if (!c) fail("unknown stability concept '" + t + "'");
        return *c;
    };
    auto close_block = [&]() {
        if (cur.matchings.empty()) fail("fixture " + cur.name + " has no matchings");
        out.push_back(std::move(cur));
        cur = Fixture{};
        open = false;
        in_directives = false;
        instance_text.clear();
    };
    auto ensure_profile = [&]() {
        if (in_directives) return;
        cur.profile = parse_instance(instance_text);
        in_directives = true;
    };

    while (std::getline(in, raw)) {
        ++lineno;
        auto tk = detail::tokens(detail::strip_comment(raw));
        if (tk.empty()) continue;
        if (tk[0] == "fixture") {
            if (open) fail("fixture block not closed before a new one starts");
            if (tk.size() != 2) fail("expected 'fixture <name>'");
            for (const auto& f : out)
                if (f.name == tk[1]) fail("duplicate fixture name " + tk[1]);
            cur.name = tk[1];
            open = true;
            continue;
        }
        if (!open) fail("content outside a fixture block");
        if (tk[0] == "note") {
            auto pos = raw.find("note");
            cur.note = raw.substr(pos + 5);
            continue;
        }
        if (tk[0] == "matching") {
            ensure_profile();
            if (tk.size() < 4 || tk[2] != ":") fail("expected 'matching <name> : <partners>'");
            if (find_matching(tk[1])) fail("duplicate matching name " + tk[1]);
            std::vector<int> to_w;
            for (size_t i = 3; i < tk.size(); ++i)
                to_w.push_back(detail::to_int(tk[i], lineno, "partner index"));
            if (to_w.size() != static_cast<size_t>(cur.profile.n))
                fail("matching must list a partner for every U agent");
            try {
                cur.matchings.emplace_back(tk[1], Matching(to_w));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            continue;
        }
        if (tk[0] == "stable") {
            ensure_profile();
            if (tk.size() < 3 || tk[2] != ":") fail("expected 'stable <matching> : <layers>'");
            if (!find_matching(tk[1])) fail("stable line references unknown matching " + tk[1]);
            FixtureStableSet s;
            s.matching = tk[1];
            for (size_t i = 3; i < tk.size(); ++i) {
                int layer = detail::to_int(tk[i], lineno, "layer index");
                if (layer < 1 || layer > cur.profile.layers) fail("layer index out of range");
                if (!s.layers.empty() && layer <= s.layers.back())
                    fail("stable layer list must be strictly ascending");
                s.layers.push_back(layer);
            }
            cur.stable_sets.push_back(std::move(s));
            continue;
        }
        if (tk[0] == "verdict") {
            ensure_profile();
            if (tk.size() != 5 && tk.size() != 8) fail("expected 'verdict <matching> <concept> <alpha> <true|false> [witness <u> <w>]'");
            FixtureVerdict v;
            v.matching = tk[1];
            if (!find_matching(v.matching)) fail("verdict references unknown matching " + v.matching);
            v.kind = parse_concept(tk[2]);
            v.alpha = detail::to_int(tk[3], lineno, "alpha");
            if (v.alpha < 1 || v.alpha > cur.profile.layers) fail("alpha out of range");
            if (tk[4] != "true" && tk[4] != "false") fail("verdict must be 'true' or 'false'");
            v.expected = tk[4] == "true";
            if (tk.size() == 8) {
                if (tk[5] != "witness" || v.expected) fail("witness only accompanies a 'false' verdict");
                int u = detail::to_int(tk[6], lineno, "agent index");
                int w = detail::to_int(tk[7], lineno, "agent index");
                if (u < 1 || u > cur.profile.n || w < 1 || w > cur.profile.n)
                    fail("witness agent index out of range");
                v.witness = {u, w};
            }
            cur.verdicts.push_back(std::move(v));
            continue;
        }
        if (tk[0] == "maxalpha") {
            ensure_profile();
            if (tk.size() != 4) fail("expected 'maxalpha <matching> <concept> <alpha>'");
            FixtureMaxAlpha m;
            m.matching = tk[1];
            if (!find_matching(m.matching)) fail("maxalpha references unknown matching " + m.matching);
            m.kind = parse_concept(tk[2]);
            m.alpha = detail::to_int(tk[3], lineno, "alpha");
            if (m.alpha < 0 || m.alpha > cur.profile.layers) fail("alpha out of range");
            cur.max_alphas.push_back(std::move(m));
            continue;
        }
        if (tk[0] == "end") {
            ensure_profile();
            close_block();
            continue;
        }
        if (in_directives) fail("unrecognized directive '" + tk[0] + "' after matchings began");
        instance_text += detail::strip_comment(raw);
        instance_text += '\n';
    }
    if (open) throw ParseError("unterminated fixture block " + cur.name);
    return out;
}

inline std::vector<Fixture> parse_fixtures(const std::string& text) {
    std::istringstream in(text);
    return parse_fixtures(in);
}

inline const std::string& fixture_catalog_text() {
    static const std::string text = R"(# Built-in instance catalog.
# Each block: a profile in the instance format, then named matchings with
# the verdicts they are known to satisfy.

fixture FIX-INTRO
note two agents per side, three layers; the two perfect matchings are stable in overlapping layer pairs
mlsm 1
agents 2
layers 3
layer 1
U 1 : 1 2
U 2 : 1 2
W 1 : 1 2
W 2 : 1 2
layer 2
U 1 : 2 1
U 2 : 2 1
W 1 : 1 2
W 2 : 1 2
layer 3
U 1 : 1 2
U 2 : 2 1
W 1 : 2 1
W 2 : 1 2
matching M1 : 1 2
matching M2 : 2 1
stable M1 : 1 3
stable M2 : 2 3
verdict M1 global 2 true
verdict M1 pair 2 true
verdict M1 individual 2 true
verdict M2 global 2 true
verdict M2 pair 2 true
verdict M2 individual 2 false witness 1 1
verdict M1 individual 3 false
verdict M2 individual 3 false
end

fixture FIX-A
note three agents per side, two layers; layer 1 has one stable matching and layer 2 has three
mlsm 1
agents 3
layers 2
layer 1
U 1 : 3 2 1
U 2 : 1 2 3
U 3 : 2 3 1
W 1 : 2 3 1
W 2 : 3 1 2
W 3 : 3 1 2
layer 2
U 1 : 2 3 1
U 2 : 3 1 2
U 3 : 1 2 3
W 1 : 1 2 3
W 2 : 2 3 1
W 3 : 3 1 2
matching M1 : 3 1 2
matching M2 : 1 2 3
matching M3 : 2 3 1
stable M1 : 1 2
stable M2 : 2
stable M3 : 2
verdict M1 global 2 true
verdict M1 pair 2 true
verdict M1 individual 2 true
verdict M2 individual 2 false
verdict M3 individual 2 false
end

fixture FIX-B
note three agents per side, two layers; M is 1-individually stable yet stable in no layer at all
mlsm 1
agents 3
layers 2
layer 1
U 1 : 1 2 3
U 2 : 2 1 3
U 3 : 3 1 2
W 1 : 2 1 3
W 2 : 2 1 3
W 3 : 3 1 2
layer 2
U 1 : 2 1 3
U 2 : 3 1 2
U 3 : 1 3 2
W 1 : 3 1 2
W 2 : 1 2 3
W 3 : 2 1 3
matching M : 1 3 2
matching MG1 : 1 2 3
matching MG2 : 2 3 1
stable M :
stable MG1 : 1
stable MG2 : 2
verdict M individual 1 true
verdict M pair 1 true
verdict M global 1 false
verdict MG1 global 1 true
verdict MG2 global 1 true
end

fixture FIX-B3
note FIX-B with FIX-A's first layer appended; exactly one 2-pair-stable matching survives and nothing is 2-globally stable
mlsm 1
agents 3
layers 3
layer 1
U 1 : 1 2 3
U 2 : 2 1 3
U 3 : 3 1 2
W 1 : 2 1 3
W 2 : 2 1 3
W 3 : 3 1 2
layer 2
U 1 : 2 1 3
U 2 : 3 1 2
U 3 : 1 3 2
W 1 : 3 1 2
W 2 : 1 2 3
W 3 : 2 1 3
layer 3
U 1 : 3 2 1
U 2 : 1 2 3
U 3 : 2 3 1
W 1 : 2 3 1
W 2 : 3 1 2
W 3 : 3 1 2
matching A1 : 1 2 3
matching A2 : 1 3 2
matching A3 : 2 1 3
matching A4 : 2 3 1
matching A5 : 3 1 2
matching A6 : 3 2 1
stable A1 : 1
stable A2 :
stable A3 :
stable A4 : 2
stable A5 : 3
stable A6 :
verdict A1 pair 2 false
verdict A2 pair 2 false
verdict A3 pair 2 true
verdict A4 pair 2 false
verdict A5 pair 2 false
verdict A6 pair 2 false
verdict A3 individual 2 true
verdict A3 pair 3 false
verdict A1 global 2 false
verdict A4 global 2 false
verdict A5 global 2 false
end

fixture FIX-C
note two agents per side, four layers; identity is stable everywhere yet not 3-individually stable
mlsm 1
agents 2
layers 4
layer 1
U 1 : 1 2
U 2 : 1 2
W 1 : 1 2
W 2 : 1 2
layer 2
U 1 : 1 2
U 2 : 2 1
W 1 : 1 2
W 2 : 1 2
layer 3
U 1 : 2 1
U 2 : 2 1
W 1 : 2 1
W 2 : 2 1
layer 4
U 1 : 2 1
U 2 : 2 1
W 1 : 1 2
W 2 : 2 1
matching M : 1 2
matching M2 : 2 1
stable M : 1 2 3 4
stable M2 :
verdict M global 4 true
verdict M individual 3 false witness 1 2
verdict M individual 2 true
maxalpha M global 4
maxalpha M individual 2
end

fixture FIX-D
note two agents per side, four uniform layers; the two matchings split the layers evenly
mlsm 1
agents 2
layers 4
layer 1
U 1 : 1 2
U 2 : 1 2
W 1 : 1 2
W 2 : 1 2
layer 2
U 1 : 1 2
U 2 : 1 2
W 1 : 2 1
W 2 : 2 1
layer 3
U 1 : 2 1
U 2 : 2 1
W 1 : 1 2
W 2 : 1 2
layer 4
U 1 : 2 1
U 2 : 2 1
W 1 : 2 1
W 2 : 2 1
matching M1 : 1 2
matching M2 : 2 1
stable M1 : 1 4
stable M2 : 2 3
verdict M1 pair 3 true
verdict M2 pair 3 true
verdict M1 global 3 false
verdict M2 global 3 false
verdict M1 individual 3 false
verdict M2 individual 3 false
maxalpha M1 pair 3
end

fixture FIX-SM
note FIX-INTRO restricted to its last two layers; M2 is 2-globally but not 2-individually stable
mlsm 1
agents 2
layers 2
layer 1
U 1 : 2 1
U 2 : 2 1
W 1 : 1 2
W 2 : 1 2
layer 2
U 1 : 1 2
U 2 : 2 1
W 1 : 2 1
W 2 : 1 2
matching M1 : 1 2
matching M2 : 2 1
stable M1 : 2
stable M2 : 1 2
verdict M2 global 2 true
verdict M2 pair 2 true
verdict M2 individual 2 false witness 1 1
end

fixture FIX-TRIV
note mutual first choices in every layer; the identity matching is stable everywhere
mlsm 1
agents 3
layers 2
layer 1
U 1 : 1 2 3
U 2 : 2 1 3
U 3 : 3 1 2
W 1 : 1 2 3
W 2 : 2 1 3
W 3 : 3 1 2
layer 2
U 1 : 1 2 3
U 2 : 2 1 3
U 3 : 3 1 2
W 1 : 1 2 3
W 2 : 2 1 3
W 3 : 3 1 2
matching M : 1 2 3
stable M : 1 2
verdict M global 2 true
verdict M individual 2 true
end

fixture FIX-SL
note U side single-layered, W side flips between layers; no matching is stable in both layers
mlsm 1
agents 2
layers 2
layer 1
U 1 : 1 2
U 2 : 1 2
W 1 : 1 2
W 2 : 1 2
layer 2
U 1 : 1 2
U 2 : 1 2
W 1 : 2 1
W 2 : 2 1
matching M1 : 1 2
matching M2 : 2 1
stable M1 : 1
stable M2 : 2
verdict M1 global 1 true
verdict M1 global 2 false
verdict M2 global 2 false
end
)";
    return text;
}

inline const std::vector<Fixture>& all_fixtures() {
    static const std::vector<Fixture> fixtures = parse_fixtures(fixture_catalog_text());
    return fixtures;
}

inline const Fixture& fixture(const std::string& name) {
    for (const auto& f : all_fixtures())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown fixture name: " + name);
}

inline std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& f : all_fixtures()) names.push_back(f.name);
    return names;
}

} // namespace mlsm

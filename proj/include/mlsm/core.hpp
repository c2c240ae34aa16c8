#pragma once

// Model types and text formats for multi-layer stable marriage instances.
// Agents are 1-indexed on both sides; a profile stores complete strict
// preference lists for every agent in every layer.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlsm {

enum class Side { U, W };

inline Side other_side(Side s) { return s == Side::U ? Side::W : Side::U; }
inline char side_char(Side s) { return s == Side::U ? 'U' : 'W'; }

enum class Concept { Global, Pair, Individual };

inline std::string concept_name(Concept c) {
    switch (c) {
    case Concept::Global: return "global";
    case Concept::Pair: return "pair";
    default: return "individual";
    }
}

inline std::optional<Concept> concept_from_name(std::string_view s) {
    if (s == "global") return Concept::Global;
    if (s == "pair") return Concept::Pair;
    if (s == "individual") return Concept::Individual;
    return std::nullopt;
}

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One side's lists within a single layer: lists[a-1] ranks the opposite
// side's agents, most preferred first.
using LayerLists = std::vector<std::vector<int>>;

struct Profile {
    int n = 0;
    int layers = 0;
    std::vector<LayerLists> u_prefs;   // [layer-1][u-1] -> ranked W agents
    std::vector<LayerLists> w_prefs;   // [layer-1][w-1] -> ranked U agents
    std::vector<std::string> u_labels; // optional display names, may be empty
    std::vector<std::string> w_labels;

    const std::vector<int>& list(Side side, int layer, int agent) const {
        const auto& lls = (side == Side::U) ? u_prefs : w_prefs;
        return lls[static_cast<size_t>(layer - 1)][static_cast<size_t>(agent - 1)];
    }
    std::vector<int>& list(Side side, int layer, int agent) {
        auto& lls = (side == Side::U) ? u_prefs : w_prefs;
        return lls[static_cast<size_t>(layer - 1)][static_cast<size_t>(agent - 1)];
    }

    std::string label(Side side, int agent) const {
        const auto& labs = (side == Side::U) ? u_labels : w_labels;
        if (agent >= 1 && static_cast<size_t>(agent) <= labs.size() && !labs[agent - 1].empty())
            return labs[agent - 1];
        return std::string(1, side_char(side) == 'U' ? 'u' : 'w') + std::to_string(agent);
    }

    bool operator==(const Profile& o) const {
        return n == o.n && layers == o.layers && u_prefs == o.u_prefs &&
               w_prefs == o.w_prefs && u_labels == o.u_labels && w_labels == o.w_labels;
    }
};

// Empty shell with the right dimensions; lists start empty and must be filled
// before validate() passes.
inline Profile make_profile(int n, int layers) {
    if (n < 1) throw std::invalid_argument("profile needs at least one agent per side");
    if (layers < 1) throw std::invalid_argument("profile needs at least one layer");
    Profile p;
    p.n = n;
    p.layers = layers;
    p.u_prefs.assign(layers, LayerLists(n));
    p.w_prefs.assign(layers, LayerLists(n));
    p.u_labels.assign(n, "");
    p.w_labels.assign(n, "");
    return p;
}

inline void validate(const Profile& p) {
    if (p.n < 1) throw std::invalid_argument("profile needs at least one agent per side");
    if (p.layers < 1) throw std::invalid_argument("profile needs at least one layer");
    if (p.u_prefs.size() != static_cast<size_t>(p.layers) ||
        p.w_prefs.size() != static_cast<size_t>(p.layers))
        throw std::invalid_argument("layer count does not match stored lists");
    std::vector<char> seen(static_cast<size_t>(p.n) + 1);
    for (int layer = 1; layer <= p.layers; ++layer) {
        for (Side side : {Side::U, Side::W}) {
            const auto& lls = (side == Side::U) ? p.u_prefs : p.w_prefs;
            if (lls[layer - 1].size() != static_cast<size_t>(p.n))
                throw std::invalid_argument("agent count does not match stored lists");
            for (int a = 1; a <= p.n; ++a) {
                const auto& lst = lls[layer - 1][a - 1];
                if (lst.size() != static_cast<size_t>(p.n))
                    throw std::invalid_argument(
                        "list of " + std::string(1, side_char(side)) + " " + std::to_string(a) +
                        " in layer " + std::to_string(layer) + " is not complete");
                std::fill(seen.begin(), seen.end(), 0);
                for (int b : lst) {
                    if (b < 1 || b > p.n)
                        throw std::invalid_argument("agent index out of range in a preference list");
                    if (seen[b]++)
                        throw std::invalid_argument(
                            "duplicate entry in list of " + std::string(1, side_char(side)) + " " +
                            std::to_string(a) + " in layer " + std::to_string(layer));
                }
            }
        }
    }
    if (p.u_labels.size() != static_cast<size_t>(p.n) || p.w_labels.size() != static_cast<size_t>(p.n))
        throw std::invalid_argument("label table size does not match agent count");
}

// A perfect matching, stored as the W partner of each U agent plus the
// inverse. Partial matchings are rejected on construction.
struct Matching {
    std::vector<int> to_w; // to_w[u-1] = partner of u
    std::vector<int> to_u; // to_u[w-1] = partner of w

    Matching() = default;
    explicit Matching(std::vector<int> partners) : to_w(std::move(partners)) {
        int n = static_cast<int>(to_w.size());
        if (n == 0) throw std::invalid_argument("empty matching");
        to_u.assign(n, 0);
        for (int u = 1; u <= n; ++u) {
            int w = to_w[u - 1];
            if (w < 1 || w > n) throw std::invalid_argument("matching partner out of range");
            if (to_u[w - 1] != 0)
                throw std::invalid_argument("matching is not a bijection: W " + std::to_string(w) +
                                            " appears twice");
            to_u[w - 1] = u;
        }
    }

    int size() const { return static_cast<int>(to_w.size()); }
    int partner_of_u(int u) const { return to_w[u - 1]; }
    int partner_of_w(int w) const { return to_u[w - 1]; }
    bool contains(int u, int w) const { return to_w[u - 1] == w; }

    bool operator==(const Matching& o) const { return to_w == o.to_w; }
    bool operator<(const Matching& o) const { return to_w < o.to_w; }
};

// ---------------------------------------------------------------------------
// Text formats
//
// Instance files:
//     # optional comments anywhere
//     mlsm 1
//     agents 3
//     layers 2
//     label U 1 x1          (optional, any point after the agents line)
//     layer 1
//     U 1 : 3 2 1
//     ...all U and W lines for the layer...
//     layer 2
//     ...
//
// Matching files hold a single payload line:
//     matching : 2 1 3
// meaning u1-w2, u2-w1, u3-w3.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

inline int to_int(const std::string& t, int lineno, const char* what) {
    try {
        size_t used = 0;
        int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": expected " + std::string(what) +
                         ", got '" + t + "'");
    }
}

} // namespace detail

inline Profile parse_instance(std::istream& in) {
    std::string raw;
    int lineno = 0;
    auto next_tokens = [&](std::vector<std::string>& out) -> bool {
        while (std::getline(in, raw)) {
            ++lineno;
            out = detail::tokens(detail::strip_comment(raw));
            if (!out.empty()) return true;
        }
        return false;
    };
    std::vector<std::string> tk;
    if (!next_tokens(tk) || tk.size() != 2 || tk[0] != "mlsm" || tk[1] != "1")
        throw ParseError("line " + std::to_string(lineno) + ": expected header 'mlsm 1'");
    if (!next_tokens(tk) || tk.size() != 2 || tk[0] != "agents")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'agents <n>'");
    int n = detail::to_int(tk[1], lineno, "agent count");
    if (!next_tokens(tk) || tk.size() != 2 || tk[0] != "layers")
        throw ParseError("line " + std::to_string(lineno) + ": expected 'layers <count>'");
    int layers = detail::to_int(tk[1], lineno, "layer count");
    if (n < 1 || layers < 1)
        throw ParseError("line " + std::to_string(lineno) + ": agents and layers must be positive");

    Profile p = make_profile(n, layers);
    int current_layer = 0;
    std::vector<std::vector<char>> filled(2, std::vector<char>());
    while (next_tokens(tk)) {
        if (tk[0] == "label") {
            if (tk.size() < 4 || (tk[1] != "U" && tk[1] != "W"))
                throw ParseError("line " + std::to_string(lineno) + ": expected 'label U|W <agent> <text>'");
            int a = detail::to_int(tk[2], lineno, "agent index");
            if (a < 1 || a > n)
                throw ParseError("line " + std::to_string(lineno) + ": label agent index out of range");
            std::string text = tk[3];
            for (size_t i = 4; i < tk.size(); ++i) text += " " + tk[i];
            (tk[1] == "U" ? p.u_labels : p.w_labels)[a - 1] = text;
            continue;
        }
        if (tk[0] == "layer") {
            if (tk.size() != 2)
                throw ParseError("line " + std::to_string(lineno) + ": expected 'layer <index>'");
            int idx = detail::to_int(tk[1], lineno, "layer index");
            if (idx != current_layer + 1)
                throw ParseError("line " + std::to_string(lineno) + ": layer blocks must appear in order, expected layer " +
                                 std::to_string(current_layer + 1));
            current_layer = idx;
            if (current_layer > layers)
                throw ParseError("line " + std::to_string(lineno) + ": more layer blocks than declared");
            filled[0].assign(n, 0);
            filled[1].assign(n, 0);
            continue;
        }
        if (tk[0] == "U" || tk[0] == "W") {
            if (current_layer == 0)
                throw ParseError("line " + std::to_string(lineno) + ": preference line before any 'layer' block");
            Side side = tk[0] == "U" ? Side::U : Side::W;
            if (tk.size() < 3 || tk[2] != ":")
                throw ParseError("line " + std::to_string(lineno) + ": expected '" + tk[0] + " <agent> : <list>'");
            int a = detail::to_int(tk[1], lineno, "agent index");
            if (a < 1 || a > n)
                throw ParseError("line " + std::to_string(lineno) + ": agent index out of range");
            std::vector<int> lst;
            for (size_t i = 3; i < tk.size(); ++i)
                lst.push_back(detail::to_int(tk[i], lineno, "agent index"));
            if (lst.size() != static_cast<size_t>(n))
                throw ParseError("line " + std::to_string(lineno) + ": list must rank all " +
                                 std::to_string(n) + " agents");
            auto& flag = filled[side == Side::U ? 0 : 1][a - 1];
            if (flag)
                throw ParseError("line " + std::to_string(lineno) + ": duplicate list for " + tk[0] + " " + tk[1] +
                                 " in layer " + std::to_string(current_layer));
            flag = 1;
            p.list(side, current_layer, a) = std::move(lst);
            continue;
        }
        throw ParseError("line " + std::to_string(lineno) + ": unrecognized directive '" + tk[0] + "'");
    }
    if (current_layer != layers)
        throw ParseError("instance declares " + std::to_string(layers) + " layers but defines " +
                         std::to_string(current_layer));
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return p;
}

inline Profile parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline void serialize_instance(const Profile& p, std::ostream& out) {
    out << "mlsm 1\n";
    out << "agents " << p.n << "\n";
    out << "layers " << p.layers << "\n";
    for (int a = 1; a <= p.n; ++a)
        if (!p.u_labels[a - 1].empty()) out << "label U " << a << " " << p.u_labels[a - 1] << "\n";
    for (int a = 1; a <= p.n; ++a)
        if (!p.w_labels[a - 1].empty()) out << "label W " << a << " " << p.w_labels[a - 1] << "\n";
    for (int layer = 1; layer <= p.layers; ++layer) {
        out << "layer " << layer << "\n";
        for (Side side : {Side::U, Side::W})
            for (int a = 1; a <= p.n; ++a) {
                out << side_char(side) << " " << a << " :";
                for (int b : p.list(side, layer, a)) out << " " << b;
                out << "\n";
            }
    }
}

inline std::string serialize_instance(const Profile& p) {
    std::ostringstream out;
    serialize_instance(p, out);
    return out.str();
}

inline Matching parse_matching(std::istream& in, int expected_n = 0) {
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto tk = detail::tokens(detail::strip_comment(raw));
        if (tk.empty()) continue;
        if (tk[0] != "matching" || tk.size() < 2 || tk[1] != ":")
            throw ParseError("line " + std::to_string(lineno) + ": expected 'matching : <partners>'");
        std::vector<int> partners;
        for (size_t i = 2; i < tk.size(); ++i)
            partners.push_back(detail::to_int(tk[i], lineno, "partner index"));
        if (expected_n > 0 && partners.size() != static_cast<size_t>(expected_n))
            throw ParseError("line " + std::to_string(lineno) + ": matching lists " +
                             std::to_string(partners.size()) + " partners, instance has " +
                             std::to_string(expected_n) + " agents per side");
        try {
            return Matching(std::move(partners));
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    throw ParseError("no 'matching :' line found");
}

inline Matching parse_matching(const std::string& text, int expected_n = 0) {
    std::istringstream in(text);
    return parse_matching(in, expected_n);
}

inline std::string serialize_matching(const Matching& m) {
    std::ostringstream out;
    out << "matching :";
    for (int w : m.to_w) out << " " << w;
    out << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Structure predicates
// ---------------------------------------------------------------------------

// True when every agent on the given side ranks identically in all layers.
inline bool is_single_layered(const Profile& p, Side side) {
    const auto& lls = (side == Side::U) ? p.u_prefs : p.w_prefs;
    for (int layer = 2; layer <= p.layers; ++layer)
        if (lls[layer - 1] != lls[0]) return false;
    return true;
}

// True when, within each layer, all agents of a side share one list.
inline bool is_uniform(const Profile& p) {
    for (int layer = 1; layer <= p.layers; ++layer)
        for (const auto* lls : {&p.u_prefs, &p.w_prefs})
            for (int a = 2; a <= p.n; ++a)
                if ((*lls)[layer - 1][a - 1] != (*lls)[layer - 1][0]) return false;
    return true;
}

// Keep only the given layers (1-indexed, strictly increasing).
inline Profile restrict_to_layers(const Profile& p, const std::vector<int>& layers) {
    if (layers.empty()) throw std::invalid_argument("layer subset must be nonempty");
    Profile out = make_profile(p.n, static_cast<int>(layers.size()));
    out.u_labels = p.u_labels;
    out.w_labels = p.w_labels;
    int prev = 0;
    for (size_t i = 0; i < layers.size(); ++i) {
        int layer = layers[i];
        if (layer <= prev || layer > p.layers)
            throw std::invalid_argument("layer subset must be strictly increasing and in range");
        prev = layer;
        out.u_prefs[i] = p.u_prefs[layer - 1];
        out.w_prefs[i] = p.w_prefs[layer - 1];
    }
    return out;
}

// Swap the roles of the two sides.
inline Profile transpose(const Profile& p) {
    Profile out = p;
    std::swap(out.u_prefs, out.w_prefs);
    std::swap(out.u_labels, out.w_labels);
    return out;
}

inline Matching transpose(const Matching& m) {
    Matching out;
    out.to_w = m.to_u;
    out.to_u = m.to_w;
    return out;
}

// ---------------------------------------------------------------------------
// Seeded random profiles
//
// Every list is drawn from its own generator seeded by a hash of (master
// seed, side, agent slot, layer slot), so a list does not depend on the order
// in which the others were produced.
// ---------------------------------------------------------------------------

enum class ProfileMode { General, SingleLayeredU, SingleLayeredW, Uniform };

inline std::optional<ProfileMode> profile_mode_from_name(std::string_view s) {
    if (s == "general") return ProfileMode::General;
    if (s == "single_layered_U") return ProfileMode::SingleLayeredU;
    if (s == "single_layered_W") return ProfileMode::SingleLayeredW;
    if (s == "uniform") return ProfileMode::Uniform;
    return std::nullopt;
}

inline std::string profile_mode_name(ProfileMode m) {
    switch (m) {
    case ProfileMode::General: return "general";
    case ProfileMode::SingleLayeredU: return "single_layered_U";
    case ProfileMode::SingleLayeredW: return "single_layered_W";
    default: return "uniform";
    }
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = mix64(seed);
    x = mix64(x ^ a);
    x = mix64(x ^ b);
    x = mix64(x ^ c);
    return x;
}

// Small deterministic stream; mt19937_64 would also be portable but this
// keeps the sequence trivially auditable.
struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() { return mix64(state += 0x9e3779b97f4a7c15ULL); }
};

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    SplitMix rng{seed};
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

} // namespace detail

inline Profile random_profile(int n, int layers, ProfileMode mode, std::uint64_t seed) {
    Profile p = make_profile(n, layers);
    for (int layer = 1; layer <= layers; ++layer) {
        for (Side side : {Side::U, Side::W}) {
            std::uint64_t side_tag = (side == Side::U) ? 1 : 2;
            bool frozen_layer = (mode == ProfileMode::SingleLayeredU && side == Side::U) ||
                                (mode == ProfileMode::SingleLayeredW && side == Side::W);
            for (int a = 1; a <= n; ++a) {
                std::uint64_t agent_slot = (mode == ProfileMode::Uniform) ? 0 : static_cast<std::uint64_t>(a);
                std::uint64_t layer_slot = frozen_layer ? 1 : static_cast<std::uint64_t>(layer);
                p.list(side, layer, a) = detail::random_permutation(
                    n, detail::sub_seed(seed, side_tag, agent_slot, layer_slot));
            }
        }
    }
    return p;
}

} // namespace mlsm

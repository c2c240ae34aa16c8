#pragma once

// Instance generators that embed classic hard problems (CNF satisfiability,
// independent set, stable marriage with ties and incomplete lists, digraph
// isomorphism) into multi layer preference profiles, together with the small
// exhaustive oracles used to cross check the embeddings end to end.

#include <mlsm/core.hpp>
#include <mlsm/digraph.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlsm {

// ---------------------------------------------------------------------------
// CNF formulas

struct CnfFormula {
    int n_vars = 0;
    // literals are +v / -v with 1-based variable indices
    std::vector<std::vector<int>> clauses;

    bool operator==(const CnfFormula&) const = default;
};

inline void validate(const CnfFormula& f) {
    if (f.n_vars < 0) throw std::invalid_argument("cnf: negative variable count");
    for (const auto& cl : f.clauses)
        for (int lit : cl) {
            if (lit == 0) throw std::invalid_argument("cnf: zero literal");
            if (std::abs(lit) > f.n_vars)
                throw std::invalid_argument("cnf: literal " + std::to_string(lit) +
                                            " exceeds the declared variable count");
        }
}

inline bool satisfies(const CnfFormula& f, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != f.n_vars)
        throw std::invalid_argument("cnf: assignment size mismatch");
    for (const auto& cl : f.clauses) {
        bool sat = false;
        for (int lit : cl)
            if (assignment[static_cast<size_t>(std::abs(lit)) - 1] == (lit > 0)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

inline CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    bool have_header = false;
    long declared_clauses = -1;
    std::vector<int> current;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, kind;
            ls >> p >> kind >> f.n_vars >> declared_clauses;
            if (ls.fail() || kind != "cnf" || f.n_vars < 0 || declared_clauses < 0)
                throw ParseError("line " + std::to_string(line_no) + ": bad DIMACS header");
            if (have_header)
                throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
            have_header = true;
            continue;
        }
        if (!have_header)
            throw ParseError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > f.n_vars)
                    throw ParseError("line " + std::to_string(line_no) + ": literal " +
                                     std::to_string(lit) + " out of range");
                current.push_back(lit);
            }
        }
        if (!ls.eof())
            throw ParseError("line " + std::to_string(line_no) + ": expected an integer literal");
    }
    if (!have_header) throw ParseError("line 1: missing 'p cnf' header");
    if (!current.empty()) throw ParseError("line " + std::to_string(line_no) + ": unterminated clause");
    if (declared_clauses != static_cast<long>(f.clauses.size()))
        throw ParseError("line " + std::to_string(line_no) + ": header declares " +
                         std::to_string(declared_clauses) + " clauses but " +
                         std::to_string(f.clauses.size()) + " were given");
    return f;
}

inline CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

inline std::string serialize_dimacs(const CnfFormula& f) {
    validate(f);
    std::ostringstream out;
    out << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) {
        for (int lit : cl) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

namespace detail {

inline bool dpll(const CnfFormula& f, std::vector<int>& val) {
    for (;;) {
        int forced = 0;
        for (const auto& cl : f.clauses) {
            int unassigned = 0, last = 0;
            bool sat = false;
            for (int lit : cl) {
                int v = std::abs(lit);
                if (val[static_cast<size_t>(v)] == -1) {
                    ++unassigned;
                    last = lit;
                } else if ((val[static_cast<size_t>(v)] == 1) == (lit > 0)) {
                    sat = true;
                    break;
                }
            }
            if (sat) continue;
            if (unassigned == 0) return false;
            if (unassigned == 1) {
                forced = last;
                break;
            }
        }
        if (forced == 0) break;
        val[static_cast<size_t>(std::abs(forced))] = forced > 0 ? 1 : 0;
    }
    int branch = 0;
    for (size_t v = 1; v < val.size(); ++v)
        if (val[v] == -1) {
            branch = static_cast<int>(v);
            break;
        }
    if (branch == 0) return true;
    auto saved = val;
    val[static_cast<size_t>(branch)] = 1;
    if (dpll(f, val)) return true;
    val = saved;
    val[static_cast<size_t>(branch)] = 0;
    if (dpll(f, val)) return true;
    val = saved;
    return false;
}

} // namespace detail

// Exhaustive satisfiability oracle, guarded so nobody feeds it real workloads.
inline std::optional<std::vector<bool>> cnf_sat(const CnfFormula& f) {
    validate(f);
    if (f.n_vars > 20)
        throw std::invalid_argument("cnf_sat: instance exceeds the 20-variable oracle cap");
    std::vector<int> val(static_cast<size_t>(f.n_vars) + 1, -1);
    if (!detail::dpll(f, val)) return std::nullopt;
    std::vector<bool> out(static_cast<size_t>(f.n_vars));
    for (int v = 1; v <= f.n_vars; ++v) out[static_cast<size_t>(v) - 1] = val[static_cast<size_t>(v)] == 1;
    return out;
}

// Restricted form: every clause has two or three literals over distinct
// variables, size-2 clauses are monotone, size-3 clauses are not and lead
// with a positive literal followed by a negative one.
inline bool is_restricted_form(const CnfFormula& f) {
    for (const auto& cl : f.clauses) {
        if (cl.size() != 2 && cl.size() != 3) return false;
        std::set<int> vars;
        int pos = 0, neg = 0;
        for (int lit : cl) {
            vars.insert(std::abs(lit));
            (lit > 0 ? pos : neg) += 1;
        }
        if (vars.size() != cl.size()) return false;
        if (cl.size() == 2 && pos != 0 && neg != 0) return false;
        if (cl.size() == 3) {
            if (pos == 0 || neg == 0) return false;
            if (cl[0] < 0 || cl[1] > 0) return false;
        }
    }
    return true;
}

namespace detail {

inline void reorder_restricted_clause(std::vector<int>& cl) {
    if (cl.size() == 2) {
        if (std::abs(cl[0]) > std::abs(cl[1])) std::swap(cl[0], cl[1]);
        return;
    }
    std::vector<int> rest = cl;
    std::vector<int> out;
    auto take = [&rest](bool positive) {
        int best = -1;
        for (size_t t = 0; t < rest.size(); ++t) {
            if ((rest[t] > 0) != positive) continue;
            if (best < 0 || std::abs(rest[t]) < std::abs(rest[static_cast<size_t>(best)]))
                best = static_cast<int>(t);
        }
        int lit = rest[static_cast<size_t>(best)];
        rest.erase(rest.begin() + best);
        return lit;
    };
    out.push_back(take(true));
    out.push_back(take(false));
    out.push_back(rest[0]);
    cl = out;
}

} // namespace detail

// Rewrites an arbitrary CNF with clause sizes 1..3 into the restricted form
// above, equisatisfiably. Unit clauses are padded with a fresh variable, each
// variable v (fresh ones included) gets a complement helper z_v pinned to the
// opposite value by the clause pair (v or z_v), (-v or -z_v), mixed size-2
// clauses absorb a redundant helper literal, and monotone size-3 clauses have
// their first literal swapped for the opposite-sign helper literal.
inline CnfFormula restrict_3sat(const CnfFormula& f) {
    validate(f);
    std::vector<std::vector<int>> work;
    int units = 0;
    for (const auto& cl : f.clauses) {
        if (cl.size() < 1 || cl.size() > 3)
            throw std::invalid_argument("restrict_3sat: clause size out of range");
        std::vector<int> dedup;
        bool tautology = false;
        for (int lit : cl) {
            if (std::find(dedup.begin(), dedup.end(), lit) != dedup.end()) continue;
            if (std::find(dedup.begin(), dedup.end(), -lit) != dedup.end()) {
                tautology = true;
                break;
            }
            dedup.push_back(lit);
        }
        if (tautology) continue;
        if (dedup.size() == 1) ++units;
        work.push_back(std::move(dedup));
    }
    int base = f.n_vars + units;
    auto z = [base](int v) { return base + v; };
    CnfFormula out;
    out.n_vars = 2 * base;
    int unit_seen = 0;
    for (auto& cl : work) {
        if (cl.size() == 1) {
            ++unit_seen;
            int h = f.n_vars + unit_seen;
            int lit = cl[0];
            int v = std::abs(lit);
            if (lit > 0) {
                out.clauses.push_back({lit, h});
                out.clauses.push_back({lit, -h, -z(v)});
            } else {
                out.clauses.push_back({lit, -h});
                out.clauses.push_back({h, lit, z(v)});
            }
            continue;
        }
        if (cl.size() == 2) {
            bool pos0 = cl[0] > 0, pos1 = cl[1] > 0;
            if (pos0 != pos1) {
                int p = pos0 ? cl[0] : cl[1];
                cl.push_back(-z(p));
            }
            out.clauses.push_back(cl);
            continue;
        }
        bool monotone = (cl[0] > 0) == (cl[1] > 0) && (cl[1] > 0) == (cl[2] > 0);
        if (monotone) cl[0] = cl[0] > 0 ? -z(cl[0]) : z(-cl[0]);
        out.clauses.push_back(cl);
    }
    for (int v = 1; v <= base; ++v) {
        out.clauses.push_back({v, z(v)});
        out.clauses.push_back({-v, -z(v)});
    }
    for (auto& cl : out.clauses) detail::reorder_restricted_clause(cl);
    validate(out);
    return out;
}

// ---------------------------------------------------------------------------
// Gadget role maps

struct GadgetMap {
    std::vector<std::string> u_roles;
    std::vector<std::string> w_roles;
};

namespace detail {

inline std::map<std::string, int> role_index(const std::vector<std::string>& roles) {
    std::map<std::string, int> out;
    for (size_t t = 0; t < roles.size(); ++t) out[roles[t]] = static_cast<int>(t) + 1;
    return out;
}

// appends every agent not named in the head, in ascending index order
inline std::vector<int> with_tail(std::vector<int> head, int count) {
    std::vector<char> used(static_cast<size_t>(count) + 1, 0);
    for (int v : head) used[static_cast<size_t>(v)] = 1;
    head.reserve(static_cast<size_t>(count));
    for (int v = 1; v <= count; ++v)
        if (!used[static_cast<size_t>(v)]) head.push_back(v);
    return head;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Formula gadget
//
// Each variable contributes agents x_i, xbar_i vs y_i, ybar_i whose two base
// layers admit exactly the pairings {x y, xbar ybar} (true) and {x ybar,
// xbar y} (false); each clause contributes a_j..c_j vs d_j..f_j whose stable
// pairings mirror which literal satisfies the clause, wired to the variable
// agents through the insertion lists built below.

struct SatReduction {
    CnfFormula cnf;
    int alpha = 0;
    Profile profile;
    GadgetMap map;
};

namespace detail {

struct sat_layout {
    int n = 0, m = 0, side = 0;

    int x(int i) const { return 2 * i - 1; }
    int xbar(int i) const { return 2 * i; }
    int a(int j) const { return 2 * n + 3 * (j - 1) + 1; }
    int b(int j) const { return 2 * n + 3 * (j - 1) + 2; }
    int c(int j) const { return 2 * n + 3 * (j - 1) + 3; }
    // the W side mirrors the U side: y/ybar/d/e/f sit at the same offsets
    int y(int i) const { return x(i); }
    int ybar(int i) const { return xbar(i); }
    int d(int j) const { return a(j); }
    int e(int j) const { return b(j); }
    int f(int j) const { return c(j); }
    int dummy(int k) const { return 2 * n + 3 * m + k; }
};

inline void sat_fill_base_layer(const CnfFormula& cnf, const sat_layout& L, int lay,
                                std::vector<std::vector<int>>& ul,
                                std::vector<std::vector<int>>& wl) {
    auto lit_var = [](int lit) { return std::abs(lit); };
    for (int i = 1; i <= L.n; ++i) {
        std::vector<int> d_ins, a_ins;
        for (int j = 1; j <= L.m; ++j) {
            const auto& cl = cnf.clauses[static_cast<size_t>(j) - 1];
            int last = cl.back();
            if (lay == 1) {
                if (cl[0] == i) d_ins.push_back(L.d(j));
                bool neg_pair = cl.size() == 2 && cl[0] < 0;
                if ((cl.size() == 3 && cl[1] == -i) || (neg_pair && cl[0] == -i))
                    a_ins.push_back(L.a(j));
            } else {
                if (last == -i) d_ins.push_back(L.d(j));
                if (last == i) a_ins.push_back(L.a(j));
            }
        }
        if (lay == 1) {
            std::vector<int> xh = {L.y(i)};
            xh.insert(xh.end(), d_ins.begin(), d_ins.end());
            xh.push_back(L.ybar(i));
            ul[static_cast<size_t>(L.x(i)) - 1] = std::move(xh);
            ul[static_cast<size_t>(L.xbar(i)) - 1] = {L.ybar(i), L.y(i)};
            std::vector<int> yh = {L.xbar(i)};
            yh.insert(yh.end(), a_ins.begin(), a_ins.end());
            yh.push_back(L.x(i));
            wl[static_cast<size_t>(L.y(i)) - 1] = std::move(yh);
            wl[static_cast<size_t>(L.ybar(i)) - 1] = {L.x(i), L.xbar(i)};
        } else {
            ul[static_cast<size_t>(L.x(i)) - 1] = {L.ybar(i), L.y(i)};
            std::vector<int> xbh = {L.y(i)};
            xbh.insert(xbh.end(), d_ins.begin(), d_ins.end());
            xbh.push_back(L.ybar(i));
            ul[static_cast<size_t>(L.xbar(i)) - 1] = std::move(xbh);
            wl[static_cast<size_t>(L.y(i)) - 1] = {L.x(i), L.xbar(i)};
            std::vector<int> ybh = {L.xbar(i)};
            ybh.insert(ybh.end(), a_ins.begin(), a_ins.end());
            ybh.push_back(L.x(i));
            wl[static_cast<size_t>(L.ybar(i)) - 1] = std::move(ybh);
        }
    }
    for (int j = 1; j <= L.m; ++j) {
        const auto& cl = cnf.clauses[static_cast<size_t>(j) - 1];
        int A = L.a(j), B = L.b(j), C = L.c(j);
        int D = L.d(j), E = L.e(j), F = L.f(j);
        auto set_u = [&ul](int agent, std::vector<int> head) {
            ul[static_cast<size_t>(agent) - 1] = std::move(head);
        };
        auto set_w = [&wl](int agent, std::vector<int> head) {
            wl[static_cast<size_t>(agent) - 1] = std::move(head);
        };
        if (cl.size() == 3) {
            if (lay == 1) {
                set_u(A, {D, E, L.y(lit_var(cl[1])), F});
                set_u(B, {E, F, D});
                set_u(C, {F, D, E});
                set_w(D, {B, C, L.x(lit_var(cl[0])), A});
                set_w(E, {C, A, B});
                set_w(F, {A, B, C});
            } else if (cl[2] > 0) {
                set_u(A, {F, D, L.ybar(cl[2]), E});
                set_u(B, {D, E, F});
                set_u(C, {E, F, D});
                set_w(D, {C, A, B});
                set_w(E, {A, B, C});
                set_w(F, {B, C, A});
            } else {
                set_u(A, {E, F, D});
                set_u(B, {F, D, E});
                set_u(C, {D, E, F});
                set_w(D, {A, B, L.xbar(-cl[2]), C});
                set_w(E, {B, C, A});
                set_w(F, {C, A, B});
            }
        } else {
            bool positive = cl[0] > 0;
            set_u(C, {F});
            set_w(F, {C});
            if (lay == 1) {
                set_u(B, {E, D});
                set_w(E, {A, B});
                if (positive) {
                    set_u(A, {D, E});
                    set_w(D, {B, L.x(cl[0]), A});
                } else {
                    set_u(A, {D, L.y(-cl[0]), E});
                    set_w(D, {B, A});
                }
            } else {
                set_u(B, {E, D});
                set_w(E, {A, B});
                if (positive) {
                    set_u(A, {D, L.ybar(cl[1]), E});
                    set_w(D, {B, A});
                } else {
                    set_u(A, {D, E});
                    set_w(D, {B, L.xbar(-cl[1]), A});
                }
            }
        }
    }
}

// One stable filler layer: every gadget keeps its own agents at the head in
// the layer-1 rotation, with the cross-gadget insertions dropped. Size-2
// clause gadgets keep their own two-cycle pattern; reusing the three-cycle
// pattern would let {b_j, f_j} block whenever the gadget sits in its second
// stable pairing.
inline void sat_fill_padding_layer(const sat_layout& L, const std::vector<char>& size3,
                                   std::vector<std::vector<int>>& ul,
                                   std::vector<std::vector<int>>& wl) {
    for (int i = 1; i <= L.n; ++i) {
        ul[static_cast<size_t>(L.x(i)) - 1] = {L.y(i), L.ybar(i)};
        ul[static_cast<size_t>(L.xbar(i)) - 1] = {L.ybar(i), L.y(i)};
        wl[static_cast<size_t>(L.y(i)) - 1] = {L.xbar(i), L.x(i)};
        wl[static_cast<size_t>(L.ybar(i)) - 1] = {L.x(i), L.xbar(i)};
    }
    for (int j = 1; j <= L.m; ++j) {
        int A = L.a(j), B = L.b(j), C = L.c(j);
        int D = L.d(j), E = L.e(j), F = L.f(j);
        if (size3[static_cast<size_t>(j) - 1]) {
            ul[static_cast<size_t>(A) - 1] = {D, E, F};
            ul[static_cast<size_t>(B) - 1] = {E, F, D};
            ul[static_cast<size_t>(C) - 1] = {F, D, E};
            wl[static_cast<size_t>(D) - 1] = {B, C, A};
            wl[static_cast<size_t>(E) - 1] = {C, A, B};
            wl[static_cast<size_t>(F) - 1] = {A, B, C};
        } else {
            ul[static_cast<size_t>(A) - 1] = {D, E};
            ul[static_cast<size_t>(B) - 1] = {E, D};
            ul[static_cast<size_t>(C) - 1] = {F};
            wl[static_cast<size_t>(D) - 1] = {B, A};
            wl[static_cast<size_t>(E) - 1] = {A, B};
            wl[static_cast<size_t>(F) - 1] = {C};
        }
    }
}

inline Profile sat_assemble(const CnfFormula& cnf, int alpha, int layers, GadgetMap& map) {
    sat_layout L;
    L.n = cnf.n_vars;
    L.m = static_cast<int>(cnf.clauses.size());
    int lhat = alpha == layers ? 0 : layers - alpha + 1;
    L.side = 2 * L.n + 3 * L.m + lhat;
    std::vector<char> size3(static_cast<size_t>(L.m));
    for (int j = 1; j <= L.m; ++j)
        size3[static_cast<size_t>(j) - 1] = cnf.clauses[static_cast<size_t>(j) - 1].size() == 3;

    Profile p;
    p.n = L.side;
    p.layers = layers;
    for (int lay = 1; lay <= layers; ++lay) {
        std::vector<std::vector<int>> ul(static_cast<size_t>(L.side));
        std::vector<std::vector<int>> wl(static_cast<size_t>(L.side));
        if (lay <= 2)
            sat_fill_base_layer(cnf, L, lay, ul, wl);
        else
            sat_fill_padding_layer(L, size3, ul, wl);
        for (int k = 1; k <= lhat; ++k) {
            if (lay <= alpha) {
                ul[static_cast<size_t>(L.dummy(k)) - 1] = {L.dummy(k)};
                wl[static_cast<size_t>(L.dummy(k)) - 1] = {L.dummy(k)};
            } else {
                int shift = lay - alpha;
                int up = ((k - 1 + shift) % lhat) + 1;
                int wp = (((k - 1 - shift) % lhat + lhat) % lhat) + 1;
                ul[static_cast<size_t>(L.dummy(k)) - 1] = {L.dummy(up)};
                wl[static_cast<size_t>(L.dummy(k)) - 1] = {L.dummy(wp)};
            }
        }
        for (auto& lst : ul) lst = with_tail(std::move(lst), L.side);
        for (auto& lst : wl) lst = with_tail(std::move(lst), L.side);
        p.u_prefs.push_back(std::move(ul));
        p.w_prefs.push_back(std::move(wl));
    }

    map.u_roles.clear();
    map.w_roles.clear();
    for (int i = 1; i <= L.n; ++i) {
        map.u_roles.push_back("x" + std::to_string(i));
        map.u_roles.push_back("xbar" + std::to_string(i));
        map.w_roles.push_back("y" + std::to_string(i));
        map.w_roles.push_back("ybar" + std::to_string(i));
    }
    for (int j = 1; j <= L.m; ++j) {
        map.u_roles.push_back("a" + std::to_string(j));
        map.u_roles.push_back("b" + std::to_string(j));
        map.u_roles.push_back("c" + std::to_string(j));
        map.w_roles.push_back("d" + std::to_string(j));
        map.w_roles.push_back("e" + std::to_string(j));
        map.w_roles.push_back("f" + std::to_string(j));
    }
    for (int k = 1; k <= lhat; ++k) {
        map.u_roles.push_back("du" + std::to_string(k));
        map.w_roles.push_back("dw" + std::to_string(k));
    }
    p.u_labels = map.u_roles;
    p.w_labels = map.w_roles;
    return p;
}

} // namespace detail

// Builds the profile whose alpha-globally-stable matchings correspond to the
// satisfying assignments of a restricted formula. The two base layers carry
// the formula structure; layers past the second are stable filler, and when
// alpha < layers a block of layers-alpha+1 dummy pairs per side rotates
// through mutually-top pairings so that no layer past alpha can be stable.
inline SatReduction sat_to_global(const CnfFormula& cnf, int alpha, int layers) {
    validate(cnf);
    if (!is_restricted_form(cnf))
        throw std::invalid_argument("sat_to_global: formula is not in restricted form");
    if (cnf.n_vars < 1)
        throw std::invalid_argument("sat_to_global: formula needs at least one variable");
    if (layers < 2 || alpha < 2 || alpha > layers)
        throw std::invalid_argument("sat_to_global: unsupported (alpha, layers) combination");
    SatReduction red;
    red.cnf = cnf;
    red.alpha = alpha;
    red.profile = detail::sat_assemble(cnf, alpha, layers, red.map);
    validate(red.profile);
    return red;
}

// Lifts a satisfying assignment to the matching the correctness argument
// pins: variable gadgets pair by truth value, clause gadgets pick the pairing
// slot of a satisfied literal, dummies stay on their mutual tops.
inline Matching forward_matching(const SatReduction& red, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != red.cnf.n_vars)
        throw std::invalid_argument("forward_matching: assignment size mismatch");
    if (!satisfies(red.cnf, assignment))
        throw std::invalid_argument("forward_matching: assignment does not satisfy the formula");
    detail::sat_layout L;
    L.n = red.cnf.n_vars;
    L.m = static_cast<int>(red.cnf.clauses.size());
    L.side = red.profile.n;
    std::vector<int> to_w(static_cast<size_t>(L.side));
    auto pair_up = [&to_w](int u, int w) { to_w[static_cast<size_t>(u) - 1] = w; };
    auto truth = [&assignment](int lit) {
        return assignment[static_cast<size_t>(std::abs(lit)) - 1] == (lit > 0);
    };
    for (int i = 1; i <= L.n; ++i) {
        bool t = assignment[static_cast<size_t>(i) - 1];
        pair_up(L.x(i), t ? L.y(i) : L.ybar(i));
        pair_up(L.xbar(i), t ? L.ybar(i) : L.y(i));
    }
    for (int j = 1; j <= L.m; ++j) {
        const auto& cl = red.cnf.clauses[static_cast<size_t>(j) - 1];
        if (cl.size() == 3) {
            int slot = truth(cl[0]) ? 1 : truth(cl[1]) ? 2 : 3;
            if (slot == 1) {
                pair_up(L.a(j), L.d(j));
                pair_up(L.b(j), L.e(j));
                pair_up(L.c(j), L.f(j));
            } else if (slot == 2) {
                pair_up(L.a(j), L.f(j));
                pair_up(L.b(j), L.d(j));
                pair_up(L.c(j), L.e(j));
            } else {
                pair_up(L.a(j), L.e(j));
                pair_up(L.b(j), L.f(j));
                pair_up(L.c(j), L.d(j));
            }
        } else {
            // the slot whose conditional layer matches the satisfied literal:
            // positive pairs test literal 1 in slot 1, negative pairs in slot 2
            bool positive = cl[0] > 0;
            bool first = truth(cl[0]);
            bool slot1 = positive == first;
            pair_up(L.a(j), slot1 ? L.d(j) : L.e(j));
            pair_up(L.b(j), slot1 ? L.e(j) : L.d(j));
            pair_up(L.c(j), L.f(j));
        }
    }
    for (int k = L.dummy(1); k <= L.side; ++k) pair_up(k, k);
    return Matching(to_w);
}

// Reads the truth assignment back out of a stable matching.
inline std::vector<bool> extract_assignment(const Profile& profile, const GadgetMap& map,
                                            const Matching& m) {
    if (m.size() != profile.n)
        throw std::invalid_argument("extract_assignment: matching size mismatch");
    auto uidx = detail::role_index(map.u_roles);
    auto widx = detail::role_index(map.w_roles);
    std::vector<bool> out;
    for (int i = 1;; ++i) {
        auto xi = uidx.find("x" + std::to_string(i));
        if (xi == uidx.end()) break;
        int x = xi->second;
        int xbar = uidx.at("xbar" + std::to_string(i));
        int y = widx.at("y" + std::to_string(i));
        int ybar = widx.at("ybar" + std::to_string(i));
        if (m.contains(x, y) && m.contains(xbar, ybar))
            out.push_back(true);
        else if (m.contains(x, ybar) && m.contains(xbar, y))
            out.push_back(false);
        else
            throw std::runtime_error("extract_assignment: variable gadget " + std::to_string(i) +
                                     " is matched in neither canonical pattern");
    }
    return out;
}

// Stacks copies of the two base layers so that pair stability at high alpha
// forces both base layers to be clean; odd layer counts get one filler layer.
inline Profile replicate_for_pair(const Profile& base, const GadgetMap& map, int layers) {
    validate(base);
    if (layers < 2) throw std::invalid_argument("replicate_for_pair: need at least two layers");
    auto uidx = detail::role_index(map.u_roles);
    int nv = 0, mc = 0;
    while (uidx.count("x" + std::to_string(nv + 1))) ++nv;
    while (uidx.count("a" + std::to_string(mc + 1))) ++mc;
    if (base.layers != 2 || static_cast<int>(map.u_roles.size()) != base.n ||
        static_cast<int>(map.w_roles.size()) != base.n || 2 * nv + 3 * mc != base.n)
        throw std::invalid_argument("replicate_for_pair: source is not a two-layer formula gadget");
    Profile out;
    out.n = base.n;
    out.layers = layers;
    out.u_labels = base.u_labels;
    out.w_labels = base.w_labels;
    for (int lay = 1; lay <= 2 * (layers / 2); ++lay) {
        out.u_prefs.push_back(base.u_prefs[static_cast<size_t>((lay - 1) % 2)]);
        out.w_prefs.push_back(base.w_prefs[static_cast<size_t>((lay - 1) % 2)]);
    }
    if (layers % 2 == 1) {
        detail::sat_layout L{nv, mc, base.n};
        std::vector<char> size3(static_cast<size_t>(mc));
        for (int j = 1; j <= mc; ++j) {
            // a size-3 clause gadget ranks c_j right after b_j in d_j's first layer
            const auto& dl = base.w_prefs[0][static_cast<size_t>(L.d(j)) - 1];
            size3[static_cast<size_t>(j) - 1] = dl.size() > 1 && dl[1] == L.c(j);
        }
        std::vector<std::vector<int>> ul(static_cast<size_t>(base.n));
        std::vector<std::vector<int>> wl(static_cast<size_t>(base.n));
        detail::sat_fill_padding_layer(L, size3, ul, wl);
        for (auto& lst : ul) lst = detail::with_tail(std::move(lst), base.n);
        for (auto& lst : wl) lst = detail::with_tail(std::move(lst), base.n);
        out.u_prefs.push_back(std::move(ul));
        out.w_prefs.push_back(std::move(wl));
    }
    validate(out);
    return out;
}

// ---------------------------------------------------------------------------
// Stable marriage with ties and incomplete lists (ties only on the U side,
// at most one tie of length two per list)

struct SmtiInstance {
    int n = 0;
    // u_prefs[u-1] is a sequence of groups; a group of size two is a tie
    std::vector<std::vector<std::vector<int>>> u_prefs;
    std::vector<std::vector<int>> w_prefs;

    bool operator==(const SmtiInstance&) const = default;
};

inline void validate(const SmtiInstance& s) {
    if (s.n < 1) throw std::invalid_argument("smti: need at least one agent per side");
    if (static_cast<int>(s.u_prefs.size()) != s.n || static_cast<int>(s.w_prefs.size()) != s.n)
        throw std::invalid_argument("smti: list count mismatch");
    std::vector<std::set<int>> u_acc(static_cast<size_t>(s.n)), w_acc(static_cast<size_t>(s.n));
    for (int u = 1; u <= s.n; ++u) {
        int ties = 0;
        for (const auto& group : s.u_prefs[static_cast<size_t>(u) - 1]) {
            if (group.empty() || group.size() > 2)
                throw std::invalid_argument("smti: tie groups must have one or two entries");
            if (group.size() == 2 && ++ties > 1)
                throw std::invalid_argument("smti: at most one tie per list");
            for (int w : group) {
                if (w < 1 || w > s.n) throw std::invalid_argument("smti: entry out of range");
                if (!u_acc[static_cast<size_t>(u) - 1].insert(w).second)
                    throw std::invalid_argument("smti: duplicate entry in a U list");
            }
        }
    }
    for (int w = 1; w <= s.n; ++w)
        for (int u : s.w_prefs[static_cast<size_t>(w) - 1]) {
            if (u < 1 || u > s.n) throw std::invalid_argument("smti: entry out of range");
            if (!w_acc[static_cast<size_t>(w) - 1].insert(u).second)
                throw std::invalid_argument("smti: duplicate entry in a W list");
        }
    for (int u = 1; u <= s.n; ++u)
        for (int w : u_acc[static_cast<size_t>(u) - 1])
            if (!w_acc[static_cast<size_t>(w) - 1].count(u))
                throw std::invalid_argument("smti: acceptability is not mutual (normalize first)");
    for (int w = 1; w <= s.n; ++w)
        for (int u : w_acc[static_cast<size_t>(w) - 1])
            if (!u_acc[static_cast<size_t>(u) - 1].count(w))
                throw std::invalid_argument("smti: acceptability is not mutual (normalize first)");
}

// Drops one-sided entries so that acceptability becomes mutual.
inline SmtiInstance normalize_smti(const SmtiInstance& s) {
    SmtiInstance out;
    out.n = s.n;
    std::vector<std::set<int>> u_acc(static_cast<size_t>(s.n)), w_acc(static_cast<size_t>(s.n));
    for (int u = 1; u <= s.n; ++u)
        for (const auto& group : s.u_prefs[static_cast<size_t>(u) - 1])
            for (int w : group) u_acc[static_cast<size_t>(u) - 1].insert(w);
    for (int w = 1; w <= s.n; ++w)
        for (int u : s.w_prefs[static_cast<size_t>(w) - 1]) w_acc[static_cast<size_t>(w) - 1].insert(u);
    out.u_prefs.resize(static_cast<size_t>(s.n));
    out.w_prefs.resize(static_cast<size_t>(s.n));
    for (int u = 1; u <= s.n; ++u)
        for (const auto& group : s.u_prefs[static_cast<size_t>(u) - 1]) {
            std::vector<int> kept;
            for (int w : group)
                if (w_acc[static_cast<size_t>(w) - 1].count(u)) kept.push_back(w);
            if (!kept.empty()) out.u_prefs[static_cast<size_t>(u) - 1].push_back(std::move(kept));
        }
    for (int w = 1; w <= s.n; ++w)
        for (int u : s.w_prefs[static_cast<size_t>(w) - 1])
            if (u_acc[static_cast<size_t>(u) - 1].count(w))
                out.w_prefs[static_cast<size_t>(w) - 1].push_back(u);
    return out;
}

inline SmtiInstance parse_smti(std::istream& in) {
    SmtiInstance s;
    bool have_header = false;
    std::vector<char> seen_u, seen_w;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto err = [line_no](const std::string& msg) {
            return ParseError("line " + std::to_string(line_no) + ": " + msg);
        };
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, kind;
            ls >> p >> kind >> s.n;
            if (ls.fail() || kind != "smti" || s.n < 1) throw err("bad 'p smti n' header");
            if (have_header) throw err("duplicate header");
            have_header = true;
            s.u_prefs.resize(static_cast<size_t>(s.n));
            s.w_prefs.resize(static_cast<size_t>(s.n));
            seen_u.assign(static_cast<size_t>(s.n), 0);
            seen_w.assign(static_cast<size_t>(s.n), 0);
            continue;
        }
        if (!have_header) throw err("preference line before 'p smti' header");
        std::string side, colon;
        int agent = 0;
        ls >> side >> agent >> colon;
        if (ls.fail() || (side != "U" && side != "W") || colon != ":")
            throw err("expected 'U i : ...' or 'W i : ...'");
        if (agent < 1 || agent > s.n) throw err("agent index out of range");
        char other = side == "U" ? 'w' : 'u';
        auto& seen = side == "U" ? seen_u : seen_w;
        if (seen[static_cast<size_t>(agent) - 1]) throw err("duplicate list for this agent");
        seen[static_cast<size_t>(agent) - 1] = 1;
        std::vector<std::vector<int>> groups;
        bool in_tie = false;
        std::string tok;
        while (ls >> tok) {
            bool opens = !tok.empty() && tok.front() == '(';
            bool closes = !tok.empty() && tok.back() == ')';
            if (opens) {
                if (in_tie) throw err("nested tie");
                if (side == "W") throw err("ties are only allowed on the U side");
                in_tie = true;
                groups.emplace_back();
                tok.erase(tok.begin());
            } else if (!in_tie) {
                groups.emplace_back();
            }
            if (closes) tok.pop_back();
            if (tok.size() < 2 || tok[0] != other)
                throw err(std::string("expected a token like ") + other + "3");
            int idx = 0;
            try {
                size_t used = 0;
                idx = std::stoi(tok.substr(1), &used);
                if (used + 1 != tok.size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw err("bad agent token '" + tok + "'");
            }
            if (idx < 1 || idx > s.n) throw err("agent token out of range");
            groups.back().push_back(idx);
            if (closes) {
                if (!in_tie) throw err("unmatched ')'");
                in_tie = false;
            }
        }
        if (in_tie) throw err("unclosed tie");
        if (side == "U") {
            s.u_prefs[static_cast<size_t>(agent) - 1] = std::move(groups);
        } else {
            auto& flat = s.w_prefs[static_cast<size_t>(agent) - 1];
            for (const auto& g : groups) flat.push_back(g[0]);
        }
    }
    if (!have_header) throw ParseError("line 1: missing 'p smti' header");
    return s;
}

inline SmtiInstance parse_smti(const std::string& text) {
    std::istringstream in(text);
    return parse_smti(in);
}

inline std::string serialize_smti(const SmtiInstance& s) {
    std::ostringstream out;
    out << "p smti " << s.n << '\n';
    for (int u = 1; u <= s.n; ++u) {
        out << "U " << u << " :";
        for (const auto& group : s.u_prefs[static_cast<size_t>(u) - 1]) {
            if (group.size() == 1) {
                out << " w" << group[0];
            } else {
                out << " (";
                for (size_t t = 0; t < group.size(); ++t) out << (t ? " w" : "w") << group[t];
                out << ')';
            }
        }
        out << '\n';
    }
    for (int w = 1; w <= s.n; ++w) {
        out << "W " << w << " :";
        for (int u : s.w_prefs[static_cast<size_t>(w) - 1]) out << " u" << u;
        out << '\n';
    }
    return out.str();
}

// All perfect matchings along mutually acceptable pairs with no pair {u,w}
// where both sides strictly prefer each other to their partners. Exhaustive,
// so capped at four agents per side.
inline std::vector<Matching> smti_perfect_stable(const SmtiInstance& s) {
    validate(s);
    if (s.n > 4) throw std::invalid_argument("smti_perfect_stable: n cap exceeded (4)");
    std::vector<std::vector<int>> urank(static_cast<size_t>(s.n),
                                        std::vector<int>(static_cast<size_t>(s.n) + 1, -1));
    std::vector<std::vector<int>> wrank(static_cast<size_t>(s.n),
                                        std::vector<int>(static_cast<size_t>(s.n) + 1, -1));
    for (int u = 1; u <= s.n; ++u) {
        int g = 0;
        for (const auto& group : s.u_prefs[static_cast<size_t>(u) - 1]) {
            for (int w : group) urank[static_cast<size_t>(u) - 1][static_cast<size_t>(w)] = g;
            ++g;
        }
    }
    for (int w = 1; w <= s.n; ++w) {
        const auto& lst = s.w_prefs[static_cast<size_t>(w) - 1];
        for (size_t t = 0; t < lst.size(); ++t)
            wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(lst[t])] = static_cast<int>(t);
    }
    std::vector<Matching> out;
    std::vector<int> perm(static_cast<size_t>(s.n));
    for (int u = 1; u <= s.n; ++u) perm[static_cast<size_t>(u) - 1] = u;
    std::vector<int> partner_of_w(static_cast<size_t>(s.n) + 1);
    do {
        bool ok = true;
        for (int u = 1; u <= s.n && ok; ++u) {
            int w = perm[static_cast<size_t>(u) - 1];
            partner_of_w[static_cast<size_t>(w)] = u;
            if (urank[static_cast<size_t>(u) - 1][static_cast<size_t>(w)] < 0) ok = false;
        }
        for (int u = 1; u <= s.n && ok; ++u)
            for (int w = 1; w <= s.n && ok; ++w) {
                if (perm[static_cast<size_t>(u) - 1] == w) continue;
                int uw = urank[static_cast<size_t>(u) - 1][static_cast<size_t>(w)];
                int wu = wrank[static_cast<size_t>(w) - 1][static_cast<size_t>(u)];
                if (uw < 0 || wu < 0) continue;
                int um = urank[static_cast<size_t>(u) - 1]
                              [static_cast<size_t>(perm[static_cast<size_t>(u) - 1])];
                int wm = wrank[static_cast<size_t>(w) - 1]
                              [static_cast<size_t>(partner_of_w[static_cast<size_t>(w)])];
                if (uw < um && wu < wm) ok = false;
            }
        if (ok) out.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

struct SmtiReduction {
    SmtiInstance smti;
    int alpha = 0;
    Profile profile;
    GadgetMap map;
};

namespace detail {

inline Profile smti_assemble(const SmtiInstance& s, int layers, bool reverse_w_layer1,
                             GadgetMap& map) {
    int n = s.n;
    int side = n * (1 + layers);
    auto pr = [n, layers](int i, int j) { return n + (i - 1) * layers + j; };
    Profile p;
    p.n = side;
    p.layers = layers;
    int forward_layers = (layers + 1) / 2;
    for (int lay = 1; lay <= layers; ++lay) {
        std::vector<std::vector<int>> ul(static_cast<size_t>(side));
        std::vector<std::vector<int>> wl(static_cast<size_t>(side));
        for (int i = 1; i <= n; ++i) {
            std::vector<int> uh;
            for (const auto& group : s.u_prefs[static_cast<size_t>(i) - 1]) {
                if (group.size() == 1 || lay <= forward_layers)
                    uh.insert(uh.end(), group.begin(), group.end());
                else
                    uh.insert(uh.end(), group.rbegin(), group.rend());
            }
            for (int t = 0; t < layers; ++t) uh.push_back(pr(i, (lay - 1 + t) % layers + 1));
            ul[static_cast<size_t>(i) - 1] = with_tail(std::move(uh), side);

            std::vector<int> wh;
            const auto& lw = s.w_prefs[static_cast<size_t>(i) - 1];
            if (reverse_w_layer1 && lay == 1)
                wh.assign(lw.rbegin(), lw.rend());
            else
                wh.assign(lw.begin(), lw.end());
            for (int j = 1; j <= layers; ++j) wh.push_back(pr(i, j));
            wl[static_cast<size_t>(i) - 1] = with_tail(std::move(wh), side);

            for (int j = 1; j <= layers; ++j) {
                ul[static_cast<size_t>(pr(i, j)) - 1] = with_tail({i, pr(i, j)}, side);
                wl[static_cast<size_t>(pr(i, j)) - 1] = with_tail({i, pr(i, j)}, side);
            }
        }
        p.u_prefs.push_back(std::move(ul));
        p.w_prefs.push_back(std::move(wl));
    }
    map.u_roles.clear();
    map.w_roles.clear();
    for (int i = 1; i <= n; ++i) {
        map.u_roles.push_back("u" + std::to_string(i));
        map.w_roles.push_back("w" + std::to_string(i));
    }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= layers; ++j) {
            map.u_roles.push_back("p" + std::to_string(i) + "_" + std::to_string(j));
            map.w_roles.push_back("r" + std::to_string(i) + "_" + std::to_string(j));
        }
    p.u_labels = map.u_roles;
    p.w_labels = map.w_roles;
    return p;
}

} // namespace detail

// Embedding of perfect-matching SMTI into individual stability: each original
// agent drags a chain of layer-indexed satellite pairs, and the satellites'
// rotating positions in u_i's lists make every non-forced outcome blocked.
inline SmtiReduction smti_to_individual(const SmtiInstance& s, int layers, int alpha) {
    validate(s);
    if (layers < 4) throw std::invalid_argument("smti_to_individual: need at least four layers");
    if (alpha < 2 || alpha > layers / 2)
        throw std::invalid_argument("smti_to_individual: alpha out of range");
    SmtiReduction red;
    red.smti = s;
    red.alpha = alpha;
    red.profile = detail::smti_assemble(s, layers, false, red.map);
    validate(red.profile);
    return red;
}

// Pair-stability variant for odd layer counts at alpha = layers/2 + 1; the
// only change is that each w reverses its original list in the first layer.
inline SmtiReduction smti_to_pair_odd(const SmtiInstance& s, int layers) {
    validate(s);
    if (layers < 5 || layers % 2 == 0)
        throw std::invalid_argument("smti_to_pair_odd: layers must be odd and at least five");
    SmtiReduction red;
    red.smti = s;
    red.alpha = layers / 2 + 1;
    red.profile = detail::smti_assemble(s, layers, true, red.map);
    validate(red.profile);
    return red;
}

inline Matching forward_matching(const SmtiReduction& red, const Matching& smti_matching) {
    if (smti_matching.size() != red.smti.n)
        throw std::invalid_argument("forward_matching: matching size mismatch");
    int n = red.smti.n, layers = red.profile.layers;
    std::vector<int> to_w(static_cast<size_t>(red.profile.n));
    for (int i = 1; i <= n; ++i) to_w[static_cast<size_t>(i) - 1] = smti_matching.partner_of_u(i);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= layers; ++j) {
            int t = n + (i - 1) * layers + j;
            to_w[static_cast<size_t>(t) - 1] = t;
        }
    return Matching(to_w);
}

inline Matching extract_smti_matching(const SmtiReduction& red, const Matching& m) {
    if (m.size() != red.profile.n)
        throw std::invalid_argument("extract_smti_matching: matching size mismatch");
    std::vector<int> to_w;
    for (int i = 1; i <= red.smti.n; ++i) {
        int w = m.partner_of_u(i);
        if (w > red.smti.n)
            throw std::runtime_error("extract_smti_matching: original agent " + std::to_string(i) +
                                     " is matched to a satellite");
        to_w.push_back(w);
    }
    return Matching(to_w);
}

// ---------------------------------------------------------------------------
// Independent set

struct IsReduction {
    Graph graph;
    int k = 0;
    int alpha = 0;
    Profile profile;
    GadgetMap map;
};

// Exhaustive maximum independent set size, capped at ten vertices.
inline int max_independent_set(const Graph& g) {
    validate(g);
    if (g.n > 10)
        throw std::invalid_argument("max_independent_set: vertex cap exceeded (10)");
    auto mat = g.matrix();
    int best = 0;
    for (unsigned mask = 0; mask < (1u << g.n); ++mask) {
        int size = 0;
        bool ok = true;
        for (int i = 0; i < g.n && ok; ++i) {
            if (!(mask >> i & 1u)) continue;
            ++size;
            for (int j = i + 1; j < g.n && ok; ++j)
                if ((mask >> j & 1u) && mat[static_cast<size_t>(i)][static_cast<size_t>(j)])
                    ok = false;
        }
        if (ok) best = std::max(best, size);
    }
    return best;
}

// One layer per vertex: layer i is stable exactly when vertex i is "selected"
// by the matching and none of its neighbours are, so k stable layers name a
// k-vertex independent set.
inline IsReduction independent_set_to_global(const Graph& g, int k) {
    validate(g);
    if (k < 1 || k > g.n)
        throw std::invalid_argument("independent_set_to_global: k out of range");
    int nv = g.n, side = 3 * nv;
    auto u = [](int i) { return 3 * i - 2; };
    auto ubar = [](int i) { return 3 * i - 1; };
    auto a = [](int i) { return 3 * i; };
    auto mat = g.matrix();

    IsReduction red;
    red.graph = g;
    red.k = k;
    red.alpha = k;
    Profile& p = red.profile;
    p.n = side;
    p.layers = nv;

    std::vector<std::vector<int>> base_u(static_cast<size_t>(side));
    for (int i = 1; i <= nv; ++i) {
        base_u[static_cast<size_t>(u(i)) - 1] = detail::with_tail({ubar(i), u(i)}, side);
        base_u[static_cast<size_t>(ubar(i)) - 1] = detail::with_tail({u(i), ubar(i)}, side);
        base_u[static_cast<size_t>(a(i)) - 1] = detail::with_tail({u(i), a(i)}, side);
    }
    for (int lay = 1; lay <= nv; ++lay) {
        p.u_prefs.push_back(base_u);
        std::vector<std::vector<int>> wl(static_cast<size_t>(side));
        for (int i = 1; i <= nv; ++i) {
            std::vector<int> wh, wbh;
            if (i == lay) {
                wh = {u(i), a(i)};
                wbh = {ubar(i)};
            } else if (mat[static_cast<size_t>(i) - 1][static_cast<size_t>(lay) - 1]) {
                wh = {ubar(i)};
                wbh = {u(i)};
            } else {
                wh = {u(i), ubar(i)};
                wbh = {ubar(i), u(i)};
            }
            wl[static_cast<size_t>(u(i)) - 1] = detail::with_tail(std::move(wh), side);
            wl[static_cast<size_t>(ubar(i)) - 1] = detail::with_tail(std::move(wbh), side);
            wl[static_cast<size_t>(a(i)) - 1] = detail::with_tail({a(i)}, side);
        }
        p.w_prefs.push_back(std::move(wl));
    }
    for (int i = 1; i <= nv; ++i) {
        red.map.u_roles.push_back("u" + std::to_string(i));
        red.map.u_roles.push_back("ubar" + std::to_string(i));
        red.map.u_roles.push_back("a" + std::to_string(i));
        red.map.w_roles.push_back("w" + std::to_string(i));
        red.map.w_roles.push_back("wbar" + std::to_string(i));
        red.map.w_roles.push_back("b" + std::to_string(i));
    }
    p.u_labels = red.map.u_roles;
    p.w_labels = red.map.w_roles;
    validate(p);
    return red;
}

inline Matching forward_matching(const IsReduction& red, const std::vector<int>& vertices) {
    int nv = red.graph.n;
    std::vector<char> in_set(static_cast<size_t>(nv) + 1, 0);
    for (int v : vertices) {
        if (v < 1 || v > nv)
            throw std::invalid_argument("forward_matching: vertex out of range");
        if (in_set[static_cast<size_t>(v)])
            throw std::invalid_argument("forward_matching: duplicate vertex");
        in_set[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> to_w(static_cast<size_t>(red.profile.n));
    for (int i = 1; i <= nv; ++i) {
        int u = 3 * i - 2, ubar = 3 * i - 1, a = 3 * i;
        if (in_set[static_cast<size_t>(i)]) {
            to_w[static_cast<size_t>(u) - 1] = u;
            to_w[static_cast<size_t>(ubar) - 1] = ubar;
        } else {
            to_w[static_cast<size_t>(u) - 1] = ubar;
            to_w[static_cast<size_t>(ubar) - 1] = u;
        }
        to_w[static_cast<size_t>(a) - 1] = a;
    }
    return Matching(to_w);
}

// ---------------------------------------------------------------------------
// Preference-layer encodings of digraph pairs

struct McGarveyReduction {
    Digraph g, h;
    int alpha = 0;
    Profile profile;
};

// Writes an arbitrary pair of 2-cycle-free digraphs into the layers of a
// uniform profile: the i-th arc of each digraph gets a layer pair in which
// its endpoints are pulled to the front resp. pushed to the back, so that
// across all 2m layers an encoded arc wins m+1 layers, an unrelated pair m,
// and a reversed arc m-1. With alpha = m the induced digraphs return the
// inputs exactly. A 2-cycle would score m against m and vanish, hence the
// precondition.
inline McGarveyReduction mcgarvey(const Digraph& g_in, const Digraph& h_in) {
    validate(g_in);
    validate(h_in);
    if (g_in.n != h_in.n) throw std::invalid_argument("mcgarvey: vertex-count mismatch");
    McGarveyReduction red;
    red.g = g_in;
    red.g.arcs = g_in.sorted_arcs();
    red.h = h_in;
    red.h.arcs = h_in.sorted_arcs();
    if (red.g.arcs.size() != red.h.arcs.size())
        throw std::invalid_argument("mcgarvey: arc-count mismatch");
    if (red.g.arcs.empty()) throw std::invalid_argument("mcgarvey: needs at least one arc");
    if (!is_two_cycle_free(red.g) || !is_two_cycle_free(red.h))
        throw std::invalid_argument("mcgarvey: 2-cycle present");
    int n = red.g.n, m = static_cast<int>(red.g.arcs.size());
    red.alpha = m;
    Profile& p = red.profile;
    p.n = n;
    p.layers = 2 * m;
    p.u_labels.assign(static_cast<size_t>(n), "");
    p.w_labels.assign(static_cast<size_t>(n), "");
    auto front_list = [n](std::pair<int, int> arc) {
        return detail::with_tail({arc.first, arc.second}, n);
    };
    auto back_list = [n](std::pair<int, int> arc) {
        std::vector<int> lst;
        for (int v = n; v >= 1; --v)
            if (v != arc.first && v != arc.second) lst.push_back(v);
        lst.push_back(arc.first);
        lst.push_back(arc.second);
        return lst;
    };
    for (int i = 0; i < m; ++i) {
        for (int half = 0; half < 2; ++half) {
            auto w_shared = half == 0 ? front_list(red.g.arcs[static_cast<size_t>(i)])
                                      : back_list(red.g.arcs[static_cast<size_t>(i)]);
            auto u_shared = half == 0 ? front_list(red.h.arcs[static_cast<size_t>(i)])
                                      : back_list(red.h.arcs[static_cast<size_t>(i)]);
            p.u_prefs.emplace_back(static_cast<size_t>(n), u_shared);
            p.w_prefs.emplace_back(static_cast<size_t>(n), w_shared);
        }
    }
    validate(p);
    return red;
}

// ---------------------------------------------------------------------------
// Graph isomorphism gadget

namespace detail {

inline int pair_slot(int n, int i, int j) {
    // lexicographic rank of the pair {i < j} among all C(n,2) pairs
    return (i - 1) * n - i * (i - 1) / 2 + (j - i);
}

} // namespace detail

// Encodes an undirected graph as a digraph whose isomorphisms are exactly the
// graph isomorphisms: one vertex per original vertex plus a prime, a deputy,
// a star connector, a connector per vertex pair, a sink per edge and a source
// per non-edge.
inline Digraph gi_gadget(const Graph& g) {
    validate(g);
    int n = g.n, m = static_cast<int>(g.edges.size());
    if (n < 4 || m < 3)
        throw std::invalid_argument("gi_gadget: need at least 4 vertices and 3 edges");
    int pairs = n * (n - 1) / 2;
    int prime = n + 1, deputy = n + 2;
    auto slot = [n](int i, int j) { return n + 2 + detail::pair_slot(n, i, j); };
    auto conn = [n, pairs](int i, int j) { return n + 2 + pairs + detail::pair_slot(n, i, j); };
    int star = n + 3 + 2 * pairs;
    auto mat = g.matrix();

    Digraph d;
    d.n = star;
    auto arc = [&d](int from, int to) { d.arcs.emplace_back(from, to); };
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            int s = slot(i, j), c = conn(i, j);
            if (mat[static_cast<size_t>(i) - 1][static_cast<size_t>(j) - 1]) {
                arc(i, s);
                arc(j, s);
            } else {
                arc(s, i);
                arc(s, j);
            }
            arc(i, c);
            arc(j, c);
            arc(s, c);
            for (int v = 1; v <= n; ++v)
                if (v != i && v != j) arc(c, v);
            for (int i2 = 1; i2 <= n; ++i2)
                for (int j2 = i2 + 1; j2 <= n; ++j2)
                    if (slot(i2, j2) != s) arc(c, slot(i2, j2));
            arc(s, star);
            arc(c, deputy);
        }
    for (int v = 1; v <= n; ++v) arc(star, v);
    arc(star, deputy);
    for (int t = n + 3; t < star; ++t) arc(prime, t);
    arc(prime, star);
    for (int v = 1; v <= n; ++v) arc(prime, v);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) arc(deputy, slot(i, j));
    arc(deputy, prime);
    validate(d);
    return d;
}

struct GiReduction {
    Digraph gadget_g, gadget_h;
    int alpha = 0;
    Profile profile;
};

// Uniform-profile encoding of graph isomorphism: gadget digraphs of both
// graphs written into layers via mcgarvey, with alpha at half the layer
// count so that the induced digraphs are the gadgets themselves.
inline GiReduction gi_to_uniform(const Graph& g, const Graph& h) {
    if (g.n != h.n || g.edges.size() != h.edges.size())
        throw std::invalid_argument("gi_to_uniform: graphs must share vertex and edge counts");
    GiReduction red;
    red.gadget_g = gi_gadget(g);
    red.gadget_h = gi_gadget(h);
    auto mg = mcgarvey(red.gadget_g, red.gadget_h);
    red.alpha = mg.alpha;
    red.profile = std::move(mg.profile);
    return red;
}

// Lifts a graph isomorphism to the gadget vertex classes and returns it as a
// matching on the uniform profile.
inline Matching gi_forward_matching(const Graph& g, const Graph& h, const std::vector<int>& f) {
    validate(g);
    validate(h);
    if (g.n != h.n || g.edges.size() != h.edges.size())
        throw std::invalid_argument("gi_forward_matching: graphs must share vertex and edge counts");
    int n = g.n;
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("gi_forward_matching: map size mismatch");
    std::vector<char> hit(static_cast<size_t>(n) + 1, 0);
    for (int v : f) {
        if (v < 1 || v > n) throw std::invalid_argument("gi_forward_matching: image out of range");
        if (hit[static_cast<size_t>(v)]) throw std::invalid_argument("gi_forward_matching: not a bijection");
        hit[static_cast<size_t>(v)] = 1;
    }
    auto gm = g.matrix(), hm = h.matrix();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            bool ge = gm[static_cast<size_t>(i) - 1][static_cast<size_t>(j) - 1];
            bool he = hm[static_cast<size_t>(f[static_cast<size_t>(i) - 1]) - 1]
                        [static_cast<size_t>(f[static_cast<size_t>(j) - 1]) - 1];
            if (ge != he)
                throw std::invalid_argument("gi_forward_matching: map is not an isomorphism");
        }
    int pairs = n * (n - 1) / 2;
    int total = n + 3 + 2 * pairs;
    std::vector<int> to_w(static_cast<size_t>(total));
    auto pair_image = [&f](int i, int j) {
        int fi = f[static_cast<size_t>(i) - 1], fj = f[static_cast<size_t>(j) - 1];
        return std::pair<int, int>(std::min(fi, fj), std::max(fi, fj));
    };
    for (int v = 1; v <= n; ++v) to_w[static_cast<size_t>(v) - 1] = f[static_cast<size_t>(v) - 1];
    to_w[static_cast<size_t>(n)] = n + 1;
    to_w[static_cast<size_t>(n) + 1] = n + 2;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            auto [fi, fj] = pair_image(i, j);
            int from = detail::pair_slot(n, i, j), to = detail::pair_slot(n, fi, fj);
            to_w[static_cast<size_t>(n + 2 + from) - 1] = n + 2 + to;
            to_w[static_cast<size_t>(n + 2 + pairs + from) - 1] = n + 2 + pairs + to;
        }
    to_w[static_cast<size_t>(total) - 1] = total;
    return Matching(to_w);
}

} // namespace mlsm

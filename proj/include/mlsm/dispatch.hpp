#pragma once

// Method selection for solve(): route each query to the cheapest exact
// solver whose structural preconditions hold, falling back to capped brute
// force.

#include "mlsm/check.hpp"
#include "mlsm/core.hpp"
#include "mlsm/smg.hpp"
#include "mlsm/solve.hpp"
#include "mlsm/uniform.hpp"

#include <optional>

namespace mlsm {

enum class SolveMethod { Auto, Alg1, Xp, UniformGlobal, UniformIndividual, Smg, Brute };

inline std::string method_name(SolveMethod m) {
    switch (m) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::Alg1: return "alg1";
    case SolveMethod::Xp: return "xp";
    case SolveMethod::UniformGlobal: return "uniform_global";
    case SolveMethod::UniformIndividual: return "uniform_individual";
    case SolveMethod::Smg: return "smg";
    default: return "brute";
    }
}

inline SolveMethod method_from_name(const std::string& s) {
    if (s == "auto") return SolveMethod::Auto;
    if (s == "alg1") return SolveMethod::Alg1;
    if (s == "xp") return SolveMethod::Xp;
    if (s == "uniform_global") return SolveMethod::UniformGlobal;
    if (s == "uniform_individual") return SolveMethod::UniformIndividual;
    if (s == "smg") return SolveMethod::Smg;
    if (s == "brute") return SolveMethod::Brute;
    throw std::invalid_argument("unknown method '" + s + "'");
}

struct SolveReport {
    std::optional<Matching> matching;
    std::string method; // concrete path taken
    // pairs marked (alg1), subsets tried (xp), proposals (smg), search nodes
    // (brute); 0 for the others
    long long work = 0;
    // xp: the layer subset that succeeded; uniform_global: all stable layers
    // of the result
    std::vector<int> certificate_layers;
};

namespace detail {

inline SolveReport solve_brute(const Profile& p, Concept c, int alpha, int cap) {
    if (p.n > cap)
        throw std::invalid_argument("instance size " + std::to_string(p.n) +
                                    " exceeds brute-force cap " + std::to_string(cap) +
                                    " and no exact method applies");
    SolveReport rep;
    rep.method = "brute";
    unsigned long long nodes = 0;
    EnumerateOptions opt;
    opt.max_results = 1;
    opt.nodes = &nodes;
    auto found = enumerate_stable(p, c, alpha, opt);
    rep.work = static_cast<long long>(nodes);
    if (!found.empty()) rep.matching = found.front();
    return rep;
}

inline SolveReport solve_smg_route(const Profile& p, Concept /*c*/, int alpha) {
    bool flip = !is_single_layered(p, Side::U);
    Profile q = flip ? transpose(p) : p;
    auto inst = reduce_single_layered_to_smg(q, alpha);
    auto res = smg_solve(inst);
    SolveReport rep;
    rep.method = "smg";
    rep.work = res.proposals;
    if (res.matching) rep.matching = flip ? transpose(*res.matching) : *res.matching;
    return rep;
}

} // namespace detail

inline SolveReport solve(const Profile& p, Concept c, int alpha,
                         SolveMethod method = SolveMethod::Auto, int brute_cap = 8) {
    validate(p);
    if (alpha < 1 || alpha > p.layers)
        throw std::invalid_argument("alpha must be between 1 and the layer count");
    bool sl = is_single_layered(p, Side::U) || is_single_layered(p, Side::W);
    bool uni = is_uniform(p);

    switch (method) {
    case SolveMethod::Auto: {
        if (alpha == 1) {
            // the layer-1 stable matching satisfies all three concepts at
            // alpha = 1: a violating pair would have to block every layer
            SolveReport rep;
            rep.method = "gale_shapley";
            rep.matching = gale_shapley(p, 1);
            return rep;
        }
        if (c == Concept::Individual && alpha == p.layers)
            return solve(p, c, alpha, SolveMethod::Alg1, brute_cap);
        if (c == Concept::Global && uni)
            return solve(p, c, alpha, SolveMethod::UniformGlobal, brute_cap);
        if (c == Concept::Global && sl) return solve(p, c, alpha, SolveMethod::Xp, brute_cap);
        if ((c == Concept::Pair || c == Concept::Individual) && sl && alpha >= p.layers / 2 + 1)
            return solve(p, c, alpha, SolveMethod::Smg, brute_cap);
        if (c == Concept::Individual && uni && 2 * alpha >= p.layers + 2)
            return solve(p, c, alpha, SolveMethod::UniformIndividual, brute_cap);
        return detail::solve_brute(p, c, alpha, brute_cap);
    }
    case SolveMethod::Alg1: {
        if (c != Concept::Individual || alpha != p.layers)
            throw std::invalid_argument("alg1 applies to the individual concept at alpha = layers");
        auto res = solve_l_individual(p);
        SolveReport rep;
        rep.method = "alg1";
        rep.work = res.marks;
        rep.matching = res.matching;
        return rep;
    }
    case SolveMethod::Xp: {
        if (c != Concept::Global) throw std::invalid_argument("xp applies to the global concept");
        auto res = solve_global_single_layered(p, alpha);
        SolveReport rep;
        rep.method = "xp";
        rep.work = res.subsets_tried;
        rep.matching = res.matching;
        rep.certificate_layers = res.certificate;
        return rep;
    }
    case SolveMethod::UniformGlobal: {
        if (c != Concept::Global)
            throw std::invalid_argument("uniform_global applies to the global concept");
        auto res = solve_global_uniform(p, alpha);
        SolveReport rep;
        rep.method = "uniform_global";
        rep.matching = res.matching;
        rep.certificate_layers = res.stable_layers;
        return rep;
    }
    case SolveMethod::UniformIndividual: {
        if (c != Concept::Individual)
            throw std::invalid_argument("uniform_individual applies to the individual concept");
        auto res = solve_individual_uniform(p, alpha);
        SolveReport rep;
        rep.method = "uniform_individual";
        rep.matching = res.matching;
        return rep;
    }
    case SolveMethod::Smg: {
        if (c != Concept::Pair && c != Concept::Individual)
            throw std::invalid_argument("smg applies to the pair and individual concepts");
        if (!sl) throw std::invalid_argument("smg route requires a single-layered side");
        return detail::solve_smg_route(p, c, alpha);
    }
    default: return detail::solve_brute(p, c, alpha, brute_cap);
    }
}

inline SolveReport solve(const Profile& p, Concept c, int alpha, const std::string& method,
                         int brute_cap = 8) {
    return solve(p, c, alpha, method_from_name(method), brute_cap);
}

} // namespace mlsm

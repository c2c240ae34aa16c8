#pragma once

// Command-line front end. Parses arguments with CLI11, loads instances and
// matchings from files or from the built-in fixture catalog, dispatches to
// the library, and maps outcomes onto exit codes:
//   0  the property holds / a matching was found / output was produced
//   1  the property fails / no matching exists
//   2  usage errors, unreadable input, malformed data
// Results go to `out`, diagnostics and verbose commentary to `err`.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mlsm/check.hpp"
#include "mlsm/core.hpp"
#include "mlsm/digraph.hpp"
#include "mlsm/dispatch.hpp"
#include "mlsm/experiment.hpp"
#include "mlsm/fixtures.hpp"
#include "mlsm/reduce.hpp"
#include "mlsm/solve.hpp"
#include "mlsm/uniform.hpp"

namespace mlsm {

namespace detail {

struct LoadedInstance {
    Profile profile;
    const Fixture* fix = nullptr;  // set when the name came from the catalog
};

// Instance arguments resolve file-first, then against the fixture catalog,
// so a stray file named like a fixture never shadows the user's data.
inline LoadedInstance load_instance(const std::string& arg) {
    std::ifstream in(arg);
    if (in) return LoadedInstance{parse_instance(in), nullptr};
    for (const auto& f : all_fixtures())
        if (f.name == arg) return LoadedInstance{f.profile, &f};
    throw std::runtime_error("cannot open instance '" + arg +
                             "' (not a readable file or a known fixture name)");
}

// For fixture instances a matching argument may name one of the fixture's
// matchings; otherwise it is read as a matching file.
inline Matching load_matching(const std::string& arg, const LoadedInstance& inst) {
    if (inst.fix != nullptr)
        for (const auto& [name, m] : inst.fix->matchings)
            if (name == arg) return m;
    std::ifstream in(arg);
    if (in) return parse_matching(in, inst.profile.n);
    std::string msg = "cannot open matching '" + arg + "'";
    if (inst.fix != nullptr) msg += " (no such file or matching in fixture " + inst.fix->name + ")";
    throw std::runtime_error(msg);
}

inline Concept concept_arg(const std::string& s) {
    auto c = concept_from_name(s);
    if (!c) throw std::invalid_argument("unknown concept '" + s + "' (expected global, pair or individual)");
    return *c;
}

inline void require_alpha(int alpha, int layers) {
    if (alpha < 1 || alpha > layers)
        throw std::invalid_argument("alpha " + std::to_string(alpha) + " out of range: instance has " +
                                    std::to_string(layers) + " layer(s)");
}

// --brute-cap beats MLSM_BRUTE_CAP beats the built-in default.
inline int resolve_brute_cap(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("MLSM_BRUTE_CAP")) {
        std::string s(env);
        try {
            int v = std::stoi(s);
            if (v >= 1) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("MLSM_BRUTE_CAP must be a positive integer, got '" + s + "'");
    }
    return 8;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace detail

// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stable matchings across layered preference profiles"};
    app.require_subcommand(1);

    // ---- check ------------------------------------------------------------
    std::string chk_concept, chk_instance, chk_matching;
    int chk_alpha = 0;
    bool chk_verbose = false;
    auto* sc_check = app.add_subcommand("check", "test a matching against a stability concept");
    sc_check->add_option("--concept", chk_concept, "global, pair or individual")->required();
    sc_check->add_option("--alpha", chk_alpha, "stability threshold")->required();
    sc_check->add_flag("--verbose", chk_verbose, "explain the verdict on stderr");
    sc_check->add_option("instance", chk_instance, "instance file or fixture name")->required();
    sc_check->add_option("matching", chk_matching, "matching file or fixture matching name")->required();

    // ---- solve ------------------------------------------------------------
    std::string sol_concept, sol_instance, sol_method = "auto";
    int sol_alpha = 0, sol_cap = 0;
    bool sol_verbose = false;
    auto* sc_solve = app.add_subcommand("solve", "find one stable matching, if any exists");
    sc_solve->add_option("--concept", sol_concept, "global, pair or individual")->required();
    sc_solve->add_option("--alpha", sol_alpha, "stability threshold")->required();
    sc_solve->add_option("--method", sol_method,
                         "auto, alg1, xp, uniform_global, uniform_individual, smg or brute");
    sc_solve->add_option("--brute-cap", sol_cap, "largest n the brute-force fallback accepts");
    sc_solve->add_flag("--verbose", sol_verbose, "report method and work counters on stderr");
    sc_solve->add_option("instance", sol_instance, "instance file or fixture name")->required();

    // ---- enumerate ----------------------------------------------------------
    std::string enu_concept, enu_instance;
    int enu_alpha = 0, enu_cap = 0;
    long enu_limit = 0;
    auto* sc_enum = app.add_subcommand("enumerate", "list all stable matchings");
    sc_enum->add_option("--concept", enu_concept, "global, pair or individual")->required();
    sc_enum->add_option("--alpha", enu_alpha, "stability threshold")->required();
    sc_enum->add_option("--limit", enu_limit, "stop after this many matchings (0 = all)");
    sc_enum->add_option("--brute-cap", enu_cap, "largest n the search accepts");
    sc_enum->add_option("instance", enu_instance, "instance file or fixture name")->required();

    // ---- reduce -------------------------------------------------------------
    auto* sc_reduce = app.add_subcommand("reduce", "build gadget profiles from auxiliary inputs");
    sc_reduce->require_subcommand(1);

    std::string rs_file;
    int rs_alpha = 0, rs_layers = 0;
    bool rs_restricted = false;
    auto* r_sat = sc_reduce->add_subcommand(
        "sat2global", "CNF formula to a profile whose alpha-globally stable matchings encode satisfying assignments");
    r_sat->add_option("--alpha", rs_alpha, "target threshold (2 <= alpha <= layers)")->required();
    r_sat->add_option("--layers", rs_layers, "number of layers in the output profile")->required();
    r_sat->add_flag("--restricted", rs_restricted,
                    "input is already in restricted form; skip the preprocessing rewrite");
    r_sat->add_option("cnf", rs_file, "DIMACS CNF file")->required();

    std::string ri_file;
    int ri_alpha = 0, ri_layers = 0;
    auto* r_smti_i = sc_reduce->add_subcommand(
        "smti2individual", "stable-marriage instance with ties and incomplete lists to alpha-individual stability");
    r_smti_i->add_option("--alpha", ri_alpha, "target threshold (ceil(layers/2)+1 <= alpha <= layers)")->required();
    r_smti_i->add_option("--layers", ri_layers, "number of layers in the output profile")->required();
    r_smti_i->add_option("smti", ri_file, "preference file with ties and incomplete lists")->required();

    std::string rp_file;
    int rp_layers = 0;
    auto* r_smti_p = sc_reduce->add_subcommand(
        "smti2pair", "stable-marriage instance with ties and incomplete lists to pair stability, odd layer count");
    r_smti_p->add_option("--layers", rp_layers, "odd number of layers, at least 5")->required();
    r_smti_p->add_option("smti", rp_file, "preference file with ties and incomplete lists")->required();

    std::string rg_file;
    int rg_k = 0;
    auto* r_is = sc_reduce->add_subcommand(
        "is2global", "independent-set question to alpha-globally stable existence with alpha = k");
    r_is->add_option("--k", rg_k, "independent-set size sought")->required();
    r_is->add_option("graph", rg_file, "undirected graph file")->required();

    std::string gi_file_g, gi_file_h;
    auto* r_gi = sc_reduce->add_subcommand(
        "gi2individual", "graph-isomorphism question to uniform alpha-individual existence");
    r_gi->add_option("left", gi_file_g, "first undirected graph file")->required();
    r_gi->add_option("right", gi_file_h, "second undirected graph file")->required();

    // ---- gen ----------------------------------------------------------------
    auto* sc_gen = app.add_subcommand("gen", "emit instances");
    sc_gen->require_subcommand(1);

    std::string gm_file_g, gm_file_h;
    auto* g_mc = sc_gen->add_subcommand(
        "mcgarvey", "realize two digraphs as the induced majority digraphs of one uniform profile");
    g_mc->add_option("left", gm_file_g, "digraph induced on the proposing side")->required();
    g_mc->add_option("right", gm_file_h, "digraph induced on the other side")->required();

    int gr_n = 0, gr_layers = 0;
    std::string gr_mode = "general";
    unsigned long long gr_seed = 0;
    auto* g_rand = sc_gen->add_subcommand("random", "draw a uniformly random profile");
    g_rand->add_option("--n", gr_n, "agents per side")->required();
    g_rand->add_option("--layers", gr_layers, "number of layers")->required();
    g_rand->add_option("--mode", gr_mode, "general, single_layered_U, single_layered_W or uniform");
    g_rand->add_option("--seed", gr_seed, "random seed");

    std::string gf_name, gf_matching;
    auto* g_fix = sc_gen->add_subcommand("fixture", "print a built-in fixture instance");
    g_fix->add_option("name", gf_name, "fixture name; see 'gen fixture list'")->required();
    g_fix->add_option("--matching", gf_matching, "print this named matching instead of the instance");

    // ---- induce -------------------------------------------------------------
    std::string ind_instance;
    int ind_alpha = 0;
    auto* sc_induce = app.add_subcommand("induce", "print the two digraphs a uniform profile induces");
    sc_induce->add_option("--alpha", ind_alpha, "stability threshold")->required();
    sc_induce->add_option("instance", ind_instance, "uniform instance file or fixture name")->required();

    // ---- experiment -----------------------------------------------------------
    std::string ex_concept, ex_mode = "general";
    std::vector<int> ex_alphas, ex_ns, ex_layers;
    long ex_samples = 100;
    unsigned long long ex_seed = 0;
    int ex_workers = 1, ex_cap = 0;
    bool ex_timing = false;
    auto* sc_exp = app.add_subcommand("experiment", "sample random profiles and report existence rates as CSV");
    sc_exp->add_option("--concept", ex_concept, "global, pair or individual")->required();
    sc_exp->add_option("--alpha", ex_alphas, "threshold values, comma separated")->required()->delimiter(',');
    sc_exp->add_option("--n", ex_ns, "agents per side, comma separated")->required()->delimiter(',');
    sc_exp->add_option("--layers", ex_layers, "layer counts, comma separated")->required()->delimiter(',');
    sc_exp->add_option("--mode", ex_mode, "general, single_layered_U, single_layered_W or uniform");
    sc_exp->add_option("--samples", ex_samples, "profiles drawn per configuration");
    sc_exp->add_option("--seed", ex_seed, "base random seed");
    sc_exp->add_flag("--timing", ex_timing, "measure mean solve time (off keeps CSV byte-stable)");
    sc_exp->add_option("--workers", ex_workers, "worker threads per configuration");
    sc_exp->add_option("--brute-cap", ex_cap, "largest n the brute-force fallback accepts");

    // CLI11 consumes a reversed argument vector in this overload.
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_check->parsed()) {
            auto inst = detail::load_instance(chk_instance);
            Concept c = detail::concept_arg(chk_concept);
            detail::require_alpha(chk_alpha, inst.profile.layers);
            Matching m = detail::load_matching(chk_matching, inst);
            CheckResult res = check_stability(inst.profile, m, c, chk_alpha);
            if (res.stable) {
                out << "stable " << chk_concept << " " << chk_alpha;
                if (!res.certificate_layers.empty()) {
                    out << " certificate :";
                    for (int layer : res.certificate_layers) out << " " << layer;
                }
                out << "\n";
                if (chk_verbose) {
                    err << "the matching satisfies " << chk_concept << "-stability at threshold "
                        << chk_alpha << "\n";
                }
                return 0;
            }
            out << "unstable " << chk_concept << " " << chk_alpha;
            if (res.witness) out << " witness : " << res.witness->u << " " << res.witness->w;
            out << "\n";
            if (chk_verbose && res.witness) {
                err << "pair (u" << res.witness->u << ", w" << res.witness->w
                    << ") defeats the matching at threshold " << chk_alpha << "\n";
            }
            return 1;
        }

        if (sc_solve->parsed()) {
            auto inst = detail::load_instance(sol_instance);
            Concept c = detail::concept_arg(sol_concept);
            detail::require_alpha(sol_alpha, inst.profile.layers);
            SolveReport rep = solve(inst.profile, c, sol_alpha, sol_method, detail::resolve_brute_cap(sol_cap));
            if (sol_verbose) {
                err << "method " << rep.method << ", work " << rep.work << "\n";
                if (!rep.certificate_layers.empty()) {
                    err << "stable layers:";
                    for (int layer : rep.certificate_layers) err << " " << layer;
                    err << "\n";
                }
            }
            if (rep.matching) {
                out << serialize_matching(*rep.matching);
                return 0;
            }
            return 1;
        }

        if (sc_enum->parsed()) {
            auto inst = detail::load_instance(enu_instance);
            Concept c = detail::concept_arg(enu_concept);
            detail::require_alpha(enu_alpha, inst.profile.layers);
            int cap = detail::resolve_brute_cap(enu_cap);
            if (inst.profile.n > cap)
                throw std::invalid_argument("instance size " + std::to_string(inst.profile.n) +
                                            " exceeds the enumeration cap " + std::to_string(cap));
            EnumerateOptions opt;
            if (enu_limit > 0) opt.max_results = static_cast<std::size_t>(enu_limit);
            auto found = enumerate_stable(inst.profile, c, enu_alpha, opt);
            for (const auto& m : found) out << serialize_matching(m);
            return found.empty() ? 1 : 0;
        }

        if (r_sat->parsed()) {
            CnfFormula cnf = parse_dimacs(detail::read_text_file(rs_file));
            if (!rs_restricted) cnf = restrict_3sat(cnf);
            SatReduction red = sat_to_global(cnf, rs_alpha, rs_layers);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (r_smti_i->parsed()) {
            SmtiInstance s = parse_smti(detail::read_text_file(ri_file));
            SmtiReduction red = smti_to_individual(s, ri_layers, ri_alpha);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (r_smti_p->parsed()) {
            SmtiInstance s = parse_smti(detail::read_text_file(rp_file));
            SmtiReduction red = smti_to_pair_odd(s, rp_layers);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (r_is->parsed()) {
            Graph g = parse_graph(detail::read_text_file(rg_file));
            IsReduction red = independent_set_to_global(g, rg_k);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (r_gi->parsed()) {
            Graph g = parse_graph(detail::read_text_file(gi_file_g));
            Graph h = parse_graph(detail::read_text_file(gi_file_h));
            GiReduction red = gi_to_uniform(g, h);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (g_mc->parsed()) {
            Digraph g = parse_digraph(detail::read_text_file(gm_file_g));
            Digraph h = parse_digraph(detail::read_text_file(gm_file_h));
            McGarveyReduction red = mcgarvey(g, h);
            out << "# alpha " << red.alpha << "\n" << serialize_instance(red.profile);
            return 0;
        }

        if (g_rand->parsed()) {
            auto mode = profile_mode_from_name(gr_mode);
            if (!mode) throw std::invalid_argument("unknown profile mode '" + gr_mode + "'");
            out << serialize_instance(random_profile(gr_n, gr_layers, *mode, gr_seed));
            return 0;
        }

        if (g_fix->parsed()) {
            if (gf_name == "list") {
                for (const auto& name : fixture_names()) out << name << "\n";
                return 0;
            }
            const Fixture& f = fixture(gf_name);
            if (!gf_matching.empty()) {
                out << serialize_matching(f.matching(gf_matching));
                return 0;
            }
            if (!f.note.empty()) out << "# " << f.note << "\n";
            out << serialize_instance(f.profile);
            return 0;
        }

        if (sc_induce->parsed()) {
            auto inst = detail::load_instance(ind_instance);
            detail::require_alpha(ind_alpha, inst.profile.layers);
            auto [du, dw] = induce_digraphs(inst.profile, ind_alpha);
            out << "# U-side digraph\n" << serialize_digraph(du);
            out << "# W-side digraph\n" << serialize_digraph(dw);
            return 0;
        }

        if (sc_exp->parsed()) {
            Concept c = detail::concept_arg(ex_concept);
            auto mode = profile_mode_from_name(ex_mode);
            if (!mode) throw std::invalid_argument("unknown profile mode '" + ex_mode + "'");
            if (ex_samples < 1) throw std::invalid_argument("--samples must be positive");
            if (ex_workers < 1) throw std::invalid_argument("--workers must be positive");
            int cap = detail::resolve_brute_cap(ex_cap);
            std::vector<ExperimentRow> rows;
            for (int n : ex_ns)
                for (int layers : ex_layers)
                    for (int alpha : ex_alphas) {
                        if (alpha < 1) throw std::invalid_argument("--alpha values must be positive");
                        if (alpha > layers) continue;  // sweeps may mix incompatible pairs
                        ExperimentConfig cfg;
                        cfg.kind = c;
                        cfg.alpha = alpha;
                        cfg.n = n;
                        cfg.layers = layers;
                        cfg.mode = *mode;
                        cfg.samples = ex_samples;
                        cfg.seed = ex_seed;
                        cfg.brute_cap = cap;
                        cfg.timing = ex_timing;
                        cfg.workers = ex_workers;
                        rows.push_back(run_experiment(cfg));
                    }
            if (rows.empty())
                throw std::invalid_argument("no configuration has alpha <= layers; nothing to run");
            out << experiment_csv(rows);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    err << "error: no subcommand handled\n";
    return 2;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(std::move(args), out, err);
}

}  // namespace mlsm

#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qtors/formats.hpp"

namespace qtors {

struct Report {
    int code = 0;  // 0 ok, 1 verification failure, 2 input error
    std::string out;
};

struct CliOptions {
    std::string algebra_file;
    std::optional<std::uint32_t> field;
    std::optional<int> bound;
    std::string format = "text";  // text | tsv
    int n = 1;
    std::string mcat;        // member list literal; empty = whole model
    std::string chain_file;
    std::string action_file;
    std::string object;
    std::string subcat_expr;
    std::string suite;
    bool compare = false;
    bool equivariant_only = false;
};

inline std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Everything a command needs, loaded once: algebra, model, designated mcat,
// optional chain and action.  Contexts, chains and subcategories point into
// the model, so a workspace lives on the heap and never moves.
class Workspace {
public:
    AlgebraPtr alg;
    ModuleCategoryModel model;
    std::unique_ptr<TorsionContext> ctx;
    Subcat mcat;
    int n = 1;
    std::optional<StepChain> chain;
    std::optional<GroupAction> action;
    std::optional<CoveringSetup> covering;
    std::unique_ptr<TorsionContext> orbit_ctx;
    std::string format = "text";

    Workspace() = default;
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    bool tsv() const { return format == "tsv"; }

    static std::unique_ptr<Workspace> load(const CliOptions& opt) {
        auto ws = std::make_unique<Workspace>();
        std::string text = read_file(opt.algebra_file);
        if (opt.field) {
            // override the field line (or absence of one)
            AlgebraPtr parsed = parse_algebra_file(text);
            ws->alg = make_algebra(parsed->name, parsed->quiver, parsed->relations, *opt.field);
        } else {
            ws->alg = parse_algebra_file(text);
        }
        Bounds bounds;
        if (opt.bound) bounds.dim_bound = *opt.bound;
        ws->model = nakayama_model(ws->alg, bounds);
        ws->ctx = std::make_unique<TorsionContext>(ws->model);
        ws->n = opt.n;
        ws->format = opt.format;
        if (ws->format != "text" && ws->format != "tsv")
            throw InputError("unknown format '" + ws->format + "'");
        ws->mcat = opt.mcat.empty() ? subcat_all(ws->model)
                                    : parse_subcat(opt.mcat, ws->model, ws->model.all_mask());
        if (opt.n > 1) {
            ClusterTiltReport rep = is_n_cluster_tilting(*ws->ctx, ws->mcat, opt.n);
            if (!rep.ok)
                throw InputError("designated subcategory is not " + std::to_string(opt.n) +
                                 "-cluster-tilting: " + rep.detail);
        }
        if (!opt.action_file.empty()) {
            ws->action = parse_action_file(read_file(opt.action_file), ws->alg);
            ws->covering = make_covering_setup(ws->model, *ws->action);
            ws->orbit_ctx = std::make_unique<TorsionContext>(ws->covering->orbit_model);
        }
        if (!opt.chain_file.empty()) {
            ws->chain = parse_chain_file(read_file(opt.chain_file), ws->model, ws->mcat.mask);
            if (opt.n > 1)
                validate_ntors_chain(*ws->ctx, *ws->chain, ws->mcat, opt.n);
            else
                validate_torsion_chain(*ws->ctx, *ws->chain);
        }
        return ws;
    }
};

// Object expressions: a sum of model names, or "@<path>" naming a module file
// whose content is validated against the algebra.
inline Representation resolve_object(const Workspace& ws, const std::string& expr) {
    if (!expr.empty() && expr[0] == '@') {
        auto [name, rep] = parse_module_file(read_file(expr.substr(1)), ws.alg);
        return rep;
    }
    return parse_object(expr, ws.model);
}

// ---- Commands ----

inline Report cmd_model(Workspace& ws) {
    std::ostringstream out;
    if (ws.tsv()) {
        out << "algebra\t" << ws.alg->name << "\t" << ws.alg->p << "\t" << ws.alg->dimension()
            << "\n";
        for (int i = 0; i < ws.model.size(); ++i)
            out << "indec\t" << ws.model.names[i] << "\t" << ws.model.indecs[i].dims_string()
                << "\n";
        for (int i = 0; i < ws.model.size(); ++i)
            for (int j = 0; j < ws.model.size(); ++j)
                if (ws.model.hom_mat[i][j])
                    out << "hom\t" << ws.model.names[i] << "\t" << ws.model.names[j] << "\t"
                        << ws.model.hom_mat[i][j] << "\n";
    } else {
        out << "algebra " << ws.alg->name << " over F_" << ws.alg->p << ", dimension "
            << ws.alg->dimension() << "\n";
        out << ws.model.size() << " indecomposables\n";
        for (int i = 0; i < ws.model.size(); ++i)
            out << "  " << ws.model.names[i] << "  " << ws.model.indecs[i].dims_string() << "\n";
        out << "hom matrix (rows map to columns)\n";
        for (int i = 0; i < ws.model.size(); ++i) {
            out << "  ";
            for (int j = 0; j < ws.model.size(); ++j)
                out << ws.model.hom_mat[i][j] << (j + 1 < ws.model.size() ? " " : "");
            out << "\n";
        }
    }
    return {0, out.str()};
}

inline Report cmd_tors(Workspace& ws) {
    std::vector<Subcat> classes = enumerate_torsion_classes(*ws.ctx);
    std::ostringstream out;
    if (ws.tsv()) {
        for (const Subcat& t : classes) out << "tors\t" << member_list_string(t) << "\n";
    } else {
        out << classes.size() << " torsion classes in mod-" << ws.alg->name << "\n";
        for (const Subcat& t : classes) out << "  " << subcat_string(t) << "\n";
    }
    return {0, out.str()};
}

inline Report cmd_ntors(Workspace& ws, bool equivariant_only) {
    std::vector<Subcat> classes = enumerate_n_torsion_classes(*ws.ctx, ws.mcat, ws.n);
    std::ostringstream out;
    int count = 0;
    for (const Subcat& u : classes) {
        if (equivariant_only) {
            if (!ws.covering) throw InputError("--equivariant needs an action file");
            if (!is_equivariant(u, *ws.covering)) continue;
        }
        ++count;
        if (ws.tsv()) {
            out << "ntors\t" << member_list_string(u);
            if (equivariant_only)
                out << "\t" << member_list_string(push_down_subcat(u, *ws.covering));
            out << "\n";
        } else {
            out << "  " << subcat_string(u);
            if (equivariant_only)
                out << "  ->  " << subcat_string(push_down_subcat(u, *ws.covering));
            out << "\n";
        }
    }
    std::ostringstream head;
    if (!ws.tsv())
        head << count << (equivariant_only ? " equivariant " : " ") << ws.n
             << "-torsion classes in mcat over " << ws.alg->name << "\n";
    return {0, head.str() + out.str()};
}

inline Report cmd_hn(Workspace& ws, const std::string& object_expr, bool compare) {
    if (!ws.chain) throw InputError("hn needs --chain");
    Representation M = resolve_object(ws, object_expr);
    if (M.is_zero()) throw InputError("hn needs a nonzero object");
    std::ostringstream out;
    int code = 0;
    if (ws.n > 1) {
        NHNFilt f = n_hn_filtration(*ws.ctx, M, *ws.chain, ws.mcat, ws.n);
        if (ws.tsv()) {
            for (size_t k = 0; k < f.steps.size(); ++k)
                out << "step\t" << k + 1 << "\t" << f.steps[k].label.str() << "\t"
                    << object_name(decompose(f.steps[k].module, ws.model), ws.model) << "\n";
        } else {
            out << nhn_string(ws.model, f) << "\n";
        }
        if (f.sup_label_note)
            out << (ws.tsv() ? "note\t" : "note: ")
                << "a label equals 1; the object lies in every class below 1 (sup convention)\n";
        if (compare) {
            CompareReport rep = compare_hn(*ws.ctx, M, *ws.chain, ws.mcat, ws.n);
            out << (ws.tsv() ? "compare\t" : "ambient comparison: ") << (rep.ok ? "match" : "MISMATCH")
                << "\n";
            if (!rep.ok) {
                out << rep.detail << "\n";
                code = 1;
            }
        }
        if (ws.covering) {
            StepChain pchain = push_down_chain(*ws.chain, *ws.covering, ws.model);
            Subcat mcat_down = push_down_subcat(ws.mcat, *ws.covering);
            Representation PM = push_down(M, ws.covering->action, ws.covering->orbit);
            NHNFilt pf = n_hn_filtration(*ws.orbit_ctx, PM, pchain, mcat_down, ws.n);
            if (ws.tsv()) {
                for (size_t k = 0; k < pf.steps.size(); ++k)
                    out << "pushdown-step\t" << k + 1 << "\t" << pf.steps[k].label.str() << "\t"
                        << object_name(decompose(pf.steps[k].module, ws.covering->orbit_model),
                                       ws.covering->orbit_model)
                        << "\n";
            } else {
                out << "push-down: " << nhn_string(ws.covering->orbit_model, pf) << "\n";
            }
            bool mult_note = false;
            bool match = pf.steps.size() == f.steps.size();
            for (size_t k = 0; match && k < f.steps.size(); ++k) {
                Representation pushed =
                    push_down(f.steps[k].module, ws.covering->action, ws.covering->orbit);
                Decomposition d = decompose(pushed, ws.covering->orbit_model);
                for (auto [idx, mult] : d.parts)
                    if (mult > 1) mult_note = true;
                if (!is_isomorphic(pushed, pf.steps[k].module, ws.covering->orbit_model) ||
                    f.steps[k].label != pf.steps[k].label)
                    match = false;
            }
            out << (ws.tsv() ? "pushdown-compare\t" : "push-down comparison: ")
                << (match ? "match" : "MISMATCH") << "\n";
            if (mult_note)
                out << (ws.tsv() ? "note\t" : "note: ")
                    << "push-down multiplicities computed exactly; the add-closure "
                       "notation collapses repeated summands\n";
            if (!match) code = 1;
        }
    } else {
        if (ws.covering) throw InputError("--pushdown applies to the higher pipeline; pass --n 2");
        HNFilt f = hn_filtration_abelian(*ws.ctx, M, *ws.chain);
        if (ws.tsv()) {
            for (size_t k = 0; k < f.steps.size(); ++k)
                out << "step\t" << k + 1 << "\t" << f.labels[k].str() << "\t"
                    << object_name(decompose(f.steps[k], ws.model), ws.model) << "\n";
        } else {
            out << filtration_string(ws.model, f.steps, f.labels) << "\n";
        }
        if (f.sup_label_note)
            out << (ws.tsv() ? "note\t" : "note: ")
                << "a label equals 1; the object lies in every class below 1 (sup convention)\n";
    }
    return {code, out.str()};
}

inline Report cmd_pushdown(Workspace& ws, const std::string& object_expr,
                           const std::string& subcat_expr) {
    if (!ws.covering) throw InputError("pushdown needs --action");
    std::ostringstream out;
    const CoveringSetup& s = *ws.covering;
    if (ws.tsv())
        out << "orbit-algebra\t" << s.orbit.orbit->name << "\t" << s.orbit.orbit->dimension()
            << "\n";
    else
        out << "orbit algebra " << s.orbit.orbit->name << ", dimension "
            << s.orbit.orbit->dimension() << "\n";
    if (!object_expr.empty()) {
        Representation M = resolve_object(ws, object_expr);
        Representation PM = push_down(M, s.action, s.orbit);
        Decomposition d = decompose(PM, s.orbit_model);
        if (ws.tsv())
            out << "pushdown\t" << object_expr << "\t" << object_name(d, s.orbit_model) << "\n";
        else
            out << "P(" << object_expr << ") = " << object_name(d, s.orbit_model) << "\n";
        for (auto [idx, mult] : d.parts)
            if (mult > 1)
                out << (ws.tsv() ? "note\t" : "note: ")
                    << "push-down multiplicities computed exactly; the add-closure "
                       "notation collapses repeated summands\n";
    }
    if (!subcat_expr.empty()) {
        Subcat u = parse_subcat(subcat_expr, ws.model, ws.mcat.mask);
        Subcat pu = push_down_subcat(u, s);
        if (ws.tsv())
            out << "pushdown-subcat\t" << member_list_string(u) << "\t" << member_list_string(pu)
                << "\n";
        else
            out << "P(" << subcat_string(u) << ") = " << subcat_string(pu) << "\n";
    }
    return {0, out.str()};
}

// ---- Verification suites ----

namespace detail {

struct SuiteRun {
    std::ostringstream out;
    bool ok = true;
    bool tsv = false;

    void check(bool cond, const std::string& what) {
        if (tsv)
            out << "check\t" << (cond ? "pass" : "fail") << "\t" << what << "\n";
        else
            out << (cond ? "  ok   " : "  FAIL ") << what << "\n";
        if (!cond) ok = false;
    }
};

inline void suite_torsion_axioms(Workspace& ws, SuiteRun& run) {
    TorsionContext& ctx = *ws.ctx;
    const ModuleCategoryModel& m = ws.model;
    std::vector<Subcat> classes = enumerate_torsion_classes(ctx);
    run.check(!classes.empty(), "torsion classes enumerated: " + std::to_string(classes.size()));
    for (const Subcat& T : classes) {
        for (int j = 0; j < m.size(); ++j) {
            TorsionDecomposition td = torsion_subobject(ctx, T, m.indecs[j]);
            bool t_in = T.contains(td.t_dec);
            bool orth = true;
            for (int x : T.members())
                for (auto [fj, fk] : td.f_dec.parts)
                    if (m.hom_mat[x][fj] != 0) orth = false;
            bool maximal = true;
            if (m.submodules_ok[j]) {
                for (const auto& info : m.submodule_table(j)) {
                    if (!T.contains(info.sub)) continue;
                    int d = info.incl.src.total_dim();
                    if (d > td.tM.total_dim()) maximal = false;
                    if (d == td.tM.total_dim() && !is_isomorphic(info.incl.src, td.tM, m))
                        maximal = false;
                }
            }
            if (!(t_in && orth && maximal)) {
                run.check(false, "torsion decomposition axioms at T=" + member_list_string(T) +
                                     ", M=" + m.names[j]);
                return;
            }
        }
    }
    run.check(true, "tM in T, Hom(T, fM) = 0 and maximality for all classes and objects");
    // minimality of T(X) over singletons
    bool minimal_ok = true;
    for (int j = 0; j < m.size(); ++j) {
        Subcat gen = subcat(m, std::uint64_t(1) << j);
        Subcat t = minimal_torsion_class(ctx, gen);
        for (const Subcat& T : classes)
            if (gen.subset_of(T) && !t.subset_of(T)) minimal_ok = false;
    }
    run.check(minimal_ok, "T(X) is contained in every torsion class containing X");
}

inline void suite_ntors_equivalence(Workspace& ws, SuiteRun& run) {
    std::vector<int> mem = ws.mcat.members();
    int agree = 0, total = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << mem.size()); ++code) {
        std::uint64_t mask = 0;
        for (size_t i = 0; i < mem.size(); ++i)
            if ((code >> i) & 1) mask |= std::uint64_t(1) << mem[i];
        Subcat u = subcat(ws.model, mask);
        bool c = is_n_torsion_class_criterion(*ws.ctx, u, ws.mcat, ws.n).ok;
        bool d = is_n_torsion_class_direct(*ws.ctx, u, ws.mcat, ws.n);
        ++total;
        if (c == d) ++agree;
    }
    run.check(agree == total, "criterion and definition agree on all " + std::to_string(total) +
                                  " additive subsets");
}

inline void suite_embed_poset(Workspace& ws, SuiteRun& run) {
    TorsionContext& ctx = *ws.ctx;
    std::vector<Subcat> classes = enumerate_n_torsion_classes(ctx, ws.mcat, ws.n);
    run.check(!classes.empty(),
              std::to_string(classes.size()) + " n-torsion classes enumerated");
    bool set_eq = true;
    for (const Subcat& u : classes) {
        Subcat t = embed_T(ctx, u, ws.mcat, ws.n);
        std::uint64_t t_mask = 0;
        for (int j : ws.mcat.members())
            t_mask |= torsion_parts_indec(ctx, t, j).first.mask();
        if ((t.mask & ws.mcat.mask) != u.mask || t_mask != u.mask) set_eq = false;
    }
    run.check(set_eq, "U = T(U) ∩ mcat = add{tM} for every class");
    bool inj = true, order = true;
    for (size_t a = 0; a < classes.size(); ++a)
        for (size_t b = 0; b < classes.size(); ++b) {
            Subcat ta = embed_T(ctx, classes[a], ws.mcat, ws.n);
            Subcat tb = embed_T(ctx, classes[b], ws.mcat, ws.n);
            if (a != b && ta.mask == tb.mask) inj = false;
            if (classes[a].subset_of(classes[b]) && !ta.subset_of(tb)) order = false;
            if (classes[a].mask != classes[b].mask && classes[a].subset_of(classes[b]) &&
                ta.mask == tb.mask)
                order = false;
        }
    run.check(inj, "T(-) is injective on the n-torsion poset");
    run.check(order, "T(-) preserves (strict) inclusions");
}

inline void suite_hn_comparison(Workspace& ws, SuiteRun& run) {
    if (!ws.chain) throw InputError("hn-comparison needs --chain");
    TorsionContext& ctx = *ws.ctx;
    int count = 0;
    bool all_ok = true;
    std::vector<int> mem = ws.mcat.members();
    qtors::detail::bounded_multisets(ws.model, mem, ws.model.bounds.dim_bound,
                                     [&](const std::vector<int>& mult) {
        std::vector<Representation> parts;
        for (size_t k = 0; k < mult.size(); ++k)
            for (int c = 0; c < mult[k]; ++c) parts.push_back(ws.model.indecs[mem[k]]);
        Representation M = direct_sum(ws.model.alg, parts);
        CompareReport rep = compare_hn(ctx, M, *ws.chain, ws.mcat, ws.n);
        ++count;
        if (!rep.ok) all_ok = false;
    });
    run.check(all_ok, "higher and ambient HN filtrations agree on " + std::to_string(count) +
                          " objects");
}

inline void suite_covering(Workspace& ws, SuiteRun& run) {
    if (!ws.covering) throw InputError("covering suite needs --action");
    std::vector<Representation> objects;
    for (int j : ws.mcat.members()) objects.push_back(ws.model.indecs[j]);
    HarnessReport rep =
        covering_theorem_harness(*ws.ctx, *ws.orbit_ctx, *ws.covering, ws.mcat, ws.n,
                                 ws.chain ? &*ws.chain : nullptr, objects);
    // echo the equivariant table
    std::vector<Subcat> classes = enumerate_n_torsion_classes(*ws.ctx, ws.mcat, ws.n);
    for (const Subcat& u : classes) {
        if (!is_equivariant(u, *ws.covering)) continue;
        Subcat pu = push_down_subcat(u, *ws.covering);
        if (run.tsv)
            run.out << "row\t" << member_list_string(u) << "\t" << member_list_string(pu) << "\n";
        else
            run.out << "  " << subcat_string(u) << "  ->  " << subcat_string(pu) << "\n";
    }
    for (const std::string& line : rep.lines)
        run.check(line.rfind("ok   ", 0) == 0, line.substr(5));
    if (rep.multiplicity_note)
        run.out << "note: push-down multiplicities computed exactly; the add-closure notation "
                   "collapses repeated summands\n";
    if (!rep.ok) run.ok = false;
}

}  // namespace detail

inline Report cmd_verify(Workspace& ws, const std::string& suite) {
    detail::SuiteRun run;
    run.tsv = ws.tsv();
    if (!run.tsv) run.out << "suite " << suite << " over " << ws.alg->name << "\n";
    if (suite == "torsion-axioms")
        detail::suite_torsion_axioms(ws, run);
    else if (suite == "ntors-equivalence")
        detail::suite_ntors_equivalence(ws, run);
    else if (suite == "embed-poset")
        detail::suite_embed_poset(ws, run);
    else if (suite == "hn-comparison")
        detail::suite_hn_comparison(ws, run);
    else if (suite == "covering")
        detail::suite_covering(ws, run);
    else
        throw InputError("unknown suite '" + suite +
                         "' (torsion-axioms, ntors-equivalence, embed-poset, hn-comparison, "
                         "covering)");
    run.out << (run.tsv ? (run.ok ? "result\tpass" : "result\tfail")
                        : (run.ok ? "PASS" : "FAIL"))
            << "\n";
    return {run.ok ? 0 : 1, run.out.str()};
}

inline Report run_command(const std::string& command, const CliOptions& opt) {
    try {
        std::unique_ptr<Workspace> wsp = Workspace::load(opt);
        Workspace& ws = *wsp;
        if (command == "model") return cmd_model(ws);
        if (command == "tors") return cmd_tors(ws);
        if (command == "ntors") return cmd_ntors(ws, opt.equivariant_only);
        if (command == "hn") return cmd_hn(ws, opt.object, opt.compare);
        if (command == "pushdown") return cmd_pushdown(ws, opt.object, opt.subcat_expr);
        if (command == "verify") return cmd_verify(ws, opt.suite);
        return {2, "unknown command " + command + "\n"};
    } catch (const InputError& e) {
        return {2, std::string("input error: ") + e.what() + "\n"};
    } catch (const BoundError& e) {
        return {2, std::string("bound exceeded: ") + e.what() + "\n"};
    } catch (const CheckError& e) {
        return {1, std::string("verification failure: ") + e.what() + "\n"};
    }
}

}  // namespace qtors

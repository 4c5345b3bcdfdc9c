#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qtors/hn.hpp"

namespace qtors {

// Free action of a finite cyclic group on the quiver, given by the generator's
// vertex and arrow permutations.
struct GroupAction {
    AlgebraPtr alg;
    std::string name = "action";
    int order = 1;
    std::vector<int> vperm;  // vperm[v-1] = g(v), 1-based
    std::vector<int> aperm;  // aperm[a] = index of g(a)

    int vmap(int v, int k) const {
        int w = v;
        for (int i = 0; i < ((k % order) + order) % order; ++i) w = vperm[w - 1];
        return w;
    }
    int amap(int a, int k) const {
        int b = a;
        for (int i = 0; i < ((k % order) + order) % order; ++i) b = aperm[b];
        return b;
    }
};

// {}^g M = M ∘ A_g^{-1}: spaces and maps transported along g^{-k}.
inline Representation g_twist(const Representation& M, const GroupAction& act, int k) {
    const AlgebraPtr& alg = M.alg;
    std::vector<int> dims(alg->vertices());
    for (int v = 1; v <= alg->vertices(); ++v) dims[v - 1] = M.dim_at(act.vmap(v, -k));
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) maps.push_back(M.arrow_maps[act.amap(a, -k)]);
    return Representation(alg, std::move(dims), std::move(maps));
}

struct ActionReport {
    bool ok = true;
    std::string detail;
};

// Validates the GroupAction invariants: well-formed permutations of the given
// order, freeness on vertices and arrows, compatibility with the quiver,
// stability of the relation set, and admissibility on the model (gX not
// isomorphic to X for g != 1).
inline ActionReport validate_action(const GroupAction& act, const ModuleCategoryModel& model) {
    ActionReport rep;
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.detail = std::move(why);
        return rep;
    };
    const AlgebraPtr& alg = act.alg;
    int V = alg->vertices(), A = alg->arrow_count();
    if (static_cast<int>(act.vperm.size()) != V || static_cast<int>(act.aperm.size()) != A)
        return fail("permutation tables have wrong size");
    {
        std::vector<char> seen(V, 0);
        for (int v : act.vperm) {
            if (v < 1 || v > V || seen[v - 1]) return fail("vertex map is not a permutation");
            seen[v - 1] = 1;
        }
        std::vector<char> aseen(A, 0);
        for (int a : act.aperm) {
            if (a < 0 || a >= A || aseen[a]) return fail("arrow map is not a permutation");
            aseen[a] = 1;
        }
    }
    for (int a = 0; a < A; ++a) {
        const Arrow& src = alg->arrow(a);
        const Arrow& img = alg->arrow(act.aperm[a]);
        if (img.src != act.vperm[src.src - 1] || img.tgt != act.vperm[src.tgt - 1])
            return fail("arrow permutation incompatible with vertex permutation at " + src.name);
    }
    if (act.order < 1) return fail("group order must be positive");
    for (int v = 1; v <= V; ++v)
        if (act.vmap(v, act.order) != v) return fail("vertex permutation order does not divide |G|");
    for (int a = 0; a < A; ++a)
        if (act.amap(a, act.order) != a) return fail("arrow permutation order does not divide |G|");
    for (int k = 1; k < act.order; ++k) {
        for (int v = 1; v <= V; ++v)
            if (act.vmap(v, k) == v) return fail("action not free on vertices (g^" +
                                                 std::to_string(k) + " fixes " + std::to_string(v) + ")");
        for (int a = 0; a < A; ++a)
            if (act.amap(a, k) == a)
                return fail("action not free on arrows (g^" + std::to_string(k) + " fixes " +
                            alg->arrow(a).name + ")");
    }
    {
        auto key = [&](const std::vector<int>& rel) {
            std::string s;
            for (int a : rel) s += std::to_string(a) + ",";
            return s;
        };
        std::vector<std::string> keys;
        for (const auto& rel : alg->relations) keys.push_back(key(rel));
        std::sort(keys.begin(), keys.end());
        for (const auto& rel : alg->relations) {
            std::vector<int> img;
            for (int a : rel) img.push_back(act.aperm[a]);
            if (!std::binary_search(keys.begin(), keys.end(), key(img)))
                return fail("relation set is not stable under the action");
        }
    }
    for (int i = 0; i < model.size(); ++i)
        for (int k = 1; k < act.order; ++k)
            if (is_isomorphic(g_twist(model.indecs[i], act, k), model.indecs[i], model))
                return fail("action not admissible: g^" + std::to_string(k) + " fixes " +
                            model.names[i] + " up to isomorphism");
    rep.detail = "admissible free action";
    return rep;
}

// Orbit algebra with the projection tables needed by the push-down.
struct OrbitAlgebra {
    AlgebraPtr orbit;
    std::vector<int> vertex_orbit;  // upstairs v (1-based) -> orbit vertex (1-based)
    std::vector<int> vertex_pos;    // k with v = g^k(representative)
    std::vector<int> arrow_orbit;   // upstairs arrow -> orbit arrow
    std::vector<int> orbit_rep_vertex;  // orbit vertex -> representative upstairs vertex
};

inline OrbitAlgebra orbit_algebra(const GroupAction& act) {
    const AlgebraPtr& alg = act.alg;
    int V = alg->vertices(), A = alg->arrow_count();
    OrbitAlgebra out;
    out.vertex_orbit.assign(V, 0);
    out.vertex_pos.assign(V, 0);
    out.arrow_orbit.assign(A, -1);

    for (int v = 1; v <= V; ++v) {
        if (out.vertex_orbit[v - 1]) continue;
        // v is the smallest unseen vertex, hence the representative
        out.orbit_rep_vertex.push_back(v);
        int ov = static_cast<int>(out.orbit_rep_vertex.size());
        for (int k = 0; k < act.order; ++k) {
            int w = act.vmap(v, k);
            out.vertex_orbit[w - 1] = ov;
            out.vertex_pos[w - 1] = k;
        }
    }
    Quiver oq;
    oq.vertex_count = static_cast<int>(out.orbit_rep_vertex.size());
    for (int a = 0; a < A; ++a) {
        if (out.arrow_orbit[a] >= 0) continue;
        const Arrow& ar = alg->arrow(a);
        Arrow oa;
        oa.name = ar.name;  // representative keeps its name
        oa.src = out.vertex_orbit[ar.src - 1];
        oa.tgt = out.vertex_orbit[ar.tgt - 1];
        int idx = static_cast<int>(oq.arrows.size());
        oq.arrows.push_back(oa);
        for (int k = 0; k < act.order; ++k) out.arrow_orbit[act.amap(a, k)] = idx;
    }
    std::vector<std::vector<int>> orels;
    for (const auto& rel : alg->relations) {
        std::vector<int> proj;
        for (int a : rel) proj.push_back(out.arrow_orbit[a]);
        if (std::find(orels.begin(), orels.end(), proj) == orels.end()) orels.push_back(proj);
    }
    out.orbit = make_algebra(alg->name + "_orbit", std::move(oq), std::move(orels), alg->p);
    return out;
}

// P_•(M): the space at an orbit vertex is the sum over the fibre, blocks
// ordered by the exponent k with w = g^k(rep); each upstairs arrow contributes
// its matrix as the block between the positions of its endpoints.
inline Representation push_down(const Representation& M, const GroupAction& act,
                                const OrbitAlgebra& orb) {
    const AlgebraPtr& up = act.alg;
    const AlgebraPtr& down = orb.orbit;
    int OV = down->vertices();
    std::vector<std::vector<int>> offsets(OV);  // per orbit vertex: block offset by k
    std::vector<int> dims(OV, 0);
    for (int ov = 1; ov <= OV; ++ov) {
        offsets[ov - 1].assign(act.order, 0);
        int off = 0;
        for (int k = 0; k < act.order; ++k) {
            offsets[ov - 1][k] = off;
            off += M.dim_at(act.vmap(orb.orbit_rep_vertex[ov - 1], k));
        }
        dims[ov - 1] = off;
    }
    std::vector<Mat> maps;
    for (int oa = 0; oa < down->arrow_count(); ++oa) {
        const Arrow& oar = down->arrow(oa);
        Mat m(dims[oar.tgt - 1], dims[oar.src - 1], up->p);
        for (int a = 0; a < up->arrow_count(); ++a) {
            if (orb.arrow_orbit[a] != oa) continue;
            const Arrow& ar = up->arrow(a);
            int kc = orb.vertex_pos[ar.src - 1], kr = orb.vertex_pos[ar.tgt - 1];
            const Mat& blk = M.arrow_maps[a];
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j)
                    m.at(offsets[oar.tgt - 1][kr] + i, offsets[oar.src - 1][kc] + j) = blk.at(i, j);
        }
        maps.push_back(std::move(m));
    }
    return Representation(down, std::move(dims), std::move(maps));
}

// Push-down of a morphism: block diagonal over the fibres.
inline Morphism push_down(const Morphism& f, const GroupAction& act, const OrbitAlgebra& orb) {
    Representation ps = push_down(f.src, act, orb);
    Representation pt = push_down(f.tgt, act, orb);
    const AlgebraPtr& down = orb.orbit;
    std::vector<Mat> maps;
    for (int ov = 1; ov <= down->vertices(); ++ov) {
        Mat m(pt.dim_at(ov), ps.dim_at(ov), down->p);
        int roff = 0, coff = 0;
        for (int k = 0; k < act.order; ++k) {
            int w = act.vmap(orb.orbit_rep_vertex[ov - 1], k);
            const Mat& blk = f.at(w);
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j) m.at(roff + i, coff + j) = blk.at(i, j);
            roff += blk.rows();
            coff += blk.cols();
        }
        maps.push_back(std::move(m));
    }
    return Morphism(ps, pt, std::move(maps));
}

// Bundled covering data: validated action, orbit algebra, downstairs model,
// the twist permutation of the upstairs model and the push-down images of the
// upstairs indecomposables.
struct CoveringSetup {
    GroupAction action;
    OrbitAlgebra orbit;
    ModuleCategoryModel orbit_model;
    std::vector<std::vector<int>> twist_index;   // [i][k] = index of g^k X_i
    std::vector<Decomposition> pushed_indec;     // decomposition downstairs of P(X_i)
};

inline CoveringSetup make_covering_setup(const ModuleCategoryModel& model,
                                         const GroupAction& act) {
    ActionReport rep = validate_action(act, model);
    if (!rep.ok) throw InputError("invalid group action: " + rep.detail);
    CoveringSetup s;
    s.action = act;
    s.orbit = orbit_algebra(act);
    s.orbit_model = nakayama_model(s.orbit.orbit, model.bounds);
    s.twist_index.assign(model.size(), std::vector<int>(act.order, 0));
    for (int i = 0; i < model.size(); ++i)
        for (int k = 0; k < act.order; ++k) {
            Decomposition d = decompose(g_twist(model.indecs[i], act, k), model);
            if (d.parts.size() != 1 || d.parts[0].second != 1)
                throw CheckError("twist of an indecomposable is not indecomposable");
            s.twist_index[i][k] = d.parts[0].first;
        }
    for (int i = 0; i < model.size(); ++i)
        s.pushed_indec.push_back(decompose(push_down(model.indecs[i], act, s.orbit), s.orbit_model));
    return s;
}

inline bool is_equivariant(const Subcat& U, const CoveringSetup& s) {
    for (int i : U.members())
        for (int k = 0; k < s.action.order; ++k)
            if (!U.contains_index(s.twist_index[i][k])) return false;
    return true;
}

// Member set downstairs: decompositions of the push-downs of the members.
inline Subcat push_down_subcat(const Subcat& U, const CoveringSetup& s) {
    if (!is_equivariant(U, s)) throw InputError("push-down requires a G-equivariant subcategory");
    std::uint64_t mask = 0;
    for (int i : U.members()) mask |= s.pushed_indec[i].mask();
    return subcat(s.orbit_model, mask);
}

inline StepChain push_down_chain(const StepChain& delta, const CoveringSetup& s,
                                 const ModuleCategoryModel& up_model) {
    StepChain out;
    out.model = &s.orbit_model;
    out.name = "P(" + delta.name + ")";
    out.breaks = delta.breaks;
    for (std::uint64_t cls : delta.classes)
        out.classes.push_back(push_down_subcat(subcat(up_model, cls), s).mask);
    return out;
}

struct PrecovReport {
    bool ok = true;
    int lhs = 0, rhs = 0;
};

// dim Hom(P_• X, P_• Y) must equal Σ_g dim Hom(g X, Y).
inline PrecovReport verify_precovering_dims(const Representation& X, const Representation& Y,
                                            const CoveringSetup& s) {
    PrecovReport rep;
    rep.lhs = hom_dim(push_down(X, s.action, s.orbit), push_down(Y, s.action, s.orbit));
    rep.rhs = 0;
    for (int k = 0; k < s.action.order; ++k) rep.rhs += hom_dim(g_twist(X, s.action, k), Y);
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

struct HarnessReport {
    bool ok = true;
    std::vector<std::string> lines;
    bool multiplicity_note = false;

    void note(const std::string& s) { lines.push_back(s); }
    void check(bool cond, const std::string& what) {
        lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
        if (!cond) ok = false;
    }
};

// The four covering checks:
//  (a) push-downs of equivariant n-torsion classes pass the criterion downstairs,
//  (b) T ∘ P_• = P_• ∘ T on equivariant classes whose T(U) is equivariant,
//  (c) push-down of the n-HN filtration is the n-HN filtration of the push-down,
//  (d) torsion-object transport in both directions.
// Multiplicities are computed exactly; a note records where add-closure
// notation would collapse repeated summands.
inline HarnessReport covering_theorem_harness(TorsionContext& up, TorsionContext& down,
                                              const CoveringSetup& s, const Subcat& mcat, int n,
                                              const StepChain* delta,
                                              const std::vector<Representation>& objects) {
    HarnessReport rep;
    const ModuleCategoryModel& um = up.model();
    Subcat mcat_down = push_down_subcat(mcat, s);
    rep.check(is_n_cluster_tilting(down, mcat_down, n).ok,
              "P(mcat) is n-cluster-tilting downstairs");
    auto label_of = [&](const Subcat& u) {
        std::string out = "add{";
        bool first = true;
        for (int i : u.members()) {
            out += (first ? "" : ",") + um.names[i];
            first = false;
        }
        return out + "}";
    };

    // (a) + (b) over all equivariant n-torsion classes upstairs
    std::vector<Subcat> all_up = enumerate_n_torsion_classes(up, mcat, n);
    for (const Subcat& u : all_up) {
        if (!is_equivariant(u, s)) continue;
        Subcat pu = push_down_subcat(u, s);
        rep.check(is_n_torsion_class_criterion(down, pu, mcat_down, n).ok,
                  "P(U) is an n-torsion class for U = " + label_of(u));
        Subcat tu = minimal_torsion_class(up, u);
        if (is_equivariant(tu, s)) {
            Subcat lhs = push_down_subcat(tu, s);
            Subcat rhs = minimal_torsion_class(down, pu);
            rep.check(lhs.mask == rhs.mask, "P(T(U)) = T(P(U)) for U = " + label_of(u));
        }
    }

    // (c) + (d) need a chain
    if (delta) {
        for (std::uint64_t cls : delta->classes)
            if (!is_equivariant(subcat(um, cls), s))
                throw InputError("harness chain must consist of equivariant classes");
        StepChain pdelta = push_down_chain(*delta, s, um);
        validate_ntors_chain(down, pdelta, mcat_down, n);
        for (const Representation& M : objects) {
            if (M.is_zero()) continue;
            NHNFilt upper = n_hn_filtration(up, M, *delta, mcat, n);
            Representation PM = push_down(M, s.action, s.orbit);
            NHNFilt lower = n_hn_filtration(down, PM, pdelta, mcat_down, n);
            bool match = upper.steps.size() == lower.steps.size();
            if (match)
                for (size_t i = 0; i < upper.steps.size(); ++i) {
                    if (upper.steps[i].label != lower.steps[i].label) match = false;
                    Representation pushed = push_down(upper.steps[i].module, s.action, s.orbit);
                    if (!is_isomorphic(pushed, lower.steps[i].module, s.orbit_model)) match = false;
                    for (auto [idx, mult] : decompose(pushed, s.orbit_model).parts)
                        if (mult > 1) rep.multiplicity_note = true;
                }
            rep.check(match, "n-HN filtration commutes with the push-down of " +
                                 object_name(decompose(M, um), um));
        }
        // (d): torsion-object transport w.r.t. the middle chain values
        for (std::uint64_t cls : delta->classes) {
            Subcat u = subcat(um, cls);
            if (!is_n_torsion_class_criterion(up, u, mcat, n).ok) continue;
            Subcat pu = push_down_subcat(u, s);
            Subcat tu = minimal_torsion_class(up, u);
            Subcat tpu = minimal_torsion_class(down, pu);
            for (const Representation& M : objects) {
                TorsionDecomposition td_up = torsion_subobject(up, tu, M);
                Representation PM = push_down(M, s.action, s.orbit);
                TorsionDecomposition td_down = torsion_subobject(down, tpu, PM);
                Representation pushed_t = push_down(td_up.tM, s.action, s.orbit);
                rep.check(is_isomorphic(pushed_t, td_down.tM, s.orbit_model),
                          "P(U^M) is the torsion object of P(M), M = " +
                              object_name(decompose(M, um), um));
                // reverse direction: a submodule of M in add U whose push-down is
                // the downstairs torsion object must be the torsion object itself
                Decomposition up_dec = decompose(M, um);
                if (up_dec.parts.size() == 1 && up_dec.parts[0].second == 1 &&
                    um.submodules_ok[up_dec.parts[0].first]) {
                    for (const auto& info : um.submodule_table(up_dec.parts[0].first)) {
                        if (info.sub.mask() & ~u.mask) continue;
                        Representation pushed_sub = push_down(info.incl.src, s.action, s.orbit);
                        bool down_match = is_isomorphic(pushed_sub, td_down.tM, s.orbit_model);
                        bool up_match = is_isomorphic(info.incl.src, td_up.tM, um);
                        rep.check(down_match == up_match,
                                  "torsion-object transport is two-sided over " +
                                      object_name(up_dec, um));
                    }
                }
            }
        }
    }
    return rep;
}

// Brute-force isomorphism of bound quiver algebras by vertex relabeling
// (quivers without parallel arrows).
inline bool algebras_isomorphic(const BoundQuiverAlgebra& a, const BoundQuiverAlgebra& b) {
    if (a.vertices() != b.vertices() || a.arrow_count() != b.arrow_count() ||
        a.relations.size() != b.relations.size() || a.p != b.p)
        return false;
    int V = a.vertices();
    auto arrow_of = [](const BoundQuiverAlgebra& alg, int u, int v) {
        for (int i = 0; i < alg.arrow_count(); ++i)
            if (alg.arrow(i).src == u && alg.arrow(i).tgt == v) return i;
        return -1;
    };
    std::vector<int> perm(V);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool ok = true;
        std::vector<int> arrow_map(a.arrow_count(), -1);
        for (int i = 0; i < a.arrow_count() && ok; ++i) {
            int img = arrow_of(b, perm[a.arrow(i).src - 1], perm[a.arrow(i).tgt - 1]);
            if (img < 0) ok = false;
            arrow_map[i] = img;
        }
        if (!ok) continue;
        auto rel_key = [](std::vector<int> r) {
            std::string s;
            for (int x : r) s += std::to_string(x) + ",";
            return s;
        };
        std::vector<std::string> bkeys;
        for (const auto& r : b.relations) bkeys.push_back(rel_key(r));
        std::sort(bkeys.begin(), bkeys.end());
        bool rel_ok = true;
        for (const auto& r : a.relations) {
            std::vector<int> img;
            for (int x : r) img.push_back(arrow_map[x]);
            if (!std::binary_search(bkeys.begin(), bkeys.end(), rel_key(img))) rel_ok = false;
        }
        if (rel_ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace qtors

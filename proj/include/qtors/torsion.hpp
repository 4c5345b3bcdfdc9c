#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qtors/homology.hpp"
#include "qtors/model.hpp"
#include "qtors/rational.hpp"

namespace qtors {

// Additively closed full subcategory of the model, as a member set of
// indecomposable indices.  A general object belongs iff all its summands do.
struct Subcat {
    const ModuleCategoryModel* model = nullptr;
    std::uint64_t mask = 0;

    bool contains_index(int i) const { return (mask >> i) & 1; }
    bool contains_mask(std::uint64_t m) const { return (m & ~mask) == 0; }
    bool contains(const Decomposition& dec) const { return contains_mask(dec.mask()); }
    bool empty() const { return mask == 0; }
    int member_count() const { return __builtin_popcountll(mask); }
    std::vector<int> members() const {
        std::vector<int> out;
        for (int i = 0; i < model->size(); ++i)
            if (contains_index(i)) out.push_back(i);
        return out;
    }
    friend bool operator==(const Subcat& a, const Subcat& b) {
        return a.model == b.model && a.mask == b.mask;
    }
    bool subset_of(const Subcat& o) const { return (mask & ~o.mask) == 0; }
};

inline Subcat subcat(const ModuleCategoryModel& m, std::uint64_t mask) { return Subcat{&m, mask}; }
inline Subcat subcat_all(const ModuleCategoryModel& m) { return Subcat{&m, m.all_mask()}; }
inline Subcat subcat_none(const ModuleCategoryModel& m) { return Subcat{&m, 0}; }

// Per-model session caches: subspace ID tables for trace/reject computations,
// extension middle terms per indecomposable pair, Ext dimensions, and the
// closure memos.  Everything observable is deterministic.
class TorsionContext {
public:
    explicit TorsionContext(const ModuleCategoryModel& model) : model_(&model), ext_(model) {}

    const ModuleCategoryModel& model() const { return *model_; }
    ExtCache& ext() { return ext_; }

    // ---- subspace ID machinery (per ambient (indec j, vertex v)) ----
    struct SpaceTable {
        std::vector<Mat> spaces;              // canonical column bases
        std::map<std::string, int> lookup;
        std::vector<std::vector<int>> unions; // id x id -> id
        std::vector<std::vector<int>> inters;
        int full_id = 0;

        int id_of(const Mat& canon) const {
            std::string k;
            canon.append_key(k);
            auto it = lookup.find(k);
            if (it == lookup.end()) throw CheckError("unknown subspace in ID table");
            return it->second;
        }
    };

    const SpaceTable& space_table(int j, int v) {
        auto key = std::make_pair(j, v);
        auto it = space_tables_.find(key);
        if (it != space_tables_.end()) return it->second;
        const Representation& X = model_->indecs[j];
        SpaceTable t;
        t.spaces = all_subspaces(X.dims[v], model_->alg->p, 4096);
        for (size_t a = 0; a < t.spaces.size(); ++a) {
            std::string k;
            t.spaces[a].append_key(k);
            t.lookup[k] = static_cast<int>(a);
            if (t.spaces[a].cols() == X.dims[v]) t.full_id = static_cast<int>(a);
        }
        size_t n = t.spaces.size();
        t.unions.assign(n, std::vector<int>(n));
        t.inters.assign(n, std::vector<int>(n));
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) {
                t.unions[a][b] = t.id_of(subspace_sum(t.spaces[a], t.spaces[b]));
                t.inters[a][b] = t.id_of(subspace_intersect(t.spaces[a], t.spaces[b]));
            }
        return space_tables_.emplace(key, std::move(t)).first->second;
    }

    // trace of X_i inside X_j, as subspace IDs per vertex
    const std::vector<int>& trace_ids(int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = trace_ids_.find(key);
        if (it != trace_ids_.end()) return it->second;
        std::vector<int> ids;
        for (int v = 0; v < model_->alg->vertices(); ++v)
            ids.push_back(space_table(j, v).id_of(model_->trace_sub[i][j][v]));
        return trace_ids_.emplace(key, std::move(ids)).first->second;
    }

    // reject of X_i in X_j: common kernel of all morphisms X_j -> X_i
    const std::vector<int>& reject_ids(int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = reject_ids_.find(key);
        if (it != reject_ids_.end()) return it->second;
        std::vector<int> ids;
        for (int v = 0; v < model_->alg->vertices(); ++v) {
            Mat stack(0, model_->indecs[j].dims[v], model_->alg->p);
            for (const Morphism& f : model_->homs[j][i]) stack = stack.vcat(f.maps[v]);
            ids.push_back(space_table(j, v).id_of(col_space_basis(stack.null_basis())));
        }
        return reject_ids_.emplace(key, std::move(ids)).first->second;
    }

    // decomposition masks of the middle terms of all extensions
    // 0 -> X_sub -> E -> X_quot -> 0
    const std::vector<std::uint64_t>& middle_masks(int quot, int sub) {
        auto key = std::make_pair(quot, sub);
        auto it = middles_.find(key);
        if (it != middles_.end()) return it->second;
        std::vector<std::uint64_t> masks;
        ExtensionClasses ec =
            extension_middle_terms(model_->indecs[sub], model_->indecs[quot], *model_);
        for (const auto& item : ec.middles) masks.push_back(item.dec.mask());
        return middles_.emplace(key, std::move(masks)).first->second;
    }

    // ---- closure memos ----
    std::map<std::uint64_t, std::uint64_t> fac_memo, filt_memo, tors_memo;
    std::map<std::pair<std::uint64_t, int>, std::pair<Decomposition, Decomposition>> tobj_memo;

private:
    const ModuleCategoryModel* model_;
    ExtCache ext_;
    std::map<std::pair<int, int>, SpaceTable> space_tables_;
    std::map<std::pair<int, int>, std::vector<int>> trace_ids_, reject_ids_;
    std::map<std::pair<int, int>, std::vector<std::uint64_t>> middles_;
};

// ---- Fac / Sub / Filt closures ----

// Y lies in Fac(add S) iff the trace of S in Y is all of Y.
inline bool in_fac(TorsionContext& ctx, std::uint64_t s_mask, int j) {
    const ModuleCategoryModel& m = ctx.model();
    int V = m.alg->vertices();
    std::vector<int> acc(V, -1);
    for (int i = 0; i < m.size(); ++i) {
        if (!((s_mask >> i) & 1)) continue;
        const std::vector<int>& ids = ctx.trace_ids(i, j);
        for (int v = 0; v < V; ++v)
            acc[v] = acc[v] < 0 ? ids[v] : ctx.space_table(j, v).unions[acc[v]][ids[v]];
    }
    for (int v = 0; v < V; ++v) {
        const auto& t = ctx.space_table(j, v);
        int id = acc[v] < 0 ? t.id_of(Mat(m.indecs[j].dims[v], 0, m.alg->p)) : acc[v];
        if (id != t.full_id) return false;
    }
    return true;
}

// Y lies in Sub(add S) iff the common kernel of all morphisms to S vanishes.
inline bool in_sub(TorsionContext& ctx, std::uint64_t s_mask, int j) {
    const ModuleCategoryModel& m = ctx.model();
    int V = m.alg->vertices();
    std::vector<int> acc(V, -1);
    for (int i = 0; i < m.size(); ++i) {
        if (!((s_mask >> i) & 1)) continue;
        const std::vector<int>& ids = ctx.reject_ids(i, j);
        for (int v = 0; v < V; ++v)
            acc[v] = acc[v] < 0 ? ids[v] : ctx.space_table(j, v).inters[acc[v]][ids[v]];
    }
    for (int v = 0; v < V; ++v) {
        const auto& t = ctx.space_table(j, v);
        int id = acc[v] < 0 ? t.full_id : acc[v];
        if (t.spaces[id].cols() != 0) return false;
    }
    return true;
}

inline Subcat fac_closure(TorsionContext& ctx, const Subcat& S) {
    auto it = ctx.fac_memo.find(S.mask);
    if (it != ctx.fac_memo.end()) return subcat(ctx.model(), it->second);
    std::uint64_t out = 0;
    for (int j = 0; j < ctx.model().size(); ++j)
        if (in_fac(ctx, S.mask, j)) out |= std::uint64_t(1) << j;
    ctx.fac_memo[S.mask] = out;
    return subcat(ctx.model(), out);
}

inline Subcat sub_closure(TorsionContext& ctx, const Subcat& S) {
    std::uint64_t out = 0;
    for (int j = 0; j < ctx.model().size(); ++j)
        if (in_sub(ctx, S.mask, j)) out |= std::uint64_t(1) << j;
    return subcat(ctx.model(), out);
}

// Least member set containing S and closed under extensions: saturate with
// the indecomposable summands of all middle terms of extensions between
// members (pairwise indecomposable ends suffice by filtration refinement).
inline Subcat filt_closure(TorsionContext& ctx, const Subcat& S) {
    auto it = ctx.filt_memo.find(S.mask);
    if (it != ctx.filt_memo.end()) return subcat(ctx.model(), it->second);
    std::uint64_t f = S.mask;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> mem;
        for (int i = 0; i < ctx.model().size(); ++i)
            if ((f >> i) & 1) mem.push_back(i);
        for (int q : mem)
            for (int s : mem) {
                if (ctx.ext().ext_indec(1, q, s) == 0) continue;
                for (std::uint64_t mm : ctx.middle_masks(q, s))
                    if (mm & ~f) {
                        f |= mm;
                        changed = true;
                    }
            }
    }
    ctx.filt_memo[S.mask] = f;
    return subcat(ctx.model(), f);
}

// T(X) = Filt(Fac(X)), the minimal torsion class containing X.
inline Subcat minimal_torsion_class(TorsionContext& ctx, const Subcat& X) {
    auto it = ctx.tors_memo.find(X.mask);
    if (it != ctx.tors_memo.end()) return subcat(ctx.model(), it->second);
    Subcat t = filt_closure(ctx, fac_closure(ctx, X));
    ctx.tors_memo[X.mask] = t.mask;
    return t;
}

inline bool is_torsion_class(TorsionContext& ctx, const Subcat& S) {
    return fac_closure(ctx, S).mask == S.mask && filt_closure(ctx, S).mask == S.mask;
}

// All torsion classes, sorted by size then lexicographically by member list.
inline std::vector<Subcat> enumerate_torsion_classes(TorsionContext& ctx) {
    const ModuleCategoryModel& m = ctx.model();
    if (m.size() > m.bounds.enum_bound)
        throw BoundError("torsion class enumeration: " + std::to_string(m.size()) +
                         " indecomposables exceed bound " + std::to_string(m.bounds.enum_bound));
    std::vector<Subcat> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m.size()); ++mask) {
        Subcat s = subcat(m, mask);
        if (is_torsion_class(ctx, s)) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const Subcat& a, const Subcat& b) {
        if (a.member_count() != b.member_count()) return a.member_count() < b.member_count();
        return a.members() < b.members();
    });
    return out;
}

// ---- Torsion functor ----

struct TorsionDecomposition {
    Representation tM;
    Morphism incl;  // tM -> M
    Representation fM;
    Morphism proj;  // M -> fM
    Decomposition t_dec, f_dec;
};

// Trace of add T inside M: the sum of images of all morphisms from members.
inline Morphism trace_mono(TorsionContext& ctx, const Subcat& T, const Representation& M) {
    const ModuleCategoryModel& m = ctx.model();
    int V = m.alg->vertices();
    std::vector<Mat> basis;
    for (int v = 0; v < V; ++v) basis.emplace_back(M.dims[v], 0, m.alg->p);
    for (int i : T.members()) {
        for (const Morphism& f : hom_basis(m.indecs[i], M))
            for (int v = 0; v < V; ++v) basis[v] = basis[v].hcat(f.maps[v]);
    }
    for (int v = 0; v < V; ++v) basis[v] = col_space_basis(basis[v]);
    return subrep_from_subspaces(M, basis);
}

inline TorsionDecomposition torsion_subobject(TorsionContext& ctx, const Subcat& T,
                                              const Representation& M) {
    TorsionDecomposition out;
    Morphism incl = trace_mono(ctx, T, M);
    Factorization f = morphism_factorization(incl);
    out.tM = incl.src;
    out.incl = incl;
    out.fM = f.cokernel;
    out.proj = f.cok_proj;
    out.t_dec = decompose(out.tM, ctx.model());
    out.f_dec = decompose(out.fM, ctx.model());
    return out;
}

// Decompositions of tX_j and fX_j for a model indecomposable, memoized.
inline const std::pair<Decomposition, Decomposition>& torsion_parts_indec(TorsionContext& ctx,
                                                                          const Subcat& T, int j) {
    auto key = std::make_pair(T.mask, j);
    auto it = ctx.tobj_memo.find(key);
    if (it != ctx.tobj_memo.end()) return it->second;
    TorsionDecomposition td = torsion_subobject(ctx, T, ctx.model().indecs[j]);
    return ctx.tobj_memo.emplace(key, std::make_pair(td.t_dec, td.f_dec)).first->second;
}

// ---- Chains of torsion classes ----

// Step function on [0,1]: classes[i] on [breaks[i], breaks[i+1]) for i<k and
// classes[k] at t=1.  Weakly decreasing, classes[0] is the ambient class and
// classes[k] is {0}.
struct StepChain {
    const ModuleCategoryModel* model = nullptr;
    std::string name = "chain";
    std::vector<Rational> breaks;
    std::vector<std::uint64_t> classes;

    int segments() const { return static_cast<int>(breaks.size()) - 1; }

    int interval_of(Rational t) const {
        if (t < Rational(0) || t > Rational(1)) throw InputError("chain parameter outside [0,1]");
        if (t == Rational(1)) return segments();
        for (int i = segments() - 1; i >= 0; --i)
            if (breaks[i] <= t) return i;
        throw CheckError("chain breakpoints do not start at 0");
    }

    std::uint64_t value_mask(Rational t) const { return classes[interval_of(t)]; }

    // Union over s > t of the classes: for a step chain with half-open
    // intervals this is the value at t itself when t < 1, and {0} at t = 1.
    std::uint64_t cut_union_mask(Rational t) const {
        if (t == Rational(1)) return 0;
        return classes[interval_of(t)];
    }

    // Intersection over s < t: the value immediately below t.
    std::uint64_t cut_intersection_mask(Rational t) const {
        if (t <= Rational(0) || t > Rational(1)) throw InputError("cut_intersection needs t in (0,1]");
        int i = interval_of(t);
        if (i > 0 && breaks[i] == t) return classes[i - 1];
        if (i == segments()) return classes[i - 1];  // t == 1
        return classes[i];
    }

    // Index of the first interval whose class does not contain the object.
    int first_fail(std::uint64_t obj_mask) const {
        for (int i = 0; i <= segments(); ++i)
            if (obj_mask & ~classes[i]) return i;
        return -1;  // only the zero object
    }
};

inline void validate_chain_shape(const StepChain& c, std::uint64_t ambient_mask) {
    if (c.breaks.size() < 2 || c.breaks.front() != Rational(0) || c.breaks.back() != Rational(1))
        throw InputError("chain must cover [0,1] with breakpoints 0 and 1");
    for (size_t i = 0; i + 1 < c.breaks.size(); ++i)
        if (!(c.breaks[i] < c.breaks[i + 1])) throw InputError("chain breakpoints must increase");
    if (c.classes.size() != c.breaks.size())
        throw InputError("chain needs one class per breakpoint (last one at t=1)");
    if (c.classes.front() != ambient_mask)
        throw InputError("chain value at 0 must be the whole ambient subcategory");
    if (c.classes.back() != 0) throw InputError("chain value at 1 must be {0}");
    for (size_t i = 0; i + 1 < c.classes.size(); ++i)
        if (c.classes[i + 1] & ~c.classes[i])
            throw InputError("chain values must be weakly decreasing");
}

// Chain of torsion classes in the ambient module category.
inline void validate_torsion_chain(TorsionContext& ctx, const StepChain& c) {
    validate_chain_shape(c, ctx.model().all_mask());
    for (std::uint64_t cls : c.classes)
        if (!is_torsion_class(ctx, subcat(ctx.model(), cls)))
            throw InputError("chain value is not a torsion class");
}

// ---- Slicing P_t ----

// Membership predicate via the torsion-pair formula
//   P_t = (⋂_{s<t} T_s) ∩ (⋂_{s>t} F_s),
// with the conventions ⋂_{s<0} T_s = everything, ⋃_{s>1} T_s = {0}.
// The zero object is counted as a member of every slice.
struct SliceP {
    const ModuleCategoryModel* model = nullptr;
    std::uint64_t inter_mask = 0;  // ⋂_{s<t} T_s
    std::uint64_t union_mask = 0;  // ⋃_{s>t} T_s

    bool contains(TorsionContext& ctx, const Decomposition& dec) const {
        if (dec.empty()) return true;
        if (dec.mask() & ~inter_mask) return false;
        // torsion-free w.r.t. the union class: no Hom from any member
        for (int i = 0; i < model->size(); ++i) {
            if (!((union_mask >> i) & 1)) continue;
            for (auto [j, k] : dec.parts)
                if (ctx.model().hom_mat[i][j] != 0) return false;
        }
        return true;
    }
};

inline SliceP slicing_P(TorsionContext& ctx, const StepChain& eta, Rational t) {
    SliceP s;
    s.model = &ctx.model();
    s.inter_mask = (t == Rational(0)) ? ctx.model().all_mask() : eta.cut_intersection_mask(t);
    s.union_mask = eta.cut_union_mask(t);
    return s;
}

// Checks the coker-based and the torsion-pair definitions of P_t against each
// other on one object; throws CheckError on disagreement.
inline void check_slicing_p_agreement(TorsionContext& ctx, const StepChain& eta, Rational t,
                                      const Representation& M) {
    if (M.is_zero()) return;
    SliceP sl = slicing_P(ctx, eta, t);
    Decomposition dec = decompose(M, ctx.model());
    std::uint64_t mask = dec.mask();
    bool in_St = sl.inter_mask != 0 && !(mask & ~sl.inter_mask) && (mask & ~sl.union_mask);
    if (in_St) {
        // coker of the canonical torsion inclusion must satisfy the pair formula
        TorsionDecomposition td = torsion_subobject(ctx, subcat(ctx.model(), sl.union_mask), M);
        if (!td.fM.is_zero() && !sl.contains(ctx, td.f_dec))
            throw CheckError("slicing P: coker-definition member fails the torsion-pair formula");
    }
    if (sl.contains(ctx, dec)) {
        // a nonzero formula member is its own witness: M ∈ S_t with coker ≅ M
        if (!in_St) throw CheckError("slicing P: torsion-pair member is not in S_t");
        TorsionDecomposition td = torsion_subobject(ctx, subcat(ctx.model(), sl.union_mask), M);
        if (!td.tM.is_zero())
            throw CheckError("slicing P: torsion-pair member has nonzero torsion part");
    }
}

// ---- Harder-Narasimhan filtrations in the ambient category ----

struct HNFilt {
    std::vector<Representation> steps;  // M_1 ⊂ ... ⊂ M_r = M (M_0 = 0 implicit)
    std::vector<Morphism> incls;        // incls[i]: steps[i-1] -> steps[i]; incls[0] from 0
    std::vector<Rational> labels;       // s_1 > ... > s_r, labels[i] for steps[i]
    bool sup_label_note = false;        // a label equals 1 (sup convention)
};

inline HNFilt hn_filtration_abelian(TorsionContext& ctx, const Representation& M,
                                    const StepChain& eta) {
    if (M.is_zero()) throw InputError("HN filtration of the zero object");
    HNFilt out;
    Representation cur = M;
    while (!cur.is_zero()) {
        Decomposition dec = decompose(cur, ctx.model());
        int fail = eta.first_fail(dec.mask());
        if (fail < 0) throw CheckError("nonzero object contained in the zero class");
        Rational label = eta.breaks[fail];
        if (label == Rational(1)) out.sup_label_note = true;
        TorsionDecomposition td =
            torsion_subobject(ctx, subcat(ctx.model(), eta.cut_union_mask(label)), cur);
        if (td.tM.total_dim() >= cur.total_dim())
            throw CheckError("HN step did not strictly descend");
        out.steps.push_back(cur);
        out.labels.push_back(label);
        out.incls.push_back(td.incl);
        cur = td.tM;
    }
    std::reverse(out.steps.begin(), out.steps.end());
    std::reverse(out.labels.begin(), out.labels.end());
    std::reverse(out.incls.begin(), out.incls.end());
    for (size_t i = 0; i + 1 < out.labels.size(); ++i)
        if (!(out.labels[i] > out.labels[i + 1]))
            throw CheckError("HN labels fail to strictly decrease");
    return out;
}

}  // namespace qtors

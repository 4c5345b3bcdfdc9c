#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qtors/highertors.hpp"

namespace qtors {

// Chain of n-torsion classes inside mcat: same step-function shape, with
// every value passing the n-torsion criterion.
inline void validate_ntors_chain(TorsionContext& ctx, const StepChain& c, const Subcat& mcat,
                                 int n) {
    validate_chain_shape(c, mcat.mask);
    for (std::uint64_t cls : c.classes)
        if (!is_n_torsion_class_criterion(ctx, subcat(ctx.model(), cls), mcat, n).ok)
            throw InputError("chain value is not an n-torsion class");
}

// ⋃_{r>s} U_r and ⋂_{t<s} U_t of a step chain; both are again n-torsion
// classes (checked against the criterion).
inline Subcat cut_union(TorsionContext& ctx, const StepChain& delta, const Subcat& mcat, int n,
                        Rational s) {
    if (s < Rational(0) || s >= Rational(1)) throw InputError("cut_union needs s in [0,1)");
    Subcat u = subcat(ctx.model(), delta.cut_union_mask(s));
    if (!is_n_torsion_class_criterion(ctx, u, mcat, n).ok)
        throw CheckError("cut union is not an n-torsion class");
    return u;
}

inline Subcat cut_intersection(TorsionContext& ctx, const StepChain& delta, const Subcat& mcat,
                               int n, Rational s) {
    Subcat u = subcat(ctx.model(), delta.cut_intersection_mask(s));
    if (!is_n_torsion_class_criterion(ctx, u, mcat, n).ok)
        throw CheckError("cut intersection is not an n-torsion class");
    return u;
}

// ---- n-Harder-Narasimhan filtrations ----

struct NHNStep {
    Representation module;  // M_k
    Morphism incl;          // M_{k-1} -> M_k
    Rational label;         // s_k
    NCokernel ncok;         // n-cokernel of the inclusion
};

struct NHNFilt {
    std::vector<NHNStep> steps;  // k = 1..r, increasing submodules
    bool sup_label_note = false;
};

// Iterates the step rule: s = sup{t : M in U_t} over the breakpoint set, then
// the predecessor is the torsion subobject of M with respect to T(⋃_{r>s} U_r)
// (equal to the n-torsion subobject by the torsion-object identification).
inline NHNFilt n_hn_filtration(TorsionContext& ctx, const Representation& M,
                               const StepChain& delta, const Subcat& mcat, int n) {
    if (M.is_zero()) throw InputError("n-HN filtration of the zero object");
    const ModuleCategoryModel& model = ctx.model();
    if (decompose(M, model).mask() & ~mcat.mask)
        throw InputError("n-HN filtration requires an object of add(mcat)");
    NHNFilt out;
    Representation cur = M;
    std::vector<std::pair<Representation, Rational>> down;
    std::vector<Morphism> incls;
    while (!cur.is_zero()) {
        Decomposition dec = decompose(cur, model);
        int fail = delta.first_fail(dec.mask());
        if (fail < 0) throw CheckError("nonzero object contained in the zero class");
        Rational label = delta.breaks[fail];
        if (label == Rational(1)) out.sup_label_note = true;
        Subcat cut = subcat(model, delta.cut_union_mask(label));
        TorsionDecomposition td = torsion_subobject(ctx, minimal_torsion_class(ctx, cut), cur);
        if (td.tM.total_dim() >= cur.total_dim())
            throw CheckError("n-HN step did not strictly descend");
        if (td.t_dec.mask() & ~cut.mask)
            throw CheckError("n-HN predecessor left the cut-union class");
        down.emplace_back(cur, label);
        incls.push_back(td.incl);
        cur = td.tM;
    }
    for (size_t k = down.size(); k-- > 0;) {
        NHNStep step;
        step.module = down[k].first;
        step.label = down[k].second;
        step.incl = incls[k];
        Representation quot = morphism_factorization(incls[k]).cokernel;
        step.ncok = m_coresolution(ctx, mcat, quot, n).tail;
        out.steps.push_back(std::move(step));
    }
    for (size_t i = 0; i + 1 < out.steps.size(); ++i)
        if (!(out.steps[i].label > out.steps[i + 1].label))
            throw CheckError("n-HN labels fail to strictly decrease");
    return out;
}

// ---- Slicing Q_t ----

// Q_t = { n-coker(U^M_{>t} -> M) : M in S_t }, materialized over objects of
// add(mcat) up to the configured total-dimension bound.  Elements are
// n-cokernel records compared termwise up to isomorphism.
struct SliceQ {
    Rational t;
    std::vector<std::vector<Decomposition>> records;  // per witness: terms V^1..V^n

    bool contains_record(const std::vector<Decomposition>& rec) const {
        for (const auto& r : records)
            if (r == rec) return true;
        return false;
    }
};

inline std::vector<Decomposition> ncok_record(TorsionContext& ctx, const NCokernel& v) {
    std::vector<Decomposition> rec;
    for (const Representation& t : v.terms) rec.push_back(decompose(t, ctx.model()));
    return rec;
}

// Record of a plain object Y viewed as the n-cokernel (Y, 0, ..., 0).
inline std::vector<Decomposition> object_record(TorsionContext& ctx, const Representation& Y,
                                                int n) {
    std::vector<Decomposition> rec(static_cast<size_t>(n));
    rec[0] = decompose(Y, ctx.model());
    return rec;
}

namespace detail {

// All nonzero multisets of the given member indices with bounded total
// dimension, as multiplicity vectors.
inline void bounded_multisets(const ModuleCategoryModel& m, const std::vector<int>& members,
                              int dim_bound,
                              const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> mult(members.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t k, int used) {
        if (k == members.size()) {
            for (int x : mult)
                if (x > 0) {
                    visit(mult);
                    return;
                }
            return;
        }
        int d = m.indecs[members[k]].total_dim();
        for (int c = 0; used + c * d <= dim_bound; ++c) {
            mult[k] = c;
            rec(k + 1, used + c * d);
        }
        mult[k] = 0;
    };
    rec(0, 0);
}

}  // namespace detail

inline SliceQ slicing_Q(TorsionContext& ctx, const StepChain& delta, const Subcat& mcat, int n,
                        Rational t) {
    const ModuleCategoryModel& model = ctx.model();
    SliceQ out;
    out.t = t;
    std::uint64_t inter = (t == Rational(0)) ? mcat.mask : delta.cut_intersection_mask(t);
    std::uint64_t uni = delta.cut_union_mask(t);
    Subcat tors = minimal_torsion_class(ctx, subcat(model, uni));
    std::vector<int> members = mcat.members();
    detail::bounded_multisets(model, members, model.bounds.dim_bound, [&](const std::vector<int>& mult) {
        std::uint64_t mask = 0;
        for (size_t k = 0; k < mult.size(); ++k)
            if (mult[k]) mask |= std::uint64_t(1) << members[k];
        if (mask & ~inter) return;   // not in every U_s, s < t
        if (!(mask & ~uni)) return;  // inside the union class, so not in S_t
        std::vector<Representation> parts;
        for (size_t k = 0; k < mult.size(); ++k)
            for (int c = 0; c < mult[k]; ++c) parts.push_back(model.indecs[members[k]]);
        Representation M = direct_sum(model.alg, parts);
        TorsionDecomposition td = torsion_subobject(ctx, tors, M);
        NCokernel v = m_coresolution(ctx, mcat, td.fM, n).tail;
        std::vector<Decomposition> rec = ncok_record(ctx, v);
        if (!out.contains_record(rec)) out.records.push_back(std::move(rec));
    });
    return out;
}

// ---- The induced ambient chain T(δ) ----

// Applies T(-) valuewise and asserts that T commutes with the cut unions and
// intersections over every breakpoint.
inline StepChain induced_chain(TorsionContext& ctx, const StepChain& delta, const Subcat& mcat,
                               int n) {
    StepChain out;
    out.model = delta.model;
    out.name = "T(" + delta.name + ")";
    out.breaks = delta.breaks;
    for (std::uint64_t cls : delta.classes)
        out.classes.push_back(embed_T(ctx, subcat(ctx.model(), cls), mcat, n).mask);
    validate_torsion_chain(ctx, out);
    for (const Rational& s : delta.breaks) {
        if (s < Rational(1)) {
            std::uint64_t lhs = minimal_torsion_class(ctx, subcat(ctx.model(), delta.cut_union_mask(s))).mask;
            if (lhs != out.cut_union_mask(s))
                throw CheckError("T(-) does not commute with the cut union at s = " + s.str());
        }
        if (s > Rational(0)) {
            std::uint64_t lhs =
                minimal_torsion_class(ctx, subcat(ctx.model(), delta.cut_intersection_mask(s))).mask;
            if (lhs != out.cut_intersection_mask(s))
                throw CheckError("T(-) does not commute with the cut intersection at s = " + s.str());
        }
    }
    return out;
}

// ---- Comparison of the two HN pipelines ----

struct CompareReport {
    bool ok = true;
    std::string detail;
    NHNFilt higher;
    HNFilt ambient;
};

// Runs the n-HN filtration from δ and the abelian HN filtration from T(δ)
// and checks equal lengths, pairwise isomorphic steps and equal labels.
inline CompareReport compare_hn(TorsionContext& ctx, const Representation& M,
                                const StepChain& delta, const Subcat& mcat, int n) {
    CompareReport rep;
    rep.higher = n_hn_filtration(ctx, M, delta, mcat, n);
    StepChain ambient_chain = induced_chain(ctx, delta, mcat, n);
    rep.ambient = hn_filtration_abelian(ctx, M, ambient_chain);
    if (rep.higher.steps.size() != rep.ambient.steps.size()) {
        rep.ok = false;
        rep.detail = "filtration lengths differ";
        return rep;
    }
    for (size_t i = 0; i < rep.higher.steps.size(); ++i) {
        if (rep.higher.steps[i].label != rep.ambient.labels[i]) {
            rep.ok = false;
            rep.detail = "labels differ at step " + std::to_string(i + 1);
            return rep;
        }
        if (!is_isomorphic(rep.higher.steps[i].module, rep.ambient.steps[i], ctx.model())) {
            rep.ok = false;
            rep.detail = "steps not isomorphic at step " + std::to_string(i + 1);
            return rep;
        }
    }
    rep.detail = "filtrations agree";
    return rep;
}

}  // namespace qtors

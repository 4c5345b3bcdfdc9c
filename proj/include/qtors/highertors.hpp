#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qtors/torsion.hpp"

namespace qtors {

// ---- n-cluster-tilting recognition ----

struct ClusterTiltReport {
    bool ok = true;
    std::string detail;
};

// Checks that S is n-cluster-tilting: Ext^{1..n-1} vanishes inside S, S is
// generating and cogenerating, and S is Ext-maximal in both arguments.
// Functorial finiteness holds automatically in a representation-finite model
// and is not computed.
inline ClusterTiltReport is_n_cluster_tilting(TorsionContext& ctx, const Subcat& S, int n) {
    if (n < 1) throw InputError("n must be >= 1");
    const ModuleCategoryModel& m = ctx.model();
    ClusterTiltReport rep;
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.detail = std::move(why);
        return rep;
    };
    std::vector<int> mem = S.members();
    for (int x : mem)
        for (int y : mem)
            for (int i = 1; i < n; ++i)
                if (ctx.ext().ext_indec(i, x, y) != 0)
                    return fail("Ext^" + std::to_string(i) + "(" + m.names[x] + "," + m.names[y] +
                                ") != 0 inside the subcategory");
    if (fac_closure(ctx, S).mask != m.all_mask()) return fail("subcategory is not generating");
    if (sub_closure(ctx, S).mask != m.all_mask()) return fail("subcategory is not cogenerating");
    for (int z = 0; z < m.size(); ++z) {
        if (S.contains_index(z)) continue;
        bool left = false, right = false;  // z fails the defining equalities
        for (int i = 1; i < n && !(left && right); ++i)
            for (int x : mem) {
                if (ctx.ext().ext_indec(i, z, x) != 0) left = true;
                if (ctx.ext().ext_indec(i, x, z) != 0) right = true;
            }
        if (!left)
            return fail("outsider " + m.names[z] + " has Ext^i(-, S) = 0 for 1 <= i < n");
        if (!right)
            return fail("outsider " + m.names[z] + " has Ext^i(S, -) = 0 for 1 <= i < n");
    }
    rep.detail = "n-cluster-tilting";
    return rep;
}

// ---- Coresolutions by left approximations ----

// V^1 -> V^2 -> ... -> V^n with maps between consecutive terms; an exact
// sequence 0 -> C -> V^1 -> ... -> V^n -> 0 once prefixed with `start`.
struct NCokernel {
    std::vector<Representation> terms;
    std::vector<Morphism> maps;  // maps[i]: terms[i] -> terms[i+1]
};

namespace detail {

// Canonical left add(S)-approximation of C: one summand X_j per basis
// morphism C -> X_j, then greedy removal of summands that keep the map mono
// and keep the approximation property.
inline Morphism minimal_left_approximation(TorsionContext& ctx, const Subcat& S,
                                           const Representation& C) {
    const ModuleCategoryModel& m = ctx.model();
    const AlgebraPtr& alg = m.alg;
    struct Copy {
        int indec;
        Morphism map;  // C -> X_indec
    };
    std::vector<Copy> copies;
    for (int j : S.members())
        for (const Morphism& f : hom_basis(C, m.indecs[j])) copies.push_back({j, f});

    auto assemble = [&](const std::vector<Copy>& cs) {
        std::vector<Representation> parts;
        for (const Copy& c : cs) parts.push_back(m.indecs[c.indec]);
        DirectSum ds = direct_sum_with_maps(alg, parts);
        Morphism phi = Morphism::zero(C, ds.sum);
        for (size_t k = 0; k < cs.size(); ++k) {
            Morphism leg = compose(ds.inject[k], cs[k].map);
            for (size_t v = 0; v < phi.maps.size(); ++v) phi.maps[v] = phi.maps[v] + leg.maps[v];
        }
        return phi;
    };
    auto is_approximation = [&](const Morphism& phi) {
        // every basis morphism C -> X_j must factor through phi
        for (int j : S.members()) {
            std::vector<Morphism> target_homs = hom_basis(phi.tgt, m.indecs[j]);
            if (target_homs.empty() && !hom_basis(C, m.indecs[j]).empty()) return false;
            std::vector<Morphism> source_homs = hom_basis(C, m.indecs[j]);
            if (source_homs.empty()) continue;
            // matrix of (- ∘ phi) : Hom(V, X_j) -> Hom(C, X_j) in entry coordinates
            int clen = 0;
            for (int v = 1; v <= alg->vertices(); ++v)
                clen += m.indecs[j].dim_at(v) * C.dim_at(v);
            auto coords = [&](const Morphism& f) {
                Mat c(clen, 1, alg->p);
                int pos = 0;
                for (const Mat& mm : f.maps)
                    for (int r = 0; r < mm.rows(); ++r)
                        for (int cc = 0; cc < mm.cols(); ++cc) c.at(pos++, 0) = mm.at(r, cc);
                return c;
            };
            Mat img(clen, static_cast<int>(target_homs.size()), alg->p);
            for (size_t t = 0; t < target_homs.size(); ++t) {
                Mat c = coords(compose(target_homs[t], phi));
                for (int r = 0; r < clen; ++r) img.at(r, static_cast<int>(t)) = c.at(r, 0);
            }
            for (const Morphism& f : source_homs)
                if (!img.solve(coords(f))) return false;
        }
        return true;
    };

    Morphism phi = assemble(copies);
    if (!phi.is_mono())
        throw CheckError("left approximation is not injective (subcategory not cogenerating?)");
    // greedy minimization, deterministic scan order
    bool dropped = true;
    while (dropped) {
        dropped = false;
        for (size_t k = 0; k < copies.size(); ++k) {
            std::vector<Copy> cand = copies;
            cand.erase(cand.begin() + static_cast<long>(k));
            Morphism cphi = assemble(cand);
            if (cphi.is_mono() && is_approximation(cphi)) {
                copies = std::move(cand);
                phi = std::move(cphi);
                dropped = true;
                break;
            }
        }
    }
    return phi;
}

}  // namespace detail

// Exact coresolution 0 -> C -> V^1 -> ... -> V^n -> 0 with V^i in add(mcat),
// built from iterated minimal left approximations.  The leading map C -> V^1
// is returned separately from the V-sequence.
struct Coresolution {
    Morphism start;  // C -> V^1 (mono); for C = 0 the terms are all zero
    NCokernel tail;
};

inline Coresolution m_coresolution(TorsionContext& ctx, const Subcat& mcat,
                                   const Representation& C, int n) {
    const ModuleCategoryModel& m = ctx.model();
    const AlgebraPtr& alg = m.alg;
    Coresolution out;
    if (C.is_zero()) {
        out.start = Morphism::zero(C, Representation::zero(alg));
        out.tail.terms.assign(n, Representation::zero(alg));
        for (int i = 0; i + 1 < n; ++i)
            out.tail.maps.push_back(Morphism::zero(Representation::zero(alg), Representation::zero(alg)));
        return out;
    }
    Representation cur = C;
    std::vector<Morphism> links;  // C^i -> V^{i+1}
    for (int step = 0; step < n; ++step) {
        Morphism phi = detail::minimal_left_approximation(ctx, mcat, cur);
        links.push_back(phi);
        Factorization f = morphism_factorization(phi);
        cur = f.cokernel;
        if (cur.is_zero()) {
            for (int rest = step + 1; rest < n; ++rest)
                links.push_back(Morphism::zero(Representation::zero(alg), Representation::zero(alg)));
            break;
        }
        if (step + 1 == n)
            throw CheckError("coresolution did not terminate in " + std::to_string(n) +
                             " steps; subcategory not n-cluster-tilting?");
    }
    out.start = links[0];
    for (int i = 0; i < n; ++i) out.tail.terms.push_back(links[static_cast<size_t>(i)].tgt);
    // maps V^i -> V^{i+1}: V^i ->> C^i -> V^{i+1}
    for (int i = 0; i + 1 < n; ++i) {
        Factorization f = morphism_factorization(links[static_cast<size_t>(i)]);
        if (links[static_cast<size_t>(i) + 1].src.is_zero()) {
            out.tail.maps.push_back(Morphism::zero(out.tail.terms[i], out.tail.terms[i + 1]));
        } else {
            // factor the projection to the cokernel through the next approximation
            out.tail.maps.push_back(compose(links[static_cast<size_t>(i) + 1], f.cok_proj));
        }
    }
    // exactness audit of the full complex
    for (size_t i = 0; i < out.tail.maps.size(); ++i) {
        const Morphism& d = out.tail.maps[i];
        const Morphism& before = i == 0 ? out.start : out.tail.maps[i - 1];
        if (!compose(d, before).is_zero()) throw CheckError("coresolution composite nonzero");
        Factorization fa = morphism_factorization(before);
        Factorization fb = morphism_factorization(d);
        if (fa.image.dims != fb.kernel.dims) throw CheckError("coresolution not exact");
    }
    if (!out.tail.terms.empty()) {
        const Morphism& last = out.tail.maps.empty() ? out.start : out.tail.maps.back();
        if (!morphism_factorization(last).cokernel.is_zero())
            throw CheckError("coresolution does not end exactly");
    }
    return out;
}

// Hom-exactness of 0 -> Hom(U, V^1) -> ... -> Hom(U, V^n) -> 0 for every
// member U of the subcategory.
inline bool hom_sequence_exact(TorsionContext& ctx, const Subcat& U, const NCokernel& v) {
    const ModuleCategoryModel& m = ctx.model();
    for (int u : U.members()) {
        const Representation& X = m.indecs[u];
        std::vector<std::vector<Morphism>> bases;
        for (const Representation& t : v.terms) bases.push_back(hom_basis(X, t));
        int prev_rank = 0;
        for (size_t i = 0; i + 1 < v.terms.size(); ++i) {
            // induced map Hom(X, V^i) -> Hom(X, V^{i+1}), g -> v.maps[i] ∘ g
            std::vector<Morphism> images;
            for (const Morphism& g : bases[i]) images.push_back(compose(v.maps[i], g));
            Mat d = detail::express_in_basis(bases[i + 1], images, m.alg->p);
            int ker = d.cols() - d.rank();
            if (ker != prev_rank) return false;  // exactness at position i
            prev_rank = d.rank();
        }
        int last_dim = static_cast<int>(bases.back().size());
        if (prev_rank != last_dim) return false;  // surjectivity at the end
    }
    return true;
}

// ---- Canonical n-exact sequences and n-torsion recognition ----

struct NExactSeq {
    Representation sub;  // U^M = tM
    Morphism incl;       // U^M -> M
    Representation mid;  // M
    Morphism to_v1;      // M -> V^1
    NCokernel cok;       // V^1 ... V^n
};

struct NTorsionVerdict {
    bool ok = false;
    int failed_condition = 0;  // 1, 2 or 3 when !ok
    std::string detail;
    Subcat torsion_class;          // T(U)
    std::vector<Decomposition> t_parts, f_parts;  // per mcat member, in member order
};

namespace detail {

// tM and fM for every member of mcat with respect to a torsion class T.
inline void torsion_parts(TorsionContext& ctx, const Subcat& T, const Subcat& mcat,
                          std::vector<Decomposition>& t_parts, std::vector<Decomposition>& f_parts) {
    for (int j : mcat.members()) {
        const auto& parts = torsion_parts_indec(ctx, T, j);
        t_parts.push_back(parts.first);
        f_parts.push_back(parts.second);
    }
}

}  // namespace detail

// Recognition through the characterisation of minimal torsion classes over an
// n-torsion class: with T = T(U), checks
//   (1) tM lies in add U for every M in mcat,
//   (2) T is the minimal torsion class over {tM},
//   (3) Ext^{n-1}(X, Y) = 0 for X in {tM}, Y in {fM},
// and when accepted asserts U = T ∩ mcat = add{tM}.
inline NTorsionVerdict is_n_torsion_class_criterion(TorsionContext& ctx, const Subcat& U,
                                                    const Subcat& mcat, int n) {
    if (!U.subset_of(mcat)) throw InputError("candidate n-torsion class must lie inside mcat");
    const ModuleCategoryModel& m = ctx.model();
    NTorsionVerdict v;
    v.torsion_class = minimal_torsion_class(ctx, U);
    detail::torsion_parts(ctx, v.torsion_class, mcat, v.t_parts, v.f_parts);
    std::vector<int> mem = mcat.members();

    std::uint64_t t_mask = 0;
    for (const Decomposition& d : v.t_parts) t_mask |= d.mask();
    for (size_t k = 0; k < mem.size(); ++k)
        if (v.t_parts[k].mask() & ~U.mask) {
            v.failed_condition = 1;
            v.detail = "t(" + m.names[mem[k]] + ") = " + object_name(v.t_parts[k], m) +
                       " is not in add U";
            return v;
        }
    if (minimal_torsion_class(ctx, subcat(m, t_mask)).mask != v.torsion_class.mask) {
        v.failed_condition = 2;
        v.detail = "T(U) differs from the minimal torsion class over {tM}";
        return v;
    }
    for (size_t a = 0; a < mem.size(); ++a)
        for (size_t b = 0; b < mem.size(); ++b) {
            if (ctx.ext().ext(n - 1, v.t_parts[a], v.f_parts[b]) != 0) {
                v.failed_condition = 3;
                v.detail = "Ext^" + std::to_string(n - 1) + "(" + object_name(v.t_parts[a], m) +
                           ", " + object_name(v.f_parts[b], m) + ") != 0";
                return v;
            }
        }
    // accepted: U = T ∩ mcat = add{tM}
    if ((v.torsion_class.mask & mcat.mask) != U.mask)
        throw CheckError("accepted n-torsion class violates U = T(U) ∩ mcat");
    if (t_mask != U.mask) throw CheckError("accepted n-torsion class violates U = add{tM}");
    v.ok = true;
    v.detail = "n-torsion class";
    return v;
}

// Recognition of a torsion class T in the ambient category as T = T(U): the
// same three conditions, with U recovered as T ∩ mcat.
struct TorsRecognition {
    bool ok = false;
    int failed_condition = 0;
    std::string detail;
    Subcat t_set;  // add{tM}
    Subcat u;      // T ∩ mcat
};

inline TorsRecognition recognize_torsion_class(TorsionContext& ctx, const Subcat& T,
                                               const Subcat& mcat, int n) {
    if (!is_torsion_class(ctx, T)) throw InputError("input is not a torsion class");
    const ModuleCategoryModel& m = ctx.model();
    TorsRecognition r;
    r.u = subcat(m, T.mask & mcat.mask);
    std::vector<Decomposition> t_parts, f_parts;
    detail::torsion_parts(ctx, T, mcat, t_parts, f_parts);
    std::vector<int> mem = mcat.members();
    std::uint64_t t_mask = 0;
    for (const Decomposition& d : t_parts) t_mask |= d.mask();
    r.t_set = subcat(m, t_mask);
    for (size_t k = 0; k < mem.size(); ++k)
        if (t_parts[k].mask() & ~mcat.mask) {
            r.failed_condition = 1;
            r.detail = "t(" + m.names[mem[k]] + ") leaves mcat";
            return r;
        }
    if (minimal_torsion_class(ctx, r.t_set).mask != T.mask) {
        r.failed_condition = 2;
        r.detail = "T != T({tM}) with {tM} = " +
                   std::to_string(r.t_set.member_count()) + " members";
        return r;
    }
    for (size_t a = 0; a < mem.size(); ++a)
        for (size_t b = 0; b < mem.size(); ++b)
            if (ctx.ext().ext(n - 1, t_parts[a], f_parts[b]) != 0) {
                r.failed_condition = 3;
                r.detail = "Ext^" + std::to_string(n - 1) + "(" + object_name(t_parts[a], m) + ", " +
                           object_name(f_parts[b], m) + ") != 0";
                return r;
            }
    r.ok = true;
    return r;
}

// Canonical n-exact sequence 0 -> tM -> M -> V^1 -> ... -> V^n -> 0 of M with
// respect to the n-torsion class U.
inline NExactSeq canonical_n_exact_sequence(TorsionContext& ctx, const Subcat& U,
                                            const Subcat& mcat, const Representation& M, int n) {
    NExactSeq seq;
    seq.mid = M;
    TorsionDecomposition td = torsion_subobject(ctx, minimal_torsion_class(ctx, U), M);
    seq.sub = td.tM;
    seq.incl = td.incl;
    Coresolution c = m_coresolution(ctx, mcat, td.fM, n);
    seq.to_v1 = c.start.src.is_zero() ? Morphism::zero(M, c.start.tgt)
                                      : compose(c.start, td.proj);
    seq.cok = c.tail;
    if (!hom_sequence_exact(ctx, U, seq.cok))
        throw CheckError("canonical n-exact sequence fails Hom-exactness");
    return seq;
}

// Brute-force oracle straight from the definition: for each member M of mcat
// search the submodules of M for one in add U whose quotient coresolution is
// Hom-exact against all of U.
inline bool is_n_torsion_class_direct(TorsionContext& ctx, const Subcat& U, const Subcat& mcat,
                                      int n) {
    if (!U.subset_of(mcat)) throw InputError("candidate n-torsion class must lie inside mcat");
    const ModuleCategoryModel& m = ctx.model();
    for (int j : mcat.members()) {
        bool found = false;
        for (const auto& info : m.submodule_table(j)) {
            if (info.sub.mask() & ~U.mask) continue;
            Representation quot = morphism_factorization(info.incl).cokernel;
            NCokernel v;
            try {
                v = m_coresolution(ctx, mcat, quot, n).tail;
            } catch (const CheckError&) {
                continue;  // coresolution fails to terminate for this submodule
            }
            if (hom_sequence_exact(ctx, U, v)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

// All additive subsets of mcat passing the criterion, sorted by size then
// lexicographically; always includes mcat and the zero class.
inline std::vector<Subcat> enumerate_n_torsion_classes(TorsionContext& ctx, const Subcat& mcat,
                                                       int n) {
    const ModuleCategoryModel& m = ctx.model();
    std::vector<int> mem = mcat.members();
    if (static_cast<int>(mem.size()) > m.bounds.enum_bound)
        throw BoundError("n-torsion enumeration exceeds the subset bound");
    std::vector<Subcat> out;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << mem.size()); ++code) {
        std::uint64_t mask = 0;
        for (size_t i = 0; i < mem.size(); ++i)
            if ((code >> i) & 1) mask |= std::uint64_t(1) << mem[i];
        Subcat u = subcat(m, mask);
        if (is_n_torsion_class_criterion(ctx, u, mcat, n).ok) out.push_back(u);
    }
    std::sort(out.begin(), out.end(), [](const Subcat& a, const Subcat& b) {
        if (a.member_count() != b.member_count()) return a.member_count() < b.member_count();
        return a.members() < b.members();
    });
    bool has_all = false, has_none = false;
    for (const Subcat& u : out) {
        if (u.mask == mcat.mask) has_all = true;
        if (u.mask == 0) has_none = true;
    }
    if (!has_all || !has_none)
        throw CheckError("n-torsion enumeration misses mcat or the zero class");
    return out;
}

// The unique inclusion-minimal enumerated n-torsion class containing X.
// Intersections of n-torsion classes are not known to be n-torsion classes,
// so non-uniqueness is reported rather than resolved.
inline Subcat minimal_n_torsion_class_containing(TorsionContext& ctx, const Subcat& X,
                                                 const Subcat& mcat, int n) {
    std::vector<Subcat> all = enumerate_n_torsion_classes(ctx, mcat, n);
    std::vector<Subcat> over;
    for (const Subcat& u : all)
        if (X.subset_of(u)) over.push_back(u);
    std::vector<Subcat> minimal;
    for (const Subcat& u : over) {
        bool min = true;
        for (const Subcat& w : over)
            if (w.mask != u.mask && w.subset_of(u)) min = false;
        if (min) minimal.push_back(u);
    }
    if (minimal.size() != 1)
        throw CheckError("no unique minimal n-torsion class containing the given subcategory (" +
                         std::to_string(minimal.size()) + " minimal candidates)");
    return minimal[0];
}

// T(-): the poset embedding of n-torsion classes into torsion classes.
inline Subcat embed_T(TorsionContext& ctx, const Subcat& U, const Subcat& mcat, int n) {
    if (!is_n_torsion_class_criterion(ctx, U, mcat, n).ok)
        throw InputError("embed_T requires an n-torsion class");
    return minimal_torsion_class(ctx, U);
}

}  // namespace qtors

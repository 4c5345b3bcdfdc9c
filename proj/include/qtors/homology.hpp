#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "qtors/model.hpp"
#include "qtors/rep.hpp"

namespace qtors {

struct RadTop {
    Representation rad;
    Morphism rad_incl;   // rad M -> M
    Representation top;
    Morphism top_proj;   // M -> top M
};

// rad M at v = sum of images of all arrows into v; top = M / rad M.
inline RadTop radical_and_top(const Representation& M) {
    const AlgebraPtr& alg = M.alg;
    int V = alg->vertices();
    std::vector<Mat> rbasis;
    for (int v = 1; v <= V; ++v) {
        Mat acc(M.dim_at(v), 0, alg->p);
        for (int a = 0; a < alg->arrow_count(); ++a)
            if (alg->arrow(a).tgt == v) acc = acc.hcat(M.arrow_maps[a]);
        rbasis.push_back(col_space_basis(acc));
    }
    RadTop out;
    out.rad_incl = subrep_from_subspaces(M, rbasis);
    out.rad = out.rad_incl.src;
    Factorization f = morphism_factorization(out.rad_incl);
    out.top = f.cokernel;
    out.top_proj = f.cok_proj;
    return out;
}

// Projective cover P -> M: P = ⊕_v P(v)^{dim top(M)_v}, the epi lifting a
// section of the top projection through path action.
inline Morphism projective_cover(const Representation& M) {
    const AlgebraPtr& alg = M.alg;
    int V = alg->vertices();
    if (M.is_zero()) return Morphism::zero(Representation::zero(alg), M);

    RadTop rt = radical_and_top(M);
    // choose generators of M: preimages of a basis of top M
    // top_proj maps[v] is epi; pick a right inverse on each vertex
    std::vector<Representation> parts;
    std::vector<Mat> generators;  // one column per cover summand, in M(v)
    std::vector<int> gen_vertex;
    for (int v = 1; v <= V; ++v) {
        int t = rt.top.dim_at(v);
        if (t == 0) continue;
        auto sect = rt.top_proj.at(v).solve(Mat::identity(t, alg->p));
        if (!sect) throw CheckError("top projection not split at a vertex");
        for (int j = 0; j < t; ++j) {
            parts.push_back(projective_module(alg, v));
            generators.push_back(sect->col(j));
            gen_vertex.push_back(v);
        }
    }
    DirectSum ds = direct_sum_with_maps(alg, parts);

    // map each P(v) summand by sending the basis path q (v -> w) to M(q) * gen
    std::vector<Mat> maps;
    for (int v = 1; v <= V; ++v) maps.emplace_back(M.dim_at(v), ds.sum.dim_at(v), alg->p);
    for (size_t k = 0; k < parts.size(); ++k) {
        std::vector<Path> paths = alg->paths_from(gen_vertex[k]);
        // column index of each path inside its vertex fibre of P(v), in path order
        std::vector<int> fibre_pos(alg->vertices(), 0);
        for (const Path& q : paths) {
            int w = alg->path_end(q);
            Mat img = M.path_matrix(q) * generators[k];  // column in M(w)
            // column of this basis element inside the sum at vertex w
            int col = 0;
            {
                // offset of part k at vertex w plus position within the part
                // position = index of q among paths ending at w
                int pos = fibre_pos[w - 1]++;
                // recompute the offset from the injection morphism
                const Mat& inj = ds.inject[k].at(w);
                for (int r = 0; r < inj.rows(); ++r)
                    if (inj.at(r, pos) == 1) {
                        col = r;
                        break;
                    }
            }
            for (int r = 0; r < M.dim_at(w); ++r) maps[w - 1].at(r, col) = img.at(r, 0);
        }
    }
    Morphism cover(ds.sum, M, std::move(maps));
    if (!cover.is_epi()) throw CheckError("projective cover is not surjective");
    return cover;
}

// Minimal projective resolution, extended lazily:
//   ... -> terms[1] -> terms[0] -> target -> 0
struct MinResolution {
    Representation target;
    std::vector<Representation> terms;
    std::vector<Morphism> maps;      // maps[0]: terms[0] -> target, maps[i]: terms[i] -> terms[i-1]
    std::vector<Representation> syzygy;
    std::vector<Morphism> syzygy_incl;  // syzygy[i] -> terms[i]

    void extend_to(int length) {
        while (static_cast<int>(terms.size()) <= length) {
            if (terms.empty()) {
                Morphism cover = projective_cover(target);
                Factorization f = morphism_factorization(cover);
                terms.push_back(cover.src);
                maps.push_back(cover);
                syzygy.push_back(f.kernel);
                syzygy_incl.push_back(f.ker_incl);
            } else {
                Morphism cover = projective_cover(syzygy.back());
                Morphism d = compose(syzygy_incl.back(), cover);
                Factorization f = morphism_factorization(cover);
                terms.push_back(cover.src);
                maps.push_back(d);
                syzygy.push_back(f.kernel);
                // kernel of the cover equals kernel of d since syzygy_incl is mono
                syzygy_incl.push_back(f.ker_incl);
            }
        }
    }
};

class ResolutionStore {
public:
    MinResolution& get(const Representation& M) {
        std::string k = M.key();
        auto it = cache_.find(k);
        if (it == cache_.end()) {
            auto res = std::make_unique<MinResolution>();
            res->target = M;
            it = cache_.emplace(std::move(k), std::move(res)).first;
        }
        return *it->second;
    }

private:
    std::map<std::string, std::unique_ptr<MinResolution>> cache_;
};

namespace detail {

inline Mat morphism_coords(const Morphism& f, std::uint32_t p) {
    int len = 0;
    for (const Mat& m : f.maps) len += m.rows() * m.cols();
    Mat c(len, 1, p);
    int pos = 0;
    for (const Mat& m : f.maps)
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) c.at(pos++, 0) = m.at(i, j);
    return c;
}

// Coordinates of `images` in the given hom basis; throws if one of them is
// not in the span.
inline Mat express_in_basis(const std::vector<Morphism>& to_basis,
                            const std::vector<Morphism>& images, std::uint32_t p) {
    int dim_to = static_cast<int>(to_basis.size());
    int len = dim_to > 0 ? morphism_coords(to_basis[0], p).rows() : 0;
    if (dim_to == 0 && !images.empty()) len = morphism_coords(images[0], p).rows();
    Mat basis_mat(len, dim_to, p);
    for (int j = 0; j < dim_to; ++j) {
        Mat c = morphism_coords(to_basis[j], p);
        for (int i = 0; i < len; ++i) basis_mat.at(i, j) = c.at(i, 0);
    }
    Mat out(dim_to, static_cast<int>(images.size()), p);
    for (size_t j = 0; j < images.size(); ++j) {
        auto sol = basis_mat.solve(morphism_coords(images[j], p));
        if (!sol) throw CheckError("morphism not expressible in hom basis");
        for (int i = 0; i < dim_to; ++i) out.at(i, static_cast<int>(j)) = sol->at(i, 0);
    }
    return out;
}

// Matrix of Hom(P_i, N) -> Hom(P_{i+1}, N), f -> f∘d, in the hom_basis bases.
inline Mat hom_complex_map(const std::vector<Morphism>& from_basis,
                           const std::vector<Morphism>& to_basis, const Morphism& d,
                           std::uint32_t p) {
    std::vector<Morphism> images;
    for (const Morphism& f : from_basis) images.push_back(compose(f, d));
    return express_in_basis(to_basis, images, p);
}

inline int ext_from_resolution(MinResolution& res, int i, const Representation& N) {
    res.extend_to(i + 1);
    std::vector<Morphism> hom_i = hom_basis(res.terms[i], N);
    std::vector<Morphism> hom_next = hom_basis(res.terms[i + 1], N);
    Mat delta_i = hom_complex_map(hom_i, hom_next, res.maps[i + 1], N.alg->p);
    int ker = delta_i.cols() - delta_i.rank();
    if (i == 0) return ker;  // H^0 = Hom(M, N)
    std::vector<Morphism> hom_prev = hom_basis(res.terms[i - 1], N);
    Mat delta_prev = hom_complex_map(hom_prev, hom_i, res.maps[i], N.alg->p);
    return ker - delta_prev.rank();
}

}  // namespace detail

// dim Ext^i(M, N) from a fresh minimal resolution of M.
inline int ext_dim(int i, const Representation& M, const Representation& N) {
    if (i < 0) throw InputError("ext_dim needs i >= 0");
    if (M.is_zero() || N.is_zero()) return 0;
    MinResolution res;
    res.target = M;
    return detail::ext_from_resolution(res, i, N);
}

inline int ext_dim(int i, const Representation& M, const Representation& N,
                   ResolutionStore& store) {
    if (i < 0) throw InputError("ext_dim needs i >= 0");
    if (M.is_zero() || N.is_zero()) return 0;
    return detail::ext_from_resolution(store.get(M), i, N);
}

// Ext dimensions against a fixed model, cached per (degree, indec, indec) and
// extended to arbitrary objects by additivity.
class ExtCache {
public:
    explicit ExtCache(const ModuleCategoryModel& model) : model_(&model) {}

    const ModuleCategoryModel& model() const { return *model_; }

    int ext_indec(int i, int a, int b) {
        if (i == 0) return model_->hom_mat[a][b];
        auto key = std::make_tuple(i, a, b);
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
        int val = detail::ext_from_resolution(store_.get(model_->indecs[a]), i, model_->indecs[b]);
        table_[key] = val;
        return val;
    }

    int ext(int i, const Decomposition& A, const Decomposition& B) {
        int s = 0;
        for (auto [a, ka] : A.parts)
            for (auto [b, kb] : B.parts) s += ka * kb * ext_indec(i, a, b);
        return s;
    }

    int ext(int i, const Representation& A, const Representation& B) {
        return ext(i, decompose(A, *model_), decompose(B, *model_));
    }

private:
    const ModuleCategoryModel* model_;
    ResolutionStore store_;
    std::map<std::tuple<int, int, int>, int> table_;
};

// ---- Extensions 0 -> A -> E -> B -> 0 ----

struct ExtensionClasses {
    Representation sub, quot;
    int ext1_dim = 0;
    struct Item {
        Representation mid;
        Morphism incl;  // A -> E
        Morphism proj;  // E -> B
        Decomposition dec;
    };
    std::vector<Item> middles;  // deduplicated up to isomorphism; split class first
};

// Enumerates all p^d classes in Ext^1(B, A) as cocycles ΩB -> A modulo those
// factoring through P_0(B), realizes each middle term as the pushout of
// ΩB -> P_0 along the cocycle, and deduplicates by isomorphism.
inline ExtensionClasses extension_middle_terms(const Representation& A, const Representation& B,
                                               const ModuleCategoryModel& model) {
    const AlgebraPtr& alg = A.alg;
    std::uint32_t p = alg->p;
    ExtensionClasses out;
    out.sub = A;
    out.quot = B;

    Morphism cover = projective_cover(B);
    Factorization cf = morphism_factorization(cover);
    const Representation& omega = cf.kernel;
    const Morphism& omega_incl = cf.ker_incl;  // ΩB -> P0

    std::vector<Morphism> cocycles = hom_basis(omega, A);
    std::vector<Morphism> liftable = hom_basis(cover.src, A);

    // coordinates of a morphism ΩB -> A
    auto coords = [&](const Morphism& f) {
        int len = 0;
        for (const Mat& m : f.maps) len += m.rows() * m.cols();
        Mat c(len, 1, p);
        int pos = 0;
        for (const Mat& m : f.maps)
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) c.at(pos++, 0) = m.at(i, j);
        return c;
    };
    int clen = 0;
    for (int v = 1; v <= alg->vertices(); ++v) clen += A.dim_at(v) * omega.dim_at(v);
    Mat cocycle_mat(clen, static_cast<int>(cocycles.size()), p);
    for (size_t j = 0; j < cocycles.size(); ++j) {
        Mat c = coords(cocycles[j]);
        for (int i = 0; i < clen; ++i) cocycle_mat.at(i, static_cast<int>(j)) = c.at(i, 0);
    }
    Mat factoring(clen, static_cast<int>(liftable.size()), p);
    for (size_t j = 0; j < liftable.size(); ++j) {
        Mat c = coords(compose(liftable[j], omega_incl));
        for (int i = 0; i < clen; ++i) factoring.at(i, static_cast<int>(j)) = c.at(i, 0);
    }
    // Ext^1(B, A) = Hom(ΩB, A) / image of restriction
    Mat factoring_space = col_space_basis(factoring);
    int d = static_cast<int>(cocycles.size()) - factoring_space.cols();
    out.ext1_dim = d;
    if (d > model.bounds.ext_enum_bound)
        throw BoundError("dim Ext^1 = " + std::to_string(d) + " exceeds enumeration bound");

    // coset representatives: complement of the factoring subspace inside the
    // cocycle coordinate space, pulled back to combinations of basis cocycles
    std::vector<int> rep_cols;
    {
        Mat acc = factoring_space;
        for (int j = 0; j < cocycle_mat.cols(); ++j) {
            Mat cand = acc.hcat(cocycle_mat.col(j));
            if (col_space_basis(cand).cols() > acc.cols()) {
                rep_cols.push_back(j);
                acc = col_space_basis(cand);
            }
        }
    }
    if (static_cast<int>(rep_cols.size()) != d)
        throw CheckError("extension class representative count mismatch");

    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::size_t code = 0; code < count; ++code) {
        // cocycle c = sum of chosen multiples of representative cocycles
        Morphism c = Morphism::zero(omega, A);
        std::size_t rest = code;
        for (int k = 0; k < d; ++k) {
            std::uint32_t coef = static_cast<std::uint32_t>(rest % p);
            rest /= p;
            if (!coef) continue;
            const Morphism& base = cocycles[rep_cols[k]];
            for (size_t v = 0; v < c.maps.size(); ++v)
                for (int i = 0; i < c.maps[v].rows(); ++i)
                    for (int j0 = 0; j0 < c.maps[v].cols(); ++j0)
                        c.maps[v].at(i, j0) =
                            (c.maps[v].at(i, j0) + coef * base.maps[v].at(i, j0)) % p;
        }
        // pushout of ΩB -(omega_incl)-> P0 along c: E = (A ⊕ P0)/(c(x), -ι(x))
        DirectSum ap = direct_sum_with_maps(alg, {A, cover.src});
        std::vector<Mat> relmaps;
        for (int v = 1; v <= alg->vertices(); ++v) {
            Mat m(ap.sum.dim_at(v), omega.dim_at(v), p);
            const Mat& ca = c.at(v);
            const Mat& io = omega_incl.at(v);
            for (int j = 0; j < omega.dim_at(v); ++j) {
                for (int i = 0; i < A.dim_at(v); ++i) m.at(i, j) = ca.at(i, j);
                for (int i = 0; i < cover.src.dim_at(v); ++i)
                    m.at(A.dim_at(v) + i, j) = (p - io.at(i, j)) % p;
            }
            relmaps.push_back(std::move(m));
        }
        Morphism rel(omega, ap.sum, std::move(relmaps));
        Factorization rf = morphism_factorization(rel);
        ExtensionClasses::Item item;
        item.mid = rf.cokernel;
        item.incl = compose(rf.cok_proj, ap.inject[0]);
        // E -> B via projecting to P0 and applying the cover; factors through
        // the quotient because the relations die under (0, cover)
        Morphism to_b = compose(cover, ap.project[1]);
        std::vector<Mat> proj_maps;
        for (int v = 1; v <= alg->vertices(); ++v) {
            // cok_proj has a right inverse; solve q * X = id then X gives section
            auto section = rf.cok_proj.at(v).solve(Mat::identity(rf.cokernel.dim_at(v), p));
            if (!section) throw CheckError("cokernel projection not split at a vertex");
            proj_maps.push_back(to_b.at(v) * *section);
        }
        item.proj = Morphism(rf.cokernel, B, std::move(proj_maps));
        // verify the short exact sequence
        if (!item.incl.is_mono() || !item.proj.is_epi())
            throw CheckError("extension middle term: maps not mono/epi");
        if (!compose(item.proj, item.incl).is_zero())
            throw CheckError("extension middle term: composite nonzero");
        if (item.mid.total_dim() != A.total_dim() + B.total_dim())
            throw CheckError("extension middle term: dimension mismatch");
        Factorization chk = morphism_factorization(item.proj);
        if (!is_isomorphic(chk.kernel, A, model))
            throw CheckError("extension middle term: kernel of projection is not the subobject");
        item.dec = decompose(item.mid, model);
        bool seen = false;
        for (const auto& prev : out.middles)
            if (prev.dec == item.dec) seen = true;
        if (!seen) out.middles.push_back(std::move(item));
    }
    return out;
}

}  // namespace qtors

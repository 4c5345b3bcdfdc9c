#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtors/matrix.hpp"
#include "qtors/quiver.hpp"

namespace qtors {

// Finite-dimensional module over a bound quiver algebra in the
// matrices-per-arrow model: a space F_p^{dims[v]} per vertex and a matrix
// M(a) : M(src) -> M(tgt) per arrow, annihilating every relation.
class Representation {
public:
    AlgebraPtr alg;
    std::vector<int> dims;       // per vertex, index v-1
    std::vector<Mat> arrow_maps; // per arrow, shape dims[tgt] x dims[src]

    Representation() = default;
    Representation(AlgebraPtr a, std::vector<int> d, std::vector<Mat> maps)
        : alg(std::move(a)), dims(std::move(d)), arrow_maps(std::move(maps)) {
        check();
    }

    static Representation zero(const AlgebraPtr& a) {
        std::vector<int> d(a->vertices(), 0);
        std::vector<Mat> maps;
        for (int i = 0; i < a->arrow_count(); ++i) maps.emplace_back(0, 0, a->p);
        return Representation(a, std::move(d), std::move(maps));
    }

    int dim_at(int v) const { return dims[v - 1]; }
    int total_dim() const {
        int s = 0;
        for (int d : dims) s += d;
        return s;
    }
    bool is_zero() const { return total_dim() == 0; }

    // Matrix of the path action M(end) <- M(start); trivial path gives the identity.
    Mat path_matrix(const Path& q) const {
        Mat m = Mat::identity(dim_at(q.start), alg->p);
        for (int a : q.arrows) m = arrow_maps[a] * m;
        return m;
    }

    void check() const {
        if (!alg) throw Error("representation without algebra");
        if (static_cast<int>(dims.size()) != alg->vertices() ||
            static_cast<int>(arrow_maps.size()) != alg->arrow_count())
            throw InputError("representation shape does not match quiver");
        for (int d : dims)
            if (d < 0) throw InputError("negative dimension");
        for (int a = 0; a < alg->arrow_count(); ++a) {
            const Arrow& ar = alg->arrow(a);
            if (arrow_maps[a].rows() != dim_at(ar.tgt) || arrow_maps[a].cols() != dim_at(ar.src) ||
                arrow_maps[a].mod() != alg->p)
                throw InputError("arrow map " + ar.name + " has wrong shape or field");
        }
        for (const auto& rel : alg->relations) {
            Path q{alg->arrow(rel.front()).src, rel};
            if (!path_matrix(q).is_zero())
                throw InputError("relation does not annihilate the representation");
        }
    }

    std::string dims_string() const {
        std::string s = "(";
        for (size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
        return s + ")";
    }

    std::string key() const {
        std::string k;
        for (int d : dims) k += std::to_string(d) + ",";
        for (const Mat& m : arrow_maps) m.append_key(k);
        return k;
    }
};

inline bool same_algebra(const Representation& a, const Representation& b) {
    return a.alg.get() == b.alg.get();
}

class Morphism {
public:
    Representation src, tgt;
    std::vector<Mat> maps;  // per vertex, shape tgt.dims[v] x src.dims[v]

    Morphism() = default;
    Morphism(Representation s, Representation t, std::vector<Mat> m)
        : src(std::move(s)), tgt(std::move(t)), maps(std::move(m)) {
        check();
    }

    static Morphism zero(const Representation& s, const Representation& t) {
        std::vector<Mat> m;
        for (int v = 1; v <= s.alg->vertices(); ++v)
            m.emplace_back(t.dim_at(v), s.dim_at(v), s.alg->p);
        return Morphism(s, t, std::move(m));
    }

    static Morphism identity(const Representation& m) {
        std::vector<Mat> ms;
        for (int v = 1; v <= m.alg->vertices(); ++v)
            ms.push_back(Mat::identity(m.dim_at(v), m.alg->p));
        return Morphism(m, m, std::move(ms));
    }

    const Mat& at(int v) const { return maps[v - 1]; }

    bool is_zero() const {
        for (const Mat& m : maps)
            if (!m.is_zero()) return false;
        return true;
    }
    bool is_mono() const {
        for (size_t v = 0; v < maps.size(); ++v)
            if (maps[v].rank() != src.dims[v]) return false;
        return true;
    }
    bool is_epi() const {
        for (size_t v = 0; v < maps.size(); ++v)
            if (maps[v].rank() != tgt.dims[v]) return false;
        return true;
    }

    void check() const {
        if (!same_algebra(src, tgt)) throw InputError("morphism between different algebras");
        for (int v = 1; v <= src.alg->vertices(); ++v)
            if (at(v).rows() != tgt.dim_at(v) || at(v).cols() != src.dim_at(v))
                throw InputError("vertex map has wrong shape");
        for (int a = 0; a < src.alg->arrow_count(); ++a) {
            const Arrow& ar = src.alg->arrow(a);
            if (!(at(ar.tgt) * src.arrow_maps[a] == tgt.arrow_maps[a] * at(ar.src)))
                throw CheckError("vertex maps do not intertwine at arrow " + ar.name);
        }
    }
};

inline Morphism compose(const Morphism& g, const Morphism& f) {
    std::vector<Mat> maps;
    for (int v = 1; v <= f.src.alg->vertices(); ++v) maps.push_back(g.at(v) * f.at(v));
    return Morphism(f.src, g.tgt, std::move(maps));
}

// ---- Direct sums ----

struct DirectSum {
    Representation sum;
    std::vector<Morphism> inject;   // part -> sum
    std::vector<Morphism> project;  // sum -> part
};

inline DirectSum direct_sum_with_maps(const AlgebraPtr& alg,
                                      const std::vector<Representation>& parts) {
    for (const Representation& r : parts)
        if (r.alg.get() != alg.get()) throw InputError("direct sum over mismatched algebras");
    int V = alg->vertices();
    std::vector<int> dims(V, 0);
    std::vector<int> offset_base(parts.size(), 0);
    std::vector<std::vector<int>> offsets(parts.size(), std::vector<int>(V, 0));
    for (int v = 0; v < V; ++v) {
        int off = 0;
        for (size_t k = 0; k < parts.size(); ++k) {
            offsets[k][v] = off;
            off += parts[k].dims[v];
        }
        dims[v] = off;
    }
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        Mat m(dims[ar.tgt - 1], dims[ar.src - 1], alg->p);
        for (size_t k = 0; k < parts.size(); ++k) {
            const Mat& blk = parts[k].arrow_maps[a];
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j)
                    m.at(offsets[k][ar.tgt - 1] + i, offsets[k][ar.src - 1] + j) = blk.at(i, j);
        }
        maps.push_back(std::move(m));
    }
    DirectSum out;
    out.sum = Representation(alg, dims, std::move(maps));
    for (size_t k = 0; k < parts.size(); ++k) {
        std::vector<Mat> inj, prj;
        for (int v = 0; v < V; ++v) {
            Mat mi(dims[v], parts[k].dims[v], alg->p);
            Mat mp(parts[k].dims[v], dims[v], alg->p);
            for (int i = 0; i < parts[k].dims[v]; ++i) {
                mi.at(offsets[k][v] + i, i) = 1;
                mp.at(i, offsets[k][v] + i) = 1;
            }
            inj.push_back(std::move(mi));
            prj.push_back(std::move(mp));
        }
        out.inject.emplace_back(parts[k], out.sum, std::move(inj));
        out.project.emplace_back(out.sum, parts[k], std::move(prj));
    }
    return out;
}

inline Representation direct_sum(const AlgebraPtr& alg, const std::vector<Representation>& parts) {
    return direct_sum_with_maps(alg, parts).sum;
}

// ---- Projective modules ----

// P(v) has basis the nonzero paths starting at v; an arrow acts by path
// extension.  top P(v) = S_v.
inline Representation projective_module(const AlgebraPtr& alg, int v) {
    if (v < 1 || v > alg->vertices()) throw InputError("projective vertex out of range");
    std::vector<Path> paths = alg->paths_from(v);
    int V = alg->vertices();
    std::vector<std::vector<int>> index_at(V);  // vertex -> indices into paths
    std::vector<int> dims(V, 0);
    for (size_t i = 0; i < paths.size(); ++i) {
        int end = alg->path_end(paths[i]);
        index_at[end - 1].push_back(static_cast<int>(i));
        ++dims[end - 1];
    }
    auto find_path = [&](const Path& q) -> int {
        for (size_t i = 0; i < paths.size(); ++i)
            if (paths[i].arrows == q.arrows) return static_cast<int>(i);
        return -1;
    };
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        Mat m(dims[ar.tgt - 1], dims[ar.src - 1], alg->p);
        for (size_t col = 0; col < index_at[ar.src - 1].size(); ++col) {
            Path ext = paths[index_at[ar.src - 1][col]];
            ext.arrows.push_back(a);
            int pi = find_path(ext);
            if (pi < 0) continue;  // extension dies on a relation
            // locate the row of ext inside the target fibre
            for (size_t row = 0; row < index_at[ar.tgt - 1].size(); ++row)
                if (index_at[ar.tgt - 1][row] == pi) {
                    m.at(static_cast<int>(row), static_cast<int>(col)) = 1;
                    break;
                }
        }
        maps.push_back(std::move(m));
    }
    return Representation(alg, dims, std::move(maps));
}

inline Representation simple_module(const AlgebraPtr& alg, int v) {
    std::vector<int> dims(alg->vertices(), 0);
    dims[v - 1] = 1;
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        maps.emplace_back(dims[ar.tgt - 1], dims[ar.src - 1], alg->p);
    }
    return Representation(alg, std::move(dims), std::move(maps));
}

// ---- Hom spaces ----

namespace detail {

// The intertwining conditions as one linear system.  Unknowns are the entries
// of all vertex maps f_v (tgt.dims[v] x src.dims[v], row-major, vertices in
// order); rows are the entries of f_tgt(a)*M(a) - N(a)*f_src(a) for each arrow.
inline Mat hom_system(const Representation& M, const Representation& N) {
    if (!same_algebra(M, N)) throw InputError("hom between different algebras");
    const AlgebraPtr& alg = M.alg;
    int V = alg->vertices();
    std::vector<int> base(V + 1, 0);
    for (int v = 0; v < V; ++v) base[v + 1] = base[v] + N.dims[v] * M.dims[v];
    int unknowns = base[V];
    int eqs = 0;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        eqs += N.dim_at(ar.tgt) * M.dim_at(ar.src);
    }
    Mat sys(eqs, unknowns, alg->p);
    int row0 = 0;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        int u = ar.src - 1, w = ar.tgt - 1;
        const Mat& Ma = M.arrow_maps[a];
        const Mat& Na = N.arrow_maps[a];
        // equation (r, c): sum_k f_w[r,k]*Ma[k,c] - sum_k Na[r,k]*f_u[k,c] = 0
        for (int r = 0; r < N.dims[w]; ++r)
            for (int c = 0; c < M.dims[u]; ++c) {
                int row = row0 + r * M.dims[u] + c;
                for (int k = 0; k < M.dims[w]; ++k) {
                    int col = base[w] + r * M.dims[w] + k;
                    sys.set(row, col, static_cast<long long>(sys.at(row, col)) + Ma.at(k, c));
                }
                for (int k = 0; k < N.dims[u]; ++k) {
                    int col = base[u] + k * M.dims[u] + c;
                    sys.set(row, col, static_cast<long long>(sys.at(row, col)) - Na.at(r, k));
                }
            }
        row0 += N.dims[w] * M.dims[u];
    }
    return sys;
}

inline Morphism unpack_hom(const Representation& M, const Representation& N, const Mat& column) {
    int V = M.alg->vertices();
    std::vector<Mat> maps;
    int pos = 0;
    for (int v = 0; v < V; ++v) {
        Mat m(N.dims[v], M.dims[v], M.alg->p);
        for (int r = 0; r < N.dims[v]; ++r)
            for (int c = 0; c < M.dims[v]; ++c) m.at(r, c) = column.at(pos++, 0);
        maps.push_back(std::move(m));
    }
    return Morphism(M, N, std::move(maps));
}

}  // namespace detail

inline std::vector<Morphism> hom_basis(const Representation& M, const Representation& N) {
    Mat ker = detail::hom_system(M, N).null_basis();
    std::vector<Morphism> out;
    for (int j = 0; j < ker.cols(); ++j) out.push_back(detail::unpack_hom(M, N, ker.col(j)));
    return out;
}

inline int hom_dim(const Representation& M, const Representation& N) {
    Mat sys = detail::hom_system(M, N);
    return sys.cols() - sys.rank();
}

// ---- Kernel / image / cokernel ----

struct Factorization {
    Representation kernel, image, cokernel;
    Morphism ker_incl;   // kernel -> source (mono)
    Morphism coim_proj;  // source -> image (epi)
    Morphism im_incl;    // image -> target (mono)
    Morphism cok_proj;   // target -> cokernel (epi)
};

inline Factorization morphism_factorization(const Morphism& f) {
    const AlgebraPtr& alg = f.src.alg;
    int V = alg->vertices();

    std::vector<Mat> kbasis, ibasis, comp;
    std::vector<int> kdims(V), idims(V), cdims(V);
    for (int v = 0; v < V; ++v) {
        kbasis.push_back(f.maps[v].null_basis());
        ibasis.push_back(col_space_basis(f.maps[v]));
        comp.push_back(subspace_complement_std(ibasis[v]));
        kdims[v] = kbasis[v].cols();
        idims[v] = ibasis[v].cols();
        cdims[v] = comp[v].cols();
    }

    auto induced = [&](const std::vector<Mat>& basis, const Representation& of,
                       const std::vector<int>& bdims) {
        std::vector<Mat> maps;
        for (int a = 0; a < alg->arrow_count(); ++a) {
            const Arrow& ar = alg->arrow(a);
            Mat img = of.arrow_maps[a] * basis[ar.src - 1];
            auto sol = basis[ar.tgt - 1].solve(img);
            if (!sol) throw CheckError("subspace family not closed under arrow maps");
            maps.push_back(std::move(*sol));
        }
        return Representation(alg, bdims, std::move(maps));
    };

    Factorization out;
    out.kernel = induced(kbasis, f.src, kdims);
    out.image = induced(ibasis, f.tgt, idims);

    std::vector<Mat> kin, coim, iin, cok;
    std::vector<Mat> q(V);  // quotient projections onto the complement coordinates
    for (int v = 0; v < V; ++v) {
        kin.push_back(kbasis[v]);
        iin.push_back(ibasis[v]);
        auto co = ibasis[v].solve(f.maps[v]);
        if (!co) throw CheckError("image coordinates failed");
        coim.push_back(std::move(*co));
        Mat full = ibasis[v].hcat(comp[v]);
        auto inv = full.inverse();
        if (!inv) throw CheckError("image basis completion is singular");
        q[v] = inv->row_slice(idims[v], cdims[v]);
        cok.push_back(q[v]);
    }
    // cokernel arrow maps: C(a) = q_tgt * N(a) * section_src
    std::vector<Mat> cmaps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        cmaps.push_back(q[ar.tgt - 1] * f.tgt.arrow_maps[a] * comp[ar.src - 1]);
    }
    out.cokernel = Representation(alg, cdims, std::move(cmaps));

    out.ker_incl = Morphism(out.kernel, f.src, std::move(kin));
    out.coim_proj = Morphism(f.src, out.image, std::move(coim));
    out.im_incl = Morphism(out.image, f.tgt, std::move(iin));
    out.cok_proj = Morphism(f.tgt, out.cokernel, std::move(cok));
    return out;
}

inline Representation kernel_of(const Morphism& f) { return morphism_factorization(f).kernel; }
inline Representation cokernel_of(const Morphism& f) { return morphism_factorization(f).cokernel; }

// Builds the subrepresentation spanned by the given vertexwise subspaces
// (columns), which must be closed under the arrow maps.
inline Morphism subrep_from_subspaces(const Representation& M, const std::vector<Mat>& basis) {
    const AlgebraPtr& alg = M.alg;
    std::vector<int> dims(alg->vertices());
    for (int v = 0; v < alg->vertices(); ++v) dims[v] = basis[v].cols();
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        auto sol = basis[ar.tgt - 1].solve(M.arrow_maps[a] * basis[ar.src - 1]);
        if (!sol) throw CheckError("subspaces not closed under arrow maps");
        maps.push_back(std::move(*sol));
    }
    Representation sub(alg, dims, std::move(maps));
    std::vector<Mat> incl = basis;
    return Morphism(std::move(sub), M, std::move(incl));
}

// ---- Submodule enumeration ----

// One mono per subrepresentation, including 0 and M, in a deterministic order.
// Guarded by the total-dimension bound.
inline std::vector<Morphism> submodule_list(const Representation& M, int dim_bound = 8) {
    if (M.total_dim() > dim_bound)
        throw BoundError("submodule enumeration: total dimension " +
                         std::to_string(M.total_dim()) + " exceeds bound " +
                         std::to_string(dim_bound));
    const AlgebraPtr& alg = M.alg;
    int V = alg->vertices();
    std::vector<std::vector<Mat>> choices;
    for (int v = 0; v < V; ++v) choices.push_back(all_subspaces(M.dims[v], alg->p));

    std::vector<Morphism> out;
    std::vector<Mat> current(V, Mat(0, 0, alg->p));
    // incremental closure check on arrows whose endpoints are both chosen
    auto closed_at = [&](int upto, int a) {
        const Arrow& ar = alg->arrow(a);
        if (ar.src - 1 > upto || ar.tgt - 1 > upto) return true;
        return subspace_contains(current[ar.tgt - 1], M.arrow_maps[a] * current[ar.src - 1]);
    };
    std::function<void(int)> rec = [&](int v) {
        if (v == V) {
            out.push_back(subrep_from_subspaces(M, current));
            return;
        }
        for (const Mat& s : choices[v]) {
            current[v] = s;
            bool ok = true;
            for (int a = 0; a < alg->arrow_count() && ok; ++a)
                if (!closed_at(v, a)) ok = false;
            if (ok) rec(v + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace qtors

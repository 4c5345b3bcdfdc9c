#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qtors/rep.hpp"

namespace qtors {

struct Bounds {
    int dim_bound = 8;       // submodule enumeration / slice materialization
    int enum_bound = 16;     // subset enumeration over indecomposables
    int ext_enum_bound = 6;  // dim Ext^1 cap for middle-term enumeration
};

// Multiset of indecomposable summands, by model index.
struct Decomposition {
    std::vector<std::pair<int, int>> parts;  // (index, multiplicity), index ascending

    bool empty() const { return parts.empty(); }
    std::uint64_t mask() const {
        std::uint64_t m = 0;
        for (auto [i, k] : parts) m |= std::uint64_t(1) << i;
        return m;
    }
    int multiplicity(int idx) const {
        for (auto [i, k] : parts)
            if (i == idx) return k;
        return 0;
    }
    friend bool operator==(const Decomposition& a, const Decomposition& b) {
        return a.parts == b.parts;
    }
};

// Complete list of pairwise non-isomorphic indecomposables with the Hom
// matrix and the derived tables used throughout: Hom bases, pairwise trace
// subspaces and decomposed submodule lattices.
class ModuleCategoryModel {
public:
    AlgebraPtr alg;
    std::vector<Representation> indecs;
    std::vector<std::string> names;
    std::vector<std::vector<int>> hom_mat;                  // H[i][j] = dim Hom(X_i, X_j)
    std::vector<std::vector<std::vector<Morphism>>> homs;   // bases, same indexing
    Bounds bounds;

    // trace of X_i in X_j, as canonical per-vertex subspaces
    std::vector<std::vector<std::vector<Mat>>> trace_sub;

    struct SubInfo {
        Morphism incl;       // submodule -> X_e
        Decomposition sub;   // decomposition of the submodule
        Decomposition quot;  // decomposition of the quotient
    };
    std::vector<std::vector<SubInfo>> submodules;  // per indec; empty when over bound
    std::vector<char> submodules_ok;

    int size() const { return static_cast<int>(indecs.size()); }
    std::uint64_t all_mask() const {
        return size() == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << size()) - 1;
    }

    int index_by_name(const std::string& n) const {
        for (int i = 0; i < size(); ++i)
            if (names[i] == n) return i;
        return -1;
    }

    const std::vector<SubInfo>& submodule_table(int i) const {
        if (!submodules_ok[i])
            throw BoundError("submodule table unavailable for " + names[i] + " (over dim bound)");
        return submodules[i];
    }
};

inline std::vector<int> fingerprint(const Representation& M, const ModuleCategoryModel& model) {
    std::vector<int> f(model.size());
    for (int j = 0; j < model.size(); ++j) f[j] = hom_dim(M, model.indecs[j]);
    return f;
}

namespace detail {

// Exact solve of a square rational system by Gaussian elimination; entries
// stay tiny at model scale.
struct Rat64 {
    long long n = 0, d = 1;
    void norm() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }
};
inline Rat64 rsub(Rat64 a, Rat64 b) {
    Rat64 r{a.n * b.d - b.n * a.d, a.d * b.d};
    r.norm();
    return r;
}
inline Rat64 rmul(Rat64 a, Rat64 b) {
    Rat64 r{a.n * b.n, a.d * b.d};
    r.norm();
    return r;
}
inline Rat64 rdiv(Rat64 a, Rat64 b) {
    if (b.n == 0) throw CheckError("rational division by zero");
    Rat64 r{a.n * b.d, a.d * b.n};
    r.norm();
    return r;
}

// Solves A x = b with integer A (n x n) and b; returns false if singular.
inline bool solve_rational(std::vector<std::vector<long long>> A, std::vector<long long> b,
                           std::vector<Rat64>& x) {
    int n = static_cast<int>(A.size());
    std::vector<std::vector<Rat64>> m(n, std::vector<Rat64>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rat64{A[i][j], 1};
        m[i][n] = Rat64{b[i], 1};
    }
    for (int col = 0, row = 0; col < n && row < n; ++col, ++row) {
        int sel = -1;
        for (int i = row; i < n; ++i)
            if (m[i][col].n != 0) {
                sel = i;
                break;
            }
        if (sel < 0) return false;
        std::swap(m[sel], m[row]);
        Rat64 piv = m[row][col];
        for (int j = col; j <= n; ++j) m[row][j] = rdiv(m[row][j], piv);
        for (int i = 0; i < n; ++i) {
            if (i == row || m[i][col].n == 0) continue;
            Rat64 f = m[i][col];
            for (int j = col; j <= n; ++j) m[i][j] = rsub(m[i][j], rmul(f, m[row][j]));
        }
    }
    x.resize(n);
    for (int i = 0; i < n; ++i) x[i] = m[i][n];
    return true;
}

}  // namespace detail

// Unique multiplicities m with H^T m = fingerprint(M).  A non-integral or
// negative solution means the indecomposable list misses a summand.
inline Decomposition decompose(const Representation& M, const ModuleCategoryModel& model) {
    int n = model.size();
    std::vector<int> f = fingerprint(M, model);
    std::vector<std::vector<long long>> A(n, std::vector<long long>(n));
    std::vector<long long> b(n);
    for (int j = 0; j < n; ++j) {
        b[j] = f[j];
        for (int i = 0; i < n; ++i) A[j][i] = model.hom_mat[i][j];  // row j: sum_i m_i H[i][j]
    }
    std::vector<detail::Rat64> x;
    if (!detail::solve_rational(std::move(A), std::move(b), x))
        throw CheckError("hom matrix singular: indecomposable list incomplete");
    Decomposition dec;
    for (int i = 0; i < n; ++i) {
        if (x[i].d != 1 || x[i].n < 0)
            throw CheckError("indecomposable list incomplete: non-integral decomposition of dims " +
                             M.dims_string());
        if (x[i].n > 0) dec.parts.emplace_back(i, static_cast<int>(x[i].n));
    }
    // dimension double-check
    std::vector<int> dims(M.dims.size(), 0);
    for (auto [i, k] : dec.parts)
        for (size_t v = 0; v < dims.size(); ++v) dims[v] += k * model.indecs[i].dims[v];
    for (size_t v = 0; v < dims.size(); ++v)
        if (dims[v] != M.dims[v])
            throw CheckError("indecomposable list incomplete: dimension mismatch in decomposition");
    return dec;
}

inline bool is_isomorphic(const Representation& M, const Representation& N,
                          const ModuleCategoryModel& model) {
    if (M.dims != N.dims) return false;
    return fingerprint(M, model) == fingerprint(N, model);
}

inline Representation realize(const Decomposition& dec, const ModuleCategoryModel& model) {
    std::vector<Representation> parts;
    for (auto [i, k] : dec.parts)
        for (int c = 0; c < k; ++c) parts.push_back(model.indecs[i]);
    return direct_sum(model.alg, parts);
}

inline std::string object_name(const Decomposition& dec, const ModuleCategoryModel& model) {
    if (dec.parts.empty()) return "0";
    std::string s;
    for (auto [i, k] : dec.parts) {
        if (!s.empty()) s += "+";
        s += model.names[i];
        if (k > 1) s += "^" + std::to_string(k);
    }
    return s;
}

// Builds a model from an indecomposable list: computes Hom bases, validates
// completeness invariants, and fills the trace/submodule tables.
inline ModuleCategoryModel make_model(AlgebraPtr alg, std::vector<Representation> indecs,
                                      std::vector<std::string> names, Bounds bounds = {}) {
    ModuleCategoryModel m;
    m.alg = std::move(alg);
    m.indecs = std::move(indecs);
    m.names = std::move(names);
    m.bounds = bounds;
    int n = m.size();
    if (n > 64) throw BoundError("model has more than 64 indecomposables");

    m.homs.assign(n, std::vector<std::vector<Morphism>>(n));
    m.hom_mat.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m.homs[i][j] = hom_basis(m.indecs[i], m.indecs[j]);
            m.hom_mat[i][j] = static_cast<int>(m.homs[i][j].size());
        }
    for (int i = 0; i < n; ++i) {
        if (m.hom_mat[i][i] < 1) throw CheckError("model indec with no endomorphisms");
        for (int j = 0; j < n; ++j)
            if (i != j && m.hom_mat[i] == m.hom_mat[j])
                throw CheckError("model indecs " + m.names[i] + " and " + m.names[j] +
                                 " have equal fingerprints");
    }
    {
        std::vector<std::vector<long long>> A(n, std::vector<long long>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A[i][j] = m.hom_mat[i][j];
        std::vector<detail::Rat64> x;
        if (n > 0 && !detail::solve_rational(std::move(A), std::vector<long long>(n, 0), x))
            throw CheckError("hom matrix is singular over the rationals");
    }

    // pairwise traces
    m.trace_sub.assign(n, std::vector<std::vector<Mat>>(n));
    int V = m.alg->vertices();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Mat> tr;
            for (int v = 0; v < V; ++v) {
                Mat acc(m.indecs[j].dims[v], 0, m.alg->p);
                for (const Morphism& f : m.homs[i][j]) acc = acc.hcat(f.maps[v]);
                tr.push_back(col_space_basis(acc));
            }
            m.trace_sub[i][j] = std::move(tr);
        }

    // submodule tables (skipped per indec when over the dimension bound)
    m.submodules.assign(n, {});
    m.submodules_ok.assign(n, 0);
    for (int e = 0; e < n; ++e) {
        if (m.indecs[e].total_dim() > bounds.dim_bound) continue;
        std::vector<ModuleCategoryModel::SubInfo> infos;
        for (Morphism& incl : submodule_list(m.indecs[e], bounds.dim_bound)) {
            ModuleCategoryModel::SubInfo info;
            info.sub = decompose(incl.src, m);
            info.quot = decompose(morphism_factorization(incl).cokernel, m);
            info.incl = std::move(incl);
            infos.push_back(std::move(info));
        }
        m.submodules[e] = std::move(infos);
        m.submodules_ok[e] = 1;
    }
    return m;
}

// The Nakayama model: every uniserial interval module whose supporting path
// survives the relations.  Requires the quiver to be a linear A_n orientation
// or a single oriented cycle.
inline ModuleCategoryModel nakayama_model(const AlgebraPtr& alg, Bounds bounds = {}) {
    const Quiver& q = alg->quiver;
    std::vector<int> outdeg(q.vertex_count, 0), indeg(q.vertex_count, 0);
    for (const Arrow& a : q.arrows) {
        ++outdeg[a.src - 1];
        ++indeg[a.tgt - 1];
    }
    for (int v = 0; v < q.vertex_count; ++v)
        if (outdeg[v] > 1 || indeg[v] > 1)
            throw InputError("unsupported quiver shape for the Nakayama model (vertex " +
                             std::to_string(v + 1) + " has branching)");
    // connectivity: arrows as undirected edges must connect all vertices
    {
        std::vector<int> comp(q.vertex_count, -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const Arrow& a : q.arrows) {
                int x = -1;
                if (a.src - 1 == v) x = a.tgt - 1;
                if (a.tgt - 1 == v) x = a.src - 1;
                if (x >= 0 && comp[x] < 0) {
                    comp[x] = 0;
                    stack.push_back(x);
                }
            }
        }
        for (int v = 0; v < q.vertex_count; ++v)
            if (comp[v] < 0 && q.vertex_count > 1)
                throw InputError("unsupported quiver shape for the Nakayama model (disconnected)");
    }

    // One interval module per nonzero path: dim 1 at each visited vertex
    // (counted with multiplicity), arrows acting along the path.
    std::vector<Representation> indecs;
    std::vector<std::string> names;
    std::vector<Path> paths = alg->basis_paths();
    std::stable_sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.start < b.start;
    });
    for (const Path& path : paths) {
        int V = q.vertex_count;
        std::vector<int> visit;  // visited vertices in order
        visit.push_back(path.start);
        for (int a : path.arrows) visit.push_back(q.arrows[a].tgt);
        std::vector<int> dims(V, 0);
        for (int v : visit) ++dims[v - 1];
        // basis element t (=position along the path) lives at vertex visit[t]
        std::vector<std::vector<int>> slot(V);  // vertex -> positions
        for (size_t t = 0; t < visit.size(); ++t) slot[visit[t] - 1].push_back(static_cast<int>(t));
        std::vector<Mat> maps;
        for (int a = 0; a < alg->arrow_count(); ++a) {
            const Arrow& ar = alg->arrow(a);
            Mat mat(dims[ar.tgt - 1], dims[ar.src - 1], alg->p);
            for (size_t t = 0; t + 1 < visit.size(); ++t) {
                if (path.arrows[t] != a) continue;
                // position t (at src) maps to position t+1 (at tgt)
                int c = 0, r = 0;
                for (size_t k = 0; k < slot[ar.src - 1].size(); ++k)
                    if (slot[ar.src - 1][k] == static_cast<int>(t)) c = static_cast<int>(k);
                for (size_t k = 0; k < slot[ar.tgt - 1].size(); ++k)
                    if (slot[ar.tgt - 1][k] == static_cast<int>(t) + 1) r = static_cast<int>(k);
                mat.at(r, c) = 1;
            }
            maps.push_back(std::move(mat));
        }
        indecs.emplace_back(alg, dims, std::move(maps));
        std::string nm;
        for (size_t t = 0; t < visit.size(); ++t) nm += (t ? "\\" : "") + std::to_string(visit[t]);
        names.push_back(nm);
    }
    return make_model(alg, std::move(indecs), std::move(names), bounds);
}

}  // namespace qtors

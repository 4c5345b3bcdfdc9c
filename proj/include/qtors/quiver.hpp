#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qtors/error.hpp"

namespace qtors {

struct Arrow {
    std::string name;
    int src = 0;  // vertices are 1-based, matching the diagrams
    int tgt = 0;
};

struct Quiver {
    int vertex_count = 0;
    std::vector<Arrow> arrows;

    int arrow_index(const std::string& name) const {
        for (size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        if (vertex_count < 1) throw InputError("quiver needs at least one vertex");
        std::set<std::string> seen;
        for (const Arrow& a : arrows) {
            if (a.name.empty()) throw InputError("arrow without a name");
            if (!seen.insert(a.name).second) throw InputError("duplicate arrow name: " + a.name);
            if (a.src < 1 || a.src > vertex_count || a.tgt < 1 || a.tgt > vertex_count)
                throw InputError("arrow " + a.name + " has endpoint outside 1.." +
                                 std::to_string(vertex_count));
        }
    }
};

// A path is a composable arrow sequence together with its start vertex, so the
// trivial path e_v is representable.  A path written a1*a2 traverses a1 first.
struct Path {
    int start = 0;
    std::vector<int> arrows;  // arrow indices

    int length() const { return static_cast<int>(arrows.size()); }
};

class BoundQuiverAlgebra;
using AlgebraPtr = std::shared_ptr<const BoundQuiverAlgebra>;

// Path algebra of a quiver modulo monomial (zero-path) relations over F_p.
// Construction validates admissibility and finite-dimensionality and computes
// the basis of nonzero paths.
class BoundQuiverAlgebra {
public:
    std::string name = "algebra";
    Quiver quiver;
    std::vector<std::vector<int>> relations;  // arrow index sequences, length >= 2
    std::uint32_t p = 2;

    int vertices() const { return quiver.vertex_count; }
    int arrow_count() const { return static_cast<int>(quiver.arrows.size()); }
    const Arrow& arrow(int i) const { return quiver.arrows[i]; }
    int path_end(const Path& q) const {
        return q.arrows.empty() ? q.start : quiver.arrows[q.arrows.back()].tgt;
    }

    const std::vector<Path>& basis_paths() const { return basis_; }
    int dimension() const { return static_cast<int>(basis_.size()); }

    std::vector<Path> paths_from(int v) const {
        std::vector<Path> out;
        for (const Path& q : basis_)
            if (q.start == v) out.push_back(q);
        return out;
    }

    std::string path_name(const Path& q) const {
        if (q.arrows.empty()) return "e" + std::to_string(q.start);
        std::string s;
        for (int a : q.arrows) {
            if (!s.empty()) s += "*";
            s += quiver.arrows[a].name;
        }
        return s;
    }

    friend AlgebraPtr make_algebra(std::string name, Quiver q,
                                   std::vector<std::vector<int>> relations, std::uint32_t p);

private:
    std::vector<Path> basis_;

    void finalize();
};

namespace detail {

// Antidictionary automaton for the monomial relations: a path is nonzero iff
// it never completes a relation as a contiguous subword.  States are trie
// nodes over the arrow alphabet with Aho-Corasick failure links; the algebra
// is finite-dimensional iff the reachable live part of the automaton is
// acyclic.
class RelationAutomaton {
public:
    RelationAutomaton(const Quiver& q, const std::vector<std::vector<int>>& relations)
        : quiver_(q) {
        nodes_.push_back(Node{});  // root
        for (const auto& rel : relations) {
            int cur = 0;
            for (size_t i = 0; i < rel.size(); ++i) {
                int nxt = child(cur, rel[i]);
                if (nxt < 0) {
                    nodes_.push_back(Node{});
                    nodes_[cur].next[rel[i]] = static_cast<int>(nodes_.size()) - 1;
                    nxt = static_cast<int>(nodes_.size()) - 1;
                }
                cur = nxt;
            }
            nodes_[cur].terminal = true;
        }
        build_failure();
    }

    // State after reading one more arrow, or -1 when the extension hits a
    // relation (dead).
    int step(int state, int arrow) const {
        int s = state;
        while (true) {
            int nxt = child(s, arrow);
            if (nxt >= 0) {
                if (nodes_[nxt].terminal) return -1;
                return nxt;
            }
            if (s == 0) return 0;
            s = nodes_[s].fail;
        }
    }

    bool finite_dimensional() const {
        // DFS over (vertex, state) pairs looking for a reachable cycle.
        int V = quiver_.vertex_count;
        int N = static_cast<int>(nodes_.size());
        std::vector<int> color(static_cast<size_t>(V) * N, 0);  // 0 new, 1 active, 2 done
        std::vector<std::pair<int, int>> stack;
        for (int v = 1; v <= V; ++v) {
            if (!dfs(v, 0, color)) return false;
        }
        return true;
    }

private:
    struct Node {
        std::map<int, int> next;
        int fail = 0;
        bool terminal = false;
    };

    int child(int node, int arrow) const {
        auto it = nodes_[node].next.find(arrow);
        return it == nodes_[node].next.end() ? -1 : it->second;
    }

    void build_failure() {
        std::vector<int> order;
        order.push_back(0);
        for (size_t qi = 0; qi < order.size(); ++qi) {
            int u = order[qi];
            for (auto [a, v] : nodes_[u].next) {
                order.push_back(v);
                if (u == 0) {
                    nodes_[v].fail = 0;
                } else {
                    int f = nodes_[u].fail;
                    while (true) {
                        int w = child(f, a);
                        if (w >= 0) {
                            nodes_[v].fail = w;
                            break;
                        }
                        if (f == 0) {
                            nodes_[v].fail = 0;
                            break;
                        }
                        f = nodes_[f].fail;
                    }
                }
                if (nodes_[nodes_[v].fail].terminal) nodes_[v].terminal = true;
            }
        }
    }

    bool dfs(int vertex, int state, std::vector<int>& color) const {
        size_t id = static_cast<size_t>(vertex - 1) * nodes_.size() + state;
        if (color[id] == 2) return true;
        if (color[id] == 1) return false;  // cycle of nonzero paths
        color[id] = 1;
        for (size_t a = 0; a < quiver_.arrows.size(); ++a) {
            if (quiver_.arrows[a].src != vertex) continue;
            int ns = step(state, static_cast<int>(a));
            if (ns < 0) continue;
            if (!dfs(quiver_.arrows[a].tgt, ns, color)) return false;
        }
        color[id] = 2;
        return true;
    }

    const Quiver& quiver_;
    std::vector<Node> nodes_;
};

}  // namespace detail

inline void BoundQuiverAlgebra::finalize() {
    quiver.validate();
    if (p < 2) throw InputError("field characteristic must be a prime >= 2");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw InputError("field characteristic must be prime, got " + std::to_string(p));
    for (const auto& rel : relations) {
        if (rel.size() < 2) throw InputError("relation of length < 2 violates admissibility");
        for (size_t i = 0; i < rel.size(); ++i) {
            if (rel[i] < 0 || rel[i] >= arrow_count()) throw InputError("relation uses unknown arrow");
            if (i > 0 && quiver.arrows[rel[i - 1]].tgt != quiver.arrows[rel[i]].src)
                throw InputError("relation is not a composable path");
        }
    }

    detail::RelationAutomaton aut(quiver, relations);
    if (!aut.finite_dimensional())
        throw InputError("algebra is infinite-dimensional: unbounded nonzero path enumeration");

    // Enumerate nonzero paths grouped by length, each level sorted by the
    // lexicographic order of arrow names.
    struct State {
        Path path;
        int state;
    };
    std::vector<State> level;
    for (int v = 1; v <= vertices(); ++v) {
        basis_.push_back(Path{v, {}});
        level.push_back(State{Path{v, {}}, 0});
    }
    auto name_less = [&](const Path& a, const Path& b) {
        std::vector<std::string> an, bn;
        for (int x : a.arrows) an.push_back(quiver.arrows[x].name);
        for (int x : b.arrows) bn.push_back(quiver.arrows[x].name);
        return an < bn;
    };
    while (!level.empty()) {
        std::vector<State> next;
        for (const State& st : level) {
            int end = path_end(st.path);
            for (int a = 0; a < arrow_count(); ++a) {
                if (quiver.arrows[a].src != end) continue;
                int ns = aut.step(st.state, a);
                if (ns < 0) continue;
                Path ext = st.path;
                ext.arrows.push_back(a);
                next.push_back(State{std::move(ext), ns});
            }
        }
        std::sort(next.begin(), next.end(),
                  [&](const State& x, const State& y) { return name_less(x.path, y.path); });
        for (const State& st : next) basis_.push_back(st.path);
        if (basis_.size() > 100000) throw InputError("path basis exceeds safety cap");
        level = std::move(next);
    }
}

inline AlgebraPtr make_algebra(std::string name, Quiver q, std::vector<std::vector<int>> relations,
                               std::uint32_t p) {
    auto alg = std::make_shared<BoundQuiverAlgebra>();
    alg->name = std::move(name);
    alg->quiver = std::move(q);
    alg->relations = std::move(relations);
    alg->p = p;
    alg->finalize();
    return alg;
}

// Nonzero paths grouped by (source, target) pair; closed under subpaths and
// totalling the algebra dimension.
struct PathBasis {
    AlgebraPtr alg;
    std::vector<std::vector<std::vector<Path>>> by_pair;  // [u-1][v-1]

    const std::vector<Path>& between(int u, int v) const { return by_pair[u - 1][v - 1]; }
};

inline PathBasis path_basis(const AlgebraPtr& alg) {
    PathBasis pb;
    pb.alg = alg;
    pb.by_pair.assign(alg->vertices(), std::vector<std::vector<Path>>(alg->vertices()));
    for (const Path& q : alg->basis_paths())
        pb.by_pair[q.start - 1][alg->path_end(q) - 1].push_back(q);
    return pb;
}

// ---- Algebra file format ----
//
//   algebra <name>
//   vertices <n>
//   arrow <name> <src> <tgt>
//   relation <arrowname> <arrowname> ...   (traversal order)
//   field <p>                              (optional, default 2)
//
// Lines starting with '#' and blank lines are ignored.
inline AlgebraPtr parse_algebra_file(const std::string& text) {
    std::istringstream in(text);
    std::string line, name = "algebra";
    Quiver q;
    bool have_vertices = false;
    std::vector<std::vector<std::string>> relation_names;
    std::uint32_t p = 2;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&](const std::string& what) -> InputError {
            return InputError("line " + std::to_string(lineno) + ": " + what);
        };
        if (key == "algebra") {
            if (!(ls >> name)) throw fail("expected: algebra <name>");
        } else if (key == "vertices") {
            if (!(ls >> q.vertex_count) || q.vertex_count < 1)
                throw fail("expected: vertices <positive n>");
            have_vertices = true;
        } else if (key == "arrow") {
            Arrow a;
            if (!(ls >> a.name >> a.src >> a.tgt)) throw fail("expected: arrow <name> <src> <tgt>");
            q.arrows.push_back(a);
        } else if (key == "relation") {
            std::vector<std::string> names;
            std::string an;
            while (ls >> an) names.push_back(an);
            if (names.size() < 2) throw fail("relation needs at least two arrows");
            relation_names.push_back(std::move(names));
        } else if (key == "field") {
            if (!(ls >> p)) throw fail("expected: field <prime>");
        } else {
            throw fail("unknown directive '" + key + "'");
        }
    }
    if (!have_vertices) throw InputError("algebra file missing 'vertices' line");

    std::vector<std::vector<int>> relations;
    for (const auto& names : relation_names) {
        std::vector<int> rel;
        for (const std::string& an : names) {
            int idx = q.arrow_index(an);
            if (idx < 0) throw InputError("relation references unknown arrow '" + an + "'");
            rel.push_back(idx);
        }
        relations.push_back(std::move(rel));
    }
    return make_algebra(name, std::move(q), std::move(relations), p);
}

}  // namespace qtors

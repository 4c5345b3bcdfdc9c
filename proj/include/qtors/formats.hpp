#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtors/covering.hpp"

namespace qtors {

namespace detail {

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(strip(cur));
    return out;
}

}  // namespace detail

// ---- Module file format ----
//
//   module <name>
//   dim d1 d2 ... dn
//   map <arrowname> [[row],[row],...]     (entries mod p; omitted maps are 0)
inline std::pair<std::string, Representation> parse_module_file(const std::string& text,
                                                                const AlgebraPtr& alg) {
    std::istringstream in(text);
    std::string line, name = "module";
    std::vector<int> dims;
    bool have_dims = false;
    std::vector<std::pair<int, Mat>> given;
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
        if (key == "module") {
            if (!(ls >> name)) throw fail("expected: module <name>");
        } else if (key == "dim") {
            int d;
            while (ls >> d) dims.push_back(d);
            if (static_cast<int>(dims.size()) != alg->vertices())
                throw fail("dim needs one entry per vertex");
            have_dims = true;
        } else if (key == "map") {
            if (!have_dims) throw fail("map before dim");
            std::string arrow_name;
            if (!(ls >> arrow_name)) throw fail("expected: map <arrow> [[...]]");
            int a = alg->quiver.arrow_index(arrow_name);
            if (a < 0) throw fail("unknown arrow " + arrow_name);
            std::string rest;
            std::getline(ls, rest);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(rest);
            } catch (const nlohmann::json::exception&) {
                throw fail("matrix literal is not valid JSON");
            }
            const Arrow& ar = alg->arrow(a);
            int rows = dims[ar.tgt - 1], cols = dims[ar.src - 1];
            if (!j.is_array() || static_cast<int>(j.size()) != rows)
                throw fail("matrix needs " + std::to_string(rows) + " rows");
            Mat m(rows, cols, alg->p);
            for (int r = 0; r < rows; ++r) {
                if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
                    throw fail("row " + std::to_string(r) + " needs " + std::to_string(cols) +
                               " entries");
                for (int cidx = 0; cidx < cols; ++cidx) {
                    if (!j[r][cidx].is_number_integer()) throw fail("matrix entries must be integers");
                    m.set(r, cidx, j[r][cidx].get<long long>());
                }
            }
            given.emplace_back(a, std::move(m));
        } else {
            throw fail("unknown directive '" + key + "'");
        }
    }
    if (!have_dims) throw InputError("module file missing 'dim' line");
    std::vector<Mat> maps;
    for (int a = 0; a < alg->arrow_count(); ++a) {
        const Arrow& ar = alg->arrow(a);
        maps.emplace_back(dims[ar.tgt - 1], dims[ar.src - 1], alg->p);
    }
    for (auto& [a, m] : given) maps[a] = std::move(m);
    return {name, Representation(alg, std::move(dims), std::move(maps))};
}

// ---- Subcategory and object literals ----

// Comma-separated model names; "-" is the zero class, "*" the given ambient.
inline Subcat parse_subcat(const std::string& text, const ModuleCategoryModel& model,
                           std::uint64_t ambient_mask) {
    std::string t = detail::strip(text);
    if (t == "-") return subcat(model, 0);
    if (t == "*") return subcat(model, ambient_mask);
    std::uint64_t mask = 0;
    for (const std::string& name : detail::split(t, ',')) {
        if (name.empty()) throw InputError("empty module name in subcategory literal");
        int i = model.index_by_name(name);
        if (i < 0) throw InputError("unknown module name '" + name + "'");
        mask |= std::uint64_t(1) << i;
    }
    return subcat(model, mask);
}

// Sum expression "a+b+c" of model names (repetitions allowed).
inline Representation parse_object(const std::string& text, const ModuleCategoryModel& model) {
    std::string t = detail::strip(text);
    if (t == "0" || t.empty()) return Representation::zero(model.alg);
    std::vector<Representation> parts;
    for (const std::string& name : detail::split(t, '+')) {
        int i = model.index_by_name(name);
        if (i < 0) throw InputError("unknown module name '" + name + "'");
        parts.push_back(model.indecs[i]);
    }
    return direct_sum(model.alg, parts);
}

// ---- Chain file format ----
//
//   chain <name>
//   at <rational> <name>,<name>,...    value on [this breakpoint, the next)
//   at 1 -                             the zero class at t=1
// "*" denotes the ambient subcategory the chain is validated against.
inline StepChain parse_chain_file(const std::string& text, const ModuleCategoryModel& model,
                                  std::uint64_t ambient_mask) {
    std::istringstream in(text);
    std::string line, name = "chain";
    std::vector<std::pair<Rational, std::uint64_t>> entries;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "chain") {
            if (!(ls >> name)) throw InputError("line " + std::to_string(lineno) + ": chain <name>");
        } else if (key == "at") {
            std::string rat, rest;
            if (!(ls >> rat))
                throw InputError("line " + std::to_string(lineno) + ": at <rational> <members>");
            std::getline(ls, rest);
            rest = detail::strip(rest);
            if (rest.empty())
                throw InputError("line " + std::to_string(lineno) + ": missing member list");
            entries.emplace_back(parse_rational(rat), parse_subcat(rest, model, ambient_mask).mask);
        } else {
            throw InputError("line " + std::to_string(lineno) + ": unknown directive '" + key + "'");
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    StepChain c;
    c.model = &model;
    c.name = name;
    for (auto& [r, mask] : entries) {
        c.breaks.push_back(r);
        c.classes.push_back(mask);
    }
    return c;
}

// ---- Action file format ----
//
//   action <name>
//   order <k>
//   vertex <i> -> <j>
//   arrowmap <a> -> <b>
inline GroupAction parse_action_file(const std::string& text, const AlgebraPtr& alg) {
    std::istringstream in(text);
    std::string line;
    GroupAction act;
    act.alg = alg;
    act.vperm.assign(alg->vertices(), 0);
    act.aperm.assign(alg->arrow_count(), -1);
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
        if (key == "action") {
            if (!(ls >> act.name)) throw fail("expected: action <name>");
        } else if (key == "order") {
            if (!(ls >> act.order) || act.order < 1) throw fail("expected: order <positive k>");
        } else if (key == "vertex") {
            int i, j;
            std::string arrow_sym;
            if (!(ls >> i >> arrow_sym >> j) || arrow_sym != "->")
                throw fail("expected: vertex <i> -> <j>");
            if (i < 1 || i > alg->vertices() || j < 1 || j > alg->vertices())
                throw fail("vertex out of range");
            act.vperm[i - 1] = j;
        } else if (key == "arrowmap") {
            std::string a, arrow_sym, b;
            if (!(ls >> a >> arrow_sym >> b) || arrow_sym != "->")
                throw fail("expected: arrowmap <a> -> <b>");
            int ia = alg->quiver.arrow_index(a), ib = alg->quiver.arrow_index(b);
            if (ia < 0 || ib < 0) throw fail("unknown arrow name");
            act.aperm[ia] = ib;
        } else {
            throw fail("unknown directive '" + key + "'");
        }
    }
    for (int v = 0; v < alg->vertices(); ++v)
        if (act.vperm[v] == 0) throw InputError("action file misses vertex " + std::to_string(v + 1));
    for (int a = 0; a < alg->arrow_count(); ++a)
        if (act.aperm[a] < 0)
            throw InputError("action file misses arrowmap for " + alg->arrow(a).name);
    return act;
}

// ---- Printing ----

inline std::string subcat_string(const Subcat& s) {
    if (s.empty()) return "add{0}";
    std::string out = "add{";
    bool first = true;
    for (int i : s.members()) {
        if (!first) out += ",";
        out += s.model->names[i];
        first = false;
    }
    return out + "}";
}

inline std::string member_list_string(const Subcat& s) {
    if (s.empty()) return "-";
    std::string out;
    for (int i : s.members()) {
        if (!out.empty()) out += ",";
        out += s.model->names[i];
    }
    return out;
}

inline std::string filtration_string(const ModuleCategoryModel& model,
                                     const std::vector<Representation>& steps,
                                     const std::vector<Rational>& labels) {
    std::string out = "0";
    for (const Representation& s : steps) out += " ⊂ " + object_name(decompose(s, model), model);
    out += " [s=";
    for (size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i].str();
    return out + "]";
}

inline std::string nhn_string(const ModuleCategoryModel& model, const NHNFilt& f) {
    std::vector<Representation> steps;
    std::vector<Rational> labels;
    for (const NHNStep& s : f.steps) {
        steps.push_back(s.module);
        labels.push_back(s.label);
    }
    return filtration_string(model, steps, labels);
}

}  // namespace qtors

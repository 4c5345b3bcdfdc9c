// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qtors/cli.hpp"

using namespace qtors;

namespace {

std::string data(const std::string& name) { return std::string(QTORS_DATA_DIR) + "/" + name; }

struct Runner {
    int failures = 0;
    int index = 0;

    void criterion(const std::string& what, bool ok, const std::string& note = "") {
        ++index;
        std::cout << "[" << index << "/9] " << (ok ? "PASS" : "FAIL") << "  " << what;
        if (!note.empty()) std::cout << "  (" << note << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

Subcat of(const ModuleCategoryModel& m, const std::string& names) {
    return parse_subcat(names, m, m.all_mask());
}

}  // namespace

int main() {
    Runner run;
    try {
        AlgebraPtr a = parse_algebra_file(read_file(data("A.alg")));
        ModuleCategoryModel ma = nakayama_model(a);
        TorsionContext ca(ma);
        Subcat mcat_a = of(ma, "3,2\\3,1\\2,1");

        // 1. the running-example subcategory is 2-cluster-tilting
        run.criterion("mod-A: add{3,2\\3,1\\2,1} is 2-cluster-tilting",
                      is_n_cluster_tilting(ca, mcat_a, 2).ok);

        // 2. the three torsion classes of the section-3 example
        {
            TorsRecognition t1 = recognize_torsion_class(ca, of(ma, "2\\3,2,1\\2,1"), mcat_a, 2);
            bool ok = t1.ok && t1.u.mask == of(ma, "2\\3,1\\2,1").mask;

            TorsRecognition t2 = recognize_torsion_class(ca, of(ma, "2,1\\2,1"), mcat_a, 2);
            ok = ok && !t2.ok && t2.failed_condition == 2 &&
                 t2.t_set.mask == of(ma, "1\\2,1").mask;
            ok = ok && is_n_torsion_class_criterion(ca, of(ma, "1\\2,1"), mcat_a, 2).ok;

            TorsRecognition t3 = recognize_torsion_class(ca, of(ma, "1,3"), mcat_a, 2);
            ok = ok && !t3.ok && t3.failed_condition == 3 &&
                 t3.detail.find("Ext^1") != std::string::npos;
            ok = ok &&
                 minimal_n_torsion_class_containing(ca, of(ma, "1,3"), mcat_a, 2).mask ==
                     mcat_a.mask;
            run.criterion("mod-A: T1 accepted, T2 fails (2) yet T2 ∩ M is 2-torsion, T3 fails (3)",
                          ok);
        }

        // 3. the four rows of the n-HN table under (M, add{3}, 0)
        {
            StepChain delta = parse_chain_file(read_file(data("delta_A.chain")), ma, mcat_a.mask);
            validate_ntors_chain(ca, delta, mcat_a, 2);
            auto row = [&](const char* obj, const std::string& expect) {
                NHNFilt f = n_hn_filtration(ca, parse_object(obj, ma), delta, mcat_a, 2);
                std::string got;
                for (const NHNStep& s : f.steps)
                    got += object_name(decompose(s.module, ma), ma) + "@" + s.label.str() + " ";
                return got == expect;
            };
            bool ok = row("1", "1@1/3 ") && row("1\\2", "1\\2@1/3 ") &&
                      row("2\\3", "3@2/3 2\\3@1/3 ") && row("3", "3@2/3 ");
            run.criterion("mod-A: the 2-HN table (steps and labels 1/3, 2/3)", ok);
        }

        // 4. the induced chain of the section-5 example and the comparison theorem
        {
            StepChain delta5 = parse_chain_file(read_file(data("delta5_A.chain")), ma, mcat_a.mask);
            validate_ntors_chain(ca, delta5, mcat_a, 2);
            StepChain t5 = induced_chain(ca, delta5, mcat_a, 2);
            bool ok = t5.classes[1] == of(ma, "1,2,1\\2,2\\3").mask &&
                      t5.classes[0] == ma.all_mask() && t5.classes[2] == 0;
            int objects = 0;
            std::vector<int> mem = mcat_a.members();
            qtors::detail::bounded_multisets(ma, mem, 6, [&](const std::vector<int>& mult) {
                std::vector<Representation> parts;
                for (size_t k = 0; k < mult.size(); ++k)
                    for (int c = 0; c < mult[k]; ++c) parts.push_back(ma.indecs[mem[k]]);
                if (!compare_hn(ca, direct_sum(a, parts), delta5, mcat_a, 2).ok) ok = false;
                ++objects;
            });
            run.criterion("mod-A: T(delta) middle value gains 2; compare_hn on dim <= 6", ok,
                          std::to_string(objects) + " objects compared");
        }

        AlgebraPtr b = parse_algebra_file(read_file(data("B.alg")));
        ModuleCategoryModel mb = nakayama_model(b);
        TorsionContext cb(mb);
        Subcat mcat_b = of(mb, "1,3,5,7,8\\1,1\\2,2\\3,3\\4,4\\5,5\\6,6\\7,7\\8");
        GroupAction act = parse_action_file(read_file(data("Z2_B.act")), b);
        CoveringSetup setup = make_covering_setup(mb, act);
        TorsionContext cc(setup.orbit_model);

        // 5. the orbit algebra is C and the equivariant table has the 8 rows
        {
            AlgebraPtr c = parse_algebra_file(read_file(data("C.alg")));
            bool ok = algebras_isomorphic(*setup.orbit.orbit, *c);
            std::set<std::pair<std::string, std::string>> expect = {
                {"-", "-"},
                {"1,5", "1"},
                {"3,7", "3"},
                {"1,5,1\\2,5\\6", "1,1\\2"},
                {"3,7,3\\4,7\\8", "3,3\\4"},
                {"1,5,1\\2,2\\3,5\\6,6\\7", "1,1\\2,2\\3"},
                {"3,7,3\\4,4\\5,7\\8,8\\1", "3,3\\4,4\\1"},
                {"1,3,5,7,1\\2,2\\3,3\\4,4\\5,5\\6,6\\7,7\\8,8\\1", "1,3,1\\2,2\\3,3\\4,4\\1"},
            };
            std::set<std::pair<std::string, std::string>> got;
            for (const Subcat& u : enumerate_n_torsion_classes(cb, mcat_b, 2)) {
                if (!is_equivariant(u, setup)) continue;
                got.emplace(member_list_string(u),
                            member_list_string(push_down_subcat(u, setup)));
            }
            ok = ok && got == expect;
            run.criterion("covering: orbit algebra is C; the 8 equivariant rows match", ok);
        }

        StepChain delta6 = parse_chain_file(read_file(data("delta6_B.chain")), mb, mcat_b.mask);
        validate_ntors_chain(cb, delta6, mcat_b, 2);

        // 6. the closing example with exact multiplicities
        {
            Representation M = parse_object("8\\1+4\\5", mb);
            NHNFilt up = n_hn_filtration(cb, M, delta6, mcat_b, 2);
            bool ok = up.steps.size() == 2 &&
                      object_name(decompose(up.steps[0].module, mb), mb) == "1+5";
            StepChain pdelta = push_down_chain(delta6, setup, mb);
            Subcat mcat_c = push_down_subcat(mcat_b, setup);
            NHNFilt dn = n_hn_filtration(cc, push_down(M, act, setup.orbit), pdelta, mcat_c, 2);
            const ModuleCategoryModel& mc = setup.orbit_model;
            ok = ok && dn.steps.size() == 2 &&
                 object_name(decompose(dn.steps[0].module, mc), mc) == "1^2" &&
                 object_name(decompose(dn.steps[1].module, mc), mc) == "4\\1^2";
            bool note = false;
            for (const NHNStep& s : up.steps)
                for (auto [i, k] :
                     decompose(push_down(s.module, act, setup.orbit), mc).parts)
                    if (k > 1) note = true;
            run.criterion("covering: 0 ⊂ 1⊕5 ⊂ 8\\1⊕4\\5 pushes to 0 ⊂ 1^2 ⊂ (4\\1)^2",
                          ok && note, note ? "multiplicity note emitted" : "no multiplicity note");
        }

        // 7. criterion vs definition over F_2 and F_3
        {
            bool ok = true;
            for (std::uint32_t p : {2u, 3u}) {
                AlgebraPtr ap = make_algebra(a->name, a->quiver, a->relations, p);
                ModuleCategoryModel mp = nakayama_model(ap);
                TorsionContext cp(mp);
                Subcat mc = of(mp, "3,2\\3,1\\2,1");
                std::vector<int> mem = mc.members();
                for (std::uint64_t code = 0; code < (1u << mem.size()); ++code) {
                    std::uint64_t mask = 0;
                    for (size_t i = 0; i < mem.size(); ++i)
                        if ((code >> i) & 1) mask |= std::uint64_t(1) << mem[i];
                    if (is_n_torsion_class_criterion(cp, subcat(mp, mask), mc, 2).ok !=
                        is_n_torsion_class_direct(cp, subcat(mp, mask), mc, 2))
                        ok = false;
                }
            }
            run.criterion("oracle equivalence on all 2^4 subsets for p in {2,3}", ok);
        }

        // 8. theorem property suites over A and B
        {
            bool ok = true;
            struct Side {
                TorsionContext* ctx;
                const ModuleCategoryModel* m;
                Subcat mcat;
            };
            Side sides[2] = {{&ca, &ma, mcat_a}, {&cb, &mb, mcat_b}};
            for (Side& s : sides) {
                std::vector<Subcat> classes = enumerate_n_torsion_classes(*s.ctx, s.mcat, 2);
                for (size_t x = 0; x < classes.size(); ++x) {
                    Subcat t = embed_T(*s.ctx, classes[x], s.mcat, 2);
                    if ((t.mask & s.mcat.mask) != classes[x].mask) ok = false;
                    std::uint64_t t_mask = 0;
                    for (int j : s.mcat.members())
                        t_mask |= torsion_parts_indec(*s.ctx, t, j).first.mask();
                    if (t_mask != classes[x].mask) ok = false;
                    for (size_t y = 0; y < classes.size(); ++y) {
                        Subcat ty = embed_T(*s.ctx, classes[y], s.mcat, 2);
                        if (x != y && t.mask == ty.mask) ok = false;
                        if (classes[x].subset_of(classes[y]) && !t.subset_of(ty)) ok = false;
                    }
                }
            }
            // push-down exactness on 50 generated short exact sequences
            std::mt19937 rng(20240810);
            int done = 0;
            while (done < 50) {
                std::vector<Representation> parts;
                int k = 1 + static_cast<int>(rng() % 3);
                for (int i = 0; i < k; ++i)
                    parts.push_back(mb.indecs[static_cast<int>(rng() % mb.size())]);
                Representation M = direct_sum(b, parts);
                if (M.total_dim() > mb.bounds.dim_bound) continue;
                std::vector<Morphism> subs = submodule_list(M, mb.bounds.dim_bound);
                const Morphism& incl = subs[rng() % subs.size()];
                Factorization f = morphism_factorization(incl);
                Morphism pincl = push_down(incl, act, setup.orbit);
                Morphism pproj = push_down(f.cok_proj, act, setup.orbit);
                if (!pincl.is_mono() || !pproj.is_epi() || !compose(pproj, pincl).is_zero())
                    ok = false;
                Factorization pf = morphism_factorization(pproj);
                if (!is_isomorphic(pf.kernel, pincl.src, setup.orbit_model)) ok = false;
                ++done;
            }
            for (int i : mcat_b.members())
                for (int j : mcat_b.members())
                    if (!verify_precovering_dims(mb.indecs[i], mb.indecs[j], setup).ok) ok = false;
            run.criterion("U = T(U) ∩ M = {tM}; poset embedding; push-down exactness; "
                          "precovering dims",
                          ok);
        }

        // 9. decomposition roundtrip and hom bilinearity over A, B and C
        {
            bool ok = true;
            AlgebraPtr c = parse_algebra_file(read_file(data("C.alg")));
            std::vector<AlgebraPtr> algebras = {a, b, c};
            std::mt19937 rng(424242);
            for (const AlgebraPtr& alg : algebras) {
                ModuleCategoryModel m = nakayama_model(alg);
                for (int trial = 0; trial < 100; ++trial) {
                    std::vector<int> mult(m.size(), 0);
                    std::vector<Representation> parts;
                    int k = 1 + static_cast<int>(rng() % 5);
                    for (int i = 0; i < k; ++i) {
                        int idx = static_cast<int>(rng() % m.size());
                        ++mult[idx];
                        parts.push_back(m.indecs[idx]);
                    }
                    Representation M = direct_sum(alg, parts);
                    Decomposition dec = decompose(M, m);
                    for (int i = 0; i < m.size(); ++i)
                        if (dec.multiplicity(i) != mult[i]) ok = false;
                    std::vector<int> mult2(m.size(), 0);
                    std::vector<Representation> parts2;
                    for (int i = 0; i < 2; ++i) {
                        int idx = static_cast<int>(rng() % m.size());
                        ++mult2[idx];
                        parts2.push_back(m.indecs[idx]);
                    }
                    int expect = 0;
                    for (int i = 0; i < m.size(); ++i)
                        for (int j = 0; j < m.size(); ++j)
                            expect += mult[i] * mult2[j] * m.hom_mat[i][j];
                    if (hom_dim(M, direct_sum(alg, parts2)) != expect) ok = false;
                }
            }
            run.criterion("decompose ∘ direct_sum identity and hom bilinearity (100 sums each)",
                          ok);
        }
    } catch (const Error& e) {
        std::cout << "FATAL " << e.what() << "\n";
        return 1;
    }

    if (run.failures == 0) {
        std::cout << "all 9 acceptance criteria passed\n";
        return 0;
    }
    std::cout << run.failures << " criteria failed\n";
    return 1;
}

// Command-line front end: computes module-category models, (n-)torsion
// classes, Harder-Narasimhan filtrations and Galois-covering push-downs over
// bound quiver algebras.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtors/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"higher torsion theory over bound quiver algebras"};
    app.require_subcommand(1);

    qtors::CliOptions opt;
    std::uint32_t field = 0;
    int bound = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("algebra", opt.algebra_file, "algebra file")->required();
        cmd->add_option("--field", field, "prime field characteristic (overrides the file)");
        cmd->add_option("--bound", bound, "total-dimension bound for enumerations (default 8)");
        cmd->add_option("--format", opt.format, "output format: text|tsv");
    };
    auto add_mcat = [&](CLI::App* cmd) {
        cmd->add_option("--n", opt.n, "degree n of the higher structure (default 1)");
        cmd->add_option("--mcat", opt.mcat,
                        "comma-separated members of the n-cluster-tilting subcategory");
    };

    CLI::App* model = app.add_subcommand("model", "list the indecomposables and the hom matrix");
    add_common(model);

    CLI::App* tors = app.add_subcommand("tors", "enumerate torsion classes");
    add_common(tors);

    CLI::App* ntors = app.add_subcommand("ntors", "enumerate n-torsion classes in mcat");
    add_common(ntors);
    add_mcat(ntors);
    std::string equivariant_action;
    ntors->add_option("--equivariant", equivariant_action,
                      "restrict to classes equivariant under this action file and show images");

    CLI::App* hn = app.add_subcommand("hn", "Harder-Narasimhan filtration of an object");
    add_common(hn);
    add_mcat(hn);
    hn->add_option("--chain", opt.chain_file, "chain file")->required();
    hn->add_option("--object", opt.object, "object expression, e.g. 2\\3 or 8\\1+4\\5")->required();
    hn->add_flag("--compare", opt.compare, "also run the ambient filtration and compare");
    std::string pushdown_action;
    hn->add_option("--pushdown", pushdown_action, "action file; adds the orbit-side filtration");

    CLI::App* pd = app.add_subcommand("pushdown", "push a module or subcategory down the covering");
    add_common(pd);
    add_mcat(pd);
    pd->add_option("--action", opt.action_file, "action file")->required();
    pd->add_option("--object", opt.object, "object expression to push down");
    pd->add_option("--subcat", opt.subcat_expr, "subcategory literal to push down");

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify);
    add_mcat(verify);
    verify->add_option("--suite", opt.suite, "torsion-axioms | ntors-equivalence | embed-poset | "
                                             "hn-comparison | covering")
        ->required();
    verify->add_option("--chain", opt.chain_file, "chain file (hn-comparison, covering)");
    verify->add_option("--action", opt.action_file, "action file (covering)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (field) opt.field = field;
    if (bound) opt.bound = bound;
    if (!equivariant_action.empty()) {
        opt.action_file = equivariant_action;
        opt.equivariant_only = true;
    }
    if (!pushdown_action.empty()) opt.action_file = pushdown_action;

    qtors::Report rep = qtors::run_command(app.get_subcommands().front()->get_name(), opt);
    std::cout << rep.out;
    return rep.code;
}

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "igusa/cli.hpp"

// Exact Igusa local zeta functions of plane curves over p-adic fields:
// Newton polygon geometry, candidate poles, the assembled rational function
// and congruence-count verification.

int main(int argc, char** argv) {
    CLI::App app{"exact Igusa local zeta functions of plane curves"};
    app.require_subcommand(1);

    igusa::RunConfig cfg;
    std::string mode = "simple";

    auto add_common = [&](CLI::App* sub, bool with_mode = true, bool with_level = false) {
        sub->add_option("--input", cfg.input_path, "input JSON file")->required();
        sub->add_option("--prime", cfg.prime, "residue field size (prime); overrides the input's p");
        sub->add_option("--format", cfg.format, "plain | json | latex")
            ->check(CLI::IsMember({"plain", "json", "latex"}));
        if (with_mode)
            sub->add_option("--mode", mode, "conical subdivision: simple | minimal")
                ->check(CLI::IsMember({"simple", "minimal"}));
        if (with_level) {
            sub->add_option("--max-level", cfg.max_level,
                            "verify congruence counts up to this level");
            sub->add_flag("--naive", cfg.naive_counts,
                          "count by full enumeration instead of branch lifting");
        }
    };

    add_common(app.add_subcommand("geom", "geometric Newton polygon, cones and candidate poles"));
    add_common(app.add_subcommand("arith", "arithmetic Newton polygons and their candidate poles"),
               false);
    add_common(app.add_subcommand("check", "Kouchnirenko and arithmetic non-degeneracy reports"),
               false);
    add_common(app.add_subcommand("zeta", "assemble Z(s, f, v)"));
    add_common(app.add_subcommand("poles", "candidate and actual pole real parts"));
    add_common(app.add_subcommand("verify", "compare predicted and counted solutions mod p^m"),
               true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.mode = (mode == "minimal") ? igusa::SubdivMode::minimal : igusa::SubdivMode::simple;
    return igusa::run(cfg, std::cout);
}

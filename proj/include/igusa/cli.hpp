#ifndef IGUSA_CLI_HPP
#define IGUSA_CLI_HPP

#include <cstdlib>
#include <ostream>
#include <string>

#include "igusa/io.hpp"

// Command dispatch behind the executable. Kept in the library so the test
// suite can drive the exact logic the binary runs.

namespace igusa {

struct RunConfig {
    std::string command;     // geom | arith | check | zeta | poles | verify
    std::string input_path;
    long prime = 0;          // 0: take the input file's p
    SubdivMode mode = SubdivMode::simple;
    long max_level = 4;
    std::string format = "plain"; // plain | json | latex
    bool naive_counts = false;    // verify with full p^{2m} enumeration instead of lifting
};

namespace detail {

inline int exit_code_for(errc k) {
    switch (k) {
        case errc::syntax_error:
        case errc::schema_error:
        case errc::non_coprime_weight:
        case errc::empty_input:
        case errc::non_unit_denominator:
            return 1;
        default:
            return 2; // outside the supported class / engine-level refusal
    }
}

inline json engine_header(const ParsedInput& in, const RunConfig& cfg, long p) {
    return json{{"input_hash", in.hash},
                {"p", p},
                {"mode", cfg.mode == SubdivMode::simple ? "simple" : "minimal"},
                {"command", cfg.command}};
}

} // namespace detail

/// Executes one command; writes the document to `out` and returns the exit
/// status (0 ok, 1 input error, 2 class error, 3 verification mismatch).
inline int run(const RunConfig& cfg, std::ostream& out) {
    long bound = 8;
    if (const char* env = std::getenv("IGUSA_MAX_LEVEL_BOUND")) bound = std::atol(env);
    try {
        if (cfg.max_level < 1 || cfg.max_level > bound)
            fail(errc::schema_error, "max level must lie in [1, " + std::to_string(bound) +
                                         "] (IGUSA_MAX_LEVEL_BOUND)");
        ParsedInput in = parse_input_file(cfg.input_path);
        long p = cfg.prime > 0 ? cfg.prime : in.p;
        if (!is_prime(p)) fail(errc::schema_error, "prime " + std::to_string(p) + " is not prime");
        json doc;
        doc["engine"] = detail::engine_header(in, cfg, p);

        if (cfg.command == "geom") {
            GeomPolygon P = geom_polygon(in.poly.support());
            ConeSubdiv S = conical_subdivision(P, cfg.mode);
            doc["polygon"] = polygon_to_json(P);
            doc["plot"] = polygon_plot_data(P);
            doc["subdivision"] = subdivision_to_json(S);
            doc["candidate_pole_parts"] = rat_set_to_json(geom_candidate_poles(P));
            if (cfg.format == "plain") {
                out << "polygon vertices:";
                for (auto& v : P.vertices) out << " (" << v.first << "," << v.second << ")";
                out << "\nfacets:";
                for (auto& f : P.facets)
                    out << " [normal (" << f.normal.first << "," << f.normal.second
                        << ") d=" << f.d << (f.compact ? "" : " unbounded") << "]";
                out << "\ncones: " << S.cones.size() << "\ncandidate pole parts:";
                for (auto& x : geom_candidate_poles(P)) out << " " << x.str();
                out << "\n";
            } else {
                out << doc.dump(2) << "\n";
            }
            return 0;
        }

        if (cfg.command == "arith") {
            ArithNewtonData data = arith_newton_data(in.poly, p);
            doc["arith"] = arith_data_to_json(data);
            if (cfg.format == "plain") {
                for (const auto& fd : data.facets) {
                    out << "facet (" << fd.weight.first << "," << fd.weight.second
                        << ") d=" << fd.d_facet
                        << (fd.face_degenerate ? " degenerate" : " non-degenerate") << "\n";
                    for (const auto& tr : fd.thetas) {
                        out << "  theta " << tr.theta.theta.str();
                        if (tr.theta.excluded) { out << " excluded\n"; continue; }
                        out << " segments";
                        for (auto& s : tr.polygon.segments) out << " (D=" << s.D << ",E=" << s.E << ")";
                        out << " taus";
                        for (auto& t : tr.polygon.taus) out << " " << t.str();
                        out << "\n";
                    }
                }
                out << "candidate pole parts:";
                for (auto& x : data.candidate_poles) out << " " << x.str();
                out << "\n";
            } else {
                out << doc.dump(2) << "\n";
            }
            return 0;
        }

        if (cfg.command == "check") {
            KouchReport kr = kouch_check(in.poly, p);
            ArithNewtonData data = arith_newton_data(in.poly, p);
            ArithCheckReport ar = arith_nondegeneracy_check(in.poly, data, p);
            json faces = json::array();
            for (const auto& fr : kr.faces) {
                json pts = json::array();
                for (auto& [x, y] : fr.singular_points) pts.push_back({x, y});
                faces.push_back({{"face", fr.face}, {"singular_points", pts}});
            }
            doc["kouchnirenko"] = {{"origin_singular", kr.origin_singular},
                                   {"non_degenerate", kr.non_degenerate},
                                   {"faces", faces}};
            doc["arith_check"] = {{"non_degenerate", ar.non_degenerate},
                                  {"origin_singular", ar.origin_singular},
                                  {"torus_smooth_at_reduction", ar.torus_smooth},
                                  {"reasons", ar.reasons}};
            if (cfg.format == "plain") {
                out << "Kouchnirenko: " << (kr.non_degenerate ? "non-degenerate" : "degenerate")
                    << "\narithmetic: " << (ar.non_degenerate ? "non-degenerate" : "degenerate")
                    << "\n";
                for (auto& rsn : ar.reasons) out << "  " << rsn << "\n";
            } else {
                out << doc.dump(2) << "\n";
            }
            if (!ar.non_degenerate) {
                std::string why = ar.reasons.empty() ? "degenerate" : ar.reasons.front();
                out << "error: ArithmeticallyDegenerate: " << why << "\n";
                return 2;
            }
            return 0;
        }

        if (cfg.command == "zeta" || cfg.command == "poles") {
            ZetaResult r = assemble_zeta(in.poly, p, cfg.mode);
            ContainmentReport cont = theorem_containment(r);
            doc["zeta"] = zeta_result_to_json(r);
            doc["containment"] = {{"operational", cont.operational_ok}, {"strict", cont.strict_ok}};
            if (cfg.command == "poles") {
                json pd = {{"engine", doc["engine"]},
                           {"candidate_pole_parts", rat_set_to_json(r.candidate_set)},
                           {"strict_candidate_pole_parts", rat_set_to_json(r.strict_candidate_set)},
                           {"actual_pole_parts", rat_set_to_json(r.actual_pole_parts)}};
                if (cfg.format == "plain") {
                    out << "candidates:";
                    for (auto& x : r.candidate_set) out << " " << x.str();
                    out << "\nactual:";
                    for (auto& x : r.actual_pole_parts) out << " " << x.str();
                    out << "\n";
                } else {
                    out << pd.dump(2) << "\n";
                }
                return 0;
            }
            if (cfg.format == "latex") {
                out << "% input " << in.hash << ", p = " << p << "\n";
                out << zeta_result_to_latex(r);
            } else if (cfg.format == "json") {
                out << doc.dump(2) << "\n";
            } else {
                out << "Z(s, f, v) at p = " << p << "\n";
                ZetaRat red = zr_reduce(r.total);
                out << "total numerator: " << red.num.str() << "\n";
                out << "denominator factors:";
                for (auto& [fac, m] : red.den)
                    out << " (1 - Q^" << fac.alpha << " T^" << fac.beta << ")^" << m;
                out << "\nactual pole parts:";
                for (auto& x : r.actual_pole_parts) out << " " << x.str();
                out << "\ncandidate pole parts:";
                for (auto& x : r.candidate_set) out << " " << x.str();
                out << "\n";
            }
            return 0;
        }

        if (cfg.command == "verify") {
            ZetaResult r = assemble_zeta(in.poly, p, cfg.mode);
            VerifyReport rep = verify_counts(in.poly, p, cfg.max_level, r.total);
            if (cfg.naive_counts) {
                for (long m = 1; m <= cfg.max_level; ++m)
                    rep.counted.counts[static_cast<size_t>(m)] = count_solutions_naive(in.poly, p, m);
                rep.all_match = true;
                rep.first_mismatch = -1;
                for (long m = 0; m <= cfg.max_level; ++m) {
                    const Rat& pm = rep.predicted[static_cast<size_t>(m)];
                    if (!pm.is_integer() || pm != Rat(rep.counted.counts[static_cast<size_t>(m)])) {
                        rep.all_match = false;
                        rep.first_mismatch = m;
                        break;
                    }
                }
            }
            doc["verify"] = verify_report_to_json(rep);
            if (cfg.format == "plain") {
                out << verify_report_to_csv(rep);
                out << (rep.all_match ? "all levels match\n" : "MISMATCH at level " +
                                                                  std::to_string(rep.first_mismatch) + "\n");
            } else {
                out << doc.dump(2) << "\n";
            }
            return rep.all_match ? 0 : 3;
        }

        fail(errc::schema_error, "unknown command \"" + cfg.command + "\"");
    } catch (const zeta_error& e) {
        out << "error: " << e.what() << "\n";
        return detail::exit_code_for(e.kind());
    }
}

} // namespace igusa

#endif

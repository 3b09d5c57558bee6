#ifndef IGUSA_IO_HPP
#define IGUSA_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "igusa/engine.hpp"
#include "igusa/oracle.hpp"

namespace igusa {

using nlohmann::json;

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct ParsedInput {
    long p = 0;
    IntPoly2 poly;
    std::optional<SQHDecomposition> sqh; // present when supplied in factored form
    std::string canonical;               // canonical serialization of the input
    std::string hash;                    // FNV-1a 64 of the canonical form
};

namespace detail {

inline std::string fnv1a64(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

inline Rat rat_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    fail(errc::schema_error, std::string(what) + " must be an integer or a \"num/den\" string");
}

} // namespace detail

/// Input document: {"p": prime, "polynomial": {"expanded": [[c, i, j] | [c_num, c_den, i, j], ...]}
/// or {"sqh": {"weight": [a, b], "parts": [{"c": .., "u": .., "v": .., "factors": [{"alpha": .., "e": ..}]}]}}}
inline ParsedInput parse_input(const json& doc) {
    if (!doc.is_object()) fail(errc::schema_error, "input must be a JSON object");
    if (!doc.contains("p")) fail(errc::schema_error, "missing prime field \"p\"");
    if (!doc["p"].is_number_integer()) fail(errc::schema_error, "\"p\" must be an integer");
    ParsedInput in;
    in.p = doc["p"].get<long>();
    if (!is_prime(in.p)) fail(errc::schema_error, "\"p\" = " + std::to_string(in.p) + " is not prime");
    if (!doc.contains("polynomial") || !doc["polynomial"].is_object())
        fail(errc::schema_error, "missing \"polynomial\" object");
    const json& poly = doc["polynomial"];

    if (poly.contains("expanded")) {
        const json& rows = poly["expanded"];
        if (!rows.is_array() || rows.empty()) fail(errc::empty_input, "no monomials");
        for (const json& row : rows) {
            if (!row.is_array() || (row.size() != 3 && row.size() != 4))
                fail(errc::schema_error, "expanded rows are [c,i,j] or [c_num,c_den,i,j]");
            Rat c;
            long i, jj;
            if (row.size() == 3) {
                c = detail::rat_from_json(row[0], "coefficient");
                i = row[1].get<long>();
                jj = row[2].get<long>();
            } else {
                c = Rat(row[0].get<long>(), row[1].get<long>());
                i = row[2].get<long>();
                jj = row[3].get<long>();
            }
            if (i < 0 || jj < 0) fail(errc::schema_error, "negative exponent");
            in.poly.add_term(i, jj, c);
        }
        if (in.poly.is_zero()) fail(errc::empty_input, "polynomial is zero");
    } else if (poly.contains("sqh")) {
        const json& s = poly["sqh"];
        if (!s.contains("weight") || !s["weight"].is_array() || s["weight"].size() != 2)
            fail(errc::schema_error, "sqh needs \"weight\": [a, b]");
        SQHDecomposition d;
        d.a = s["weight"][0].get<long>();
        d.b = s["weight"][1].get<long>();
        if (d.a <= 0 || d.b <= 0 || gcd_long(d.a, d.b) != 1)
            fail(errc::non_coprime_weight, "weight must be coprime positive integers");
        if (!s.contains("parts") || !s["parts"].is_array() || s["parts"].empty())
            fail(errc::schema_error, "sqh needs a non-empty \"parts\" array");
        for (const json& jp : s["parts"]) {
            SQHPart part;
            part.c = detail::rat_from_json(jp.at("c"), "part coefficient");
            part.u = jp.value("u", 0L);
            part.v = jp.value("v", 0L);
            if (jp.contains("factors"))
                for (const json& jf : jp["factors"]) {
                    Rat alpha = detail::rat_from_json(jf.at("alpha"), "alpha");
                    long e = jf.at("e").get<long>();
                    part.factors.push_back({alpha, e});
                }
            d.parts.push_back(std::move(part));
        }
        validate_sqh(d);
        in.sqh = d;
        in.poly = expand_sqh(d);
    } else {
        fail(errc::schema_error, "polynomial needs \"expanded\" or \"sqh\"");
    }

    in.canonical = doc.dump();
    in.hash = detail::fnv1a64(in.canonical);
    return in;
}

inline ParsedInput parse_input_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::syntax_error, "cannot open input file " + path);
    json doc;
    try {
        f >> doc;
    } catch (const json::parse_error& e) {
        fail(errc::syntax_error, std::string("JSON parse error: ") + e.what());
    }
    return parse_input(doc);
}

// ---- document assembly ----

inline json rat_set_to_json(const std::set<Rat>& s) {
    json arr = json::array();
    for (const Rat& x : s) arr.push_back(x.str());
    return arr;
}

inline json degenerate_ray_info_to_json(const DegenerateRayInfo& info) {
    json thetas = json::array();
    for (const ThetaExpansion& ex : info.expansions) {
        json consts = json::array();
        for (long c : ex.consts) consts.push_back(c);
        thetas.push_back({{"theta", ex.theta.theta.str()},
                          {"e0", ex.theta.e0},
                          {"l0", ex.l0},
                          {"M0", ex.M0},
                          {"consts", consts}});
    }
    return json{{"sep", info.sep},
                {"m_stable", info.m_stable},
                {"period", info.period},
                {"thetas", thetas}};
}

inline json arith_data_to_json(const ArithNewtonData& data) {
    json facets = json::array();
    for (const auto& fd : data.facets) {
        json thetas = json::array();
        for (const auto& tr : fd.thetas) {
            if (tr.theta.excluded) {
                thetas.push_back({{"theta", tr.theta.theta.str()}, {"excluded", true}});
                continue;
            }
            thetas.push_back({{"theta", tr.theta.theta.str()},
                              {"excluded", false},
                              {"polygon", arith_polygon_to_json(tr.polygon)},
                              {"plot", arith_polygon_plot_data(tr.polygon)},
                              {"candidate_poles",
                               rat_set_to_json(arith_candidate_poles(tr.polygon, fd.weight.first,
                                                                     fd.weight.second))},
                              {"vertex_smooth", tr.ok}});
        }
        facets.push_back({{"weight", {fd.weight.first, fd.weight.second}},
                          {"d", fd.d_facet},
                          {"face_degenerate", fd.face_degenerate},
                          {"thetas", thetas}});
    }
    return json{{"facets", facets}, {"candidate_poles", rat_set_to_json(data.candidate_poles)}};
}

inline json zeta_result_to_json(const ZetaResult& r) {
    json cones = json::array();
    for (const auto& [name, v] : r.per_cone)
        cones.push_back({{"cone", name}, {"value", zr_to_json(v)}, {"reduced", zr_to_json(zr_reduce(v))}});
    json deg = json::array();
    for (const auto& [name, info] : r.degenerate_rays)
        deg.push_back({{"cone", name}, {"info", degenerate_ray_info_to_json(info)}});
    return json{{"p", r.p},
                {"mode", r.mode == SubdivMode::simple ? "simple" : "minimal"},
                {"unit_part", zr_to_json(r.unit_part)},
                {"per_cone", cones},
                {"total", zr_to_json(r.total)},
                {"total_reduced", zr_to_json(zr_reduce(r.total))},
                {"candidate_pole_parts", rat_set_to_json(r.candidate_set)},
                {"strict_candidate_pole_parts", rat_set_to_json(r.strict_candidate_set)},
                {"actual_pole_parts", rat_set_to_json(r.actual_pole_parts)},
                {"degenerate_rays", deg}};
}

inline std::string zeta_result_to_latex(const ZetaResult& r) {
    std::ostringstream os;
    os << "\\begin{aligned}\nZ(s) \\;=\\; & " << zr_to_latex(zr_reduce(r.unit_part));
    for (const auto& [name, v] : r.per_cone)
        os << " \\\\\n & + " << zr_to_latex(zr_reduce(v));
    os << "\n\\end{aligned}\n";
    auto pole_list = [&os](const char* label, const std::set<Rat>& xs) {
        os << "% " << label << ": ";
        bool first = true;
        for (const Rat& x : xs) {
            if (!first) os << ", ";
            first = false;
            if (x.is_integer()) os << x.str();
            else os << "-\\tfrac{" << (-x).num().get_str() << "}{" << x.den().get_str() << "}";
        }
        os << "\n";
    };
    pole_list("pole real parts", r.actual_pole_parts);
    pole_list("candidate pole real parts", r.strict_candidate_set);
    return os.str();
}

} // namespace igusa

#endif

#ifndef IGUSA_NEWTON_ARITH_HPP
#define IGUSA_NEWTON_ARITH_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "igusa/newton_geom.hpp"
#include "igusa/sqh.hpp"

// Arithmetic Newton polygons. For each root theta of the leading
// quasihomogeneous part, the lines w_j(z) = (d_j - d_0) + e_{j,theta} z (one
// per part, e_{j,theta} the multiplicity of theta in part j) bound a convex
// region; the boundary segments carry the data (D_k, E_k, tau_k) that the
// candidate-pole sets are made of.

namespace igusa {

struct ThetaRoot {
    Rat theta;
    long e0 = 0;           // multiplicity in part 0
    bool excluded = false; // negative p-adic valuation: contributes no poles
};

/// theta runs over the distinct roots of the factored leading part. With a
/// prime supplied, roots of negative valuation are flagged excluded.
inline std::vector<ThetaRoot> theta_roots(const SQHDecomposition& d, long p = 0) {
    if (d.parts.empty()) fail(errc::empty_input, "no parts");
    std::vector<ThetaRoot> out;
    for (const auto& [alpha, e] : d.parts.front().factors) {
        ThetaRoot t{alpha, e, false};
        if (p > 0) t.excluded = alpha.val_p(p) < 0;
        out.push_back(std::move(t));
    }
    return out;
}

struct EnvelopeLine {
    long intercept = 0; // d_j - d_0
    long slope = 0;     // e_{j,theta}
    size_t part_index = 0;
};

struct ArithSegment {
    long D = 0; // weighted degree of the part carrying this segment
    long E = 0; // its theta-multiplicity (the slope)
};

struct ArithPolygon {
    ThetaRoot theta;
    long d0 = 0;
    std::vector<EnvelopeLine> lines;               // one per part
    std::vector<ArithSegment> segments;            // k = 1..r+1; last is the half-line
    std::vector<Rat> taus;                         // vertex abscissas, strictly increasing
    std::vector<std::vector<size_t>> vertex_parts; // per vertex: parts attaining the envelope there

    long r() const { return static_cast<long>(taus.size()); }

    Rat envelope_at(const Rat& z) const {
        Rat best;
        bool first = true;
        for (const auto& l : lines) {
            Rat v = Rat(l.intercept) + Rat(l.slope) * z;
            if (first || v < best) { best = v; first = false; }
        }
        return best;
    }
};

/// Lower envelope of the lines over z >= 0.
inline ArithPolygon arith_polygon(const SQHDecomposition& d, const ThetaRoot& theta) {
    if (theta.excluded) fail(errc::schema_error, "excluded theta has no polygon");
    ArithPolygon P;
    P.theta = theta;
    P.d0 = d.d0();
    for (size_t j = 0; j < d.parts.size(); ++j)
        P.lines.push_back(EnvelopeLine{d.parts[j].d - P.d0,
                                       d.parts[j].mult_of(theta.theta), j});

    size_t cur = 0; // part 0 is the unique line with intercept 0
    Rat zcur(0);
    while (true) {
        const EnvelopeLine& L = P.lines[cur];
        bool have = false;
        Rat zbest;
        size_t next = 0;
        for (size_t j = 0; j < P.lines.size(); ++j) {
            const EnvelopeLine& M = P.lines[j];
            if (M.slope >= L.slope) continue;
            Rat zc = Rat(M.intercept - L.intercept) / Rat(L.slope - M.slope);
            if (zc <= zcur) continue;
            if (!have || zc < zbest || (zc == zbest && M.slope < P.lines[next].slope)) {
                have = true;
                zbest = zc;
                next = j;
            }
        }
        P.segments.push_back(ArithSegment{L.intercept + P.d0, L.slope});
        if (!have) break;
        P.taus.push_back(zbest);
        std::vector<size_t> at;
        Rat env = P.envelope_at(zbest);
        for (size_t j = 0; j < P.lines.size(); ++j)
            if (Rat(P.lines[j].intercept) + Rat(P.lines[j].slope) * zbest == env) at.push_back(j);
        P.vertex_parts.push_back(std::move(at));
        cur = next;
        zcur = zbest;
    }
    return P;
}

/// Face function at the k-th vertex (k = 1..r): the sum of the expanded
/// parts whose line attains the envelope at z = tau_k (tangential lines
/// included).
inline IntPoly2 vertex_face_function(const SQHDecomposition& d, const ArithPolygon& P, long k) {
    if (k < 1 || k > P.r()) fail(errc::schema_error, "vertex index out of range");
    IntPoly2 r;
    for (size_t j : P.vertex_parts[static_cast<size_t>(k - 1)])
        r += expand_sqh_part(d.parts[j], d.a, d.b);
    return r;
}

/// Candidate set of one polygon for the weight (a, b):
/// union over vertices i of { -1/E_i, -((a+b)+tau_i)/(D_i + E_i tau_i) },
/// plus -1/E_{r+1} when the final slope is nonzero. By continuity of the
/// envelope the printed variant with (D_{i+1}, E_{i+1}) gives the same set.
inline std::set<Rat> arith_candidate_poles(const ArithPolygon& P, long a, long b) {
    std::set<Rat> out;
    for (long i = 1; i <= P.r(); ++i) {
        const ArithSegment& s = P.segments[static_cast<size_t>(i - 1)];
        const Rat& tau = P.taus[static_cast<size_t>(i - 1)];
        out.insert(Rat(-1, s.E));
        out.insert(-(Rat(a + b) + tau) / (Rat(s.D) + Rat(s.E) * tau));
    }
    const ArithSegment& last = P.segments.back();
    if (last.E != 0) out.insert(Rat(-1, last.E));
    return out;
}

struct ArithThetaReport {
    ThetaRoot theta;
    ArithPolygon polygon;
    std::vector<std::vector<std::pair<long, long>>> vertex_singular; // per vertex k=1..r
    bool ok = true; // all vertex face functions smooth on the residue torus
};

struct ArithFacetData {
    Vec2 weight{};             // facet normal (a, b)
    long d_facet = 0;
    bool face_degenerate = false; // leading part has a repeated factor
    std::optional<SQHDecomposition> decomp; // absent when the facet needs no factorization
    std::vector<ArithThetaReport> thetas;   // only for degenerate facets
};

struct ArithNewtonData {
    std::vector<ArithFacetData> facets;
    std::set<Rat> candidate_poles; // P(Gamma^A(f))
};

struct ArithCheckReport {
    bool origin_singular = false;
    bool torus_smooth = false; // reduction of f has no singular torus point
    bool non_degenerate = false;
    std::vector<std::string> reasons;
};

/// Gamma^A(f): for every compact facet whose face function has a repeated
/// factor, the semi-quasihomogeneous decomposition for the facet weight and
/// the polygons of its admissible roots, with the union of their candidate sets.
/// A facet that resists rational factorization is tolerated when its face
/// function is smooth on the residue torus (no polygons are needed there);
/// otherwise IrrationalRoot propagates.
inline ArithNewtonData arith_newton_data(const IntPoly2& f, long p) {
    GeomPolygon P = geom_polygon(f.support());
    ArithNewtonData out;
    for (const Facet& fc : P.facets) {
        if (!fc.compact) continue;
        ArithFacetData fd;
        fd.weight = fc.normal;
        fd.d_facet = fc.d;
        try {
            fd.decomp = sqh_decompose(f, fc.normal.first, fc.normal.second);
        } catch (const zeta_error& e) {
            if (e.kind() != errc::irrational_root) throw;
            IntPoly2 fn;
            for (const auto& [ex, c] : f.terms())
                if (dot(fc.normal, {ex.first, ex.second}) == fc.d) fn.add_term(ex.first, ex.second, c);
            if (!singular_torus_points(reduce_mod(fn, p)).empty()) throw;
            out.facets.push_back(std::move(fd));
            continue;
        }
        for (const auto& [al, e] : fd.decomp->parts.front().factors)
            if (e >= 2) fd.face_degenerate = true;
        if (fd.face_degenerate) {
            for (const ThetaRoot& th : theta_roots(*fd.decomp, p)) {
                if (th.excluded) {
                    ArithThetaReport tr;
                    tr.theta = th;
                    fd.thetas.push_back(std::move(tr));
                    continue;
                }
                ArithThetaReport tr;
                tr.theta = th;
                tr.polygon = arith_polygon(*fd.decomp, th);
                for (long k = 1; k <= tr.polygon.r(); ++k) {
                    IntPoly2 fq = vertex_face_function(*fd.decomp, tr.polygon, k);
                    auto pts = singular_torus_points(reduce_mod(fq, p));
                    tr.vertex_singular.push_back({pts.begin(), pts.end()});
                    if (!pts.empty()) tr.ok = false;
                }
                auto poles = arith_candidate_poles(tr.polygon, fd.weight.first, fd.weight.second);
                out.candidate_poles.insert(poles.begin(), poles.end());
                fd.thetas.push_back(std::move(tr));
            }
        }
        out.facets.push_back(std::move(fd));
    }
    return out;
}

/// Arithmetic non-degeneracy verdict: (1) the origin is singular, (2) the
/// reduction of f has no singular torus point, (3) every vertex face
/// function of every polygon is smooth on the residue torus.
inline ArithCheckReport arith_nondegeneracy_check(const IntPoly2& f, const ArithNewtonData& data,
                                                  long p) {
    ArithCheckReport rep;
    rep.origin_singular = f.singular_at_origin();
    if (!rep.origin_singular) rep.reasons.push_back("origin is not a singular point");
    rep.torus_smooth = singular_torus_points(reduce_mod(f, p)).empty();
    if (!rep.torus_smooth) rep.reasons.push_back("reduction has singular torus points");
    bool vertices_ok = true;
    for (const auto& fd : data.facets)
        for (const auto& tr : fd.thetas) {
            if (tr.theta.excluded) continue;
            if (!tr.ok) {
                vertices_ok = false;
                for (long k = 1; k <= tr.polygon.r(); ++k)
                    if (!tr.vertex_singular[static_cast<size_t>(k - 1)].empty()) {
                        Rat tau = tr.polygon.taus[static_cast<size_t>(k - 1)];
                        Rat w = tr.polygon.envelope_at(tau);
                        rep.reasons.push_back("arithmetically degenerate at vertex (" + tau.str() +
                                              "," + w.str() + ") of theta=" + tr.theta.theta.str());
                    }
            }
        }
    rep.non_degenerate = rep.origin_singular && rep.torus_smooth && vertices_ok;
    return rep;
}

// ---- emitters ----

inline nlohmann::json arith_polygon_to_json(const ArithPolygon& P) {
    nlohmann::json jl = nlohmann::json::array();
    for (const auto& l : P.lines)
        jl.push_back({{"part", l.part_index}, {"intercept", l.intercept}, {"slope", l.slope}});
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : P.segments) js.push_back({{"D", s.D}, {"E", s.E}});
    nlohmann::json jt = nlohmann::json::array();
    for (const auto& t : P.taus) jt.push_back(t.str());
    nlohmann::json jv = nlohmann::json::array();
    for (long k = 1; k <= P.r(); ++k) {
        Rat tau = P.taus[static_cast<size_t>(k - 1)];
        jv.push_back({{"z", tau.str()}, {"w", (P.envelope_at(tau)).str()},
                      {"parts", P.vertex_parts[static_cast<size_t>(k - 1)]}});
    }
    return nlohmann::json{{"theta", P.theta.theta.str()},
                          {"e0", P.theta.e0},
                          {"d0", P.d0},
                          {"lines", jl},
                          {"segments", js},
                          {"taus", jt},
                          {"vertices", jv}};
}

/// Boundary polyline of the envelope for external drawing.
inline nlohmann::json arith_polygon_plot_data(const ArithPolygon& P, const Rat& z_extra = Rat(2)) {
    nlohmann::json segs = nlohmann::json::array();
    Rat z0(0);
    for (long k = 1; k <= P.r(); ++k) {
        Rat z1 = P.taus[static_cast<size_t>(k - 1)];
        segs.push_back({{"from", {z0.str(), P.envelope_at(z0).str()}},
                        {"to", {z1.str(), P.envelope_at(z1).str()}}});
        z0 = z1;
    }
    Rat zend = z0 + z_extra;
    segs.push_back({{"from", {z0.str(), P.envelope_at(z0).str()}},
                    {"to", {zend.str(), P.envelope_at(zend).str()}}});
    return nlohmann::json{{"segments", segs}};
}

} // namespace igusa

#endif

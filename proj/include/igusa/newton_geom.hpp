#ifndef IGUSA_NEWTON_GEOM_HPP
#define IGUSA_NEWTON_GEOM_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "igusa/errors.hpp"
#include "igusa/poly2.hpp"

// Geometric Newton polygon of a plane curve: the convex hull of
// union (support point + first quadrant), its faces, and the conical
// subdivision of the first quadrant dual to it.

namespace igusa {

using Vec2 = std::pair<long, long>;

inline long cross(Vec2 u, Vec2 v) { return u.first * v.second - u.second * v.first; }
inline long dot(Vec2 u, Vec2 v) { return u.first * v.first + u.second * v.second; }
inline Vec2 primitive(Vec2 v) {
    long g = gcd_long(v.first, v.second);
    return g ? Vec2{v.first / g, v.second / g} : v;
}

struct Facet {
    Vec2 normal;            // primitive, components >= 0
    long d = 0;             // supporting line <normal, x> = d
    Vec2 from{}, to{};      // endpoint vertices (equal for unbounded rays)
    bool compact = true;

    friend bool operator==(const Facet& a, const Facet& b) {
        return a.normal == b.normal && a.d == b.d;
    }
};

enum class FaceKind { vertex, facet };

/// A proper face together with the support points lying on it.
struct Face {
    FaceKind kind = FaceKind::vertex;
    std::vector<Exp2> points;  // support points on the face, sorted
    Vec2 vertex{};             // when kind == vertex
    int facet_index = -1;      // when kind == facet

    std::string desc() const {
        if (kind == FaceKind::vertex)
            return "vertex(" + std::to_string(vertex.first) + "," + std::to_string(vertex.second) + ")";
        return "facet#" + std::to_string(facet_index);
    }
};

struct GeomPolygon {
    std::set<Exp2> support;
    std::vector<Exp2> vertices; // by increasing i (decreasing j)
    std::vector<Facet> facets;  // vertical ray, compact chain (top-left to bottom-right), horizontal ray

    const Facet* facet_with_normal(Vec2 n) const {
        for (const auto& f : facets)
            if (f.normal == n) return &f;
        return nullptr;
    }
};

/// Hull construction. Vertices are the support points that survive
/// domination removal and the convexity sweep; the two axis-parallel
/// unbounded facets are first-class.
inline GeomPolygon geom_polygon(const std::set<Exp2>& support) {
    if (support.empty()) fail(errc::empty_input, "empty support");
    if (support.count({0, 0})) fail(errc::schema_error, "support contains the origin");

    std::vector<Exp2> pts;
    for (const Exp2& p : support) {
        bool dominated = false;
        for (const Exp2& q : support)
            if (q != p && q.first <= p.first && q.second <= p.second) { dominated = true; break; }
        if (!dominated) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end()); // i ascending, then j; j strictly decreasing after domination removal

    std::vector<Exp2> chain;
    for (const Exp2& p : pts) {
        while (chain.size() >= 2) {
            Exp2 p1 = chain[chain.size() - 2], p2 = chain.back();
            Vec2 u{p2.first - p1.first, p2.second - p1.second};
            Vec2 v{p.first - p1.first, p.second - p1.second};
            if (cross(u, v) <= 0) chain.pop_back(); // p2 on or above the segment p1->p
            else break;
        }
        chain.push_back(p);
    }

    GeomPolygon P;
    P.support = support;
    P.vertices = chain;
    P.facets.push_back(Facet{{1, 0}, chain.front().first, chain.front(), chain.front(), false});
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        Exp2 A = chain[k], B = chain[k + 1];
        Vec2 n = primitive({A.second - B.second, B.first - A.first});
        Facet f{n, n.first * A.first + n.second * A.second, A, B, true};
        P.facets.push_back(f);
    }
    P.facets.push_back(Facet{{0, 1}, chain.back().second, chain.back(), chain.back(), false});
    return P;
}

/// m(a) = min over the support of <a, .> together with the first meet locus.
inline std::pair<long, Face> face_data(const GeomPolygon& P, Vec2 a) {
    if (a.first < 0 || a.second < 0 || (a.first == 0 && a.second == 0))
        fail(errc::schema_error, "direction must be nonzero with non-negative components");
    Vec2 ap = primitive(a);
    long m = 0;
    bool first = true;
    for (const Exp2& p : P.support) {
        long v = dot(ap, {p.first, p.second});
        if (first || v < m) { m = v; first = false; }
    }
    Face F;
    for (const Exp2& p : P.support)
        if (dot(ap, {p.first, p.second}) == m) F.points.push_back(p);
    std::sort(F.points.begin(), F.points.end());

    if (ap.first == 0 || ap.second == 0) {
        F.kind = FaceKind::facet;
        for (size_t k = 0; k < P.facets.size(); ++k)
            if (P.facets[k].normal == ap) F.facet_index = static_cast<int>(k);
    } else if (const Facet* f = P.facet_with_normal(ap); f && f->compact) {
        F.kind = FaceKind::facet;
        for (size_t k = 0; k < P.facets.size(); ++k)
            if (P.facets[k].normal == ap) F.facet_index = static_cast<int>(k);
    } else {
        F.kind = FaceKind::vertex;
        F.vertex = {F.points.front().first, F.points.front().second};
    }
    long mm = dot(a, F.points.empty() ? Vec2{0, 0} : Vec2{F.points.front().first, F.points.front().second});
    return {mm, F};
}

/// Keeps only the monomials lying on the face.
inline IntPoly2 face_function(const IntPoly2& f, const Face& F) {
    IntPoly2 r;
    std::set<Exp2> on(F.points.begin(), F.points.end());
    for (const auto& [e, c] : f.terms())
        if (on.count(e)) r.add_term(e.first, e.second, c);
    return r;
}

enum class SubdivMode { minimal, simple };

struct Cone {
    int dim = 1;
    std::vector<Vec2> gens;       // one or two primitive generators
    Face face;                    // attached first-meet face
    std::vector<long> m_gen;      // m(generator)
    std::vector<long> sigma_gen;  // component sums
    std::string name;

    bool contains(Vec2 k) const {
        if (k.first == 0 && k.second == 0) return false;
        if (dim == 1) return cross(gens[0], k) == 0 && dot(gens[0], k) > 0;
        long D = cross(gens[0], gens[1]);
        long an = cross(k, gens[1]);
        long bn = cross(gens[0], k);
        // alpha = an/D, beta = bn/D must both be > 0
        if (D < 0) { an = -an; bn = -bn; D = -D; }
        return an > 0 && bn > 0;
    }

    long det() const { return dim == 2 ? cross(gens[0], gens[1]) : 0; }
};

struct ConeSubdiv {
    SubdivMode mode = SubdivMode::simple;
    std::vector<Cone> cones;
};

namespace detail {

// Hirzebruch–Jung chain from u to v (cross(u,v) > 0), endpoints excluded.
// Each inserted ray w satisfies cross(prev, w) = 1; the residual determinant
// strictly decreases, so this terminates with all consecutive pairs unimodular.
inline std::vector<Vec2> hj_chain(Vec2 u, Vec2 v) {
    std::vector<Vec2> out;
    while (true) {
        long D = cross(u, v);
        if (D <= 0) fail(errc::schema_error, "bad cone orientation");
        if (D == 1) return out;
        // solve cross(u, w0) = 1
        long x, y, g;
        {
            // u1*y - u2*x = 1 via extended gcd
            long a = u.first, b = -u.second, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            long r0 = a, r1 = b;
            while (r1 != 0) {
                long qq = r0 / r1;
                long tmp = r0 - qq * r1; r0 = r1; r1 = tmp;
                tmp = s0 - qq * s1; s0 = s1; s1 = tmp;
                tmp = t0 - qq * t1; t0 = t1; t1 = tmp;
            }
            g = r0;
            if (g != 1 && g != -1) fail(errc::schema_error, "generator not primitive");
            // a*s0 + b*t0 = g  ->  u1*(s0/g)*? ... normalize sign
            y = s0 / g;
            x = t0 / g;
        }
        Vec2 w0{x, y};
        // slide w0 by multiples of u into the cone, as close to u as possible
        long c = cross(w0, v);
        // need cross(w0 + t*u, v) >= 0  ->  t >= -c/D
        long t = (c >= 0) ? -(c / D) : ((-c + D - 1) / D);
        Vec2 w{w0.first + t * u.first, w0.second + t * u.second};
        if (cross(u, w) != 1 || cross(w, v) < 0) fail(errc::schema_error, "refinement step failed");
        out.push_back(w);
        u = w;
    }
}

} // namespace detail

/// Conical subdivision of the first quadrant subordinated to the polygon.
/// Minimal mode: one ray per facet normal plus one two-dimensional cone per
/// vertex. Simple mode additionally refines every two-dimensional cone by
/// continued-fraction ray insertion until all determinants are +-1. The
/// cones are emitted in decreasing angular order, from (0,1) to (1,0).
inline ConeSubdiv conical_subdivision(const GeomPolygon& P, SubdivMode mode) {
    std::vector<Vec2> rays; // (0,1), compact normals by decreasing angle, (1,0)
    rays.push_back({0, 1});
    std::vector<Vec2> compact;
    for (const auto& f : P.facets)
        if (f.compact) compact.push_back(f.normal);
    std::sort(compact.begin(), compact.end(), [](Vec2 a, Vec2 b) { return cross(a, b) < 0; });
    for (Vec2 n : compact) rays.push_back(n);
    rays.push_back({1, 0});

    ConeSubdiv S;
    S.mode = mode;
    int idx = 1;
    auto push_ray = [&](Vec2 g) {
        Cone c;
        c.dim = 1;
        c.gens = {g};
        auto [m, F] = face_data(P, g);
        c.face = F;
        c.m_gen = {m};
        c.sigma_gen = {g.first + g.second};
        c.name = "D" + std::to_string(idx++);
        S.cones.push_back(std::move(c));
    };
    auto push_cone2 = [&](Vec2 g1, Vec2 g2) {
        Cone c;
        c.dim = 2;
        c.gens = {g1, g2};
        Vec2 inner{g1.first + g2.first, g1.second + g2.second};
        auto [mi, F] = face_data(P, inner);
        c.face = F;
        c.m_gen = {face_data(P, g1).first, face_data(P, g2).first};
        c.sigma_gen = {g1.first + g1.second, g2.first + g2.second};
        c.name = "D" + std::to_string(idx++);
        S.cones.push_back(std::move(c));
    };

    for (size_t k = 0; k < rays.size(); ++k) {
        push_ray(rays[k]);
        if (k + 1 == rays.size()) break;
        Vec2 u = rays[k], v = rays[k + 1];
        if (mode == SubdivMode::minimal) {
            push_cone2(u, v);
        } else {
            // orient counterclockwise for the chain, then emit in cone order
            std::vector<Vec2> mid = detail::hj_chain(v, u);
            std::reverse(mid.begin(), mid.end());
            Vec2 prev = u;
            for (Vec2 w : mid) {
                push_cone2(prev, w);
                push_ray(w);
                prev = w;
            }
            push_cone2(prev, v);
        }
    }
    return S;
}

/// -(a1+a2)/d over the compact facets with d != 0.
inline std::set<Rat> geom_candidate_poles(const GeomPolygon& P) {
    std::set<Rat> s;
    for (const auto& f : P.facets)
        if (f.compact && f.d != 0)
            s.insert(Rat(-(f.normal.first + f.normal.second), f.d));
    return s;
}

struct KouchFaceReport {
    std::string face;
    IntPoly2 face_fn;
    std::vector<std::pair<long, long>> singular_points;
};

struct KouchReport {
    bool origin_singular = false;
    bool non_degenerate = false; // in the sense of Kouchnirenko, at the residue field
    std::vector<KouchFaceReport> faces;
};

/// Checks every face (vertices, facets, and the polygon itself) for singular
/// torus points of the reduced face function.
inline KouchReport kouch_check(const IntPoly2& f, long p) {
    GeomPolygon P = geom_polygon(f.support());
    KouchReport rep;
    rep.origin_singular = f.singular_at_origin();
    bool any_singular = false;

    auto add_face = [&](const std::string& name, const IntPoly2& fn) {
        KouchFaceReport fr;
        fr.face = name;
        fr.face_fn = fn;
        auto pts = singular_torus_points(reduce_mod(fn, p));
        fr.singular_points.assign(pts.begin(), pts.end());
        if (!fr.singular_points.empty()) any_singular = true;
        rep.faces.push_back(std::move(fr));
    };

    for (const Exp2& v : P.vertices) {
        IntPoly2 mono = IntPoly2::monomial(v.first, v.second, f.coeff(v.first, v.second));
        add_face("vertex(" + std::to_string(v.first) + "," + std::to_string(v.second) + ")", mono);
    }
    for (size_t k = 0; k < P.facets.size(); ++k) {
        const Facet& fc = P.facets[k];
        IntPoly2 fn;
        for (const auto& [e, c] : f.terms())
            if (dot(fc.normal, {e.first, e.second}) == fc.d) fn.add_term(e.first, e.second, c);
        add_face("facet(" + std::to_string(fc.normal.first) + "," + std::to_string(fc.normal.second) + ")",
                 fn);
    }
    add_face("polygon", f);

    rep.non_degenerate = rep.origin_singular && !any_singular;
    return rep;
}

// ---- emitters ----

inline nlohmann::json polygon_to_json(const GeomPolygon& P) {
    nlohmann::json jv = nlohmann::json::array();
    for (const auto& v : P.vertices) jv.push_back({v.first, v.second});
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& f : P.facets)
        jf.push_back({{"normal", {f.normal.first, f.normal.second}},
                      {"d", f.d},
                      {"compact", f.compact},
                      {"from", {f.from.first, f.from.second}},
                      {"to", {f.to.first, f.to.second}}});
    return nlohmann::json{{"vertices", jv}, {"facets", jf}};
}

inline nlohmann::json subdivision_to_json(const ConeSubdiv& S) {
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : S.cones) {
        nlohmann::json g = nlohmann::json::array();
        for (auto& v : c.gens) g.push_back({v.first, v.second});
        jc.push_back({{"name", c.name},
                      {"dim", c.dim},
                      {"generators", g},
                      {"m", c.m_gen},
                      {"sigma", c.sigma_gen},
                      {"face", c.face.desc()}});
    }
    return nlohmann::json{{"mode", S.mode == SubdivMode::simple ? "simple" : "minimal"},
                          {"cones", jc}};
}

/// Segment list for external drawing: the compact boundary plus a stub of
/// each unbounded ray.
inline nlohmann::json polygon_plot_data(const GeomPolygon& P, long ray_len = 3) {
    nlohmann::json segs = nlohmann::json::array();
    Exp2 top = P.vertices.front(), bot = P.vertices.back();
    segs.push_back({{"from", {top.first, top.second + ray_len}}, {"to", {top.first, top.second}}});
    for (size_t k = 0; k + 1 < P.vertices.size(); ++k)
        segs.push_back({{"from", {P.vertices[k].first, P.vertices[k].second}},
                        {"to", {P.vertices[k + 1].first, P.vertices[k + 1].second}}});
    segs.push_back({{"from", {bot.first, bot.second}}, {"to", {bot.first + ray_len, bot.second}}});
    return nlohmann::json{{"segments", segs}};
}

} // namespace igusa

#endif

#include <doctest.h>

#include "igusa/newton_arith.hpp"
#include "model_inputs.hpp"

using namespace igusa;
using igusa::testing::model_f;
using igusa::testing::model_g;
using igusa::testing::model_g_deg;
using igusa::testing::model_h;

namespace {

struct Rng {
    unsigned long s = 0xfeedbeefcafeULL;
    long next(long lo, long hi) {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        return lo + static_cast<long>(s % static_cast<unsigned long>(hi - lo + 1));
    }
};

// Random factored semi-quasihomogeneous input with distinct rational alphas.
SQHDecomposition random_sqh(Rng& rng) {
    static const std::pair<long, long> weights[] = {{1, 1}, {2, 1}, {3, 2}, {5, 3}, {3, 1}};
    auto [a, b] = weights[rng.next(0, 4)];
    SQHDecomposition d;
    d.a = a;
    d.b = b;
    int nparts = static_cast<int>(rng.next(2, 4));
    std::set<long> degrees_used;
    for (int j = 0; j < nparts; ++j) {
        SQHPart p;
        p.c = Rat(rng.next(1, 5));
        if (rng.next(0, 1)) p.c = -p.c;
        p.u = rng.next(0, 6);
        p.v = rng.next(0, 6);
        int nfac = static_cast<int>(j == 0 ? rng.next(1, 3) : rng.next(0, 2));
        std::set<Rat> used;
        for (int i = 0; i < nfac; ++i) {
            Rat al(rng.next(1, 6), rng.next(1, 3));
            if (!used.insert(al).second) continue;
            p.factors.push_back({al, rng.next(1, 3)});
        }
        d.parts.push_back(std::move(p));
    }
    // force strictly increasing degrees by dropping collisions
    for (auto& p : d.parts)
        p.d = d.a * d.b * p.factor_degree() + d.a * p.u + d.b * p.v;
    std::sort(d.parts.begin(), d.parts.end(), [](auto& x, auto& y) { return x.d < y.d; });
    std::vector<SQHPart> kept;
    for (auto& p : d.parts)
        if (kept.empty() || kept.back().d != p.d) kept.push_back(p);
    d.parts = std::move(kept);
    validate_sqh(d);
    return d;
}

} // namespace

TEST_CASE("theta_roots of the model decompositions") {
    SQHDecomposition df = sqh_decompose(model_f(), 3, 2);
    auto rf = theta_roots(df);
    REQUIRE(rf.size() == 1);
    CHECK(rf[0].theta == Rat(1));
    CHECK(rf[0].e0 == 2);

    SQHDecomposition dg = sqh_decompose(model_g(Rat(2)), 3, 2);
    auto rg = theta_roots(dg);
    REQUIRE(rg.size() == 2);
    CHECK(rg[0].theta == Rat(1));
    CHECK(rg[0].e0 == 2);
    CHECK(rg[1].theta == Rat(2));
    CHECK(rg[1].e0 == 1);

    SQHDecomposition dh = sqh_decompose(model_h(Rat(2), Rat(3)), 5, 3);
    auto rh = theta_roots(dh);
    REQUIRE(rh.size() == 3);
    CHECK(rh[0].theta == Rat(1));
    CHECK(rh[0].e0 == 4);
    CHECK(rh[1].theta == Rat(2));
    CHECK(rh[2].theta == Rat(3));

    // exclusion flag: a root with p in the denominator
    SQHDecomposition dx;
    dx.a = 1; dx.b = 1;
    dx.parts = {SQHPart{Rat(1), 0, 0, {{Rat(1, 3), 1}, {Rat(2), 2}}, 0},
                SQHPart{Rat(1), 5, 0, {}, 0}};
    validate_sqh(dx);
    auto rx = theta_roots(dx, 3);
    REQUIRE(rx.size() == 2);
    CHECK(rx[0].theta == Rat(1, 3));
    CHECK(rx[0].excluded);
    CHECK_FALSE(rx[1].excluded);
}

TEST_CASE("arith_polygon of the model f: one vertex at z = 4") {
    SQHDecomposition d = sqh_decompose(model_f(), 3, 2);
    ArithPolygon P = arith_polygon(d, theta_roots(d)[0]);
    REQUIRE(P.segments.size() == 2);
    CHECK(P.segments[0].D == 12);
    CHECK(P.segments[0].E == 2);
    CHECK(P.segments[1].D == 20);
    CHECK(P.segments[1].E == 0);
    REQUIRE(P.taus.size() == 1);
    CHECK(P.taus[0] == Rat(4));
    // vertex face function is the whole curve here
    CHECK(vertex_face_function(d, P, 1) == model_f());
}

TEST_CASE("arith_polygon of the degenerate example: tangential line at the vertex") {
    SQHDecomposition d = sqh_decompose(model_g_deg(), 3, 2);
    ArithPolygon P = arith_polygon(d, theta_roots(d)[0]);
    REQUIRE(P.segments.size() == 3);
    CHECK(P.segments[0].D == 30);
    CHECK(P.segments[0].E == 5);
    CHECK(P.segments[1].D == 48);
    CHECK(P.segments[1].E == 2);
    CHECK(P.segments[2].D == 72);
    CHECK(P.segments[2].E == 0);
    REQUIRE(P.taus.size() == 2);
    CHECK(P.taus[0] == Rat(6));
    CHECK(P.taus[1] == Rat(12));
    // the line 12 + 3z of the d=42 part meets the boundary only at (6, 30)
    CHECK(P.vertex_parts[0] == std::vector<size_t>{0, 1, 2});
    CHECK(P.vertex_parts[1] == std::vector<size_t>{2, 3});

    IntPoly2 bin = IntPoly2::monomial(0, 3) - IntPoly2::monomial(2, 0);
    CHECK(vertex_face_function(d, P, 1) ==
          bin.pow(5) + bin.pow(3) * IntPoly2::monomial(6, 3) + bin.pow(2) * IntPoly2::monomial(12, 0));
    CHECK(vertex_face_function(d, P, 2) == bin.pow(2) * IntPoly2::monomial(12, 0) + IntPoly2::monomial(24, 0));
}

TEST_CASE("arith_polygon of the weight (5,3) example") {
    SQHDecomposition d = sqh_decompose(model_h(Rat(2), Rat(3)), 5, 3);
    auto roots = theta_roots(d);

    ArithPolygon P1 = arith_polygon(d, roots[0]); // theta = 1, multiplicity 4
    REQUIRE(P1.taus.size() == 1);
    CHECK(P1.taus[0] == Rat(5, 2));
    CHECK(P1.segments[0].E == 4);
    CHECK(P1.segments[1].E == 0);
    CHECK(vertex_face_function(d, P1, 1) == model_h(Rat(2), Rat(3)));

    ArithPolygon Pa = arith_polygon(d, roots[1]); // theta = a
    ArithPolygon Pb = arith_polygon(d, roots[2]); // theta = b
    REQUIRE(Pa.taus.size() == 1);
    CHECK(Pa.taus[0] == Rat(10));
    CHECK(Pa.segments[0].E == 1);
    CHECK(Pb.taus == Pa.taus);
    CHECK(Pb.segments[0].E == Pa.segments[0].E);
    CHECK(Pb.segments[1].E == Pa.segments[1].E);
}

TEST_CASE("candidate pole sets of the worked examples") {
    SQHDecomposition df = sqh_decompose(model_f(), 3, 2);
    ArithPolygon Pf = arith_polygon(df, theta_roots(df)[0]);
    CHECK(arith_candidate_poles(Pf, 3, 2) == std::set<Rat>{Rat(-1, 2), Rat(-9, 20)});

    SQHDecomposition dg = sqh_decompose(model_g(Rat(2)), 3, 2);
    auto rg = theta_roots(dg);
    ArithPolygon Pg1 = arith_polygon(dg, rg[0]);
    CHECK(Pg1.segments[0].D == 18);
    CHECK(Pg1.segments[0].E == 2);
    CHECK(Pg1.taus == std::vector<Rat>{Rat(1)});
    CHECK(arith_candidate_poles(Pg1, 3, 2) == std::set<Rat>{Rat(-1, 2), Rat(-3, 10)});

    ArithPolygon Pga = arith_polygon(dg, rg[1]);
    CHECK(Pga.segments[0].E == 1);
    CHECK(Pga.taus == std::vector<Rat>{Rat(2)});
    CHECK(arith_candidate_poles(Pga, 3, 2) == std::set<Rat>{Rat(-1), Rat(-7, 20)});
}

TEST_CASE("arith_newton_data and the verdicts of the three examples") {
    IntPoly2 f = model_f();
    ArithNewtonData af = arith_newton_data(f, 5);
    REQUIRE(af.facets.size() == 1);
    CHECK(af.facets[0].face_degenerate);
    CHECK(af.candidate_poles == std::set<Rat>{Rat(-1, 2), Rat(-9, 20)});
    CHECK(arith_nondegeneracy_check(f, af, 5).non_degenerate);

    IntPoly2 gd = model_g_deg();
    ArithNewtonData ag = arith_newton_data(gd, 7);
    ArithCheckReport rg = arith_nondegeneracy_check(gd, ag, 7);
    CHECK_FALSE(rg.non_degenerate);
    bool mentions_vertex = false;
    for (const auto& reason : rg.reasons)
        if (reason.find("(6,30)") != std::string::npos) mentions_vertex = true;
    CHECK(mentions_vertex);

    IntPoly2 h = model_h(Rat(2), Rat(3));
    ArithNewtonData ah = arith_newton_data(h, 11);
    CHECK(arith_nondegeneracy_check(h, ah, 11).non_degenerate);

    IntPoly2 g = model_g(Rat(2));
    ArithNewtonData agd = arith_newton_data(g, 5);
    CHECK(agd.candidate_poles ==
          std::set<Rat>{Rat(-1, 2), Rat(-3, 10), Rat(-1), Rat(-7, 20)});
    CHECK(arith_nondegeneracy_check(g, agd, 5).non_degenerate);

    // Kouchnirenko-non-degenerate input: no degenerate facet, empty set
    IntPoly2 cusp = IntPoly2::monomial(3, 0) + IntPoly2::monomial(0, 2);
    ArithNewtonData ac = arith_newton_data(cusp, 5);
    REQUIRE(ac.facets.size() == 1);
    CHECK_FALSE(ac.facets[0].face_degenerate);
    CHECK(ac.candidate_poles.empty());
}

TEST_CASE("envelope, monotonicity, continuity and fraction forms on random inputs") {
    Rng rng;
    int built = 0;
    for (int it = 0; it < 200 && built < 50; ++it) {
        SQHDecomposition d = random_sqh(rng);
        if (d.parts.front().factors.empty()) continue;
        for (const ThetaRoot& th : theta_roots(d)) {
            ArithPolygon P = arith_polygon(d, th);
            ++built;

            // monotonicity: D strictly increasing, E strictly decreasing, taus increasing
            for (size_t k = 1; k < P.segments.size(); ++k) {
                CHECK(P.segments[k].D > P.segments[k - 1].D);
                CHECK(P.segments[k].E < P.segments[k - 1].E);
            }
            for (size_t k = 1; k < P.taus.size(); ++k) CHECK(P.taus[k] > P.taus[k - 1]);
            CHECK(P.segments[0].D == d.d0());
            CHECK(P.segments[0].E == th.e0);

            // continuity at every vertex and equality of the two fraction forms
            for (long i = 1; i <= P.r(); ++i) {
                const auto& s = P.segments[static_cast<size_t>(i - 1)];
                const auto& s1 = P.segments[static_cast<size_t>(i)];
                const Rat& tau = P.taus[static_cast<size_t>(i - 1)];
                CHECK(Rat(s.D) + Rat(s.E) * tau == Rat(s1.D) + Rat(s1.E) * tau);
                Rat num = Rat(d.a + d.b) + tau;
                CHECK(num / (Rat(s.D) + Rat(s.E) * tau) == num / (Rat(s1.D) + Rat(s1.E) * tau));
            }

            // envelope formula on 200 sampled rational z
            Rat zmax = (P.taus.empty() ? Rat(2) : P.taus.back()) + Rat(2);
            for (int sidx = 0; sidx < 200; ++sidx) {
                Rat z = zmax * Rat(sidx, 200);
                Rat env = P.envelope_at(z);
                // the segment containing z gives the same value
                size_t seg = 0;
                while (seg < P.taus.size() && z > P.taus[seg]) ++seg;
                const auto& s = P.segments[seg];
                CHECK(Rat(s.D - P.d0) + Rat(s.E) * z == env);
            }
        }
    }
    CHECK(built >= 50);
}

TEST_CASE("unit scaling invariance of polygon data and candidate sets") {
    for (const Rat& c : {Rat(3), Rat(-7, 2), Rat(1, 5)}) {
        IntPoly2 f = model_g(Rat(2));
        IntPoly2 fc = f.scaled(c);
        SQHDecomposition d1 = sqh_decompose(f, 3, 2);
        SQHDecomposition d2 = sqh_decompose(fc, 3, 2);
        auto r1 = theta_roots(d1), r2 = theta_roots(d2);
        REQUIRE(r1.size() == r2.size());
        for (size_t i = 0; i < r1.size(); ++i) {
            ArithPolygon P1 = arith_polygon(d1, r1[i]);
            ArithPolygon P2 = arith_polygon(d2, r2[i]);
            CHECK(P1.taus == P2.taus);
            for (size_t k = 0; k < P1.segments.size(); ++k) {
                CHECK(P1.segments[k].D == P2.segments[k].D);
                CHECK(P1.segments[k].E == P2.segments[k].E);
            }
            CHECK(arith_candidate_poles(P1, 3, 2) == arith_candidate_poles(P2, 3, 2));
        }
        CHECK(geom_candidate_poles(geom_polygon(f.support())) ==
              geom_candidate_poles(geom_polygon(fc.support())));
    }
}

TEST_CASE("arith polygon json emitter") {
    SQHDecomposition d = sqh_decompose(model_f(), 3, 2);
    ArithPolygon P = arith_polygon(d, theta_roots(d)[0]);
    auto j = arith_polygon_to_json(P);
    CHECK(j["taus"][0] == "4");
    CHECK(j["segments"][0]["D"] == 12);
    CHECK(j["segments"][0]["E"] == 2);
    CHECK(j["vertices"][0]["z"] == "4");
    CHECK(j["vertices"][0]["w"] == "8");
    auto plot = arith_polygon_plot_data(P);
    CHECK(plot["segments"].size() == 2);
}

#include <doctest.h>

#include "igusa/qt_algebra.hpp"
#include "oracles.hpp"

using namespace igusa;
using igusa::testing::Dense;
using igusa::testing::dense_of;
using igusa::testing::floor_sum_partial;

namespace {

ZetaRat frac(PolyQT num, std::vector<std::pair<DenFactor, int>> den) {
    DenMultiset d;
    for (auto& [f, m] : den) d[f] += m;
    return ZetaRat(std::move(num), std::move(d));
}

PolyQT mono(long a, long b, Rat c = Rat(1)) { return PolyQT::monomial(a, b, c); }

// Small deterministic generator for property checks.
struct Rng {
    unsigned long s = 0x9e3779b97f4a7c15ULL;
    long next(long lo, long hi) {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        return lo + static_cast<long>(s % static_cast<unsigned long>(hi - lo + 1));
    }
};

ZetaRat random_zetarat(Rng& rng) {
    PolyQT n;
    int terms = static_cast<int>(rng.next(1, 3));
    for (int i = 0; i < terms; ++i)
        n.add_term(rng.next(0, 3), rng.next(0, 3), Rat(rng.next(-4, 4), rng.next(1, 3)));
    DenMultiset d;
    int facs = static_cast<int>(rng.next(0, 2));
    for (int i = 0; i < facs; ++i) {
        long a = rng.next(0, 3), b = rng.next(0, 3);
        if (a == 0 && b == 0) a = 1;
        d[DenFactor(a, b)] += 1;
    }
    ZetaRat z(std::move(n), std::move(d));
    if (z.num.is_zero()) z.num.add_term(0, 0, Rat(1));
    return z;
}

} // namespace

TEST_CASE("rational basics") {
    CHECK(Rat(6, 4) == Rat(3, 2));
    CHECK(Rat(-6, 4).str() == "-3/2");
    CHECK(Rat::parse("7/21") == Rat(1, 3));
    CHECK(Rat::parse("-5") == Rat(-5));
    CHECK_THROWS_AS(Rat::parse("1/0"), zeta_error);
    CHECK(Rat(7, 2).floor_long() == 3);
    CHECK(Rat(-7, 2).floor_long() == -4);
    CHECK(Rat(18, 5).val_p(3) == 2);
    CHECK(Rat(5, 9).val_p(3) == -2);
    CHECK(Rat(18, 5).unit_p(3) == Rat(2, 5));
    CHECK(Rat(1, 2).mod_p(5) == 3);
    CHECK_THROWS_AS(Rat(1, 3).mod_p(3), zeta_error);
    CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
}

TEST_CASE("zr_add identities and common denominators") {
    ZetaRat g = frac(mono(0, 0), {{DenFactor(1, 1), 1}}); // 1/(1-QT)
    CHECK(zr_equal(zr_add(g, ZetaRat::zero()), g));

    ZetaRat a = frac(mono(1, 0), {{DenFactor(1, 1), 1}});       // Q/(1-QT)
    ZetaRat b = frac(mono(2, 1), {{DenFactor(1, 1), 1}});       // Q^2 T/(1-QT)
    PolyQT want = mono(1, 0) + mono(2, 1);
    ZetaRat sum = zr_add(a, b);
    CHECK(sum.num == want);
    CHECK(sum.den.size() == 1);
    CHECK(sum.den.begin()->second == 1); // shared factor counted once

    // 1/(1-QT) + 1/(1-Q^2T^4) = (2 - QT - Q^2T^4)/((1-QT)(1-Q^2T^4)),
    // checked by series expansion at q = 3 to order 20.
    ZetaRat c = frac(mono(0, 0), {{DenFactor(2, 4), 1}});
    ZetaRat s = zr_add(g, c);
    PolyQT expect_num = PolyQT::constant(Rat(2));
    expect_num.add_term(1, 1, Rat(-1));
    expect_num.add_term(2, 4, Rat(-1));
    CHECK(s.num == expect_num);
    Dense lhs = dense_of(g, 3, 20) + dense_of(c, 3, 20);
    CHECK(igusa::testing::series_matches(s, lhs));
}

TEST_CASE("zr_mul multiset denominators") {
    ZetaRat x = frac(mono(1, 2), {{DenFactor(1, 1), 1}});
    CHECK(zr_equal(zr_mul(x, ZetaRat::one()), x));

    ZetaRat a = frac(PolyQT::constant(Rat(1)) - mono(1, 0), {}); // 1-Q
    ZetaRat b = frac(mono(1, 0), {{DenFactor(1, 0), 1}});        // Q/(1-Q)
    ZetaRat prod = zr_reduce(zr_mul(a, b));
    CHECK(prod.den.empty());
    CHECK(prod.num == mono(1, 0));

    // (Q^2T^4/(1-Q^2T^4)) * (Q^5T^12/(1-Q^5T^12)) -> Q^7T^16 over both factors
    ZetaRat u = frac(mono(2, 4), {{DenFactor(2, 4), 1}});
    ZetaRat v = frac(mono(5, 12), {{DenFactor(5, 12), 1}});
    ZetaRat w = zr_mul(u, v);
    CHECK(w.num == mono(7, 16));
    REQUIRE(w.den.size() == 2);
    CHECK(w.den.at(DenFactor(2, 4)) == 1);
    CHECK(w.den.at(DenFactor(5, 12)) == 1);
}

TEST_CASE("zr_reduce exact cancellation") {
    ZetaRat a = frac(PolyQT::constant(Rat(1)) - mono(1, 1), {{DenFactor(1, 1), 1}});
    ZetaRat r = zr_reduce(a);
    CHECK(r.den.empty());
    CHECK(r.num == PolyQT::constant(Rat(1)));

    // (1 - Q^2T^2)/(1-QT) = 1 + QT by long division
    ZetaRat b = frac(PolyQT::constant(Rat(1)) - mono(2, 2), {{DenFactor(1, 1), 1}});
    ZetaRat rb = zr_reduce(b);
    CHECK(rb.den.empty());
    CHECK(rb.num == PolyQT::constant(Rat(1)) + mono(1, 1));

    // irreducible: (Q + Q^2 T)/(1-QT) unchanged
    ZetaRat c = frac(mono(1, 0) + mono(2, 1), {{DenFactor(1, 1), 1}});
    ZetaRat rc = zr_reduce(c);
    CHECK(rc.den.size() == 1);
    CHECK(rc.num == c.num);

    // zero numerator collapses entirely
    ZetaRat z = frac(PolyQT(), {{DenFactor(1, 1), 1}});
    CHECK(zr_reduce(z).den.empty());
}

TEST_CASE("zr_series frozen examples") {
    // (1-Q)/(1-QT) at q=3: every coefficient 2/3^{m+1}... i.e. [2/3, 2/9, 2/27]
    ZetaRat a = frac(PolyQT::constant(Rat(1)) - mono(1, 0), {{DenFactor(1, 1), 1}});
    SeriesT s = zr_series(a, 3, 2);
    CHECK(s.coeffs == std::vector<Rat>{Rat(2, 3), Rat(2, 9), Rat(2, 27)});

    SeriesT one = zr_series(ZetaRat::one(), 5, 3);
    CHECK(one.coeffs == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0)});

    // (Q + Q^2 T)/(1 - Q^2 T) at q=2, order 3 — cross-checked against the
    // dense-series oracle, coefficients [1/2, 3/8, 3/32, 3/128].
    ZetaRat c = frac(mono(1, 0) + mono(2, 1), {{DenFactor(2, 1), 1}});
    SeriesT sc = zr_series(c, 2, 3);
    Dense oc = dense_of(c, 2, 3);
    CHECK(sc.coeffs == oc.c);
    CHECK(sc.coeffs == std::vector<Rat>{Rat(1, 2), Rat(3, 8), Rat(3, 32), Rat(3, 128)});

    ZetaRat div = frac(mono(0, 0), {{DenFactor(1, 0), 1}});
    CHECK_NOTHROW(zr_series(div, 3, 4));
}

TEST_CASE("geometric_sum shapes") {
    ZetaRat g1 = geometric_sum(1, -1, 1, 0); // sum_{k>=1} Q^k = Q/(1-Q)
    CHECK(g1.num == mono(1, 0));
    CHECK(g1.den.at(DenFactor(1, 0)) == 1);

    ZetaRat g2 = geometric_sum(1, -1, 2, 4);
    CHECK(g2.num == mono(2, 4));
    CHECK(g2.den.at(DenFactor(2, 4)) == 1);

    // A=2, B=5, factor (1,1): (Q^2T^2 - Q^6T^6)/(1-QT); equals the 4 monomials
    ZetaRat g3 = geometric_sum(2, 5, 1, 1);
    PolyQT direct;
    for (long k = 2; k <= 5; ++k) direct.add_term(k, k, Rat(1));
    CHECK(zr_equal(g3, ZetaRat(direct)));
}

TEST_CASE("geometric_sum finite equals monomial sum exactly (property)") {
    Rng rng;
    for (int it = 0; it < 40; ++it) {
        long A = rng.next(0, 4);
        long B = A + rng.next(0, 6);
        long cQ = rng.next(0, 3), cT = rng.next(0, 3);
        if (cQ == 0 && cT == 0) cQ = 2;
        ZetaRat g = geometric_sum(A, B, cQ, cT);
        PolyQT direct;
        for (long k = A; k <= B; ++k) direct.add_term(cQ * k, cT * k, Rat(1));
        CHECK(zr_equal(g, ZetaRat(direct)));
    }
}

TEST_CASE("floor_sum against partial-sum oracle") {
    struct Case { long m0; Rat tau; long c1, c2, c3, c4; };
    std::vector<Case> cases = {
        {1, Rat(2), 1, 0, 0, 1},    // integer slope: QT^2/(1-QT^2)
        {1, Rat(1), 1, 0, 0, 1},
        {1, Rat(1, 2), 1, 0, 0, 1}, // (Q + Q^2 T)/(1 - Q^2 T)
        {1, Rat(5, 2), 1, 0, 1, 1}, // exponents with [5m/2] in the T part
        {1, Rat(0), 1, 0, 1, 0},
        {2, Rat(2, 3), 2, 1, 1, 2},
        {1, Rat(4), 1, 0, 2, 1},
    };
    for (const auto& c : cases) {
        ZetaRat fs = floor_sum(c.m0, c.tau, c.c1, c.c2, c.c3, c.c4);
        // 50 terms reach well past order 30 in Q-degree for all cases here
        Dense partial = floor_sum_partial(c.m0, c.tau, c.c1, c.c2, c.c3, c.c4, 200, 3, 30);
        Dense got = dense_of(fs, 3, 30);
        CHECK(got.c == partial.c);
    }

    ZetaRat simple = floor_sum(1, Rat(2), 1, 0, 0, 1);
    ZetaRat expect = frac(mono(1, 2), {{DenFactor(1, 2), 1}});
    CHECK(zr_equal(simple, expect));

    ZetaRat half = floor_sum(1, Rat(1, 2), 1, 0, 0, 1);
    ZetaRat expect_half = frac(mono(1, 0) + mono(2, 1), {{DenFactor(2, 1), 1}});
    CHECK(zr_equal(half, expect_half));

    // tau = 5/2, exponents Q^{m + [m tau]}: (Q^3 + Q^7)/(1 - Q^7)
    ZetaRat fs52 = floor_sum(1, Rat(5, 2), 1, 1, 0, 0);
    ZetaRat expect52 = frac(mono(3, 0) + mono(7, 0), {{DenFactor(7, 0), 1}});
    CHECK(zr_equal(fs52, expect52));

    CHECK_THROWS_AS(floor_sum(1, Rat(1, 2), 0, 0, 1, 0), zeta_error); // no Q growth
}

TEST_CASE("real_pole_parts") {
    ZetaRat a = frac(mono(0, 0), {{DenFactor(9, 20), 1}});
    CHECK(real_pole_parts(a) == std::set<Rat>{Rat(-9, 20)});

    CHECK(real_pole_parts(ZetaRat(mono(2, 3))).empty());

    ZetaRat b = frac(mono(0, 0), {{DenFactor(1, 1), 1}, {DenFactor(2, 4), 1}});
    CHECK(real_pole_parts(b) == std::set<Rat>{Rat(-1), Rat(-1, 2)});

    // invariant under multiplication by a nonzero polynomial numerator
    Rng rng;
    for (int it = 0; it < 20; ++it) {
        ZetaRat z = random_zetarat(rng);
        PolyQT p;
        p.add_term(rng.next(0, 2), rng.next(0, 2), Rat(rng.next(1, 5)));
        ZetaRat zp = zr_mul(z, ZetaRat(p));
        CHECK(real_pole_parts(z) == real_pole_parts(zp));
    }
}

TEST_CASE("series homomorphism properties (add/mul), reduce preserves value") {
    Rng rng;
    for (long q : {2L, 3L, 5L}) {
        for (int it = 0; it < 25; ++it) {
            ZetaRat a = random_zetarat(rng);
            ZetaRat b = random_zetarat(rng);
            Dense da = dense_of(a, q, 25), db = dense_of(b, q, 25);
            CHECK(igusa::testing::series_matches(zr_add(a, b), da + db));
            CHECK(igusa::testing::series_matches(zr_mul(a, b), da * db));
        }
    }
    for (int it = 0; it < 30; ++it) {
        ZetaRat a = random_zetarat(rng);
        // plant an exactly cancellable factor
        ZetaRat planted = zr_mul(a, frac(PolyQT::constant(Rat(1)) - mono(1, 2), {{DenFactor(1, 2), 1}}));
        ZetaRat r = zr_reduce(planted);
        CHECK(igusa::testing::series_matches(r, dense_of(planted, 3, 25)));
    }
}

TEST_CASE("zetarat json and latex emitters") {
    ZetaRat a = frac(mono(9, 20, Rat(1)) + mono(0, 0, Rat(-1, 2)), {{DenFactor(9, 20), 1}});
    auto j = zr_to_json(a);
    CHECK(j["den"][0][0] == 9);
    CHECK(j["den"][0][1] == 20);
    CHECK(j["den"][0][2] == 1);
    CHECK(j["num"].size() == 2);
    CHECK(j["num"][0][2] == "-1/2");

    std::string tex = zr_to_latex(frac(mono(9, 20), {{DenFactor(9, 20), 1}}));
    CHECK(tex == "\\frac{q^{-9-20s}}{\\left(1 - q^{-9-20s}\\right)}");
    CHECK(zr_to_latex(ZetaRat::one()) == "1");
}

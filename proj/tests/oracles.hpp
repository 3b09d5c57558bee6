#ifndef IGUSA_TEST_ORACLES_HPP
#define IGUSA_TEST_ORACLES_HPP

// Independent reference implementations used only by the test suites.
// Everything here recomputes expected values from first principles (dense
// series arithmetic, term-by-term partial sums, exhaustive congruence
// counting) without touching the library's factored-denominator paths.

#include <cassert>
#include <vector>

#include "igusa/qt_algebra.hpp"
#include "igusa/rational.hpp"

namespace igusa::testing {

/// Dense truncated series in T over exact rationals, Q specialized to 1/q.
struct Dense {
    long q;
    std::vector<Rat> c;

    Dense(long q_, long order) : q(q_), c(static_cast<size_t>(order) + 1, Rat(0)) {}
    long order() const { return static_cast<long>(c.size()) - 1; }

    void add_monomial(long dq, long dt, const Rat& coef) {
        if (dt <= order()) c[static_cast<size_t>(dt)] += coef * Rat(1, q).pow(dq);
    }

    friend Dense operator+(const Dense& a, const Dense& b) {
        assert(a.q == b.q && a.c.size() == b.c.size());
        Dense r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
        return r;
    }

    friend Dense operator*(const Dense& a, const Dense& b) {
        assert(a.q == b.q && a.c.size() == b.c.size());
        Dense r(a.q, a.order());
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i].is_zero()) continue;
            for (size_t j = 0; i + j < r.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }

    /// Divides by a dense series with nonzero constant term (long-division
    /// recurrence). Used to invert the factors 1 - q^{-a} T^b.
    Dense divided_by(const Dense& d) const {
        assert(!d.c[0].is_zero());
        Rat lead_inv = Rat(1) / d.c[0];
        Dense r(q, order());
        for (size_t i = 0; i < c.size(); ++i) {
            Rat acc = c[i];
            for (size_t j = 1; j <= i; ++j) acc -= d.c[j] * r.c[i - j];
            r.c[i] = acc * lead_inv;
        }
        return r;
    }
};

/// Reference expansion of a ZetaRat: expand the numerator, then divide out
/// each factor with the series long-division recurrence.
inline Dense dense_of(const ZetaRat& z, long q, long order) {
    Dense r(q, order);
    for (const auto& [e, coef] : z.num.terms()) r.add_monomial(e.first, e.second, coef);
    for (const auto& [f, mult] : z.den) {
        Dense fac(q, order);
        fac.add_monomial(0, 0, Rat(1));
        fac.add_monomial(f.alpha, f.beta, Rat(-1));
        for (int k = 0; k < mult; ++k) r = r.divided_by(fac);
    }
    return r;
}

inline bool series_matches(const ZetaRat& z, const Dense& expected) {
    Dense got = dense_of(z, expected.q, expected.order());
    return got.c == expected.c;
}

/// Term-by-term partial sum of Sum_{m>=m0} Q^{c1 m + c2 [m tau]} T^{c3 m + c4 [m tau]}.
inline Dense floor_sum_partial(long m0, const Rat& tau, long c1, long c2, long c3, long c4,
                               long terms, long q, long order) {
    Dense r(q, order);
    for (long m = m0; m < m0 + terms; ++m) {
        long fl = (Rat(m) * tau).floor_long();
        r.add_monomial(c1 * m + c2 * fl, c3 * m + c4 * fl, Rat(1));
    }
    return r;
}

} // namespace igusa::testing

#endif

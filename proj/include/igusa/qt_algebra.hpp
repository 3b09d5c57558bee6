#ifndef IGUSA_QT_ALGEBRA_HPP
#define IGUSA_QT_ALGEBRA_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "igusa/errors.hpp"
#include "igusa/rational.hpp"

// Exact arithmetic in the two formal quantities Q = q^{-1} and T = q^{-s}.
// A zeta value is a Laurent-free rational function num / prod(1 - Q^a T^b);
// every denominator produced by the stationary-phase machinery has that
// factored shape, so no bivariate gcd is ever needed: cancellation is only
// attempted by exact division of a single factor into the numerator.

namespace igusa {

/// Exponent pair (degree in Q, degree in T). Both non-negative.
using ExpQT = std::pair<long, long>;

/// Sparse polynomial in Q, T with rational coefficients; no zero terms stored.
class PolyQT {
public:
    using Terms = std::map<ExpQT, Rat>;

    PolyQT() = default;
    static PolyQT constant(const Rat& c) {
        PolyQT p;
        p.add_term(0, 0, c);
        return p;
    }
    static PolyQT monomial(long dq, long dt, const Rat& c = Rat(1)) {
        PolyQT p;
        p.add_term(dq, dt, c);
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first == ExpQT{0, 0});
    }

    void add_term(long dq, long dt, const Rat& c) {
        if (c.is_zero()) return;
        if (dq < 0 || dt < 0) fail(errc::non_positive_growth, "negative exponent in Q/T monomial");
        auto key = ExpQT{dq, dt};
        auto it = t_.find(key);
        if (it == t_.end()) {
            t_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    PolyQT& operator+=(const PolyQT& o) {
        for (const auto& [e, c] : o.t_) add_term(e.first, e.second, c);
        return *this;
    }
    PolyQT& operator-=(const PolyQT& o) {
        for (const auto& [e, c] : o.t_) add_term(e.first, e.second, -c);
        return *this;
    }
    friend PolyQT operator+(PolyQT a, const PolyQT& b) { return a += b; }
    friend PolyQT operator-(PolyQT a, const PolyQT& b) { return a -= b; }

    friend PolyQT operator*(const PolyQT& a, const PolyQT& b) {
        PolyQT r;
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_)
                r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return r;
    }
    PolyQT& operator*=(const PolyQT& o) { return *this = *this * o; }

    PolyQT scaled(const Rat& c) const {
        PolyQT r;
        for (const auto& [e, k] : t_) r.add_term(e.first, e.second, k * c);
        return r;
    }

    friend bool operator==(const PolyQT& a, const PolyQT& b) { return a.t_ == b.t_; }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            if (e.first) os << "*Q^" << e.first;
            if (e.second) os << "*T^" << e.second;
        }
        return os.str();
    }

private:
    Terms t_;
};

/// One denominator factor 1 - Q^alpha T^beta; (alpha, beta) != (0, 0).
struct DenFactor {
    long alpha = 0;
    long beta = 0;

    DenFactor(long a, long b) : alpha(a), beta(b) {
        if (a < 0 || b < 0 || (a == 0 && b == 0))
            fail(errc::divergent_factor, "denominator factor 1 - Q^" + std::to_string(a) +
                                             " T^" + std::to_string(b) + " not allowed");
    }

    PolyQT poly() const {
        PolyQT p = PolyQT::constant(Rat(1));
        p.add_term(alpha, beta, Rat(-1));
        return p;
    }

    friend bool operator<(const DenFactor& a, const DenFactor& b) {
        return std::tie(a.alpha, a.beta) < std::tie(b.alpha, b.beta);
    }
    friend bool operator==(const DenFactor& a, const DenFactor& b) {
        return a.alpha == b.alpha && a.beta == b.beta;
    }
};

/// Multiset of denominator factors, keyed by (alpha, beta) with multiplicity.
using DenMultiset = std::map<DenFactor, int>;

// Exact division of p by 1 - Q^a T^b. Returns the quotient when the division
// is exact, nothing otherwise. Graded-lex leading-term elimination: the
// divisor's leading term is -Q^a T^b, so each step strictly lowers the lead.
inline std::optional<PolyQT> exact_div_factor(const PolyQT& p, const DenFactor& f) {
    auto grlex_less = [](const ExpQT& x, const ExpQT& y) {
        long dx = x.first + x.second, dy = y.first + y.second;
        if (dx != dy) return dx < dy;
        return x < y;
    };
    std::map<ExpQT, Rat> rem(p.terms().begin(), p.terms().end());
    PolyQT quot;
    while (!rem.empty()) {
        auto lead = std::max_element(rem.begin(), rem.end(),
                                     [&](const auto& a, const auto& b) {
                                         return grlex_less(a.first, b.first);
                                     });
        ExpQT e = lead->first;
        Rat c = lead->second;
        if (e.first < f.alpha || e.second < f.beta) return std::nullopt;
        ExpQT qe{e.first - f.alpha, e.second - f.beta};
        Rat qc = -c;
        quot.add_term(qe.first, qe.second, qc);
        // rem -= qc * (1 - Q^a T^b): cancels the lead, adds the lower term qc.
        rem.erase(e);
        auto add = [&](ExpQT k, const Rat& v) {
            auto it = rem.find(k);
            if (it == rem.end()) {
                if (!v.is_zero()) rem.emplace(k, v);
            } else {
                it->second += v;
                if (it->second.is_zero()) rem.erase(it);
            }
        };
        add(qe, -qc);
    }
    return quot;
}

/// Truncated power series in T with Q specialized to 1/q.
struct SeriesT {
    long q = 0;
    std::vector<Rat> coeffs; // index m = power of T; size = order + 1

    long order() const { return static_cast<long>(coeffs.size()) - 1; }

    friend bool operator==(const SeriesT& a, const SeriesT& b) {
        return a.q == b.q && a.coeffs == b.coeffs;
    }
};

/// Rational function num / prod (1 - Q^alpha T^beta)^mult — the universal
/// result type of the zeta engine. The representation need not be reduced;
/// zr_reduce yields a form where no stored factor divides the numerator.
struct ZetaRat {
    PolyQT num;
    DenMultiset den;

    ZetaRat() = default;
    explicit ZetaRat(PolyQT n) : num(std::move(n)) {}
    ZetaRat(PolyQT n, DenMultiset d) : num(std::move(n)), den(std::move(d)) {
        if (num.is_zero()) den.clear();
    }

    static ZetaRat zero() { return ZetaRat(); }
    static ZetaRat one() { return ZetaRat(PolyQT::constant(Rat(1))); }
    static ZetaRat constant(const Rat& c) { return ZetaRat(PolyQT::constant(c)); }
    static ZetaRat monomial(long dq, long dt, const Rat& c = Rat(1)) {
        return ZetaRat(PolyQT::monomial(dq, dt, c));
    }

    bool is_zero() const { return num.is_zero(); }

    PolyQT den_poly() const {
        PolyQT d = PolyQT::constant(Rat(1));
        for (const auto& [f, m] : den)
            for (int i = 0; i < m; ++i) d *= f.poly();
        return d;
    }
};

inline ZetaRat zr_add(const ZetaRat& a, const ZetaRat& b) {
    // Common denominator: each factor taken with the larger multiplicity.
    DenMultiset d;
    for (const auto& [f, m] : a.den) d[f] = m;
    for (const auto& [f, m] : b.den) {
        auto it = d.find(f);
        if (it == d.end()) d.emplace(f, m);
        else it->second = std::max(it->second, m);
    }
    auto lift = [&](const ZetaRat& x) {
        PolyQT n = x.num;
        for (const auto& [f, m] : d) {
            int have = 0;
            if (auto it = x.den.find(f); it != x.den.end()) have = it->second;
            for (int i = have; i < m; ++i) n *= f.poly();
        }
        return n;
    };
    PolyQT num = lift(a) + lift(b);
    return ZetaRat(std::move(num), std::move(d));
}

inline ZetaRat zr_sub(const ZetaRat& a, const ZetaRat& b) {
    ZetaRat nb(b.num.scaled(Rat(-1)), b.den);
    return zr_add(a, nb);
}

inline ZetaRat zr_mul(const ZetaRat& a, const ZetaRat& b) {
    DenMultiset d = a.den;
    for (const auto& [f, m] : b.den) d[f] += m;
    return ZetaRat(a.num * b.num, std::move(d));
}

inline ZetaRat zr_scale(const ZetaRat& a, const Rat& c) {
    return ZetaRat(a.num.scaled(c), a.den);
}

/// Cancels denominator factors into the numerator until no stored factor
/// divides exactly. Value-preserving.
inline ZetaRat zr_reduce(const ZetaRat& a) {
    ZetaRat r = a;
    if (r.num.is_zero()) {
        r.den.clear();
        return r;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = r.den.begin(); it != r.den.end(); ++it) {
            if (auto q = exact_div_factor(r.num, it->first)) {
                r.num = std::move(*q);
                if (--it->second == 0) r.den.erase(it);
                changed = true;
                break;
            }
        }
    }
    return r;
}

/// Value equality via cross multiplication: a.num * den(b) == b.num * den(a).
inline bool zr_equal(const ZetaRat& a, const ZetaRat& b) {
    return a.num * b.den_poly() == b.num * a.den_poly();
}

/// Coefficients of T^0..T^order with Q specialized to 1/q_value. Factors with
/// beta = 0 become the scalar 1/(1 - q^{-alpha}); all others expand as
/// geometric series in T.
inline SeriesT zr_series(const ZetaRat& a, long q_value, long order) {
    if (q_value < 2) fail(errc::schema_error, "series base must be >= 2");
    SeriesT s;
    s.q = q_value;
    s.coeffs.assign(static_cast<size_t>(order) + 1, Rat(0));
    Rat qinv(1, q_value);
    for (const auto& [e, c] : a.num.terms()) {
        if (e.second <= order) s.coeffs[static_cast<size_t>(e.second)] += c * qinv.pow(e.first);
    }
    for (const auto& [f, mult] : a.den) {
        if (f.beta == 0 && f.alpha == 0)
            fail(errc::divergent_factor, "factor 1 - Q^0 T^0 vanishes");
        for (int rep = 0; rep < mult; ++rep) {
            if (f.beta == 0) {
                Rat scal = Rat(1) / (Rat(1) - qinv.pow(f.alpha));
                for (auto& c : s.coeffs) c *= scal;
            } else {
                std::vector<Rat> out(s.coeffs.size(), Rat(0));
                Rat ratio = qinv.pow(f.alpha);
                for (long i = 0; i <= order; ++i) {
                    Rat rk(1);
                    for (long k = 0; f.beta * k <= i; ++k) {
                        out[static_cast<size_t>(i)] +=
                            s.coeffs[static_cast<size_t>(i - f.beta * k)] * rk;
                        rk *= ratio;
                    }
                }
                s.coeffs = std::move(out);
            }
        }
    }
    return s;
}

/// Sum_{k=A}^{B} (Q^cQ T^cT)^k. B < 0 encodes +infinity. Finite sums are the
/// closed form (z^A - z^{B+1})/(1 - z); the infinite sum is z^A/(1 - z).
inline ZetaRat geometric_sum(long A, long B, long cQ, long cT) {
    bool infinite = B < 0;
    if (!infinite && A > B) fail(errc::schema_error, "geometric_sum needs A <= B");
    if (cQ < 0 || cT < 0)
        fail(errc::non_positive_growth, "geometric ratio exponents must be non-negative");
    if (cQ == 0 && cT == 0) {
        if (infinite) fail(errc::non_positive_growth, "constant geometric series diverges");
        return ZetaRat::constant(Rat(B - A + 1));
    }
    if (A < 0 || A * cQ < 0) fail(errc::non_positive_growth, "negative start exponent");
    PolyQT n = PolyQT::monomial(cQ * A, cT * A);
    if (!infinite) n.add_term(cQ * (B + 1), cT * (B + 1), Rat(-1));
    DenMultiset d;
    d[DenFactor(cQ, cT)] = 1;
    return ZetaRat(std::move(n), std::move(d));
}

/// Sum over an arithmetic progression n >= 0 of Q^{qa + qs n} T^{ta + ts n}.
/// Workhorse behind floor_sum and the closed-form half of the zeta engine.
inline ZetaRat progression_sum(long qa, long ta, long qs, long ts) {
    if (qa < 0 || ta < 0) fail(errc::non_positive_growth, "negative base exponent");
    if (qs < 0 || ts < 0 || (qs == 0 && ts == 0))
        fail(errc::non_positive_growth, "non-converging progression ratio");
    DenMultiset d;
    d[DenFactor(qs, ts)] = 1;
    return ZetaRat(PolyQT::monomial(qa, ta), std::move(d));
}

/// Sum_{m >= m0} Q^{c1 m + c2 [m tau]} T^{c3 m + c4 [m tau]} computed by
/// splitting m into residue classes mod den(tau), on which [m tau] is affine.
inline ZetaRat floor_sum(long m0, const Rat& tau, long c1, long c2, long c3, long c4) {
    if (m0 < 1) fail(errc::schema_error, "floor_sum needs m0 >= 1");
    if (tau.sign() < 0) fail(errc::schema_error, "floor_sum needs tau >= 0");
    long D = static_cast<long>(tau.den().get_si());
    long P = static_cast<long>(tau.num().get_si());
    long growQ = c1 * D + c2 * P;
    long growT = c3 * D + c4 * P;
    if (growQ <= 0) fail(errc::non_positive_growth, "Q-degree does not grow");
    if (growT < 0) fail(errc::non_positive_growth, "T-degree shrinks");
    ZetaRat total = ZetaRat::zero();
    for (long r = 0; r < D; ++r) {
        long mstart = m0 + ((r - m0) % D + D) % D;
        long fl = (Rat(mstart) * tau).floor_long();
        long qa = c1 * mstart + c2 * fl;
        long ta = c3 * mstart + c4 * fl;
        if (qa < 0 || ta < 0) fail(errc::non_positive_growth, "negative exponent in floor_sum");
        total = zr_add(total, progression_sum(qa, ta, growQ, growT));
    }
    return total;
}

/// { -alpha/beta : (alpha, beta) in den, beta != 0 } — the real parts of the
/// candidate poles carried by the denominator.
inline std::set<Rat> real_pole_parts(const ZetaRat& a) {
    std::set<Rat> s;
    for (const auto& [f, m] : a.den)
        if (f.beta != 0) s.insert(Rat(-f.alpha, f.beta));
    return s;
}

// ---- serialization ----

inline nlohmann::json zr_to_json(const ZetaRat& a) {
    nlohmann::json jnum = nlohmann::json::array();
    for (const auto& [e, c] : a.num.terms())
        jnum.push_back({e.first, e.second, c.str()});
    nlohmann::json jden = nlohmann::json::array();
    for (const auto& [f, m] : a.den) jden.push_back({f.alpha, f.beta, m});
    return nlohmann::json{{"num", jnum}, {"den", jden}};
}

inline std::string latex_power_q(long a, long b) {
    // Q^a T^b rendered as q^{-a-bs}
    std::ostringstream os;
    os << "q^{";
    if (a == 0 && b == 0) {
        os << "0";
    } else {
        if (a != 0) os << -a;
        if (b != 0) {
            os << (b > 0 ? "-" : "+");
            if (std::abs(b) != 1) os << std::abs(b);
            os << "s";
        }
    }
    os << "}";
    return os.str();
}

inline std::string zr_to_latex(const ZetaRat& a) {
    std::ostringstream num;
    if (a.num.is_zero()) return "0";
    bool first = true;
    for (const auto& [e, c] : a.num.terms()) {
        Rat cc = c;
        if (!first) {
            num << (cc.sign() < 0 ? " - " : " + ");
            if (cc.sign() < 0) cc = -cc;
        } else if (cc.sign() < 0) {
            num << "-";
            cc = -cc;
        }
        first = false;
        bool unit_coeff = (cc == Rat(1)) && (e.first != 0 || e.second != 0);
        if (!unit_coeff) {
            if (cc.is_integer()) num << cc.str();
            else num << "\\tfrac{" << cc.num().get_str() << "}{" << cc.den().get_str() << "}";
        }
        if (e.first != 0 || e.second != 0) num << latex_power_q(e.first, e.second);
    }
    if (a.den.empty()) return num.str();
    std::ostringstream den;
    for (const auto& [f, m] : a.den) {
        std::string fac = "\\left(1 - " + latex_power_q(f.alpha, f.beta) + "\\right)";
        den << fac;
        if (m > 1) den << "^{" << m << "}";
    }
    return "\\frac{" + num.str() + "}{" + den.str() + "}";
}

} // namespace igusa

#endif

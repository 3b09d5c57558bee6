#ifndef IGUSA_SQH_HPP
#define IGUSA_SQH_HPP

#include <algorithm>
#include <vector>

#include "igusa/errors.hpp"
#include "igusa/poly2.hpp"

// Semi-quasihomogeneous structure. For a coprime weight (a, b) a polynomial
// splits into quasihomogeneous parts of strictly increasing weighted degree
// d = a*i + b*j; each part is kept factored as c x^u y^v prod (y^a - alpha x^b)^e.

namespace igusa {

struct SQHPart {
    Rat c;                                     // leading coefficient, nonzero
    long u = 0, v = 0;                         // monomial prefactor x^u y^v
    std::vector<std::pair<Rat, long>> factors; // (alpha, e), alphas pairwise distinct
    long d = 0;                                // weighted degree

    long factor_degree() const {
        long s = 0;
        for (const auto& [al, e] : factors) s += e;
        return s;
    }

    /// Multiplicity of theta among this part's roots (0 when absent).
    long mult_of(const Rat& theta) const {
        for (const auto& [al, e] : factors)
            if (al == theta) return e;
        return 0;
    }
};

struct SQHDecomposition {
    long a = 0, b = 0;          // weight, coprime
    std::vector<SQHPart> parts; // ordered by strictly increasing d

    long d0() const { return parts.empty() ? 0 : parts.front().d; }
};

inline IntPoly2 expand_sqh_part(const SQHPart& p, long a, long b) {
    IntPoly2 r = IntPoly2::monomial(p.u, p.v, p.c);
    for (const auto& [alpha, e] : p.factors) {
        IntPoly2 bin = IntPoly2::monomial(0, a);
        bin += IntPoly2::monomial(b, 0, -alpha);
        r *= bin.pow(e);
    }
    return r;
}

/// Expands the factored form back to a plain polynomial.
inline IntPoly2 expand_sqh(const SQHDecomposition& d) {
    IntPoly2 r;
    for (const auto& p : d.parts) r += expand_sqh_part(p, d.a, d.b);
    return r;
}

namespace detail {

// Divisors of |n| when n factors over primes <= 10^6; empty on failure.
inline std::vector<Int> divisors_of(Int n) {
    n = abs(n);
    std::vector<std::pair<Int, int>> fac;
    for (long p = 2; p <= 1000000 && n > 1; p == 2 ? p = 3 : p += 2) {
        if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
            ++e;
        }
        fac.push_back({Int(p), e});
    }
    if (n > 1) {
        // leftover cofactor: accept it as prime if it passes a probable-prime
        // test, otherwise give up on divisor enumeration
        if (mpz_probab_prime_p(n.get_mpz_t(), 25) == 0) return {};
        fac.push_back({n, 1});
    }
    std::vector<Int> divs = {Int(1)};
    for (const auto& [p, e] : fac) {
        size_t base = divs.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

// Dense univariate polynomial with rational coefficients, ascending powers.
using UniPoly = std::vector<Rat>;

inline Rat uni_eval(const UniPoly& s, const Rat& z) {
    Rat acc(0);
    for (size_t k = s.size(); k-- > 0;) acc = acc * z + s[k];
    return acc;
}

// Divides s by (z - alpha); the division must be exact.
inline UniPoly uni_deflate(const UniPoly& s, const Rat& alpha) {
    UniPoly q(s.size() - 1, Rat(0));
    Rat carry = s.back();
    for (size_t k = s.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = s[k] + carry * alpha;
    }
    if (!carry.is_zero()) fail(errc::irrational_root, "inexact deflation");
    return q;
}

/// Factors s(z) = c * prod (z - alpha_i)^{e_i} over Q. Throws IrrationalRoot
/// when a non-rational root blocks complete splitting.
inline std::pair<Rat, std::vector<std::pair<Rat, long>>> factor_rational_roots(UniPoly s) {
    while (!s.empty() && s.back().is_zero()) s.pop_back();
    if (s.empty()) fail(errc::empty_input, "zero polynomial");
    Rat lead = s.back();
    std::vector<std::pair<Rat, long>> roots;
    while (s.size() > 1) {
        if (s.front().is_zero())
            fail(errc::irrational_root, "unexpected zero root in quasihomogeneous factor");
        // clear denominators, strip content
        Int scale = 1;
        for (const Rat& c : s) scale = lcm(scale, c.den());
        Int a0 = Rat(s.front() * Rat(scale)).num();
        Int aL = Rat(s.back() * Rat(scale)).num();
        std::vector<Int> nums = divisors_of(a0);
        std::vector<Int> dens = divisors_of(aL);
        if (nums.empty() || dens.empty())
            fail(errc::irrational_root, "coefficients too large for rational root search");
        bool found = false;
        for (const Int& un : nums) {
            for (const Int& ud : dens) {
                for (int sgn : {1, -1}) {
                    Rat cand(sgn * un, ud);
                    if (uni_eval(s, cand).is_zero()) {
                        long mult = 0;
                        while (s.size() > 1 && uni_eval(s, cand).is_zero()) {
                            s = uni_deflate(s, cand);
                            ++mult;
                        }
                        roots.push_back({cand, mult});
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found)
            fail(errc::irrational_root,
                 "quasihomogeneous part has no rational factorization; supply factored input");
    }
    std::sort(roots.begin(), roots.end());
    return {lead, roots};
}

} // namespace detail

/// Groups f by weighted degree a*i + b*j and writes each group in the
/// factored quasihomogeneous form. The group with monomial prefactor x^u y^v
/// removed has support on a segment; substituting x = 1 turns it into a
/// univariate polynomial in y^a whose rational roots are the alphas.
inline SQHDecomposition sqh_decompose(const IntPoly2& f, long a, long b) {
    if (gcd_long(a, b) != 1 || a <= 0 || b <= 0)
        fail(errc::non_coprime_weight,
             "weight (" + std::to_string(a) + "," + std::to_string(b) + ") must be coprime positive");
    if (f.is_zero()) fail(errc::empty_input, "zero polynomial");
    if (!f.coeff(0, 0).is_zero()) fail(errc::schema_error, "polynomial must vanish at the origin");

    std::map<long, IntPoly2> groups;
    for (const auto& [e, c] : f.terms()) groups[a * e.first + b * e.second].add_term(e.first, e.second, c);

    SQHDecomposition out;
    out.a = a;
    out.b = b;
    for (const auto& [d, g] : groups) {
        SQHPart part;
        part.d = d;
        long u = -1, v = -1;
        for (const auto& [e, c] : g.terms()) {
            u = (u < 0) ? e.first : std::min(u, e.first);
            v = (v < 0) ? e.second : std::min(v, e.second);
        }
        part.u = u;
        part.v = v;
        long rem = d - a * u - b * v;
        if (rem % (a * b) != 0)
            fail(errc::schema_error, "group not quasihomogeneous for the weight");
        long L = rem / (a * b);
        // S(z) with coefficient of z^{L-t} taken from the term x^{u+bt} y^{v+a(L-t)}
        detail::UniPoly S(static_cast<size_t>(L) + 1, Rat(0));
        for (const auto& [e, c] : g.terms()) {
            long di = e.first - u, dj = e.second - v;
            if (di % b != 0 || dj % a != 0 || di / b + dj / a != L)
                fail(errc::schema_error, "group support not on a weighted segment");
            S[static_cast<size_t>(L - di / b)] = c;
        }
        auto [lead, roots] = detail::factor_rational_roots(S);
        part.c = lead;
        part.factors = roots;
        out.parts.push_back(std::move(part));
    }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const SQHPart& x, const SQHPart& y) { return x.d < y.d; });
    return out;
}

/// Validates a decomposition supplied in factored form (weights coprime,
/// alphas distinct, degrees strictly increasing) and fills in the d fields.
inline void validate_sqh(SQHDecomposition& d) {
    if (gcd_long(d.a, d.b) != 1 || d.a <= 0 || d.b <= 0)
        fail(errc::non_coprime_weight, "weight must be a pair of coprime positive integers");
    if (d.parts.empty()) fail(errc::empty_input, "no parts");
    for (auto& p : d.parts) {
        if (p.c.is_zero()) fail(errc::schema_error, "part coefficient must be nonzero");
        if (p.u < 0 || p.v < 0) fail(errc::schema_error, "negative monomial exponent");
        std::set<Rat> seen;
        for (auto& [al, e] : p.factors) {
            if (al.is_zero()) fail(errc::schema_error, "alpha must be nonzero");
            if (e <= 0) fail(errc::schema_error, "factor multiplicity must be positive");
            if (!seen.insert(al).second) fail(errc::schema_error, "alphas must be pairwise distinct");
        }
        p.d = d.a * d.b * p.factor_degree() + d.a * p.u + d.b * p.v;
    }
    std::sort(d.parts.begin(), d.parts.end(),
              [](const SQHPart& x, const SQHPart& y) { return x.d < y.d; });
    for (size_t i = 1; i < d.parts.size(); ++i)
        if (d.parts[i].d == d.parts[i - 1].d)
            fail(errc::schema_error, "two parts share the weighted degree " +
                                         std::to_string(d.parts[i].d));
}

} // namespace igusa

#endif

#ifndef IGUSA_POLY2_HPP
#define IGUSA_POLY2_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "igusa/errors.hpp"
#include "igusa/rational.hpp"

namespace igusa {

/// Exponent pair (i, j) of a monomial x^i y^j.
using Exp2 = std::pair<long, long>;

/// Sparse polynomial in x, y with exact rational coefficients.
class IntPoly2 {
public:
    using Terms = std::map<Exp2, Rat>;

    IntPoly2() = default;
    static IntPoly2 monomial(long i, long j, const Rat& c = Rat(1)) {
        IntPoly2 p;
        p.add_term(i, j, c);
        return p;
    }
    static IntPoly2 constant(const Rat& c) { return monomial(0, 0, c); }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_term(long i, long j, const Rat& c) {
        if (c.is_zero()) return;
        if (i < 0 || j < 0) fail(errc::schema_error, "negative exponent");
        auto it = t_.find({i, j});
        if (it == t_.end()) {
            t_.emplace(Exp2{i, j}, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Rat coeff(long i, long j) const {
        auto it = t_.find({i, j});
        return it == t_.end() ? Rat(0) : it->second;
    }

    std::set<Exp2> support() const {
        std::set<Exp2> s;
        for (const auto& [e, c] : t_) s.insert(e);
        return s;
    }

    IntPoly2& operator+=(const IntPoly2& o) {
        for (const auto& [e, c] : o.t_) add_term(e.first, e.second, c);
        return *this;
    }
    IntPoly2& operator-=(const IntPoly2& o) {
        for (const auto& [e, c] : o.t_) add_term(e.first, e.second, -c);
        return *this;
    }
    friend IntPoly2 operator+(IntPoly2 a, const IntPoly2& b) { return a += b; }
    friend IntPoly2 operator-(IntPoly2 a, const IntPoly2& b) { return a -= b; }

    friend IntPoly2 operator*(const IntPoly2& a, const IntPoly2& b) {
        IntPoly2 r;
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_)
                r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return r;
    }
    IntPoly2& operator*=(const IntPoly2& o) { return *this = *this * o; }

    IntPoly2 scaled(const Rat& c) const {
        IntPoly2 r;
        for (const auto& [e, k] : t_) r.add_term(e.first, e.second, k * c);
        return r;
    }

    IntPoly2 pow(long e) const {
        IntPoly2 r = constant(Rat(1));
        IntPoly2 base = *this;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) r *= base;
            base *= base;
        }
        return r;
    }

    IntPoly2 dx() const {
        IntPoly2 r;
        for (const auto& [e, c] : t_)
            if (e.first > 0) r.add_term(e.first - 1, e.second, c * Rat(e.first));
        return r;
    }
    IntPoly2 dy() const {
        IntPoly2 r;
        for (const auto& [e, c] : t_)
            if (e.second > 0) r.add_term(e.first, e.second - 1, c * Rat(e.second));
        return r;
    }

    Rat eval(const Rat& x, const Rat& y) const {
        Rat acc(0);
        for (const auto& [e, c] : t_) acc += c * x.pow(e.first) * y.pow(e.second);
        return acc;
    }

    /// Exact evaluation mod p^k for p-integral coefficients.
    Int eval_mod(const Int& x, const Int& y, const Int& pk, long p) const {
        Int acc = 0;
        for (const auto& [e, c] : t_) {
            Int term = c.mod_pk(pk, p);
            Int px, py;
            mpz_powm_ui(px.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e.first),
                        pk.get_mpz_t());
            mpz_powm_ui(py.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(e.second),
                        pk.get_mpz_t());
            acc += term * px * py;
        }
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), pk.get_mpz_t());
        return acc;
    }

    friend bool operator==(const IntPoly2& a, const IntPoly2& b) { return a.t_ == b.t_; }

    /// True when the origin is a singular point: f(0,0) = 0 and both first
    /// partials vanish there (characteristic zero check).
    bool singular_at_origin() const {
        return coeff(0, 0).is_zero() && coeff(1, 0).is_zero() && coeff(0, 1).is_zero();
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            if (e.first) os << "*x^" << e.first;
            if (e.second) os << "*y^" << e.second;
        }
        return os.str();
    }

private:
    Terms t_;
};

/// Polynomial over the prime field F_p; residues in [0, p).
struct ModPoly2 {
    long p = 0;
    std::map<Exp2, long> terms;

    bool is_zero() const { return terms.empty(); }

    void add_term(long i, long j, long c) {
        c %= p;
        if (c < 0) c += p;
        if (c == 0) return;
        auto it = terms.find({i, j});
        if (it == terms.end()) {
            terms.emplace(Exp2{i, j}, c);
        } else {
            it->second = (it->second + c) % p;
            if (it->second == 0) terms.erase(it);
        }
    }

    long eval(long x, long y) const {
        long acc = 0;
        for (const auto& [e, c] : terms) {
            long px = 1, py = 1;
            for (long k = 0; k < e.first; ++k) px = px * x % p;
            for (long k = 0; k < e.second; ++k) py = py * y % p;
            acc = (acc + c % p * px % p * py) % p;
        }
        return acc;
    }

    ModPoly2 dx() const {
        ModPoly2 r{p, {}};
        for (const auto& [e, c] : terms)
            if (e.first > 0) r.add_term(e.first - 1, e.second, c * (e.first % p) % p);
        return r;
    }
    ModPoly2 dy() const {
        ModPoly2 r{p, {}};
        for (const auto& [e, c] : terms)
            if (e.second > 0) r.add_term(e.first, e.second - 1, c * (e.second % p) % p);
        return r;
    }
};

/// Coefficientwise reduction modulo p; every coefficient must be p-integral.
inline ModPoly2 reduce_mod(const IntPoly2& f, long p) {
    ModPoly2 r{p, {}};
    for (const auto& [e, c] : f.terms()) r.add_term(e.first, e.second, c.mod_p(p));
    return r;
}

/// All (x, y) with x, y != 0 and g = dg/dx = dg/dy = 0, by exhaustive
/// enumeration over the (p-1)^2 torus points.
inline std::set<std::pair<long, long>> singular_torus_points(const ModPoly2& g) {
    std::set<std::pair<long, long>> out;
    ModPoly2 gx = g.dx(), gy = g.dy();
    for (long x = 1; x < g.p; ++x)
        for (long y = 1; y < g.p; ++y)
            if (g.eval(x, y) == 0 && gx.eval(x, y) == 0 && gy.eval(x, y) == 0)
                out.insert({x, y});
    return out;
}

/// Torus zeros (not necessarily singular) of g over F_p.
inline std::set<std::pair<long, long>> torus_zeros(const ModPoly2& g) {
    std::set<std::pair<long, long>> out;
    for (long x = 1; x < g.p; ++x)
        for (long y = 1; y < g.p; ++y)
            if (g.eval(x, y) == 0) out.insert({x, y});
    return out;
}

} // namespace igusa

#endif

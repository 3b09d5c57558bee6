#ifndef IGUSA_RATIONAL_HPP
#define IGUSA_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "igusa/errors.hpp"

namespace igusa {

using Int = mpz_class;

/// Exact rational number. Always stored normalized: gcd(|num|, den) = 1,
/// den >= 1. All zeta-function coefficients, pole abscissas and polygon
/// data live in this type; nothing in the library ever rounds.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(const Int& n) : v_(n) {}
    Rat(long n, long d) : v_(n, d) { normalize(); }
    Rat(const Int& n, const Int& d) : v_(n, d) { normalize(); }
    explicit Rat(const mpq_class& q) : v_(q) {
        if (v_.get_den() == 0) fail(errc::syntax_error, "zero denominator");
        v_.canonicalize();
    }

    /// Parses "n" or "n/d" with optional sign. Throws SyntaxError.
    static Rat parse(const std::string& s) {
        if (s.empty()) fail(errc::syntax_error, "empty rational literal");
        for (char c : s)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
                fail(errc::syntax_error, "bad rational literal '" + s + "'");
        try {
            mpq_class q(s);
            if (q.get_den() == 0) fail(errc::syntax_error, "zero denominator in '" + s + "'");
            q.canonicalize();
            return Rat(q);
        } catch (const std::invalid_argument&) {
            fail(errc::syntax_error, "bad rational literal '" + s + "'");
        }
    }

    Int num() const { return v_.get_num(); }
    Int den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Floor toward -infinity, exact.
    Int floor() const {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }
    long floor_long() const { return static_cast<long>(floor().get_si()); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) fail(errc::syntax_error, "division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    Rat pow(long e) const {
        if (e < 0) return Rat(1) / pow(-e);
        mpq_class r(1);
        mpq_class base = v_;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) r *= base;
            base *= base;
        }
        return Rat(r);
    }

    /// p-adic valuation v_p(num) - v_p(den). Undefined for 0 (throws).
    long val_p(long p) const {
        if (is_zero()) fail(errc::syntax_error, "valuation of zero");
        return val_int(v_.get_num(), p) - val_int(v_.get_den(), p);
    }

    /// The p-adic unit part: *this / p^{val_p}.
    Rat unit_p(long p) const {
        long v = val_p(p);
        return *this / Rat(Int(p)).pow(v);
    }

    /// Residue in [0, p) — requires the denominator to be prime to p.
    long mod_p(long p) const {
        Int r = mod_pk(Int(p), p);
        return static_cast<long>(r.get_si());
    }

    /// Residue in [0, pk) where pk is a power of the prime p.
    Int mod_pk(const Int& pk, long p) const {
        Int d = v_.get_den();
        if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)))
            fail(errc::non_unit_denominator,
                 "denominator " + d.get_str() + " not a unit mod " + std::to_string(p));
        Int dinv;
        if (!mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), pk.get_mpz_t()))
            fail(errc::non_unit_denominator, "denominator not invertible mod p^k");
        Int r = v_.get_num() * dinv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), pk.get_mpz_t());
        return r;
    }

    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

    static long val_int(const Int& n, long p) {
        if (n == 0) fail(errc::syntax_error, "valuation of zero");
        Int m = abs(n);
        long v = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
            ++v;
        }
        return v;
    }

private:
    void normalize() {
        if (v_.get_den() == 0) fail(errc::syntax_error, "zero denominator");
        v_.canonicalize();
    }

    mpq_class v_;
};

inline Int int_pow(long base, long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return r;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { long t = a % b; a = b; b = t; }
    return a;
}

} // namespace igusa

#endif

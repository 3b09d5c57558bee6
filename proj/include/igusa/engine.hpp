#ifndef IGUSA_ENGINE_HPP
#define IGUSA_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "igusa/newton_arith.hpp"
#include "igusa/newton_geom.hpp"
#include "igusa/qt_algebra.hpp"

// The zeta engine. Z(s,f,v) is assembled from the unit-torus integral and
// one contribution per cone of the subdivision. Measure factors stay
// symbolic in Q = q^{-1}; residue-field zero counts are concrete integers
// for the chosen prime.

namespace igusa {

// ---------------------------------------------------------------- SPF step

struct UnitIntegralResult {
    ZetaRat value;
    long torus_count = 0; // N: zeros of the reduction on the torus
    bool smooth = false;  // every such zero has nonzero gradient
};

namespace detail {

/// One stationary-phase step over the unit torus: measure (1-Q)^2 split into
/// non-vanishing cosets and smooth-zero cosets, each of the latter
/// contributing Q^2 (1-Q) T/(1-QT).
inline ZetaRat spf_units2(long N) {
    PolyQT head = PolyQT::constant(Rat(1));
    head.add_term(1, 0, Rat(-2));
    head.add_term(2, 0, Rat(1));       // (1-Q)^2
    head.add_term(2, 0, Rat(-N));      // - N Q^2
    ZetaRat r{head, {}};
    if (N != 0) {
        PolyQT tail = PolyQT::monomial(2, 1, Rat(N));
        tail.add_term(3, 1, Rat(-N)); // N Q^2 (1-Q) T
        DenMultiset den;
        den[DenFactor(1, 1)] = 1;
        r = zr_add(r, ZetaRat(std::move(tail), std::move(den)));
    }
    return r;
}

/// SPF over the region (units) x O for a reduced polynomial in x alone:
/// measure (1-Q), N = p * (number of simple nonzero roots).
inline ZetaRat spf_units_times_disc(long N) {
    PolyQT head = PolyQT::constant(Rat(1));
    head.add_term(1, 0, Rat(-1)); // 1 - Q
    head.add_term(2, 0, Rat(-N));
    ZetaRat r{head, {}};
    if (N != 0) {
        PolyQT tail = PolyQT::monomial(2, 1, Rat(N));
        tail.add_term(3, 1, Rat(-N));
        DenMultiset den;
        den[DenFactor(1, 1)] = 1;
        r = zr_add(r, ZetaRat(std::move(tail), std::move(den)));
    }
    return r;
}

} // namespace detail

/// Integral of |f|^s over the unit torus by one SPF step. Requires every
/// torus zero of the reduction to be non-singular.
inline UnitIntegralResult unit_torus_integral(const IntPoly2& f, long p) {
    ModPoly2 fbar = reduce_mod(f, p);
    if (fbar.is_zero())
        fail(errc::singular_reduction, "reduction vanishes identically");
    UnitIntegralResult res;
    auto zeros = torus_zeros(fbar);
    res.torus_count = static_cast<long>(zeros.size());
    ModPoly2 gx = fbar.dx(), gy = fbar.dy();
    for (const auto& [x, y] : zeros)
        if (gx.eval(x, y) == 0 && gy.eval(x, y) == 0)
            fail(errc::singular_reduction,
                 "singular torus zero at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    res.smooth = true;
    res.value = detail::spf_units2(res.torus_count);
    return res;
}

// ------------------------------------------------------- cone contributions

/// Two-dimensional cone: (1-Q)^2 sum over interior lattice points of
/// Q^{sigma(k)} T^{m(k)}. For simple cones this is a product of two
/// geometric factors; otherwise the half-open fundamental parallelepiped
/// enumerates the shifts.
inline ZetaRat cone_contribution_2d(const Cone& cone, [[maybe_unused]] const GeomPolygon& P) {
    if (cone.dim != 2) fail(errc::schema_error, "expected a two-dimensional cone");
    if (cone.face.kind != FaceKind::vertex)
        fail(errc::non_monomial_face, "two-dimensional cone attached to a non-vertex face");
    Vec2 vf = cone.face.vertex;
    Vec2 g1 = cone.gens[0], g2 = cone.gens[1];
    long s1 = g1.first + g1.second, s2 = g2.first + g2.second;
    long d1 = dot(g1, vf), d2 = dot(g2, vf);

    PolyQT one_minus_q = PolyQT::constant(Rat(1));
    one_minus_q.add_term(1, 0, Rat(-1));
    PolyQT measure = one_minus_q * one_minus_q;

    DenMultiset den;
    den[DenFactor(s1, d1)] += 1;
    den[DenFactor(s2, d2)] += 1;

    long D = cross(g1, g2);
    long absD = std::abs(D);
    PolyQT shifts; // sum over parallelepiped points (h != 0) plus the corner g1+g2
    shifts.add_term(s1 + s2, d1 + d2, Rat(1));
    if (absD > 1) {
        for (long i = 0; i <= g1.first + g2.first; ++i)
            for (long j = 0; j <= g1.second + g2.second; ++j) {
                if (i == 0 && j == 0) continue;
                long an = cross({i, j}, g2);
                long bn = cross(g1, {i, j});
                if (D < 0) { an = -an; bn = -bn; }
                // alpha = an/|D|, beta = bn/|D| in [0,1)
                if (an < 0 || bn < 0 || an >= absD || bn >= absD) continue;
                shifts.add_term(i + j, dot({i, j}, vf), Rat(1));
            }
    }
    return ZetaRat(measure * shifts, std::move(den));
}

/// One-dimensional cone whose face function is smooth on the residue torus:
/// I(f_gamma) * z/(1-z) with z = Q^{sigma} T^{m}.
inline ZetaRat cone_contribution_ray_nondeg(const Cone& ray, const IntPoly2& f, long p) {
    if (ray.dim != 1) fail(errc::schema_error, "expected a ray");
    IntPoly2 fg = face_function(f, ray.face);
    ModPoly2 fbar = reduce_mod(fg, p);
    if (fbar.is_zero()) fail(errc::singular_reduction, "face function vanishes mod p");
    if (!singular_torus_points(fbar).empty())
        fail(errc::degenerate_face, "face function is degenerate on the torus");
    UnitIntegralResult I = unit_torus_integral(fg, p);
    long sigma = ray.sigma_gen[0];
    long d = ray.m_gen[0];
    ZetaRat geo = geometric_sum(1, -1, sigma, d);
    return zr_mul(I.value, geo);
}

// ----------------------------------------------------------- phi transform

struct TFPart {
    Rat c;
    long gap = 0; // d_j - d_0
    long A = 0, B = 0;
    std::vector<std::pair<Rat, long>> factors; // (alpha, e), binomial now (w - alpha)
};

struct TransformedFamily {
    long a = 0, b = 0;
    long d0 = 0;
    std::vector<TFPart> parts;
};

/// Monomial change of variables on the unit torus (a composition of
/// (x,y) -> (u, uw) and (x,y) -> (uw, w) steps chosen by the subtractive
/// Euclidean algorithm on the weight) turning every factor y^a - alpha x^b
/// into w - alpha. Measure-preserving, so the unit-torus integral of the
/// family is unchanged.
inline TransformedFamily phi_transform(const SQHDecomposition& d) {
    if (gcd_long(d.a, d.b) != 1) fail(errc::non_coprime_weight, "weight must be coprime");
    TransformedFamily tf;
    tf.a = d.a;
    tf.b = d.b;
    tf.d0 = d.d0();
    for (const auto& p : d.parts)
        tf.parts.push_back(TFPart{p.c, p.d - tf.d0, p.u, p.v, p.factors});

    long sx = d.b, sy = d.a;
    while (sx > 0) {
        if (sy > sx) {
            // x = u w, y = w: monomial (A,B) -> (A, A+B); each factor sheds w^{sx e}
            for (auto& p : tf.parts) {
                long e_total = 0;
                for (auto& [al, e] : p.factors) e_total += e;
                p.B = p.A + p.B + sx * e_total;
            }
            sy -= sx;
        } else {
            // x = u, y = u w: monomial (A,B) -> (A+B, B); each factor sheds u^{sy e}
            for (auto& p : tf.parts) {
                long e_total = 0;
                for (auto& [al, e] : p.factors) e_total += e;
                p.A = p.A + p.B + sy * e_total;
            }
            sx -= sy;
        }
    }
    // strip the common monomial u^N w^M (absolute value 1 on the torus)
    long minA = tf.parts.front().A, minB = tf.parts.front().B;
    for (const auto& p : tf.parts) {
        minA = std::min(minA, p.A);
        minB = std::min(minB, p.B);
    }
    for (auto& p : tf.parts) {
        p.A -= minA;
        p.B -= minB;
    }
    return tf;
}

// -------------------------------------------- theta-expansion constants

struct ThetaExpansion {
    ThetaRoot theta;
    long l0 = 0;                 // max valuation of pairwise root differences of part 0
    std::vector<long> consts;    // Const(j, theta) per part
    std::vector<Rat> unit_cofactors; // C(j, theta)
    long M0 = 1;
};

/// The effectively computable constants of the theta-expansion: valuations
/// Const(j, theta) of the part terms on the theta-class, their unit
/// cofactors, and the threshold M0 past which the leading part dominates on
/// every non-root class.
inline ThetaExpansion theta_expansion(const TransformedFamily& tf, const ThetaRoot& theta, long p) {
    ThetaExpansion ex;
    ex.theta = theta;
    // l(f_0) over the p-integral roots of part 0
    std::vector<Rat> roots0;
    for (const auto& [al, e] : tf.parts.front().factors)
        if (al.val_p(p) >= 0) roots0.push_back(al);
    for (size_t i = 0; i < roots0.size(); ++i)
        for (size_t j = i + 1; j < roots0.size(); ++j)
            ex.l0 = std::max(ex.l0, (roots0[i] - roots0[j]).val_p(p));

    long theta_val = theta.theta.val_p(p);
    for (const auto& part : tf.parts) {
        long c = part.c.val_p(p) + part.B * theta_val;
        Rat unit = part.c.unit_p(p);
        if (theta_val != 0) unit = unit * theta.theta.unit_p(p).pow(part.B);
        else unit = unit * theta.theta.pow(part.B);
        for (const auto& [al, e] : part.factors) {
            if (al == theta.theta) {
                c += e * (1 + ex.l0);
            } else {
                Rat diff = theta.theta - al;
                c += e * diff.val_p(p);
                unit = unit * diff.unit_p(p).pow(e);
            }
        }
        ex.consts.push_back(c);
        ex.unit_cofactors.push_back(unit);
    }
    ex.M0 = 1;
    for (size_t j = 1; j < ex.consts.size(); ++j)
        ex.M0 = std::max(ex.M0, ex.consts[0] + 1 - ex.consts[j]);
    return ex;
}

// ------------------------------------------------- degenerate ray engine

namespace detail {

// Affine function of the outer level m: s*m + t, exact.
struct AffM {
    Rat s, t;
    AffM() : s(0), t(0) {}
    AffM(Rat s_, Rat t_) : s(std::move(s_)), t(std::move(t_)) {}
    static AffM c(const Rat& v) { return AffM(Rat(0), v); }
    Rat at(long m) const { return s * Rat(m) + t; }
    friend AffM operator+(const AffM& a, const AffM& b) { return {a.s + b.s, a.t + b.t}; }
    friend AffM operator-(const AffM& a, const AffM& b) { return {a.s - b.s, a.t - b.t}; }
    friend bool operator==(const AffM& a, const AffM& b) { return a.s == b.s && a.t == b.t; }
};

// Sign of an affine form for all m >= m_stab, raising m_stab as needed.
inline int aff_sign(const AffM& a, long& m_stab) {
    if (a.s.is_zero()) return a.t.sign();
    if (!a.t.is_zero()) {
        // settles past the root -t/s
        Rat root = -a.t / a.s;
        long settle = root.floor_long() + 1;
        m_stab = std::max(m_stab, settle);
    }
    return a.s.sign();
}

// One line of the valuation envelope on a shell class: value(k) =
// gap*m + C + e*k for shells k, with the parts sharing the triple merged.
struct EnvLine {
    long gap = 0;
    long C = 0;
    long e = 0;
    std::vector<size_t> parts;
};

struct ClassCtx {
    Rat center;              // exact class representative
    bool has_root = false;   // center is a root of some part
    std::vector<EnvLine> lines;
};

// The residue-field leading form of a tie group on a shell: sum over parts
// of ubar_j x^{A_j} u^{e_j}.
inline ModPoly2 leading_form(const TransformedFamily& tf, const ClassCtx& ctx,
                             const std::vector<const EnvLine*>& group, long p) {
    ModPoly2 g{p, {}};
    for (const EnvLine* line : group)
        for (size_t j : line->parts) {
            const TFPart& part = tf.parts[j];
            Rat unit = part.c.unit_p(p) * ctx.center.pow(part.B);
            long e_theta = 0;
            for (const auto& [al, e] : part.factors) {
                if (al == ctx.center) {
                    e_theta = e;
                } else {
                    unit = unit * (ctx.center - al).unit_p(p).pow(e);
                }
            }
            g.add_term(part.A, e_theta, unit.mod_p(p));
        }
    return g;
}

// SPF value of a leading form over the unit torus in (x, u). Singular torus
// zeros mean the input sits outside the certified class.
inline ZetaRat spf_of_leading_form(const ModPoly2& g, const std::string& where) {
    if (g.is_zero())
        fail(errc::unsupported_class, "leading form vanishes identically " + where);
    auto zeros = torus_zeros(g);
    ModPoly2 gx = g.dx(), gy = g.dy();
    for (const auto& [x, y] : zeros)
        if (gx.eval(x, y) == 0 && gy.eval(x, y) == 0)
            fail(errc::arithmetically_degenerate, "singular leading form " + where);
    return spf_units2(static_cast<long>(zeros.size()));
}

// SPF value over (x units) x (t in O) of an x-only leading form.
inline ZetaRat spf_of_x_form(const ModPoly2& g, const std::string& where) {
    if (g.is_zero())
        fail(errc::unsupported_class, "leading form vanishes identically " + where);
    for (const auto& [e, c] : g.terms)
        if (e.second != 0) fail(errc::unsupported_class, "unexpected t-dependence " + where);
    long p = g.p;
    long nroots = 0;
    ModPoly2 gx = g.dx();
    for (long x = 1; x < p; ++x)
        if (g.eval(x, 0) == 0) {
            if (gx.eval(x, 0) == 0)
                fail(errc::unsupported_class, "repeated root in class form " + where);
            ++nroots;
        }
    return spf_units_times_disc(nroots * p);
}

} // namespace detail

struct DegenerateRayInfo {
    long p = 0;
    long sep = 1;          // class modulus exponent
    long m_stable = 1;     // switch point between per-m and closed-form summation
    long period = 1;       // residue period of m in the closed-form branch
    std::vector<Rat> class_centers;
    std::vector<ThetaExpansion> expansions; // one per admissible theta of part 0
};

namespace detail {

// Setup shared by the per-m and closed-form paths: the residue classes of
// units mod p^sep with their exact centers and merged envelope lines.
struct ShellContext {
    TransformedFamily tf;
    long p = 0;
    long sep = 1;
    std::vector<ClassCtx> classes;
};

inline ShellContext build_shell_context(const SQHDecomposition& d, long p) {
    ShellContext sc;
    sc.tf = phi_transform(d);
    sc.p = p;

    std::vector<Rat> unit_roots;
    for (const auto& part : sc.tf.parts)
        for (const auto& [al, e] : part.factors)
            if (al.val_p(p) == 0) {
                bool seen = false;
                for (const Rat& r : unit_roots) seen = seen || r == al;
                if (!seen) unit_roots.push_back(al);
            }
    for (size_t i = 0; i < unit_roots.size(); ++i)
        for (size_t j = i + 1; j < unit_roots.size(); ++j)
            sc.sep = std::max(sc.sep, 1 + (unit_roots[i] - unit_roots[j]).val_p(p));

    Int psep = int_pow(p, sc.sep);
    for (Int r = 1; r < psep; ++r) {
        if (mpz_divisible_ui_p(r.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        ClassCtx ctx;
        ctx.center = Rat(r);
        for (const Rat& root : unit_roots)
            if (root.mod_pk(psep, p) == r) {
                ctx.center = root;
                ctx.has_root = true;
            }
        sc.classes.push_back(std::move(ctx));
    }

    for (auto& ctx : sc.classes) {
        std::map<std::tuple<long, long, long>, std::vector<size_t>> merged;
        for (size_t j = 0; j < sc.tf.parts.size(); ++j) {
            const TFPart& part = sc.tf.parts[j];
            long C = part.c.val_p(p);
            long e_theta = 0;
            for (const auto& [al, e] : part.factors) {
                if (ctx.has_root && al == ctx.center) e_theta = e;
                else C += e * (ctx.center - al).val_p(p);
            }
            merged[{part.gap, C, e_theta}].push_back(j);
        }
        for (const auto& [key, parts] : merged)
            ctx.lines.push_back(EnvLine{std::get<0>(key), std::get<1>(key), std::get<2>(key), parts});
    }
    return sc;
}

/// Exact I(s, f^(m)) for one m: constant classes plus shell-by-shell
/// evaluation of the valuation envelope on every root class.
inline ZetaRat eval_family_at_m(const ShellContext& sc, long m) {
    const long sep = sc.sep;
    const long p = sc.p;
    ZetaRat total = ZetaRat::zero();
    for (const auto& ctx : sc.classes) {
        auto line_val = [&](const EnvLine& l, long k) { return l.gap * m + l.C + l.e * k; };
        if (!ctx.has_root) {
            long vmin = 0;
            std::vector<const EnvLine*> grp;
            bool first = true;
            for (const auto& l : ctx.lines) {
                long v = l.gap * m + l.C;
                if (first || v < vmin) { vmin = v; grp.clear(); first = false; }
                if (v == vmin) grp.push_back(&l);
            }
            size_t nparts = 0;
            for (auto* l : grp) nparts += l->parts.size();
            if (nparts == 1) {
                PolyQT meas = PolyQT::monomial(sep, vmin);
                meas.add_term(sep + 1, vmin, Rat(-1)); // (1-Q) Q^sep T^vmin
                total = zr_add(total, ZetaRat(meas));
            } else {
                ModPoly2 g = leading_form(sc.tf, ctx, grp, p);
                ZetaRat spf = spf_of_x_form(g, "on class " + ctx.center.str());
                total = zr_add(total, zr_mul(ZetaRat::monomial(sep, vmin), spf));
            }
            continue;
        }
        // root class: shells k = sep, sep+1, ... up to the last crossing
        long kend = sep - 1;
        for (size_t i = 0; i < ctx.lines.size(); ++i)
            for (size_t j = i + 1; j < ctx.lines.size(); ++j) {
                const auto& A = ctx.lines[i];
                const auto& B = ctx.lines[j];
                if (A.e == B.e) continue;
                Rat kc = Rat((B.gap - A.gap) * m + (B.C - A.C)) / Rat(A.e - B.e);
                kend = std::max(kend, kc.floor_long());
            }
        auto argmin_group = [&](long k, long& vmin) {
            std::vector<const EnvLine*> grp;
            bool first = true;
            for (const auto& l : ctx.lines) {
                long v = line_val(l, k);
                if (first || v < vmin) { vmin = v; grp.clear(); first = false; }
                if (v == vmin) grp.push_back(&l);
            }
            return grp;
        };
        for (long k = sep; k <= kend; ++k) {
            long vmin = 0;
            auto grp = argmin_group(k, vmin);
            ModPoly2 g = leading_form(sc.tf, ctx, grp, p);
            ZetaRat spf = spf_of_leading_form(
                g, "at shell k=" + std::to_string(k) + " of class " + ctx.center.str());
            total = zr_add(total, zr_mul(ZetaRat::monomial(k, vmin), spf));
        }
        {
            long k0 = kend + 1;
            long vmin = 0;
            auto grp = argmin_group(k0, vmin);
            ModPoly2 g = leading_form(sc.tf, ctx, grp, p);
            ZetaRat spf = spf_of_leading_form(g, "on the tail of class " + ctx.center.str());
            long e = grp.front()->e;
            // sum_{k>=k0} Q^k T^{vmin + e(k-k0)} = Q^{k0} T^{vmin} / (1 - Q T^e)
            DenMultiset den;
            den[DenFactor(1, e)] = 1;
            ZetaRat tail(PolyQT::monomial(k0, vmin), std::move(den));
            total = zr_add(total, zr_mul(tail, spf));
        }
    }
    return total;
}

} // namespace detail

/// I(s, f^(m), v, units^2) for a single level m — the per-m path of the
/// degenerate engine, exposed for the truncation oracle.
inline ZetaRat degenerate_ray_unit_integral(const SQHDecomposition& d, long p, long m) {
    detail::ShellContext sc = detail::build_shell_context(d, p);
    return detail::eval_family_at_m(sc, m);
}

/// Z(s, f, v, Delta) for the one-dimensional cone of a facet whose face
/// function is degenerate: Sum_{m>=1} Q^{(a+b)m} T^{d0 m} I(s, f^{(m)})
/// with each unit-torus integral evaluated exactly through the valuation
/// envelope of the transformed family on residue classes. Small m are
/// summed term by term; past the stability threshold every piece is an
/// arithmetic progression in m and is summed in closed form.
inline ZetaRat degenerate_ray_contribution(const SQHDecomposition& d, long p,
                                           DegenerateRayInfo* info_out = nullptr) {
    detail::ShellContext sc = detail::build_shell_context(d, p);
    const TransformedFamily& tf = sc.tf;
    const long sep = sc.sep;
    const auto& classes = sc.classes;
    const long sigma = d.a + d.b;
    const long d0 = tf.d0;

    // ---- symbolic envelope for large m ----
    long m_stab = 1;

    struct Piece {
        // sum over shells of Q^k T^{gap m + C + e k} times spf, with k in
        // [from, to) or the single integer kappa (vertex) or [from, inf)
        enum Kind { segment, vertex, tail } kind;
        detail::AffM from;   // first shell (integer-valued affine)
        detail::AffM to_excl; // crossing; shells run to ceil(to)-1
        long gap = 0, C = 0, e = 0;
        ZetaRat spf;
    };

    struct ClassPlan {
        bool has_root = false;
        long const_v = 0;   // rootless classes: C of part 0
        ZetaRat const_val;  // rootless classes: the fixed class value
        std::vector<Piece> pieces;
    };

    std::vector<ClassPlan> plans;
    for (const auto& ctx : classes) {
        ClassPlan plan;
        plan.has_root = ctx.has_root;
        if (!ctx.has_root) {
            // part 0 dominates once m exceeds every crossing
            const detail::EnvLine* l0 = nullptr;
            for (const auto& l : ctx.lines)
                if (l.gap == 0) l0 = &l;
            for (const auto& l : ctx.lines) {
                if (&l == l0) continue;
                detail::AffM diff(Rat(l.gap - l0->gap), Rat(l.C - l0->C));
                if (detail::aff_sign(diff, m_stab) <= 0)
                    fail(errc::unsupported_class, "no dominant part on a rootless class");
            }
            if (l0->parts.size() != 1)
                fail(errc::unsupported_class, "leading part not unique on a rootless class");
            plan.const_v = l0->C;
            PolyQT meas = PolyQT::monomial(sep, l0->C);
            meas.add_term(sep + 1, l0->C, Rat(-1));
            plan.const_val = ZetaRat(meas);
            plans.push_back(std::move(plan));
            continue;
        }
        // sweep the envelope symbolically
        const detail::EnvLine* cur = nullptr;
        for (const auto& l : ctx.lines)
            if (l.gap == 0) cur = &l; // unique: gaps are strictly increasing
        // ensure cur is minimal at k = sep for all large m
        for (const auto& l : ctx.lines) {
            if (&l == cur) continue;
            detail::AffM diff(Rat(l.gap), Rat(l.C + l.e * sep - cur->C - cur->e * sep));
            if (detail::aff_sign(diff, m_stab) <= 0)
                fail(errc::unsupported_class, "leading line not dominant at the first shell");
        }
        detail::AffM kcur = detail::AffM::c(Rat(sep));
        while (true) {
            bool have = false;
            detail::AffM kbest;
            const detail::EnvLine* next = nullptr;
            for (const auto& l : ctx.lines) {
                if (l.e >= cur->e) continue;
                detail::AffM kc(Rat(l.gap - cur->gap) / Rat(cur->e - l.e),
                                Rat(l.C - cur->C) / Rat(cur->e - l.e));
                if (detail::aff_sign(kc - kcur, m_stab) <= 0) continue;
                if (!have) { have = true; kbest = kc; next = &l; continue; }
                int c = detail::aff_sign(kc - kbest, m_stab);
                if (c < 0 || (c == 0 && l.e < next->e)) { kbest = kc; next = &l; }
            }
            if (!have) {
                Piece tailp;
                tailp.kind = Piece::tail;
                tailp.from = kcur; // actual first shell computed at emit time
                tailp.gap = cur->gap;
                tailp.C = cur->C;
                tailp.e = cur->e;
                tailp.spf = detail::spf_of_leading_form(
                    detail::leading_form(tf, ctx, {cur}, p), "on the closed-form tail");
                plan.pieces.push_back(std::move(tailp));
                break;
            }
            Piece seg;
            seg.kind = Piece::segment;
            seg.from = kcur;
            seg.to_excl = kbest;
            seg.gap = cur->gap;
            seg.C = cur->C;
            seg.e = cur->e;
            seg.spf = detail::spf_of_leading_form(detail::leading_form(tf, ctx, {cur}, p),
                                                  "on a closed-form segment");
            plan.pieces.push_back(std::move(seg));

            // vertex tie set: every line whose value at kbest matches the envelope
            std::vector<const detail::EnvLine*> tie;
            detail::AffM env(Rat(cur->gap) + Rat(cur->e) * kbest.s,
                             Rat(cur->C) + Rat(cur->e) * kbest.t);
            for (const auto& l : ctx.lines) {
                detail::AffM val(Rat(l.gap) + Rat(l.e) * kbest.s, Rat(l.C) + Rat(l.e) * kbest.t);
                if (val == env) tie.push_back(&l);
            }
            Piece vtx;
            vtx.kind = Piece::vertex;
            vtx.from = kbest;
            vtx.gap = cur->gap;
            vtx.C = cur->C;
            vtx.e = cur->e;
            vtx.spf = detail::spf_of_leading_form(detail::leading_form(tf, ctx, tie, p),
                                                  "at a closed-form vertex");
            plan.pieces.push_back(std::move(vtx));

            kcur = kbest;
            cur = next;
        }
        plans.push_back(std::move(plan));
    }

    // period: every crossing slope's denominator divides it
    long period = 1;
    for (const auto& plan : plans)
        for (const auto& piece : plan.pieces) {
            for (const detail::AffM* aff : {&piece.from, &piece.to_excl}) {
                long den = static_cast<long>(aff->s.den().get_si());
                period = period / gcd_long(period, den) * den;
            }
        }

    // ---- small m, term by term ----
    ZetaRat total = ZetaRat::zero();
    for (long m = 1; m < m_stab; ++m) {
        ZetaRat Im = detail::eval_family_at_m(sc, m);
        total = zr_add(total, zr_mul(ZetaRat::monomial(sigma * m, d0 * m), Im));
    }

    // ---- closed-form branch: m = m_r + period * n ----
    auto emit_progression = [&](long m_r, const detail::AffM& qexp, const detail::AffM& texp) {
        // exponent value at m = m_r + period*n must be affine with integer step
        Rat q0 = qexp.at(m_r), t0 = texp.at(m_r);
        Rat qs = qexp.s * Rat(period), ts = texp.s * Rat(period);
        if (!q0.is_integer() || !t0.is_integer() || !qs.is_integer() || !ts.is_integer())
            fail(errc::unsupported_class, "non-integral exponent in closed-form branch");
        return progression_sum(q0.floor_long(), t0.floor_long(), qs.floor_long(), ts.floor_long());
    };

    for (long r = 0; r < period; ++r) {
        long m_r = m_stab + ((r - m_stab) % period + period) % period;
        detail::AffM outerQ(Rat(sigma), Rat(0)), outerT(Rat(d0), Rat(0));
        for (size_t ci = 0; ci < classes.size(); ++ci) {
            const ClassPlan& plan = plans[ci];
            if (!plan.has_root) {
                total = zr_add(total, zr_mul(plan.const_val, emit_progression(m_r, outerQ, outerT)));
                continue;
            }
            for (const Piece& piece : plan.pieces) {
                // first shell of the piece
                auto floor_aff = [&](const detail::AffM& a) {
                    // floor(a(m)) along m = m_r + period n: affine with slope a.s*period
                    Rat v0 = a.at(m_r);
                    return detail::AffM(a.s, Rat(v0.floor()) - a.s * Rat(m_r));
                };
                if (piece.kind == Piece::vertex) {
                    Rat v0 = piece.from.at(m_r);
                    if (!v0.is_integer()) continue; // no tie shell in this residue class
                    detail::AffM kv = piece.from;
                    detail::AffM qexp = outerQ + kv;
                    detail::AffM texp = outerT + detail::AffM(Rat(piece.gap), Rat(piece.C)) +
                                        detail::AffM(kv.s * Rat(piece.e), kv.t * Rat(piece.e));
                    total = zr_add(total, zr_mul(piece.spf, emit_progression(m_r, qexp, texp)));
                    continue;
                }
                // segment/tail shells start at:
                detail::AffM start;
                if (piece.from.s.is_zero() && piece.from.t == Rat(sep)) {
                    start = piece.from; // first piece starts exactly at sep
                } else {
                    detail::AffM fl = floor_aff(piece.from);
                    start = fl + detail::AffM::c(Rat(1));
                }
                auto shell_exponents = [&](const detail::AffM& k) {
                    detail::AffM qexp = outerQ + k;
                    detail::AffM texp = outerT + detail::AffM(Rat(piece.gap), Rat(piece.C)) +
                                        detail::AffM(k.s * Rat(piece.e), k.t * Rat(piece.e));
                    return std::pair<detail::AffM, detail::AffM>{qexp, texp};
                };
                if (piece.kind == Piece::tail) {
                    // sum over k >= start: Q^start T^{...} / (1 - Q T^e)
                    auto [qexp, texp] = shell_exponents(start);
                    DenMultiset den;
                    den[DenFactor(1, piece.e)] = 1;
                    ZetaRat shellgeo(PolyQT::constant(Rat(1)), std::move(den));
                    ZetaRat ms = emit_progression(m_r, qexp, texp);
                    total = zr_add(total, zr_mul(zr_mul(piece.spf, shellgeo), ms));
                } else {
                    // finite run of shells: telescoped difference of two streams
                    // sum_{k=A}^{B} = (z^A - z^{B+1})/(1-z) with z = Q T^e
                    detail::AffM endA; // B+1 = ceil(to_excl)
                    {
                        Rat v0 = piece.to_excl.at(m_r);
                        Rat ceil0 = -Rat((-v0).floor());
                        endA = detail::AffM(piece.to_excl.s, ceil0 - piece.to_excl.s * Rat(m_r));
                    }
                    auto [qa, ta] = shell_exponents(start);
                    auto [qb, tb] = shell_exponents(endA);
                    DenMultiset den;
                    den[DenFactor(1, piece.e)] = 1;
                    ZetaRat geo(PolyQT::constant(Rat(1)), std::move(den));
                    ZetaRat msA = emit_progression(m_r, qa, ta);
                    ZetaRat msB = emit_progression(m_r, qb, tb);
                    ZetaRat diff = zr_sub(msA, msB);
                    total = zr_add(total, zr_mul(zr_mul(piece.spf, geo), diff));
                }
            }
        }
    }

    if (info_out) {
        info_out->p = p;
        info_out->sep = sep;
        info_out->m_stable = m_stab;
        info_out->period = period;
        for (const auto& ctx : classes) info_out->class_centers.push_back(ctx.center);
        for (const ThetaRoot& th : theta_roots(d, p))
            if (!th.excluded) info_out->expansions.push_back(theta_expansion(tf, th, p));
    }
    return total;
}

// -------------------------------------------------------------- assembly

struct ZetaResult {
    long p = 0;
    SubdivMode mode = SubdivMode::simple;
    ZetaRat total;
    ZetaRat unit_part;
    std::vector<std::pair<std::string, ZetaRat>> per_cone;
    std::set<Rat> candidate_set;        // operational: includes subdivision rays
    std::set<Rat> strict_candidate_set; // {-1} u P(geom) u P(arith)
    std::set<Rat> actual_pole_parts;
    ArithNewtonData arith;
    std::vector<std::pair<std::string, DegenerateRayInfo>> degenerate_rays;
};

/// Full assembly of Z(s, f, v) over the chosen conical subdivision.
inline ZetaResult assemble_zeta(const IntPoly2& f, long p, SubdivMode mode) {
    if (f.is_zero()) fail(errc::empty_input, "zero polynomial");
    if (!f.coeff(0, 0).is_zero()) fail(errc::schema_error, "polynomial must vanish at the origin");
    bool nonconstant = false;
    for (const auto& [e, c] : f.terms())
        if (e.first + e.second > 0) nonconstant = true;
    if (!nonconstant) fail(errc::schema_error, "polynomial must be nonconstant");

    ZetaResult res;
    res.p = p;
    res.mode = mode;
    GeomPolygon P = geom_polygon(f.support());
    ConeSubdiv S = conical_subdivision(P, mode);
    res.arith = arith_newton_data(f, p);

    UnitIntegralResult unit = unit_torus_integral(f, p);
    res.unit_part = unit.value;
    res.total = unit.value;

    for (const Cone& cone : S.cones) {
        ZetaRat val;
        if (cone.dim == 2) {
            val = cone_contribution_2d(cone, P);
        } else {
            IntPoly2 fg = face_function(f, cone.face);
            ModPoly2 fbar = reduce_mod(fg, p);
            if (fbar.is_zero()) fail(errc::singular_reduction, "face function vanishes mod p");
            if (singular_torus_points(fbar).empty()) {
                val = cone_contribution_ray_nondeg(cone, f, p);
            } else {
                Vec2 g = cone.gens[0];
                if (g.first <= 0 || g.second <= 0 || cone.face.kind != FaceKind::facet)
                    fail(errc::unsupported_class,
                         "degenerate face is not a compact facet with positive normal");
                const ArithFacetData* fd = nullptr;
                for (const auto& cand : res.arith.facets)
                    if (cand.weight == g) fd = &cand;
                if (!fd || !fd->decomp)
                    fail(errc::irrational_root, "degenerate facet lacks a rational factorization");
                ArithCheckReport chk = arith_nondegeneracy_check(f, res.arith, p);
                if (!chk.non_degenerate) {
                    std::string why = chk.reasons.empty() ? "arithmetically degenerate" : chk.reasons.front();
                    fail(errc::arithmetically_degenerate, why);
                }
                DegenerateRayInfo info;
                val = degenerate_ray_contribution(*fd->decomp, p, &info);
                res.degenerate_rays.push_back({cone.name, info});
            }
        }
        res.total = zr_add(res.total, val);
        res.per_cone.push_back({cone.name, std::move(val)});
    }

    res.candidate_set.insert(Rat(-1));
    auto geo = geom_candidate_poles(P);
    res.candidate_set.insert(geo.begin(), geo.end());
    res.candidate_set.insert(res.arith.candidate_poles.begin(), res.arith.candidate_poles.end());
    for (const Cone& cone : S.cones)
        if (cone.dim == 1 && cone.m_gen[0] != 0)
            res.candidate_set.insert(Rat(-cone.sigma_gen[0], cone.m_gen[0]));

    res.strict_candidate_set.insert(Rat(-1));
    res.strict_candidate_set.insert(geo.begin(), geo.end());
    res.strict_candidate_set.insert(res.arith.candidate_poles.begin(),
                                    res.arith.candidate_poles.end());

    res.actual_pole_parts = real_pole_parts(zr_reduce(res.total));
    return res;
}

struct ContainmentReport {
    bool operational_ok = false;
    bool strict_ok = false;
    std::vector<Rat> offending_operational;
    std::vector<Rat> offending_strict;
};

/// Checks actual pole parts against the operational candidate set and the
/// strict set {-1} u P(geom) u P(arith).
inline ContainmentReport theorem_containment(const ZetaResult& r) {
    ContainmentReport rep;
    rep.operational_ok = true;
    rep.strict_ok = true;
    for (const Rat& x : r.actual_pole_parts) {
        if (!r.candidate_set.count(x)) {
            rep.operational_ok = false;
            rep.offending_operational.push_back(x);
        }
        if (!r.strict_candidate_set.count(x)) {
            rep.strict_ok = false;
            rep.offending_strict.push_back(x);
        }
    }
    return rep;
}

} // namespace igusa

#endif

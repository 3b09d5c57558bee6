#ifndef IGUSA_ORACLE_HPP
#define IGUSA_ORACLE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "igusa/poly2.hpp"
#include "igusa/qt_algebra.hpp"

// Ground truth: N_m = #{(x,y) mod p^m : f(x,y) = 0 mod p^m}, counted by
// residue-tree lifting, and the inverse direction — predicted counts read
// off an assembled zeta function through P(t) = (1 - t Z)/(1 - t).

namespace igusa {

struct CountTable {
    long p = 0;
    std::vector<Int> counts; // index m, N_0 = 1

    long levels() const { return static_cast<long>(counts.size()) - 1; }
};

/// Solutions of f = 0 mod p^m by branch lifting: start from the solutions
/// mod p and extend level by level, visiting only residues that remain
/// solutions.
inline Int count_solutions(const IntPoly2& f, long p, long m) {
    if (m < 1) fail(errc::schema_error, "level must be >= 1");
    std::vector<std::pair<Int, Int>> sols;
    Int pk(p);
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y)
            if (f.eval_mod(Int(x), Int(y), pk, p) == 0) sols.push_back({Int(x), Int(y)});
    for (long level = 1; level < m; ++level) {
        Int pnext = pk * p;
        std::vector<std::pair<Int, Int>> next;
        for (const auto& [x, y] : sols)
            for (long dx = 0; dx < p; ++dx)
                for (long dy = 0; dy < p; ++dy) {
                    Int nx = x + pk * dx, ny = y + pk * dy;
                    if (f.eval_mod(nx, ny, pnext, p) == 0) next.push_back({nx, ny});
                }
        sols = std::move(next);
        pk = pnext;
    }
    return Int(sols.size());
}

/// Full p^{2m} enumeration; the lifting counter's own check.
inline Int count_solutions_naive(const IntPoly2& f, long p, long m) {
    Int pk = int_pow(p, m);
    Int n = 0;
    for (Int x = 0; x < pk; ++x)
        for (Int y = 0; y < pk; ++y)
            if (f.eval_mod(x, y, pk, p) == 0) ++n;
    return n;
}

inline CountTable count_table(const IntPoly2& f, long p, long M) {
    CountTable t;
    t.p = p;
    t.counts.push_back(Int(1));
    for (long m = 1; m <= M; ++m) t.counts.push_back(count_solutions(f, p, m));
    return t;
}

/// N_m = p^{2m} (1 - sum_{i<m} coeff_i(Z)) from the series expansion of the
/// assembled zeta function. Non-integral or out-of-range values signal an
/// engine bug.
inline CountTable predicted_counts(const ZetaRat& z, long p, long M) {
    SeriesT s = zr_series(z, p, M);
    CountTable t;
    t.p = p;
    t.counts.push_back(Int(1));
    Rat acc(0);
    for (long m = 1; m <= M; ++m) {
        acc += s.coeffs[static_cast<size_t>(m - 1)];
        Rat nm = (Rat(1) - acc) * Rat(int_pow(p, 2 * m));
        if (!nm.is_integer() || nm.sign() < 0 || nm > Rat(int_pow(p, 2 * m)))
            fail(errc::non_integral_prediction,
                 "level " + std::to_string(m) + " prediction " + nm.str() + " is not a count");
        t.counts.push_back(nm.num());
    }
    return t;
}

struct VerifyReport {
    long p = 0;
    CountTable counted;
    std::vector<Rat> predicted; // raw, so an invalid prediction still reports
    bool all_match = false;
    long first_mismatch = -1;
};

/// Per level m <= M: predicted vs counted. Predictions are compared raw;
/// a non-integral or out-of-range prediction counts as a mismatch rather
/// than aborting the report.
inline VerifyReport verify_counts(const IntPoly2& f, long p, long M, const ZetaRat& z) {
    VerifyReport r;
    r.p = p;
    r.counted = count_table(f, p, M);
    SeriesT s = zr_series(z, p, M);
    r.predicted.push_back(Rat(1));
    Rat acc(0);
    for (long m = 1; m <= M; ++m) {
        acc += s.coeffs[static_cast<size_t>(m - 1)];
        r.predicted.push_back((Rat(1) - acc) * Rat(int_pow(p, 2 * m)));
    }
    r.all_match = true;
    for (long m = 0; m <= M; ++m) {
        const Rat& pm = r.predicted[static_cast<size_t>(m)];
        if (!pm.is_integer() || pm != Rat(r.counted.counts[static_cast<size_t>(m)])) {
            r.all_match = false;
            r.first_mismatch = m;
            break;
        }
    }
    return r;
}

// ---- emitters ----

inline nlohmann::json count_table_to_json(const CountTable& t) {
    nlohmann::json j;
    j["p"] = t.p;
    nlohmann::json arr = nlohmann::json::array();
    for (const Int& n : t.counts) arr.push_back(n.get_str());
    j["counts"] = arr;
    return j;
}

inline std::string count_table_to_csv(const CountTable& t) {
    std::string s = "m,N_m\n";
    for (size_t m = 0; m < t.counts.size(); ++m)
        s += std::to_string(m) + "," + t.counts[m].get_str() + "\n";
    return s;
}

inline nlohmann::json verify_report_to_json(const VerifyReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (size_t m = 0; m < r.counted.counts.size(); ++m) {
        bool match = r.predicted[m].is_integer() && Rat(r.counted.counts[m]) == r.predicted[m];
        levels.push_back({{"m", m},
                          {"counted", r.counted.counts[m].get_str()},
                          {"predicted", r.predicted[m].str()},
                          {"match", match}});
    }
    return nlohmann::json{{"p", r.p},
                          {"levels", levels},
                          {"all_match", r.all_match},
                          {"first_mismatch", r.first_mismatch}};
}

inline std::string verify_report_to_csv(const VerifyReport& r) {
    std::string s = "m,counted,predicted,match\n";
    for (size_t m = 0; m < r.counted.counts.size(); ++m) {
        bool match = r.predicted[m].is_integer() && Rat(r.counted.counts[m]) == r.predicted[m];
        s += std::to_string(m) + "," + r.counted.counts[m].get_str() + "," +
             r.predicted[m].str() + "," + (match ? "1" : "0") + "\n";
    }
    return s;
}

} // namespace igusa

#endif

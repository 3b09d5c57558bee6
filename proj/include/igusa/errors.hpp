#ifndef IGUSA_ERRORS_HPP
#define IGUSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace igusa {

// Failure kinds surfaced through the library boundary. The CLI maps these
// onto exit codes: input problems -> 1, class problems (the input is outside
// the supported polynomial class) -> 2.
enum class errc {
    syntax_error,
    schema_error,
    non_coprime_weight,
    irrational_root,
    empty_input,
    non_unit_denominator,
    divergent_factor,
    non_positive_growth,
    non_monomial_face,
    singular_reduction,
    degenerate_face,
    arithmetically_degenerate,
    unsupported_class,
    non_integral_prediction,
};

inline const char* errc_name(errc k) {
    switch (k) {
        case errc::syntax_error: return "SyntaxError";
        case errc::schema_error: return "SchemaError";
        case errc::non_coprime_weight: return "NonCoprimeWeight";
        case errc::irrational_root: return "IrrationalRoot";
        case errc::empty_input: return "EmptyInput";
        case errc::non_unit_denominator: return "NonUnitDenominator";
        case errc::divergent_factor: return "DivergentFactor";
        case errc::non_positive_growth: return "NonPositiveGrowth";
        case errc::non_monomial_face: return "NonMonomialFace";
        case errc::singular_reduction: return "SingularReduction";
        case errc::degenerate_face: return "DegenerateFace";
        case errc::arithmetically_degenerate: return "ArithmeticallyDegenerate";
        case errc::unsupported_class: return "UnsupportedClass";
        case errc::non_integral_prediction: return "NonIntegralPrediction";
    }
    return "Unknown";
}

class zeta_error : public std::runtime_error {
public:
    zeta_error(errc kind, const std::string& what)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) {
    throw zeta_error(kind, what);
}

} // namespace igusa

#endif

#ifndef ROBBA_RESIDUE_HPP
#define ROBBA_RESIDUE_HPP

#include <map>
#include <optional>

#include "robba/series.hpp"

namespace robba {

// f dT_1 ^ ... ^ dT_n: a coefficient series with the formal top form
struct DifferentialForm {
    LaurentBoxSeries coefficient;
    std::size_t form_arity;

    DifferentialForm(LaurentBoxSeries c)
        : coefficient(std::move(c)), form_arity(coefficient.nvars()) {}
};

// res(f dT) = a_{-1,...,-1}. Errors (rather than silently returning 0)
// when the box does not even cover the residue exponent, or when the
// tail bound cannot certify that coefficient.
PadicScalar residue(const DifferentialForm& w,
                    const std::optional<MultiInterval>& iv = std::nullopt,
                    const std::optional<Rational>& certainty = std::nullopt);

// h(f, g) = res(f g dT)
PadicScalar pairing(const LaurentBoxSeries& f, const LaurentBoxSeries& g,
                    const std::optional<MultiInterval>& iv = std::nullopt,
                    const std::optional<Rational>& certainty = std::nullopt);

// extensional functional on the dual monomial window: values mu(T^{-1-n})
struct Functional {
    Box box; // the n-window the functional covers
    std::map<ExponentVec, PadicScalar> values;
};

// mu -> sum_n mu(T^{-1-n}) T^n on the box; errors on missing entries
LaurentBoxSeries dual_series(const Functional& mu, std::uint32_t prime,
                             const std::vector<std::string>& vars);

// the functional g -> h(., g) restricted to the window boxA
Functional functional_from_pairing(const LaurentBoxSeries& g, const Box& boxA);

struct GramReport {
    bool pass = false;
    std::size_t dimension = 0;
    std::string witness; // first failing pair, if any
};

// Gram matrix h(T^m, T^{m'}) over boxA x boxB must be the anti-diagonal
// permutation identity when boxB = -1 - boxA
GramReport perfectness_gram_check(const Box& boxA, const Box& boxB, std::uint32_t prime,
                                  const std::vector<std::string>& vars);

struct ExactFormReport {
    bool pass = false;
    PadicScalar residue_value;
};

// residue of a derivative vanishes: d/dT_axis never produces T^{-1}
ExactFormReport exact_form_residue_check(const LaurentBoxSeries& f, std::size_t axis);

} // namespace robba

#endif

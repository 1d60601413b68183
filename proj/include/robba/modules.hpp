#ifndef ROBBA_MODULES_HPP
#define ROBBA_MODULES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "robba/operators.hpp"
#include "robba/series.hpp"

namespace robba {

// A character of prod_a Q_p^x given by its values on p and on the fixed
// topological generator u = 1 + p of the principal units, per axis.
// Characters are trivial on the torsion subgroup throughout.
struct Character {
    std::uint32_t prime = 3;
    std::vector<PadicScalar> delta_p; // delta(p_a)
    std::vector<PadicScalar> delta_u; // delta(u_a)

    std::size_t naxes() const { return delta_p.size(); }

    static Character trivial(std::uint32_t p, std::size_t naxes, int relprec);
    Character times(const Character& o) const;
    Character inverse() const;
};

// Free module of finite rank with one phi matrix and one gamma matrix
// per axis (gamma is the action of the generator u = 1+p). Rank zero is
// the zero module.
struct PhiGammaModule {
    std::uint32_t prime = 3;
    std::vector<std::string> vars;
    std::size_t rank = 0;
    // [axis][i][j]
    std::vector<std::vector<std::vector<LaurentBoxSeries>>> phi_mat;
    std::vector<std::vector<std::vector<LaurentBoxSeries>>> gamma_mat;
    MultiInterval regime;

    std::size_t naxes() const { return vars.size(); }
    std::int64_t gamma_unit() const { return 1 + static_cast<std::int64_t>(prime); }
};

struct ModuleElement {
    std::vector<LaurentBoxSeries> coords;
};

// R(delta): rank one, phi_a acts by delta(p_a), gamma_a by delta(u_a)
PhiGammaModule module_from_character(const Character& delta,
                                     const std::vector<std::string>& vars,
                                     const MultiInterval& regime, const Box& box);

struct RelationCheck {
    std::string label;
    bool pass = false;
    RatInf min_difference_valuation; // +inf when the sides agree exactly
};
struct ValidationReport {
    bool pass = false;
    std::vector<RelationCheck> relations;
};

// checks the commutation cocycles
//   Phi_a phi_a(Phi_b) = Phi_b phi_b(Phi_a)
//   Gamma_a gamma_a(Gamma_b) = Gamma_b gamma_b(Gamma_a)
//   Phi_a phi_a(Gamma_b) = Gamma_b gamma_b(Phi_a)   (all pairs, incl. a=b)
// within the tolerance at the working truncation
ValidationReport validate_module(const PhiGammaModule& M, const Rational& tolerance,
                                 const OpContext& ctx);

// semilinear application: phi/gamma transport coefficients then apply
// the matrix; psi applies Phi^{-1} first so that psi(phi(m)) = m
ModuleElement apply_module_operator(const PhiGammaModule& M, const ModuleElement& m,
                                    const OperatorSpec& op, const OpContext& ctx);

// multiply Phi_a by delta(p_a) and Gamma_a by delta(u_a)
PhiGammaModule twist(const PhiGammaModule& M, const Character& delta);

// transpose-inverse matrices, so the natural pairing intertwines actions
PhiGammaModule dual_module(const PhiGammaModule& M, const OpContext& ctx);

// series matrix inverse in regime (adjugate over the truncation)
std::vector<std::vector<LaurentBoxSeries>> matrix_inverse(
    const std::vector<std::vector<LaurentBoxSeries>>& A, const MultiInterval& iv,
    const Box& box, const Rational& budget);

struct TriangulationDatum {
    std::vector<Character> parameters;
    std::vector<ModuleElement> witnesses;
};

// dim H^0 of the Herr complex of twist(dual(M), delta) at the given
// truncation, with the witness kernel vectors (defined in herr.cpp)
struct ProbeReport {
    int dim_h0 = 0;
    std::vector<ModuleElement> witnesses;
};
ProbeReport triangulation_probe(const PhiGammaModule& M, const Character& delta,
                                std::int32_t degree, const Rational& tol);

} // namespace robba

#endif

#ifndef ROBBA_OPERATORS_HPP
#define ROBBA_OPERATORS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "robba/series.hpp"

namespace robba {

enum class OpKind { phi, psi, gamma };

// A single cyclotomic operator: phi_a, psi_a, or gamma_{a,u} on one
// axis. gamma_unit is the integer representative of chi(gamma) in
// Z_p^x; regime is the multi-interval where substitutions touching
// negative exponents are valid.
struct OperatorSpec {
    OpKind kind = OpKind::phi;
    std::size_t axis = 0;
    std::int64_t gamma_unit = 1;
    std::optional<MultiInterval> regime;

    static OperatorSpec phi(std::size_t axis) { return {OpKind::phi, axis, 1, std::nullopt}; }
    static OperatorSpec psi(std::size_t axis) { return {OpKind::psi, axis, 1, std::nullopt}; }
    static OperatorSpec gamma(std::size_t axis, std::int64_t a) {
        return {OpKind::gamma, axis, a, std::nullopt};
    }

    // "phi:1" / "psi:2" / "gamma:1:4" (axes 1-based on the CLI surface)
    static OperatorSpec parse(const std::string& descriptor);
    std::string descriptor() const;
};

// Shared application parameters: where the result lives, the regime for
// tail bookkeeping and inversions, and the valuation budget that cuts
// off geometric series.
struct OpContext {
    Box target_box;
    std::optional<MultiInterval> regime;
    Rational budget = Rational(20);
};

// T_axis -> (1+T_axis)^p - 1. Exact on nonnegative exponents; negative
// exponents go through series_invert and need the regime.
LaurentBoxSeries apply_phi(const LaurentBoxSeries& f, std::size_t axis, const OpContext& ctx);

// gamma_a: T_axis -> (1+T_axis)^a - 1 for a unit representative a >= 1.
LaurentBoxSeries apply_gamma(const LaurentBoxSeries& f, std::size_t axis, std::int64_t a,
                             const OpContext& ctx);

// psi_a, the left inverse of phi_a. Computed exactly by residue-class
// extraction in the group-variable presentation: with U = 1+T,
//   T^{-M} = phi(T^{-M}) (1 + U + ... + U^{p-1})^M,
// so f = T^{-M} g rewrites as sum_i U^i phi(g_i) with finite U
// polynomials throughout, and psi(f) = g_0.
LaurentBoxSeries apply_psi(const LaurentBoxSeries& f, std::size_t axis, const OpContext& ctx);

LaurentBoxSeries apply_operator(const LaurentBoxSeries& f, const OperatorSpec& op,
                                const OpContext& ctx);

// f - phi(psi(f)): the projection onto the psi = 0 part
LaurentBoxSeries psi0_project(const LaurentBoxSeries& f, std::size_t axis, const OpContext& ctx);

// for psi(f) = 0 (within tol): the components g_i with
// f = sum_{i=1}^{p-1} (1+T_axis)^i phi(g_i)
std::map<int, LaurentBoxSeries> psi0_decompose(const LaurentBoxSeries& f, std::size_t axis,
                                               const Rational& tol, const OpContext& ctx);

// integer representative of num/den in Z_p^x modulo p^digits
std::int64_t unit_representative(std::int64_t num, std::int64_t den, std::uint32_t p,
                                 int digits);

// certified lower bound for the valuation gain of `op` over the box:
//   min over monomials T^e of [ v_iv(op(T^e)) - v_iv(T^e) ],
// with truncation tails folded in, so ||op|| <= p^{-returned}.
RatInf operator_norm_estimate(const std::function<LaurentBoxSeries(const LaurentBoxSeries&)>& op,
                              const Box& box, const MultiInterval& iv,
                              std::uint32_t prime, const std::vector<std::string>& vars);

struct GammaInverseOptions {
    int max_terms = 200;
    Rational budget = Rational(12);
};

// Solves (gamma_a - 1) x = y for y in the component (1+T_axis)^i phi(M),
// i in 1..p-1, a = 1 mod p, via the factorization
//   (gamma_a - 1)[(1+T)^i phi(m)] = (1+T)^i phi[((1+T)^c gamma_a - 1) m],
// c = i (a-1)/p, and the geometric series for (1 + E)^{-1} with
//   E = (1+T)^c / ((1+T)^c - 1) * (gamma_a - 1).
// The contraction is checked on the working box before iterating.
LaurentBoxSeries gamma_minus_one_invert_on_component(const LaurentBoxSeries& y,
                                                     std::size_t axis, int i, std::int64_t a,
                                                     const MultiInterval& iv,
                                                     const Box& target_box,
                                                     const GammaInverseOptions& opt);

} // namespace robba

#endif

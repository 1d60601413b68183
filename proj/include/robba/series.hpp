#ifndef ROBBA_SERIES_HPP
#define ROBBA_SERIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robba/padic.hpp"
#include "robba/rational.hpp"

namespace robba {

// Multi-index of exponents, one entry per variable.
struct ExponentVec {
    std::vector<std::int32_t> e;

    ExponentVec() = default;
    explicit ExponentVec(std::vector<std::int32_t> v) : e(std::move(v)) {}
    static ExponentVec zeros(std::size_t n) { return ExponentVec(std::vector<std::int32_t>(n, 0)); }

    std::size_t size() const { return e.size(); }
    std::int32_t operator[](std::size_t i) const { return e[i]; }
    std::int32_t& operator[](std::size_t i) { return e[i]; }

    ExponentVec plus(const ExponentVec& o) const;
    ExponentVec minus(const ExponentVec& o) const;
    ExponentVec negated() const;
    std::int64_t abs_sum() const;

    friend bool operator==(const ExponentVec& a, const ExponentVec& b) { return a.e == b.e; }
    friend bool operator<(const ExponentVec& a, const ExponentVec& b) { return a.e < b.e; }
};

// Componentwise exponent window lo <= e <= hi.
struct Box {
    ExponentVec lo, hi;

    Box() = default;
    Box(ExponentVec l, ExponentVec h);
    // [0, d]^n
    static Box nonneg(std::size_t nvars, std::int32_t degree);
    static Box uniform(std::size_t nvars, std::int32_t lo, std::int32_t hi);

    std::size_t nvars() const { return lo.size(); }
    bool contains(const ExponentVec& p) const;
    bool contains_box(const Box& other) const;
    Box hull(const Box& other) const;
    Box minkowski_sum(const Box& other) const;
    std::size_t point_count() const;
    // lexicographic enumeration of lattice points
    std::vector<ExponentVec> points() const;

    friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// Positive rational radius per variable: the weight vector t_I of the
// Gauss valuation v_t(f) = inf { v_p(a_e) + sum_a t_a e_a }.
struct RadiusVec {
    std::vector<Rational> t;

    RadiusVec() = default;
    explicit RadiusVec(std::vector<Rational> v);
    static RadiusVec uniform(std::size_t nvars, Rational r);

    std::size_t size() const { return t.size(); }
    const Rational& operator[](std::size_t i) const { return t[i]; }

    // all components strictly below 1/(p-1): the regime where the
    // substitution operators have dominant monomials
    bool below_regime_bound(std::uint32_t p) const;
    RadiusVec scaled(const Rational& c) const;
};

// [s, r] per variable, s <= r componentwise. Valuations over the
// multi-interval take the min over the 2^n corner radius vectors.
struct MultiInterval {
    RadiusVec s, r;

    MultiInterval() = default;
    MultiInterval(RadiusVec s_, RadiusVec r_);
    static MultiInterval at(RadiusVec t) { return MultiInterval(t, t); }
    static MultiInterval uniform(std::size_t nvars, Rational s_, Rational r_);

    std::size_t nvars() const { return s.size(); }
    std::vector<RadiusVec> corners() const;
    bool contains(const MultiInterval& inner) const;
    bool strictly_contains(const MultiInterval& inner) const;
};

enum class Basis { T, U };

// A valuation together with whether truncation could spoil it: the value
// is exact when the series tail bound exceeds it, otherwise it is only a
// lower bound on the true valuation.
struct ValuationResult {
    RatInf value;
    bool exact = true;
};

// Sparse multivariate Laurent series truncated to an exponent box.
// tail_valuation is a single lower bound on the interval valuation of
// everything discarded so far; +inf means the element is represented
// exactly. In the U basis (exponents in U = 1+T per axis) monomials all
// have unit sup-norm, so tail bounds there involve coefficient
// valuations only.
class LaurentBoxSeries {
  public:
    LaurentBoxSeries(std::uint32_t prime, std::vector<std::string> vars,
                     Basis basis, Box box);

    static LaurentBoxSeries zero(std::uint32_t prime, std::vector<std::string> vars,
                                 Basis basis, Box box);
    static LaurentBoxSeries monomial(std::uint32_t prime, std::vector<std::string> vars,
                                     Basis basis, Box box, const ExponentVec& e,
                                     const PadicScalar& c);
    static LaurentBoxSeries constant(std::uint32_t prime, std::vector<std::string> vars,
                                     Basis basis, Box box, const PadicScalar& c);

    std::uint32_t prime() const { return prime_; }
    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    Basis basis() const { return basis_; }
    const Box& box() const { return box_; }
    const std::map<ExponentVec, PadicScalar>& terms() const { return terms_; }
    const RatInf& tail_valuation() const { return tail_; }
    bool is_exact() const { return tail_.is_inf(); }
    bool is_zero_series() const { return terms_.empty(); }

    // inserts c at e (dropping stored zeros); e must lie inside box
    void set_term(const ExponentVec& e, const PadicScalar& c);
    // adds c into slot e; drops the slot if it cancels to zero
    void add_term(const ExponentVec& e, const PadicScalar& c);
    PadicScalar coeff(const ExponentVec& e) const;

    void set_tail(const RatInf& t) { tail_ = t; }
    void weaken_tail(const RatInf& t);

    LaurentBoxSeries scaled(const PadicScalar& c) const;
    LaurentBoxSeries negated() const;
    // multiply by the monomial T^shift (exact; box translates)
    LaurentBoxSeries shifted(const ExponentVec& shift) const;
    LaurentBoxSeries with_box(const Box& b,
                              const std::optional<MultiInterval>& iv) const;
    // quotient-ring reduction: drop terms outside b with no tail charge.
    // Sound only where the complement of b is an ideal stable under the
    // operators in play (the Herr-complex truncation model).
    LaurentBoxSeries projected_to(const Box& b) const;

  private:
    std::uint32_t prime_;
    std::vector<std::string> vars_;
    Basis basis_;
    Box box_;
    std::map<ExponentVec, PadicScalar> terms_;
    RatInf tail_;
};

// v_t(f): min over stored terms of v_p(coeff) + <t, e>; +inf for zero.
ValuationResult gauss_valuation(const LaurentBoxSeries& f, const RadiusVec& t);

// min of gauss_valuation over the corner radius vectors of iv
ValuationResult interval_valuation(const LaurentBoxSeries& f, const MultiInterval& iv);

// the exponent w with ||f||_t = p^{-w}; evaluates v at radius t/(p-1) so
// the printed norm matches the sup |a| p^{-sum t e/(p-1)} convention
ValuationResult gauss_norm_exponent(const LaurentBoxSeries& f, const RadiusVec& t);

// exact addition on the hull box
LaurentBoxSeries series_add(const LaurentBoxSeries& f, const LaurentBoxSeries& g);
LaurentBoxSeries series_sub(const LaurentBoxSeries& f, const LaurentBoxSeries& g);

// full convolution, retained inside target_box; discarded terms fold
// into the tail bound via interval valuation over iv (iv may be omitted
// when nothing is discarded or in the U basis)
LaurentBoxSeries series_mul(const LaurentBoxSeries& f, const LaurentBoxSeries& g,
                            const std::optional<Box>& target_box = std::nullopt,
                            const std::optional<MultiInterval>& iv = std::nullopt);

// dominant-monomial inversion: f = c T^e (1 + h) with interval
// valuation of h strictly positive; geometric series until the next
// term clears `budget`
LaurentBoxSeries series_invert(const LaurentBoxSeries& f, const MultiInterval& iv,
                               const Box& target_box, const Rational& budget);

// substitution U = 1+T / T = U-1 per axis; exact on nonnegative source
// exponents. Converting negative T-exponents into the U basis is
// rejected: U-1 has no dominant monomial under any T-radius valuation
// (U and 1 both have unit norm), so no convergent expansion exists.
LaurentBoxSeries basis_change(const LaurentBoxSeries& f, Basis to,
                              const MultiInterval& iv, const Box& target_box,
                              const Rational& budget);

// valuation gaps of monomials between nested multi-intervals; the
// profile of the restriction map whose gaps must diverge for complete
// continuity
struct CompactnessEntry {
    ExponentVec e;
    Rational gap;
};
struct CompactnessProfile {
    std::vector<CompactnessEntry> entries;
    Rational min_gap;
};
CompactnessProfile compactness_profile(const MultiInterval& inner,
                                       const MultiInterval& outer,
                                       const Box& degree_range);

// formal partial derivative in one axis (exact; box shifts by -1 there)
LaurentBoxSeries series_derivative(const LaurentBoxSeries& f, std::size_t axis);

// difference certified small: min of stored-term interval valuation and
// tail bound of (f - g)
RatInf certified_difference_valuation(const LaurentBoxSeries& f,
                                      const LaurentBoxSeries& g,
                                      const MultiInterval& iv);

} // namespace robba

#endif

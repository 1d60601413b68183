#include "robba/residue.hpp"

#include "robba/errors.hpp"

namespace robba {

namespace {

ExponentVec minus_ones(std::size_t n) {
    return ExponentVec(std::vector<std::int32_t>(n, -1));
}

} // namespace

PadicScalar residue(const DifferentialForm& w, const std::optional<MultiInterval>& iv,
                    const std::optional<Rational>& certainty) {
    const LaurentBoxSeries& f = w.coefficient;
    if (f.basis() != Basis::T)
        throw invalid_argument_error("residue expects the T basis");
    ExponentVec target = minus_ones(f.nvars());
    if (!f.box().contains(target))
        throw precision_error("indeterminate residue: box does not cover the residue exponent");

    PadicScalar c = f.coeff(target);
    if (!f.is_exact()) {
        // hidden tail terms at the residue exponent have coefficient
        // valuation >= tail - max corner weight of T^{-1}
        if (!iv || !certainty)
            throw precision_error(
                "residue on a truncated series needs an interval and a certainty target");
        Rational worst(0);
        bool started = false;
        for (const auto& corner : iv->corners()) {
            Rational wsum(0);
            for (std::size_t a = 0; a < f.nvars(); ++a) wsum += corner[a] * Rational(-1);
            if (!started || wsum < worst) { worst = wsum; started = true; }
        }
        RatInf hidden = f.tail_valuation() + RatInf(Rational(0) - worst);
        if (hidden < RatInf(*certainty))
            throw precision_error("residue coefficient contaminated by the truncation tail");
    }
    return c;
}

PadicScalar pairing(const LaurentBoxSeries& f, const LaurentBoxSeries& g,
                    const std::optional<MultiInterval>& iv,
                    const std::optional<Rational>& certainty) {
    Box full = f.box().minkowski_sum(g.box());
    if (!full.contains(minus_ones(f.nvars())))
        throw precision_error("indeterminate residue: product box does not cover (-1,...,-1)");
    LaurentBoxSeries prod = series_mul(f, g, full, iv);
    return residue(DifferentialForm(prod), iv, certainty);
}

LaurentBoxSeries dual_series(const Functional& mu, std::uint32_t prime,
                             const std::vector<std::string>& vars) {
    LaurentBoxSeries out(prime, vars, Basis::T, mu.box);
    for (const auto& n : mu.box.points()) {
        auto it = mu.values.find(n);
        if (it == mu.values.end())
            throw invalid_argument_error("incomplete functional: missing value at a window point");
        out.set_term(n, it->second);
    }
    return out;
}

Functional functional_from_pairing(const LaurentBoxSeries& g, const Box& boxA) {
    Functional mu;
    mu.box = boxA;
    for (const auto& n : boxA.points()) {
        // mu(T^{-1-n}) = h(T^{-1-n}, g)
        ExponentVec e = minus_ones(boxA.nvars()).minus(n);
        LaurentBoxSeries mono = LaurentBoxSeries::monomial(
            g.prime(), g.vars(), Basis::T, Box(e, e), e,
            PadicScalar::from_integer(1, g.prime(), max_relative_precision(g.prime())));
        mu.values.emplace(n, pairing(mono, g));
    }
    return mu;
}

GramReport perfectness_gram_check(const Box& boxA, const Box& boxB, std::uint32_t prime,
                                  const std::vector<std::string>& vars) {
    GramReport rep;
    // boxB must be the reflection -1 - boxA
    Box expected(boxA.hi.negated().plus(minus_ones(boxA.nvars())),
                 boxA.lo.negated().plus(minus_ones(boxA.nvars())));
    if (!(boxB == expected))
        throw invalid_argument_error("perfectness check needs boxB = -1 - boxA");

    const int prec = max_relative_precision(prime);
    rep.dimension = boxA.point_count();
    rep.pass = true;
    for (const auto& m : boxA.points()) {
        for (const auto& mp : boxB.points()) {
            LaurentBoxSeries a = LaurentBoxSeries::monomial(
                prime, vars, Basis::T, Box(m, m), m, PadicScalar::from_integer(1, prime, prec));
            LaurentBoxSeries b = LaurentBoxSeries::monomial(
                prime, vars, Basis::T, Box(mp, mp), mp, PadicScalar::from_integer(1, prime, prec));
            PadicScalar h = pairing(a, b);
            bool anti = (m.plus(mp) == minus_ones(boxA.nvars()));
            bool good = anti ? h.same_value(PadicScalar::from_integer(1, prime, prec))
                             : h.is_zero();
            if (!good && rep.pass) {
                rep.pass = false;
                rep.witness = "pairing mismatch at a monomial pair";
            }
        }
    }
    return rep;
}

ExactFormReport exact_form_residue_check(const LaurentBoxSeries& f, std::size_t axis) {
    if (axis >= f.nvars()) throw invalid_argument_error("axis out of range");
    // margins: differentiation shifts the axis exponent down by one, and
    // the residue needs (-1,...,-1) covered afterwards
    LaurentBoxSeries df = series_derivative(f, axis);
    Box b = df.box();
    ExponentVec target = minus_ones(f.nvars());
    if (!b.contains(target)) {
        // widen: the coefficient there is structurally zero, but the
        // caller asked for the residue of the derivative, so the box
        // must cover it
        Box wide = b.hull(Box(target, target));
        df = df.with_box(wide, std::nullopt);
    }
    ExactFormReport rep{false, PadicScalar::zero(f.prime())};
    rep.residue_value = residue(DifferentialForm(df));
    rep.pass = rep.residue_value.is_zero();
    return rep;
}

} // namespace robba

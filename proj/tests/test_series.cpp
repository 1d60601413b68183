#include <doctest.h>

#include <random>

#include "robba/series.hpp"
#include "robba/errors.hpp"

using namespace robba;

namespace {

const std::vector<std::string> V1{"T1"};
const std::vector<std::string> V2{"T1", "T2"};

PadicScalar sc(std::int64_t n, std::uint32_t p, int N = 12) {
    return PadicScalar::from_integer(n, p, N);
}

ExponentVec ev(std::initializer_list<std::int32_t> xs) {
    return ExponentVec(std::vector<std::int32_t>(xs));
}

} // namespace

TEST_CASE("gauss valuation examples") {
    // zero convention
    auto z = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, -2, 2));
    CHECK(gauss_valuation(z, RadiusVec::uniform(1, Rational(1))).value.is_inf());

    // p=3, f = 3 T1 + T2^2 at t = (1, 1/2): min(1+1, 0+1) = 1
    auto f = LaurentBoxSeries::zero(3, V2, Basis::T, Box::uniform(2, 0, 2));
    f.set_term(ev({1, 0}), sc(3, 3));
    f.set_term(ev({0, 2}), sc(1, 3));
    auto v = gauss_valuation(f, RadiusVec(std::vector<Rational>{Rational(1), Rational(1, 2)}));
    CHECK(v.value == RatInf(Rational(1)));
    CHECK(v.exact);

    // constants: v(p^m) = m at every radius
    auto c = LaurentBoxSeries::constant(3, V1, Basis::T, Box::uniform(1, 0, 0), sc(27, 3));
    CHECK(gauss_valuation(c, RadiusVec::uniform(1, Rational(7, 3))).value == RatInf(Rational(3)));

    CHECK_THROWS_AS(RadiusVec::uniform(1, Rational(0)), regime_error);
}

TEST_CASE("interval valuation examples") {
    // one var, f = T + T^{-1}, [1/2, 2]: corners give -1/2 and -2
    auto f = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, -1, 1));
    f.set_term(ev({1}), sc(1, 3));
    f.set_term(ev({-1}), sc(1, 3));
    auto v = interval_valuation(f, MultiInterval::uniform(1, Rational(1, 2), Rational(2)));
    CHECK(v.value == RatInf(Rational(-2)));

    // T1 T2^{-1} over ((1,1),(2,2)): min over corners of t1 - t2 = -1
    auto g = LaurentBoxSeries::monomial(3, V2, Basis::T, Box::uniform(2, -1, 1),
                                        ev({1, -1}), sc(1, 3));
    auto w = interval_valuation(g, MultiInterval::uniform(2, Rational(1), Rational(2)));
    CHECK(w.value == RatInf(Rational(-1)));

    // constant
    auto c = LaurentBoxSeries::constant(5, V1, Basis::T, Box::uniform(1, 0, 0), sc(25, 5));
    CHECK(interval_valuation(c, MultiInterval::uniform(1, Rational(1, 3), Rational(1))).value ==
          RatInf(Rational(2)));
}

TEST_CASE("gauss norm exponent convention") {
    // p=3, f = T, t = 2: w = v_{t/(p-1)}(T) = 1, i.e. ||T|| = 3^{-1}
    auto f = LaurentBoxSeries::monomial(3, V1, Basis::T, Box::uniform(1, 0, 1),
                                        ev({1}), sc(1, 3));
    CHECK(gauss_norm_exponent(f, RadiusVec::uniform(1, Rational(2))).value == RatInf(Rational(1)));

    auto one = LaurentBoxSeries::constant(3, V1, Basis::T, Box::uniform(1, 0, 0), sc(1, 3));
    CHECK(gauss_norm_exponent(one, RadiusVec::uniform(1, Rational(2))).value == RatInf(Rational(0)));

    // f = p T^{-1} at p=3, t=1: w = 1 + (-1)(1/2) = 1/2
    auto g = LaurentBoxSeries::monomial(3, V1, Basis::T, Box::uniform(1, -1, 0),
                                        ev({-1}), sc(3, 3));
    CHECK(gauss_norm_exponent(g, RadiusVec::uniform(1, Rational(1))).value == RatInf(Rational(1, 2)));
}

TEST_CASE("series arithmetic") {
    auto one = LaurentBoxSeries::constant(3, V1, Basis::T, Box::uniform(1, 0, 0), sc(1, 3));
    auto f = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, 0, 3));
    f.set_term(ev({1}), sc(2, 3));
    f.set_term(ev({3}), sc(5, 3));
    auto ff = series_mul(f, one);
    CHECK(ff.terms().size() == 2);
    CHECK(ff.coeff(ev({1})).same_value(sc(2, 3)));

    // (T1)(T2) = T1 T2 exactly
    auto t1 = LaurentBoxSeries::monomial(3, V2, Basis::T, Box::uniform(2, 0, 1), ev({1, 0}), sc(1, 3));
    auto t2 = LaurentBoxSeries::monomial(3, V2, Basis::T, Box::uniform(2, 0, 1), ev({0, 1}), sc(1, 3));
    auto t12 = series_mul(t1, t2);
    CHECK(t12.terms().size() == 1);
    CHECK(t12.is_exact());
    CHECK(t12.coeff(ev({1, 1})).same_value(sc(1, 3)));

    // (1+T)(1 - T + T^2 - ... + T^4 - T^5) = 1 - T^6; truncation to [0,5]
    // discards -T^6, so the tail bound is 6t at radius t
    auto a = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, 0, 1));
    a.set_term(ev({0}), sc(1, 3));
    a.set_term(ev({1}), sc(1, 3));
    auto b = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, 0, 5));
    for (int k = 0; k <= 5; ++k) b.set_term(ev({std::int32_t(k)}), sc(k % 2 ? -1 : 1, 3));
    Rational t(1, 4);
    auto prod = series_mul(a, b, Box::uniform(1, 0, 5),
                           MultiInterval::at(RadiusVec::uniform(1, t)));
    // interior coefficients telescope away (to the working precision;
    // capped-relative arithmetic reports them as O(p^N), not exact 0)
    CHECK(prod.coeff(ev({0})).same_value(sc(1, 3)));
    for (int k = 1; k <= 5; ++k) CHECK(prod.coeff(ev({std::int32_t(k)})).is_zero());
    CHECK(prod.tail_valuation() == RatInf(Rational(6) * t));
}

TEST_CASE("series inversion") {
    auto iv = MultiInterval::at(RadiusVec::uniform(1, Rational(1, 4)));
    auto one = LaurentBoxSeries::constant(3, V1, Basis::T, Box::uniform(1, 0, 0), sc(1, 3));
    auto inv1 = series_invert(one, iv, Box::uniform(1, 0, 4), Rational(10));
    CHECK(inv1.terms().size() == 1);
    CHECK(inv1.coeff(ev({0})).same_value(sc(1, 3)));
    CHECK(inv1.is_exact());

    // monomial inverts exactly
    auto t = LaurentBoxSeries::monomial(3, V1, Basis::T, Box::uniform(1, 0, 1), ev({1}), sc(1, 3));
    auto tinv = series_invert(t, iv, Box::uniform(1, -1, 0), Rational(10));
    CHECK(tinv.terms().size() == 1);
    CHECK(tinv.coeff(ev({-1})).same_value(sc(1, 3)));
    CHECK(tinv.is_exact());

    // p=3: 3T + T^3 at t=1/4 has dominant monomial T^3 (3/4 < 1 + 1/4);
    // the expansion T^{-3} (1 + 3T^{-2})^{-1} marches downward in the
    // exponent; multiply-back oracle within the budget
    auto f = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, 0, 3));
    f.set_term(ev({1}), sc(3, 3));
    f.set_term(ev({3}), sc(1, 3));
    Rational budget(8);
    Box out_box = Box::uniform(1, -41, 0);
    auto finv = series_invert(f, iv, out_box, budget);
    auto prod = series_mul(f, finv, Box::uniform(1, -41, 3), iv);
    CHECK(certified_difference_valuation(prod, one, iv) > RatInf(budget));

    // T + 3 T^{-1} on [1/4, 2] has no strictly dominant monomial (the
    // two terms balance at radius 1/2 inside the interval)
    auto g = LaurentBoxSeries::zero(3, V1, Basis::T, Box::uniform(1, -1, 1));
    g.set_term(ev({1}), sc(1, 3));
    g.set_term(ev({-1}), sc(3, 3));
    CHECK_THROWS_AS(series_invert(g, MultiInterval::uniform(1, Rational(1, 4), Rational(2)),
                                  Box::uniform(1, -4, 4), Rational(6)),
                    regime_error);
}

TEST_CASE("basis change") {
    auto iv = MultiInterval::at(RadiusVec::uniform(1, Rational(1, 4)));
    Rational budget(10);

    // T -> U-1
    auto t = LaurentBoxSeries::monomial(3, V1, Basis::T, Box::uniform(1, 0, 1), ev({1}), sc(1, 3));
    auto tu = basis_change(t, Basis::U, iv, Box::uniform(1, 0, 1), budget);
    CHECK(tu.coeff(ev({1})).same_value(sc(1, 3)));
    CHECK(tu.coeff(ev({0})).same_value(sc(-1, 3)));

    // U^2 -> T^2 + 2T + 1
    auto u2 = LaurentBoxSeries::monomial(3, V1, Basis::U, Box::uniform(1, 0, 2), ev({2}), sc(1, 3));
    auto u2t = basis_change(u2, Basis::T, iv, Box::uniform(1, 0, 2), budget);
    CHECK(u2t.coeff(ev({0})).same_value(sc(1, 3)));
    CHECK(u2t.coeff(ev({1})).same_value(sc(2, 3)));
    CHECK(u2t.coeff(ev({2})).same_value(sc(1, 3)));

    // roundtrip is the identity on polynomial inputs
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (int trial = 0; trial < 25; ++trial) {
        auto f = LaurentBoxSeries::zero(5, V2, Basis::T, Box::uniform(2, 0, 3));
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= 3; ++j)
                f.add_term(ev({std::int32_t(i), std::int32_t(j)}), sc(coeff(rng), 5));
        auto u = basis_change(f, Basis::U, MultiInterval::uniform(2, Rational(1, 8), Rational(1, 8)),
                              Box::uniform(2, 0, 3), budget);
        auto back = basis_change(u, Basis::T, MultiInterval::uniform(2, Rational(1, 8), Rational(1, 8)),
                                 Box::uniform(2, 0, 3), budget);
        CHECK(back.is_exact());
        for (const auto& e : Box::uniform(2, 0, 3).points())
            CHECK(back.coeff(e).same_value(f.coeff(e)));
    }

    // negative T-exponents cannot enter the U basis: T^{-1} has no
    // convergent U-expansion (every finite partial sum is a T-power
    // series with no T^{-1} term)
    auto tinv = LaurentBoxSeries::monomial(3, V1, Basis::T, Box::uniform(1, -1, 0),
                                           ev({-1}), sc(1, 3));
    CHECK_THROWS_AS(basis_change(tinv, Basis::U, iv, Box::uniform(1, -6, 6), budget),
                    regime_error);

    // the U -> T direction on negative exponents does converge
    auto uinv = LaurentBoxSeries::monomial(3, V1, Basis::U, Box::uniform(1, -1, 0),
                                           ev({-1}), sc(1, 3));
    auto ut = basis_change(uinv, Basis::T, iv, Box::uniform(1, 0, 30), Rational(7));
    // U^{-1} = (1+T)^{-1} = 1 - T + T^2 - ...
    CHECK(ut.coeff(ev({0})).same_value(sc(1, 3)));
    CHECK(ut.coeff(ev({1})).same_value(sc(-1, 3)));
    CHECK(ut.coeff(ev({2})).same_value(sc(1, 3)));
    CHECK(ut.tail_valuation() > RatInf(Rational(7)));
}

TEST_CASE("compactness profile") {
    // inner = outer: all gaps zero
    auto iv = MultiInterval::uniform(1, Rational(1, 2), Rational(2));
    auto prof0 = compactness_profile(iv, iv, Box::uniform(1, -4, 4));
    for (const auto& en : prof0.entries) CHECK(en.gap == Rational(0));

    // [1,1] inside [1/2,2]: e=5 gives 5 - 5/2 = 5/2, e=-5 gives -5 + 10 = 5
    auto inner = MultiInterval::uniform(1, Rational(1), Rational(1));
    auto outer = MultiInterval::uniform(1, Rational(1, 2), Rational(2));
    auto prof = compactness_profile(inner, outer, Box::uniform(1, -5, 5));
    for (const auto& en : prof.entries) {
        if (en.e[0] == 5) CHECK(en.gap == Rational(5, 2));
        if (en.e[0] == -5) CHECK(en.gap == Rational(5));
        if (en.e[0] == 0) CHECK(en.gap == Rational(0));
    }

    CHECK_THROWS_AS(compactness_profile(outer, inner, Box::uniform(1, 0, 2)),
                    invalid_argument_error);
}

TEST_CASE("valuation properties: multiplicative, ultrametric, log-convex") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> coeff(-40, 40);
    std::uniform_int_distribution<int> expo(-3, 3);
    std::uniform_int_distribution<int> rad_num(1, 5);
    std::uniform_int_distribution<int> rad_den(6, 12);

    for (int trial = 0; trial < 60; ++trial) {
        std::uint32_t p = trial % 2 ? 3 : 5;
        auto rand_series = [&](int nterms) {
            auto f = LaurentBoxSeries::zero(p, V2, Basis::T, Box::uniform(2, -3, 3));
            for (int k = 0; k < nterms; ++k) {
                int c = coeff(rng);
                if (c == 0) c = 1;
                f.add_term(ev({std::int32_t(expo(rng)), std::int32_t(expo(rng))}), sc(c, p));
            }
            if (f.is_zero_series()) f.set_term(ev({0, 0}), sc(1, p));
            return f;
        };
        auto f = rand_series(4), g = rand_series(4);
        for (int ri = 0; ri < 3; ++ri) {
            RadiusVec t(std::vector<Rational>{Rational(rad_num(rng), rad_den(rng)),
                                              Rational(rad_num(rng), rad_den(rng))});
            auto vf = gauss_valuation(f, t).value;
            auto vg = gauss_valuation(g, t).value;
            auto prod = series_mul(f, g);
            CHECK(gauss_valuation(prod, t).value == vf + vg);

            auto sum = series_add(f, g);
            auto vs = gauss_valuation(sum, t).value;
            CHECK(vs >= min(vf, vg));
            if (!(vf == vg)) CHECK(vs == min(vf, vg));
        }

        // log-convexity: interior radius between the corner radii
        MultiInterval iv = MultiInterval::uniform(2, Rational(1, 6), Rational(1, 2));
        RadiusVec mid = RadiusVec::uniform(2, Rational(1, 3));
        CHECK(gauss_valuation(f, mid).value >= interval_valuation(f, iv).value);
    }
}

#include <doctest.h>

#include <random>

#include "robba/padic.hpp"

using namespace robba;

TEST_CASE("scalar_from_rational basics") {
    // zero maps to the exact-zero sentinel
    auto z = PadicScalar::from_rational(0, 1, 3, 10);
    CHECK(z.is_exact_zero());
    CHECK(z.valuation().is_inf());

    // pure prime power
    auto nine = PadicScalar::from_rational(9, 1, 3, 5);
    CHECK(nine.valuation_int() == 2);
    CHECK(nine.unit() == 1);

    // 1/3: valuation -1, and multiplying back by 3 recovers 1 at precision 5
    auto third = PadicScalar::from_rational(1, 3, 3, 5);
    CHECK(third.valuation_int() == -1);
    auto back = third.mul(PadicScalar::from_integer(3, 3, 5));
    CHECK(back.same_value(PadicScalar::from_integer(1, 3, 5)));

    CHECK_THROWS_AS(PadicScalar::from_rational(1, 0, 3, 5), invalid_argument_error);
    CHECK_THROWS_AS(PadicScalar::from_rational(1, 1, 2, 5), invalid_argument_error);
}

TEST_CASE("scalar arithmetic and cancellation") {
    // 3 + (-3) cancels to a zero known to the full absolute precision
    auto a = PadicScalar::from_integer(3, 3, 4);
    auto s = a.add(a.negate());
    CHECK(s.is_zero());
    CHECK(!s.is_exact_zero());
    CHECK(s.valuation_is_lower_bound());
    CHECK(s.valuation() == RatInf(Rational(5))); // abs precision of 3*u+O(3^5)

    // valuations add under multiplication
    auto x = PadicScalar::from_unit(1, 1, 3, 6);
    auto y = PadicScalar::from_unit(2, 2, 3, 6);
    auto xy = x.mul(y);
    CHECK(xy.valuation_int() == 3);
    CHECK(xy.unit() == 2);

    // 1 + 3 = 4 with unit 4 mod 81
    auto one = PadicScalar::from_integer(1, 3, 4);
    auto three = PadicScalar::from_integer(3, 3, 4);
    auto four = one.add(three);
    CHECK(four.valuation_int() == 0);
    CHECK(four.unit() % 81 == 4);

    CHECK_THROWS_AS(PadicScalar::from_integer(1, 3, 4).add(PadicScalar::from_integer(1, 5, 4)),
                    invalid_argument_error);
}

TEST_CASE("scalar inversion") {
    auto one = PadicScalar::from_integer(1, 3, 6);
    CHECK(one.invert().same_value(one));

    auto p5 = PadicScalar::from_integer(5, 5, 6);
    auto inv = p5.invert();
    CHECK(inv.valuation_int() == -1);
    CHECK(inv.unit() == 1);

    // extended-Euclid oracle: 4 * 61 = 244 = 3*81 + 1
    auto four = PadicScalar::from_integer(4, 3, 4);
    CHECK(four.invert().unit() == 61);

    CHECK_THROWS_AS(PadicScalar::zero(3).invert(), invalid_argument_error);
}

TEST_CASE("multiplicativity of valuation and double inversion") {
    std::mt19937_64 rng(20240815);
    for (std::uint32_t p : {3u, 5u, 7u}) {
        int N = 8;
        std::uniform_int_distribution<std::int64_t> num(-4000, 4000);
        std::uniform_int_distribution<std::int64_t> den(1, 4000);
        int done = 0;
        while (done < 1000) {
            std::int64_t a = num(rng), b = den(rng);
            if (a == 0) continue;
            auto x = PadicScalar::from_rational(a, b, p, N);
            auto y = PadicScalar::from_rational(num(rng) * 2 + 1, den(rng), p, N);
            CHECK(x.mul(y).valuation_int() == x.valuation_int() + y.valuation_int());
            CHECK(x.invert().invert().same_value(x));
            ++done;
        }
    }
}

#include <doctest.h>

#include <random>

#include "robba/plinalg.hpp"
#include "robba/errors.hpp"
#include "oracles.hpp"

using namespace robba;

namespace {

PadicScalar sc(std::int64_t n, std::uint32_t p, int N = 14) {
    return PadicScalar::from_integer(n, p, N);
}

PadicMatrix from_ints(const std::vector<std::vector<long long>>& a, std::uint32_t p, int N = 14) {
    PadicMatrix M(a.size(), a.empty() ? 0 : a[0].size(), p);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            M.set(i, j, sc(a[i][j], p, N));
    return M;
}

} // namespace

TEST_CASE("row echelon basics") {
    auto I = PadicMatrix::identity(3, 3, 10);
    auto r = row_echelon(I);
    CHECK(r.pivot_cols.size() == 3);
    for (auto v : r.pivot_valuations) CHECK(v == 0);

    // [[3,1],[0,3]] at p=3: max-norm pivoting takes the unit first, and
    // elimination leaves [-9, 0] in the second row
    auto A = from_ints({{3, 1}, {0, 3}}, 3);
    auto e = row_echelon(A);
    CHECK(e.pivot_valuations.size() == 2);
    CHECK(e.pivot_valuations[0] == 0);
    CHECK(e.pivot_valuations[1] == 2);

    auto Z = PadicMatrix(2, 2, 3);
    auto ez = row_echelon(Z);
    CHECK(ez.pivot_cols.empty());
}

TEST_CASE("rank with tolerance") {
    auto I = PadicMatrix::identity(4, 3, 12);
    CHECK(rank_with_tolerance(I, Rational(10)) == 4);

    // diag(1, p^10) at p=3: tolerance 8 sees rank 1, tolerance 12 sees 2
    PadicMatrix D(2, 2, 3);
    D.set(0, 0, sc(1, 3, 14));
    D.set(1, 1, PadicScalar::from_unit(10, 1, 3, 14));
    CHECK(rank_with_tolerance(D, Rational(8)) == 1);
    CHECK(rank_with_tolerance(D, Rational(12)) == 2);

    // tolerance beyond precision is indeterminate
    PadicMatrix P(1, 1, 3);
    P.set(0, 0, PadicScalar::from_unit(0, 1, 3, 5));
    CHECK_THROWS_AS(rank_with_tolerance(P, Rational(9)), precision_error);
}

TEST_CASE("kernel basis") {
    // zero matrix: standard basis
    PadicMatrix Z(2, 3, 5);
    auto kz = kernel_basis(Z, Rational(8));
    CHECK(kz.size() == 3);

    // [[1,1]]: kernel spanned by (1,-1)
    auto A = from_ints({{1, 1}}, 3);
    auto k = kernel_basis(A, Rational(8));
    REQUIRE(k.size() == 1);
    auto& v = k[0];
    // A v = 0: v0 + v1 = 0
    CHECK(v[0].add(v[1]).is_zero());

    // random 6x4 integer matrices: kernel dimension matches the exact
    // rational oracle, and rank + nullity = cols
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> entry(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<long long>> a(6, std::vector<long long>(4));
        for (auto& row : a)
            for (auto& x : row) x = entry(rng);
        int oracle_rank = oracles::bareiss_rank(a);
        auto M = from_ints(a, 5);
        int rk = rank_with_tolerance(M, Rational(10));
        auto ker = kernel_basis(M, Rational(10));
        CHECK(rk == oracle_rank);
        CHECK(rk + static_cast<int>(ker.size()) == 4);
        // kernel residuals vanish at tolerance
        for (const auto& vec : ker) {
            for (std::size_t i = 0; i < 6; ++i) {
                PadicScalar sum = PadicScalar::zero(5);
                for (std::size_t j = 0; j < 4; ++j) sum = sum.add(M.at(i, j).mul(vec[j]));
                if (!sum.is_exact_zero()) CHECK(sum.valuation() >= RatInf(Rational(10)));
            }
        }
    }
}

TEST_CASE("rank invariance under permutation and unit scaling") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<long long> entry(-9, 9);
    std::uniform_int_distribution<int> unit(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<long long>> a(5, std::vector<long long>(5));
        for (auto& row : a)
            for (auto& x : row) x = entry(rng);
        auto M = from_ints(a, 3);
        int rk = rank_with_tolerance(M, Rational(10));

        // permute rows and scale by units coprime to 3
        std::vector<std::vector<long long>> b = a;
        std::shuffle(b.begin(), b.end(), rng);
        for (auto& row : b) {
            int u = unit(rng);
            if (u % 3 == 0) u = 1;
            for (auto& x : row) x *= u;
        }
        CHECK(rank_with_tolerance(from_ints(b, 3), Rational(10)) == rk);
    }
}

TEST_CASE("sparse product and subtraction") {
    SparseMat A(2, 2, 3), B(2, 2, 3);
    A.add_entry(0, 0, sc(1, 3));
    A.add_entry(1, 1, sc(2, 3));
    B.add_entry(0, 1, sc(3, 3));
    B.add_entry(1, 0, sc(1, 3));
    auto C = sparse_multiply(A, B);
    CHECK(C.nnz() == 2);
    auto D = sparse_sub(C, C);
    CHECK(sparse_min_valuation(D) >= RatInf(Rational(14)));
}

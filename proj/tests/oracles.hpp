// Test-only oracles, independent of the library's computation paths:
// exact-rational cyclotomic arithmetic for the trace route to psi,
// fraction-free integer rank, and brute-force Koszul cohomology over Q.
#ifndef ROBBA_TEST_ORACLES_HPP
#define ROBBA_TEST_ORACLES_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "robba/rational.hpp"

namespace oracles {

using robba::Rational;

// ---------------------------------------------------------------- Q(zeta_p)

// element of Q(zeta_p) on the basis zeta^0..zeta^{p-2}, with the
// reduction zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
struct Cyc {
    std::uint32_t p;
    std::vector<Rational> c;

    explicit Cyc(std::uint32_t p_) : p(p_), c(p_ - 1, Rational(0)) {}

    static Cyc rational(std::uint32_t p, const Rational& r) {
        Cyc z(p);
        z.c[0] = r;
        return z;
    }
    static Cyc zeta_pow(std::uint32_t p, std::int64_t k) {
        Cyc z(p);
        std::int64_t e = ((k % p) + p) % p;
        if (e < static_cast<std::int64_t>(p) - 1) {
            z.c[static_cast<std::size_t>(e)] = Rational(1);
        } else {
            for (auto& x : z.c) x = Rational(-1);
        }
        return z;
    }

    Cyc add(const Cyc& o) const {
        Cyc z(p);
        for (std::size_t i = 0; i + 1 < p; ++i) z.c[i] = c[i] + o.c[i];
        return z;
    }
    Cyc scale(const Rational& r) const {
        Cyc z(p);
        for (std::size_t i = 0; i + 1 < p; ++i) z.c[i] = c[i] * r;
        return z;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i + 1 < p; ++i)
            if (!c[i].is_zero()) return false;
        return true;
    }
    Rational rational_part() const {
        if (!is_rational()) throw std::runtime_error("cyclotomic value is not rational");
        return c[0];
    }
};

// ------------------------------------------------- psi via the trace formula

using QLaurent = std::map<int, Rational>; // exponent -> coefficient, one var

// psi(f) = p^{-1} phi^{-1} Trace(f), the trace taken over the p
// conjugates U -> zeta^j U after rewriting f = phi(T^{-M}) * h with h a
// polynomial in U. Verifies on the way that every conjugate sum
// collapses to a rational (p or 0).
inline QLaurent psi_trace_oracle(const QLaurent& f, std::uint32_t p) {
    int lo = 0;
    for (const auto& [e, c] : f) lo = std::min(lo, e);
    const int M = -lo;

    // h = (1 + U + ... + U^{p-1})^M * sum_e c_e (U-1)^{e+M}
    std::map<int, Rational> h;
    for (const auto& [e, c] : f) {
        int k = e + M;
        // (U-1)^k
        Rational bin(1);
        for (int j = 0; j <= k; ++j) {
            Rational v = bin;
            if ((k - j) % 2 == 1) v = -v;
            h[j] += c * v;
            if (j < k) bin = bin * Rational(k - j) / Rational(j + 1);
        }
    }
    for (int rep = 0; rep < M; ++rep) {
        std::map<int, Rational> next;
        for (const auto& [e, c] : h)
            for (std::uint32_t i = 0; i < p; ++i) next[e + static_cast<int>(i)] += c;
        h = std::move(next);
    }

    // Trace: coefficient at U^e picks up sum_j zeta^{je}
    std::map<int, Rational> tr;
    for (const auto& [e, c] : h) {
        if (c.is_zero()) continue;
        Cyc s(p);
        for (std::uint32_t j = 0; j < p; ++j)
            s = s.add(Cyc::zeta_pow(p, static_cast<std::int64_t>(j) * e));
        Rational sr = s.rational_part(); // throws if the zeta parts survive
        if (e % static_cast<int>(p) != 0) {
            if (!sr.is_zero()) throw std::runtime_error("trace oracle: nonzero off-class sum");
            continue;
        }
        if (!(sr == Rational(static_cast<std::int64_t>(p))))
            throw std::runtime_error("trace oracle: class-0 sum is not p");
        tr[e] += c * sr;
    }

    // p^{-1} phi^{-1}: divide exponents by p, coefficients by p; then
    // U^m -> (1+T)^m and shift by -M
    QLaurent out;
    for (const auto& [e, c] : tr) {
        int m = e / static_cast<int>(p);
        Rational v = c / Rational(static_cast<std::int64_t>(p));
        Rational bin(1);
        for (int j = 0; j <= m; ++j) {
            out[j - M] += v * bin;
            if (j < m) bin = bin * Rational(m - j) / Rational(j + 1);
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// --------------------------------------------------- fraction-free rank over Q

// rank of an integer matrix by Bareiss elimination in __int128
inline int bareiss_rank(std::vector<std::vector<long long>> a) {
    using i128 = __int128;
    std::size_t m = a.size();
    if (m == 0) return 0;
    std::size_t n = a[0].size();
    std::vector<std::vector<i128>> w(m, std::vector<i128>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a[i][j];

    i128 prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t piv = row;
        while (piv < m && w[piv][col] == 0) ++piv;
        if (piv == m) continue;
        std::swap(w[piv], w[row]);
        for (std::size_t i = row + 1; i < m; ++i) {
            for (std::size_t j = col + 1; j < n; ++j)
                w[i][j] = (w[row][col] * w[i][j] - w[i][col] * w[row][j]) / prev;
            w[i][col] = 0;
        }
        prev = w[row][col];
        ++row;
    }
    return static_cast<int>(row);
}

// rank of a rational matrix by clearing denominators row by row
inline int rational_rank(const std::vector<std::vector<Rational>>& a) {
    std::vector<std::vector<long long>> b;
    for (const auto& r : a) {
        long long lcm = 1;
        for (const auto& x : r) {
            long long d = x.den();
            long long g = std::gcd(lcm, d);
            lcm = lcm / g * d;
        }
        std::vector<long long> rr;
        for (const auto& x : r) rr.push_back(x.num() * (lcm / x.den()));
        b.push_back(std::move(rr));
    }
    return bareiss_rank(std::move(b));
}

// ---------------------------------------------- brute-force Koszul cohomology

// Koszul complex on commuting operators D_1..D_n acting on Q^d: degree-k
// space is (k-subsets) x Q^d; returns the cohomology dimensions. The
// differential follows d(x)_{S+j} = sum (-1)^{#{s in S: s < j}} D_j x_S.
inline std::vector<int> koszul_cohomology_over_Q(
    const std::vector<std::vector<std::vector<Rational>>>& ops, std::size_t dim) {
    const std::size_t n = ops.size();
    auto subsets_of_size = [&](std::size_t k) {
        std::vector<unsigned> out;
        for (unsigned m = 0; m < (1u << n); ++m)
            if (static_cast<std::size_t>(__builtin_popcount(m)) == k) out.push_back(m);
        return out;
    };

    std::vector<std::vector<std::vector<Rational>>> boundaries;
    for (std::size_t k = 0; k < n; ++k) {
        auto src = subsets_of_size(k);
        auto dst = subsets_of_size(k + 1);
        std::vector<std::vector<Rational>> d(dst.size() * dim,
                                             std::vector<Rational>(src.size() * dim, Rational(0)));
        for (std::size_t si = 0; si < src.size(); ++si) {
            unsigned S = src[si];
            for (std::size_t j = 0; j < n; ++j) {
                if (S & (1u << j)) continue;
                unsigned T = S | (1u << j);
                std::size_t ti = 0;
                while (dst[ti] != T) ++ti;
                int sign = __builtin_popcount(S & ((1u << j) - 1)) % 2 ? -1 : 1;
                for (std::size_t r = 0; r < dim; ++r)
                    for (std::size_t c = 0; c < dim; ++c) {
                        Rational v = ops[j][r][c];
                        if (sign < 0) v = -v;
                        d[ti * dim + r][si * dim + c] += v;
                    }
            }
        }
        boundaries.push_back(std::move(d));
    }

    std::vector<int> dims;
    auto binom = [&](std::size_t k) {
        std::size_t r = 1;
        for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return r;
    };
    int prev_rank = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        int space = static_cast<int>(binom(k) * dim);
        int rk = k < n ? rational_rank(boundaries[k]) : 0;
        dims.push_back(space - rk - prev_rank);
        prev_rank = rk;
    }
    return dims;
}

} // namespace oracles

#endif

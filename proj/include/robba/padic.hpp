#ifndef ROBBA_PADIC_HPP
#define ROBBA_PADIC_HPP

#include <cstdint>
#include <string>

#include "robba/errors.hpp"
#include "robba/rational.hpp"

namespace robba {

// Largest N with p^N < 2^63, so units and modular products fit in
// uint64 with __int128 intermediates.
int max_relative_precision(std::uint32_t p);

std::uint64_t pow_u64(std::uint64_t base, unsigned exp);

// An element of Q_p at capped relative precision: p^val * unit known to
// N digits, i.e. unit determined modulo p^N. Three states:
//   - exact zero: the +inf valuation sentinel;
//   - inexact zero O(p^A): relprec 0, val = A is a lower bound only;
//   - regular: unit coprime to p, 0 < unit < p^N.
// Values are immutable; every operation returns a fresh scalar.
class PadicScalar {
  public:
    // exact zero
    static PadicScalar zero(std::uint32_t p);
    // O(p^bound): zero to the stated absolute precision
    static PadicScalar inexact_zero(std::uint32_t p, std::int64_t bound);
    static PadicScalar from_integer(std::int64_t n, std::uint32_t p, int relprec);
    static PadicScalar from_rational(std::int64_t num, std::int64_t den,
                                     std::uint32_t p, int relprec);
    // val + unit given directly; unit reduced mod p^relprec, must be coprime to p
    static PadicScalar from_unit(std::int64_t val, std::uint64_t unit,
                                 std::uint32_t p, int relprec);

    std::uint32_t prime() const { return prime_; }
    bool is_exact_zero() const { return exact_zero_; }
    bool is_zero() const { return exact_zero_ || relprec_ == 0; }
    int relprec() const { return relprec_; }
    std::uint64_t unit() const { return unit_; }

    // valuation as a query: +inf for exact zero; for an inexact zero the
    // stored bound is a lower bound (see valuation_is_lower_bound).
    RatInf valuation() const;
    bool valuation_is_lower_bound() const { return !exact_zero_ && relprec_ == 0; }
    std::int64_t valuation_int() const;

    // absolute precision: the exponent up to which digits are known
    RatInf abs_precision() const;

    PadicScalar add(const PadicScalar& o) const;
    PadicScalar sub(const PadicScalar& o) const;
    PadicScalar mul(const PadicScalar& o) const;
    PadicScalar negate() const;
    PadicScalar invert() const;

    // truncate relative precision down to n (no-op if already weaker)
    PadicScalar cap_relprec(int n) const;

    // equality of the known digits at the weaker of the two precisions
    bool same_value(const PadicScalar& o) const;

    std::string str() const;

  private:
    PadicScalar() = default;
    void check_same_prime(const PadicScalar& o) const;

    std::uint32_t prime_ = 3;
    bool exact_zero_ = true;
    std::int64_t val_ = 0;
    std::uint64_t unit_ = 0;
    int relprec_ = 0;
};

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);

// extended-Euclid inverse of a modulo m (m a prime power), a coprime to m
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

} // namespace robba

#endif

#include "robba/padic.hpp"

#include <algorithm>
#include <cmath>

namespace robba {

namespace {

using u128 = unsigned __int128;

void check_prime(std::uint32_t p) {
    if (p < 3) throw invalid_argument_error("prime must be > 2");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw invalid_argument_error("prime is composite");
}

} // namespace

int max_relative_precision(std::uint32_t p) {
    int n = 0;
    u128 acc = 1;
    const u128 cap = u128(1) << 63;
    while (acc * p < cap) { acc *= p; ++n; }
    return n;
}

std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    // extended Euclid on signed 128-bit to dodge wraparound
    __int128 t = 0, newt = 1, r = m, newr = a % m;
    while (newr != 0) {
        __int128 q = r / newr;
        __int128 tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw invalid_argument_error("mod_inverse: not invertible");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

PadicScalar PadicScalar::zero(std::uint32_t p) {
    check_prime(p);
    PadicScalar s;
    s.prime_ = p;
    s.exact_zero_ = true;
    return s;
}

PadicScalar PadicScalar::inexact_zero(std::uint32_t p, std::int64_t bound) {
    check_prime(p);
    PadicScalar s;
    s.prime_ = p;
    s.exact_zero_ = false;
    s.val_ = bound;
    s.unit_ = 0;
    s.relprec_ = 0;
    return s;
}

PadicScalar PadicScalar::from_unit(std::int64_t val, std::uint64_t unit,
                                   std::uint32_t p, int relprec) {
    check_prime(p);
    if (relprec <= 0 || relprec > max_relative_precision(p))
        throw invalid_argument_error("relative precision out of range for prime");
    std::uint64_t m = pow_u64(p, static_cast<unsigned>(relprec));
    unit %= m;
    if (unit == 0 || unit % p == 0)
        throw invalid_argument_error("unit not coprime to prime");
    PadicScalar s;
    s.prime_ = p;
    s.exact_zero_ = false;
    s.val_ = val;
    s.unit_ = unit;
    s.relprec_ = relprec;
    return s;
}

PadicScalar PadicScalar::from_integer(std::int64_t n, std::uint32_t p, int relprec) {
    return from_rational(n, 1, p, relprec);
}

PadicScalar PadicScalar::from_rational(std::int64_t num, std::int64_t den,
                                       std::uint32_t p, int relprec) {
    check_prime(p);
    if (den == 0) throw invalid_argument_error("denominator is zero");
    if (relprec <= 0 || relprec > max_relative_precision(p))
        throw invalid_argument_error("relative precision out of range for prime");
    if (num == 0) return zero(p);

    bool neg = (num < 0) != (den < 0);
    std::uint64_t an = num < 0 ? (0ULL - static_cast<std::uint64_t>(num))
                               : static_cast<std::uint64_t>(num);
    std::uint64_t ad = den < 0 ? (0ULL - static_cast<std::uint64_t>(den))
                               : static_cast<std::uint64_t>(den);
    u128 n = an;
    u128 d = ad;

    std::int64_t v = 0;
    while (n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }

    std::uint64_t m = pow_u64(p, static_cast<unsigned>(relprec));
    std::uint64_t nu = static_cast<std::uint64_t>(n % m);
    std::uint64_t du = static_cast<std::uint64_t>(d % m);
    std::uint64_t u = static_cast<std::uint64_t>(u128(nu) * mod_inverse(du, m) % m);
    if (neg) u = (m - u) % m;
    return from_unit(v, u, p, relprec);
}

RatInf PadicScalar::valuation() const {
    if (exact_zero_) return RatInf::infinity();
    return RatInf(Rational(val_));
}

std::int64_t PadicScalar::valuation_int() const {
    if (exact_zero_) throw invalid_argument_error("valuation_int on exact zero");
    return val_;
}

RatInf PadicScalar::abs_precision() const {
    if (exact_zero_) return RatInf::infinity();
    return RatInf(Rational(val_ + relprec_));
}

void PadicScalar::check_same_prime(const PadicScalar& o) const {
    if (prime_ != o.prime_) throw invalid_argument_error("prime mismatch");
}

PadicScalar PadicScalar::add(const PadicScalar& o) const {
    check_same_prime(o);
    if (exact_zero_) return o;
    if (o.exact_zero_) return *this;

    // absolute precision of the sum = min of the two
    std::int64_t abs_a = val_ + relprec_;
    std::int64_t abs_b = o.val_ + o.relprec_;
    std::int64_t abs_r = std::min(abs_a, abs_b);
    std::int64_t m = std::min(relprec_ ? val_ : abs_a, o.relprec_ ? o.val_ : abs_b);
    if (abs_r <= m) return inexact_zero(prime_, abs_r);

    int digits = static_cast<int>(abs_r - m);
    digits = std::min(digits, max_relative_precision(prime_));
    std::uint64_t mod = pow_u64(prime_, static_cast<unsigned>(digits));
    std::uint64_t s = 0;
    if (relprec_ > 0 && val_ - m < digits) {
        std::uint64_t shift = pow_u64(prime_, static_cast<unsigned>(val_ - m));
        s = static_cast<std::uint64_t>(u128(unit_) % mod * shift % mod);
    }
    if (o.relprec_ > 0 && o.val_ - m < digits) {
        std::uint64_t shift = pow_u64(prime_, static_cast<unsigned>(o.val_ - m));
        s = static_cast<std::uint64_t>((u128(s) + u128(o.unit_) % mod * shift) % mod);
    }
    if (s == 0) return inexact_zero(prime_, m + digits);
    int v = 0;
    while (s % prime_ == 0) { s /= prime_; ++v; }
    int n = digits - v;
    return from_unit(m + v, s, prime_, n);
}

PadicScalar PadicScalar::negate() const {
    if (exact_zero_ || relprec_ == 0) return *this;
    std::uint64_t m = pow_u64(prime_, static_cast<unsigned>(relprec_));
    return from_unit(val_, m - unit_, prime_, relprec_);
}

PadicScalar PadicScalar::sub(const PadicScalar& o) const { return add(o.negate()); }

PadicScalar PadicScalar::mul(const PadicScalar& o) const {
    check_same_prime(o);
    if (exact_zero_ || o.exact_zero_) return zero(prime_);
    if (relprec_ == 0 || o.relprec_ == 0) {
        // O(p^a) * (p^v u) = O(p^{a+v}); for two inexact zeros bounds add
        std::int64_t v = val_ + o.val_;
        return inexact_zero(prime_, v);
    }
    int n = std::min(relprec_, o.relprec_);
    std::uint64_t m = pow_u64(prime_, static_cast<unsigned>(n));
    std::uint64_t u = static_cast<std::uint64_t>(u128(unit_ % m) * (o.unit_ % m) % m);
    return from_unit(val_ + o.val_, u, prime_, n);
}

PadicScalar PadicScalar::invert() const {
    if (exact_zero_) throw invalid_argument_error("division by zero");
    if (relprec_ == 0)
        throw precision_error("cannot invert a zero known only to finite precision");
    std::uint64_t m = pow_u64(prime_, static_cast<unsigned>(relprec_));
    return from_unit(-val_, mod_inverse(unit_, m), prime_, relprec_);
}

PadicScalar PadicScalar::cap_relprec(int n) const {
    if (exact_zero_ || relprec_ <= n) return *this;
    if (n <= 0) return inexact_zero(prime_, val_);
    std::uint64_t m = pow_u64(prime_, static_cast<unsigned>(n));
    return from_unit(val_, unit_ % m, prime_, n);
}

bool PadicScalar::same_value(const PadicScalar& o) const {
    check_same_prime(o);
    PadicScalar d = sub(o);
    if (d.is_exact_zero()) return true;
    if (d.relprec_ == 0) return true; // indistinguishable at joint precision
    // nonzero known digits: values differ, unless both operands were
    // inexact zeros hiding the same bound
    return false;
}

std::string PadicScalar::str() const {
    if (exact_zero_) return "0";
    if (relprec_ == 0) return "O(" + std::to_string(prime_) + "^" + std::to_string(val_) + ")";
    return std::to_string(unit_) + "*" + std::to_string(prime_) + "^" + std::to_string(val_) +
           " + O(" + std::to_string(prime_) + "^" + std::to_string(val_ + relprec_) + ")";
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) { return a.add(b); }
PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a.sub(b); }
PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) { return a.mul(b); }

} // namespace robba

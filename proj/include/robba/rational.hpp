#ifndef ROBBA_RATIONAL_HPP
#define ROBBA_RATIONAL_HPP

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "robba/errors.hpp"

namespace robba {

// Exact rational arithmetic for radii, valuations and tolerances.
// All quantities in this artifact are tiny fractions; int64 components
// with __int128 intermediates are ample, and overflow throws rather
// than wrapping.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                         i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw invalid_argument_error("rational division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        i128 l = i128(a.num_) * b.den_;
        i128 r = i128(b.num_) * a.den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "3/4", "-2", "0"
    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos)
                return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)),
                            std::stoll(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw invalid_argument_error("cannot parse rational: " + s);
        }
    }

  private:
    using i128 = __int128;

    static Rational from_i128(i128 n, i128 d) {
        Rational r;
        if (d == 0) throw invalid_argument_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw invalid_argument_error("rational overflow");
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw invalid_argument_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;
};

// A rational extended with +infinity; the value of valuations on the
// zero series and of tail bounds on exact (untruncated) series.
class RatInf {
  public:
    RatInf() : inf_(true) {}
    RatInf(Rational v) : inf_(false), v_(v) {}
    RatInf(std::int64_t v) : inf_(false), v_(v) {}

    static RatInf infinity() { return RatInf(); }

    bool is_inf() const { return inf_; }
    const Rational& value() const {
        if (inf_) throw invalid_argument_error("value() on +inf");
        return v_;
    }

    friend bool operator==(const RatInf& a, const RatInf& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator<(const RatInf& a, const RatInf& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const RatInf& a, const RatInf& b) { return !(b < a); }
    friend bool operator>(const RatInf& a, const RatInf& b) { return b < a; }
    friend bool operator>=(const RatInf& a, const RatInf& b) { return !(a < b); }

    friend RatInf min(const RatInf& a, const RatInf& b) { return a < b ? a : b; }

    // inf + x = inf
    friend RatInf operator+(const RatInf& a, const RatInf& b) {
        if (a.inf_ || b.inf_) return infinity();
        return RatInf(a.v_ + b.v_);
    }

    std::string str() const { return inf_ ? "inf" : v_.str(); }

    static RatInf parse(const std::string& s) {
        if (s == "inf") return infinity();
        return RatInf(Rational::parse(s));
    }

  private:
    bool inf_;
    Rational v_{0};
};

} // namespace robba

#endif

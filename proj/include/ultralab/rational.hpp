#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalar used for every distance, radius and
 *        parameter in the library.
 *
 * Backed by boost::multiprecision::cpp_rational so arithmetic never
 * overflows and never rounds. Canonical form: reduced, denominator > 0,
 * zero is 0/1. Serializes as "num/den" ("k" for integers).
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ultralab {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
    boost::multiprecision::cpp_rational v_;

public:
    Rational() = default;
    Rational(int n) : v_(n) {}
    Rational(long long n) : v_(n) {}
    Rational(const BigInt& n) : v_(n) {}
    Rational(const BigInt& num, const BigInt& den) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
    }
    Rational(long long num, long long den)
        : Rational(BigInt(num), BigInt(den)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator() == 1; }
    bool is_positive() const { return v_ > 0; }
    bool is_negative() const { return v_ < 0; }

    Rational operator-() const { Rational r; r.v_ = -v_; return r; }
    Rational operator+(const Rational& o) const { Rational r; r.v_ = v_ + o.v_; return r; }
    Rational operator-(const Rational& o) const { Rational r; r.v_ = v_ - o.v_; return r; }
    Rational operator*(const Rational& o) const { Rational r; r.v_ = v_ * o.v_; return r; }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        Rational r; r.v_ = v_ / o.v_; return r;
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    Rational reciprocal() const {
        if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(denominator(), numerator());
    }

    /// "num/den", integers as plain "k".
    std::string str() const {
        std::string s = numerator().str();
        if (!is_integer()) s += "/" + denominator().str();
        return s;
    }

    /// Parses "k" or "num/den". Throws std::invalid_argument on malformed input.
    static Rational parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(s));
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("Rational: zero denominator");
            return Rational(num, den);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
    }
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// A Rational extended with a +infinity marker. Infinity never enters
/// Rational arithmetic; it only records the corner cases the theory
/// assigns it to (dil of non-Lipschitz maps, admissible degrees, Omega-hat).
class Extended {
    Rational value_;
    bool infinite_ = false;

    explicit Extended(bool inf) : infinite_(inf) {}

public:
    Extended() = default;
    Extended(const Rational& r) : value_(r) {}
    Extended(int n) : value_(n) {}
    static Extended infinity() { return Extended(true); }

    bool is_infinite() const { return infinite_; }
    const Rational& finite() const {
        if (infinite_) throw std::domain_error("Extended: value is infinite");
        return value_;
    }

    bool operator==(const Extended& o) const {
        if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
        return value_ == o.value_;
    }
    bool operator!=(const Extended& o) const { return !(*this == o); }
    bool operator<(const Extended& o) const {
        if (infinite_) return false;
        if (o.infinite_) return true;
        return value_ < o.value_;
    }
    bool operator<=(const Extended& o) const { return *this < o || *this == o; }
    bool operator>(const Extended& o) const { return o < *this; }
    bool operator>=(const Extended& o) const { return o <= *this; }

    std::string str() const { return infinite_ ? "inf" : value_.str(); }
};

} // namespace ultralab

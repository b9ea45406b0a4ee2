#pragma once

/**
 * @file padic.hpp
 * @brief Normalized p-adic absolute value on exact rationals, |p|_p = 1/p.
 */

#include <stdexcept>

#include "ultralab/rational.hpp"

namespace ultralab {

inline bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// p-adic valuation of a nonzero integer: the exponent of p in n.
inline long long padic_valuation(BigInt n, long long p) {
    if (n == 0) throw std::domain_error("padic_valuation: v_p(0) is infinite");
    if (n < 0) n = -n;
    long long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Carries the prime of a normalized non-Archimedean absolute value.
class PAdicAbs {
    long long p_;

public:
    explicit PAdicAbs(long long p) : p_(p) {
        if (!is_prime(p)) throw std::invalid_argument("PAdicAbs: p must be prime");
    }

    long long prime() const { return p_; }

    /// v_p(q) = v_p(num) - v_p(den); undefined for q = 0.
    long long valuation(const Rational& q) const {
        if (q.is_zero()) throw std::domain_error("PAdicAbs: v_p(0) is infinite");
        return padic_valuation(q.numerator(), p_) - padic_valuation(q.denominator(), p_);
    }

    /// |q|_p = p^(-v_p(q)), |0|_p = 0. Exact.
    Rational abs(const Rational& q) const {
        if (q.is_zero()) return Rational(0);
        return power(-valuation(q));
    }

    /// p^k as an exact Rational, k of either sign.
    Rational power(long long k) const {
        BigInt b = 1;
        for (long long i = 0; i < (k < 0 ? -k : k); ++i) b *= p_;
        return k >= 0 ? Rational(b) : Rational(BigInt(1), b);
    }

    Rational dist(const Rational& a, const Rational& b) const { return abs(a - b); }

    bool operator==(const PAdicAbs& o) const { return p_ == o.p_; }
};

} // namespace ultralab

#pragma once

/*
 * Scalar fields used throughout the library.
 *
 *   Rational - arbitrary precision rational (GMP mpq_class), always canonical.
 *              The default field: every structural identity holds bit-exactly.
 *   double   - only where square roots cannot be avoided (orthonormal
 *              normalization, atom recovery) or when the caller hands in
 *              floating-point data. Zero tests then go through ZeroTest.
 */

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "error.hpp"

namespace sobfav {

using Rational = mpq_class;

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_int(long v) { return Rational(v); }
    static Rational abs(const Rational& v) { return ::abs(v); }
    static double to_double(const Rational& v) { return v.get_d(); }
    static int sign(const Rational& v) { return ::sgn(v); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double from_int(long v) { return static_cast<double>(v); }
    static double abs(double v) { return std::fabs(v); }
    static double to_double(double v) { return v; }
    static int sign(double v) { return (v > 0) - (v < 0); }
};

template <typename S>
concept Scalar = requires { ScalarTraits<S>::exact; };

template <Scalar S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

/// Zero test for the floating-point path: |x| <= tol * (1 + scale), where
/// `scale` is the largest magnitude among the inputs that produced x.
/// The exact path ignores the tolerance and compares against zero.
struct ZeroTest {
    double tolerance = 1e-10;

    template <Scalar S>
    bool is_zero(const S& x, double scale) const {
        if constexpr (is_exact_v<S>) {
            return ScalarTraits<S>::sign(x) == 0;
        } else {
            return std::fabs(x) <= tolerance * (1.0 + scale);
        }
    }
};

/// Rational from "p/q", "p", or a plain decimal like "-0.25". Result is canonical.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty rational literal");
    const auto dot = s.find('.');
    Rational r;
    try {
        if (dot != std::string::npos) {
            if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos) {
                throw Error(ErrorKind::InvalidInput, "unsupported rational literal '" + s + "'");
            }
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            const std::size_t frac = s.size() - dot - 1;
            if (digits == "-" || digits == "+" || digits.empty()) {
                throw Error(ErrorKind::InvalidInput, "bad decimal literal '" + s + "'");
            }
            if (digits.front() == '+') digits.erase(0, 1);
            mpz_class num(digits, 10);
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            r = Rational(num, den);
        } else {
            if (s.front() == '+') s.erase(0, 1);
            r = Rational(s, 10);
        }
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidInput, "bad rational literal '" + std::string(text) + "'");
    }
    if (r.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

/// Canonical "p/q" (or "p" when q = 1).
inline std::string format_rational(const Rational& r) { return r.get_str(10); }

template <Scalar S>
S binomial(unsigned n, unsigned k) {
    if (k > n) return S(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    if constexpr (is_exact_v<S>) {
        return Rational(b);
    } else {
        return b.get_d();
    }
}

template <Scalar S>
S factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    if constexpr (is_exact_v<S>) {
        return Rational(f);
    } else {
        return f.get_d();
    }
}

/// n!/(n-k)!, zero when k > n.
template <Scalar S>
S falling_factorial(unsigned n, unsigned k) {
    if (k > n) return S(0);
    S out(1);
    for (unsigned i = 0; i < k; ++i) out *= S(static_cast<long>(n - i));
    return out;
}

template <Scalar S>
double to_double(const S& v) {
    return ScalarTraits<S>::to_double(v);
}

template <Scalar S>
double magnitude(const S& v) {
    return std::fabs(ScalarTraits<S>::to_double(v));
}

}  // namespace sobfav

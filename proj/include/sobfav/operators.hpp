#pragma once

/*
 * The two structural operators.
 *
 *   phi(A, eta) = sum_l (-1)^l C(eta,l) U^{eta-l} A U^{-l}
 *       entry (i,j) = sum_l (-1)^l C(eta,l) A(i+eta-l, j+l)
 *   psi(B, eta) = sum_k (-1)^k C(eta,k) B^k (B^{eta-k})^T   (B lower Hessenberg)
 *
 * phi(., 1) = 0 characterizes Hankel matrices; phi(., 2d+1) = 0 with
 * phi(., 2d) != 0 characterizes Hankel-Sobolev matrices of index d. psi is
 * the Hessenberg-side counterpart: psi(G, eta) = (-1)^eta T phi(M_G, eta) T^T.
 * Both consume eta rows/columns of window.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "scalar.hpp"

namespace sobfav {

template <Scalar S>
struct OperatorResult {
    TruncatedMatrix<S> value;
    std::size_t consumed = 0;
};

template <Scalar S>
OperatorResult<S> phi(const TruncatedMatrix<S>& a, std::size_t eta) {
    if (eta >= a.window()) {
        throw Error(ErrorKind::WindowExhausted,
                    "phi at level " + std::to_string(eta) + " needs window > " + std::to_string(eta) + ", have " +
                        std::to_string(a.window()));
    }
    const std::size_t w = a.window() - eta;
    std::vector<S> coeff(eta + 1);
    for (std::size_t l = 0; l <= eta; ++l) {
        coeff[l] = binomial<S>(static_cast<unsigned>(eta), static_cast<unsigned>(l));
        if (l % 2 == 1) coeff[l] = -coeff[l];
    }
    TruncatedMatrix<S> out(w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            S acc(0);
            for (std::size_t l = 0; l <= eta; ++l) acc += coeff[l] * a(i + eta - l, j + l);
            out(i, j) = acc;
        }
    return {std::move(out), eta};
}

namespace detail {

/// Truncated powers B^0..B^max_power of a lower Hessenberg matrix. Row i of
/// B^k only reaches column i+k, so the entries with i + k < window are exact.
template <Scalar S>
std::vector<TruncatedMatrix<S>> hessenberg_powers(const HessenbergTrunc<S>& g, std::size_t max_power) {
    const std::size_t w = g.window();
    std::vector<TruncatedMatrix<S>> pow;
    pow.reserve(max_power + 1);
    pow.push_back(TruncatedMatrix<S>::identity(w));
    for (std::size_t k = 1; k <= max_power; ++k) {
        const TruncatedMatrix<S>& prev = pow.back();
        TruncatedMatrix<S> next(w);
        for (std::size_t i = 0; i + k < w; ++i) {
            const std::size_t rmax = std::min(i + 1, w - 1);
            for (std::size_t r = 0; r <= rmax; ++r) {
                if (ScalarTraits<S>::sign(g(i, r)) == 0) continue;
                const std::size_t mmax = std::min(r + k - 1, w - 1);
                for (std::size_t m = 0; m <= mmax; ++m) next(i, m) += g(i, r) * prev(r, m);
            }
        }
        pow.push_back(std::move(next));
    }
    return pow;
}

template <Scalar S>
TruncatedMatrix<S> psi_from_powers(const std::vector<TruncatedMatrix<S>>& pow, std::size_t window, std::size_t eta) {
    const std::size_t w = window - eta;
    TruncatedMatrix<S> out(w);
    for (std::size_t k = 0; k <= eta; ++k) {
        S c = binomial<S>(static_cast<unsigned>(eta), static_cast<unsigned>(k));
        if (k % 2 == 1) c = -c;
        const TruncatedMatrix<S>& left = pow[k];
        const TruncatedMatrix<S>& right = pow[eta - k];
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                const std::size_t mmax = std::min(i + k, j + eta - k);
                S acc(0);
                for (std::size_t m = 0; m <= mmax; ++m) acc += left(i, m) * right(j, m);
                out(i, j) += c * acc;
            }
    }
    return out;
}

}  // namespace detail

template <Scalar S>
OperatorResult<S> psi(const HessenbergTrunc<S>& g, std::size_t eta) {
    if (eta >= g.window()) {
        throw Error(ErrorKind::WindowExhausted,
                    "psi at level " + std::to_string(eta) + " needs window > " + std::to_string(eta) + ", have " +
                        std::to_string(g.window()));
    }
    const auto pow = detail::hessenberg_powers(g, eta);
    return {detail::psi_from_powers(pow, g.window(), eta), eta};
}

/// Alternating binomial sum  sum_{l=0}^{nu} (-1)^l C(nu,l) f(l)  for the
/// polynomial f with coefficients a_0..a_n, evaluated at integer points.
template <Scalar S>
S euler_finite_difference(std::span<const S> coeffs, unsigned nu) {
    S total(0);
    for (unsigned l = 0; l <= nu; ++l) {
        S value(0);
        const S x(static_cast<long>(l));
        for (std::size_t c = coeffs.size(); c-- > 0;) value = value * x + coeffs[c];
        S term = binomial<S>(nu, l) * value;
        if (l % 2 == 1) total -= term;
        else total += term;
    }
    return total;
}

}  // namespace sobfav

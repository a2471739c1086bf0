#pragma once

/*
 * Hessenberg matrices, the polynomials they generate, and the way back.
 *
 * Forward:  G --recurrence--> T (coefficient rows of Q_0, Q_1, ...)
 *             --> M_G = T^{-1} T^{-T}  (matrix of formal moments)
 * Backward: M --LDL--> monic orthogonal basis C = L^{-1}, norms D
 *             --> G_m = C U M C^T D^{-1}   (monic, exact, superdiagonal 1)
 *             --> G   = D^{-1/2} C U M C^T D^{-1/2}  (orthonormal, double)
 *
 * Only the orthonormal normalization satisfies psi(G, eta) =
 * (-1)^eta T phi(M_G, eta) T^T against the *given* moment matrix: the monic
 * G_m generates C, whose own formal moments are C^{-1} C^{-T} != M. Psi-based
 * index detection is therefore meant for orthonormal (or generated) G; the
 * exact route to an index is phi on the moment matrix.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "hankel_sobolev.hpp"
#include "matrix.hpp"
#include "operators.hpp"
#include "scalar.hpp"

namespace sobfav {

template <Scalar S>
struct PolySequence {
    TruncatedMatrix<S> t;  // row n: coefficients of Q_n in 1, x, x^2, ...
    S t00{1};
};

template <Scalar S>
struct LdlFactorization {
    TruncatedMatrix<S> l;  // unit lower triangular
    std::vector<S> diag;   // squared norms of the monic orthogonal polynomials
};

template <Scalar S>
struct MonicHessenberg {
    HessenbergTrunc<S> g;  // window = moment window - 1
    std::vector<S> norms;  // ||q_n||^2, one per moment-window row
};

struct OrthonormalHessenberg {
    HessenbergTrunc<double> g;  // window = moment window - 1
    TruncatedMatrix<double> t;  // orthonormal coefficient rows, positive leading coefficients
};

/// Q_0 = t00; g_{n,n+1} Q_{n+1} = x Q_n - sum_{k<=n} g_{n,k} Q_k. Returns g.window() rows.
template <Scalar S>
PolySequence<S> generate_polynomials(const HessenbergTrunc<S>& g, const S& t00) {
    if (ScalarTraits<S>::sign(t00) <= 0) throw Error(ErrorKind::InvalidInput, "t00 must be positive");
    const std::size_t w = g.window();
    if (const std::size_t r = g.first_degenerate_row(); r < w) {
        throw Error(ErrorKind::DegenerateSuperdiagonal, "g(" + std::to_string(r) + "," + std::to_string(r + 1) + ") = 0",
                    r);
    }
    PolySequence<S> out{TruncatedMatrix<S>(w), t00};
    TruncatedMatrix<S>& t = out.t;
    t(0, 0) = t00;
    for (std::size_t n = 0; n + 1 < w; ++n) {
        // x * Q_n
        for (std::size_t c = 0; c <= n; ++c) t(n + 1, c + 1) = t(n, c);
        for (std::size_t k = 0; k <= n; ++k) {
            if (ScalarTraits<S>::sign(g(n, k)) == 0) continue;
            for (std::size_t c = 0; c <= k; ++c) t(n + 1, c) -= g(n, k) * t(k, c);
        }
        const S sup = g(n, n + 1);
        for (std::size_t c = 0; c <= n + 1; ++c) t(n + 1, c) /= sup;
    }
    return out;
}

/// M_G = T^{-1} T^{-T}. Triangular factors make the truncated product exact.
template <Scalar S>
TruncatedMatrix<S> moment_matrix(const HessenbergTrunc<S>& g, const S& t00) {
    const PolySequence<S> seq = generate_polynomials(g, t00);
    const TruncatedMatrix<S> tinv = lower_triangular_inverse(seq.t);
    return mat_mul(tinv, transpose(tinv));
}

namespace detail {

template <Scalar S>
std::size_t degree_span(std::span<const S> p) {
    std::size_t n = p.size();
    while (n > 0 && ScalarTraits<S>::sign(p[n - 1]) == 0) --n;
    return n;  // number of significant coefficients
}

}  // namespace detail

/// <p, q> = a M b^T for coefficient vectors a, b in the monomial basis.
template <Scalar S>
S inner_product(std::span<const S> p, std::span<const S> q, const TruncatedMatrix<S>& m) {
    const std::size_t np = detail::degree_span(p);
    const std::size_t nq = detail::degree_span(q);
    if (np > m.window() || nq > m.window()) {
        throw Error(ErrorKind::DegreeTooLarge, "polynomial degree exceeds moment window " + std::to_string(m.window()));
    }
    S acc(0);
    for (std::size_t i = 0; i < np; ++i) {
        if (ScalarTraits<S>::sign(p[i]) == 0) continue;
        S row(0);
        for (std::size_t j = 0; j < nq; ++j) row += m(i, j) * q[j];
        acc += p[i] * row;
    }
    return acc;
}

/// M = L diag L^T without square roots. Throws NotPositiveDefinite(k) with k
/// the 1-based order of the first leading minor that is not positive.
template <Scalar S>
LdlFactorization<S> ldl(const TruncatedMatrix<S>& m, const ZeroTest& zt = {}) {
    if (!is_symmetric(m, zt)) throw Error(ErrorKind::NotSymmetric, "LDL needs a symmetric matrix");
    const std::size_t w = m.window();
    const double s = m.max_abs();
    LdlFactorization<S> f{TruncatedMatrix<S>::identity(w), std::vector<S>(w)};
    for (std::size_t j = 0; j < w; ++j) {
        S dj = m(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= f.l(j, k) * f.l(j, k) * f.diag[k];
        if (ScalarTraits<S>::sign(dj) <= 0 || zt.is_zero(dj, s)) {
            throw Error(ErrorKind::NotPositiveDefinite,
                        "leading minor of order " + std::to_string(j + 1) + " is not positive", j + 1);
        }
        f.diag[j] = dj;
        for (std::size_t i = j + 1; i < w; ++i) {
            S v = m(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= f.l(i, k) * f.l(j, k) * f.diag[k];
            f.l(i, j) = v / dj;
        }
    }
    return f;
}

namespace detail {

/// Y = C (U M) C^T on the leading k x k block, C = L^{-1}. Needs M rows up to k.
template <Scalar S>
TruncatedMatrix<S> shifted_gram(const TruncatedMatrix<S>& c, const TruncatedMatrix<S>& m, std::size_t k) {
    TruncatedMatrix<S> x(k);  // C (U M)
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t a = 0; a <= i; ++a) {
            if (ScalarTraits<S>::sign(c(i, a)) == 0) continue;
            for (std::size_t b = 0; b < k; ++b) x(i, b) += c(i, a) * m(a + 1, b);
        }
    TruncatedMatrix<S> y(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            S acc(0);
            for (std::size_t b = 0; b <= j; ++b) acc += x(i, b) * c(j, b);
            y(i, j) = acc;
        }
    return y;
}

/// Monic Hessenberg k x k from the first k+1 rows/columns of M, using only
/// the leading k pivots (so M may be singular beyond order k).
template <Scalar S>
MonicHessenberg<S> monic_block(const TruncatedMatrix<S>& m, std::size_t k, const ZeroTest& zt) {
    const LdlFactorization<S> f = ldl(m.leading(k), zt);
    const TruncatedMatrix<S> c = lower_triangular_inverse(f.l);
    TruncatedMatrix<S> y = shifted_gram(c, m, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (j > i + 1) {
                if constexpr (is_exact_v<S>) {
                    if (ScalarTraits<S>::sign(y(i, j)) != 0) {
                        throw Error(ErrorKind::InvalidInput, "monic recurrence left the Hessenberg band");
                    }
                }
                y(i, j) = S(0);
            } else {
                y(i, j) /= f.diag[j];
            }
        }
    return {HessenbergTrunc<S>(std::move(y)), f.diag};
}

}  // namespace detail

/// Multiply-by-x operator in the monic orthogonal basis of M. The returned
/// Hessenberg window is one less than M's (row i reads moment row i+1).
template <Scalar S>
MonicHessenberg<S> monic_hessenberg_from_moments(const TruncatedMatrix<S>& m, const ZeroTest& zt = {}) {
    if (m.window() < 2) throw Error(ErrorKind::WindowExhausted, "monic Hessenberg needs a moment window >= 2");
    const LdlFactorization<S> full = ldl(m, zt);
    MonicHessenberg<S> out = detail::monic_block(m, m.window() - 1, zt);
    out.norms = full.diag;
    return out;
}

/// Orthonormal Hessenberg matrix g_{j,k} = <x Q_j, Q_k> with positive leading
/// coefficients. Exact moments go through the exact LDL and are rounded once
/// per entry; floating moments go through an unpivoted Cholesky.
template <Scalar S>
OrthonormalHessenberg orthonormal_hessenberg_from_moments(const TruncatedMatrix<S>& m, const ZeroTest& zt = {}) {
    const std::size_t w = m.window();
    if (w < 2) throw Error(ErrorKind::WindowExhausted, "orthonormal Hessenberg needs a moment window >= 2");
    const std::size_t k = w - 1;
    TruncatedMatrix<double> g(k);
    TruncatedMatrix<double> t(w);
    if constexpr (is_exact_v<S>) {
        const LdlFactorization<S> f = ldl(m, zt);
        const TruncatedMatrix<S> c = lower_triangular_inverse(f.l);
        const TruncatedMatrix<S> y = detail::shifted_gram(c, m, k);
        std::vector<double> root(w);
        for (std::size_t i = 0; i < w; ++i) root[i] = std::sqrt(to_double(f.diag[i]));
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j <= i; ++j) t(i, j) = to_double(c(i, j)) / root[i];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= std::min(i + 1, k - 1); ++j) g(i, j) = to_double(y(i, j)) / (root[i] * root[j]);
    } else {
        if (!is_symmetric(m, zt)) throw Error(ErrorKind::NotSymmetric, "Cholesky needs a symmetric matrix");
        const double s = m.max_abs();
        TruncatedMatrix<double> chol(w);
        for (std::size_t j = 0; j < w; ++j) {
            double djj = m(j, j);
            for (std::size_t q = 0; q < j; ++q) djj -= chol(j, q) * chol(j, q);
            if (djj <= 0.0 || zt.is_zero(djj, s)) {
                throw Error(ErrorKind::NotPositiveDefinite,
                            "leading minor of order " + std::to_string(j + 1) + " is not positive", j + 1);
            }
            chol(j, j) = std::sqrt(djj);
            for (std::size_t i = j + 1; i < w; ++i) {
                double v = m(i, j);
                for (std::size_t q = 0; q < j; ++q) v -= chol(i, q) * chol(j, q);
                chol(i, j) = v / chol(j, j);
            }
        }
        t = lower_triangular_inverse(chol);
        const TruncatedMatrix<double> y = detail::shifted_gram(t, m, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= std::min(i + 1, k - 1); ++j) g(i, j) = y(i, j);
    }
    return {HessenbergTrunc<double>(std::move(g)), std::move(t)};
}

/// Smallest d <= d_max with psi(G,2d+1) = 0 and psi(G,2d) != 0, window-qualified.
template <Scalar S>
IndexReport detect_psi_index(const HessenbergTrunc<S>& g, std::size_t d_max, const ZeroTest& zt = {}) {
    if (2 * d_max + 1 >= g.window()) {
        throw Error(ErrorKind::WindowExhausted, "detecting up to index " + std::to_string(d_max) + " needs window > " +
                                                    std::to_string(2 * d_max + 1) + ", have " +
                                                    std::to_string(g.window()));
    }
    const double s = g.matrix().max_abs();
    const auto pow = detail::hessenberg_powers(g, 2 * d_max + 1);
    return detail::scan_levels(d_max, g.window(), [&](std::size_t eta) {
        return detail::first_nonzero(detail::psi_from_powers(pow, g.window(), eta), zt, s);
    });
}

}  // namespace sobfav

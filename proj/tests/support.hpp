#pragma once

// Test-only helpers: literals, seeded generators, and independent oracles.
// The oracles deliberately avoid the library's algorithms (no Bareiss, no
// LDL, no index arithmetic for the operators) so they can check them.

#include <sobfav/sobfav.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sobfav::testing {

using Q = Rational;
using QMatrix = TruncatedMatrix<Q>;

inline Q q(const char* text) { return parse_rational(text); }
inline Q q(long v) { return Q(v); }

inline QMatrix qmat(std::initializer_list<std::initializer_list<const char*>> rows) {
    std::vector<std::vector<Q>> out;
    for (const auto& r : rows) {
        std::vector<Q> row;
        for (const char* s : r) row.push_back(q(s));
        out.push_back(std::move(row));
    }
    return QMatrix::from_rows(out);
}

inline std::vector<Q> qvec(std::initializer_list<const char*> values) {
    std::vector<Q> out;
    for (const char* s : values) out.push_back(q(s));
    return out;
}

inline HankelSeq<Q> qhankel(std::initializer_list<const char*> values) { return HankelSeq<Q>{qvec(values)}; }

/// p/q with p uniform in [lo*den, hi*den] and den uniform in [1, max_den].
inline Q random_rational(std::mt19937_64& rng, long lo, long hi, long max_den = 4) {
    std::uniform_int_distribution<long> den_dist(1, max_den);
    const long den = den_dist(rng);
    std::uniform_int_distribution<long> num_dist(lo * den, hi * den);
    Q r(num_dist(rng), den);
    r.canonicalize();
    return r;
}

inline std::vector<Q> random_moments(std::mt19937_64& rng, std::size_t count, long lo = -5, long hi = 5) {
    std::vector<Q> out(count);
    for (auto& v : out) v = random_rational(rng, lo, hi);
    return out;
}

inline QMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, long lo = -5, long hi = 5) {
    QMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            a(i, j) = random_rational(rng, lo, hi);
            a(j, i) = a(i, j);
        }
    return a;
}

inline QMatrix random_matrix(std::mt19937_64& rng, std::size_t n, long lo = -5, long hi = 5) {
    QMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = random_rational(rng, lo, hi);
    return a;
}

/// Random layers H_0..H_d, each with enough moments for an n x n composition,
/// top layer guaranteed nonzero.
inline HankelLayers<Q> random_layers(std::mt19937_64& rng, std::size_t d, std::size_t n) {
    HankelLayers<Q> out;
    for (std::size_t k = 0; k <= d; ++k) {
        out.layers.push_back(HankelSeq<Q>{random_moments(rng, 2 * n - 1 - 2 * k)});
    }
    if (out.layers[d].is_zero()) out.layers[d].moments[0] = 1;
    return out;
}

/// Non-degenerate lower Hessenberg with superdiagonal in [1, 2], other band entries in [-1, 1].
inline HessenbergTrunc<Q> random_hessenberg(std::mt19937_64& rng, std::size_t n) {
    QMatrix g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) g(i, j) = random_rational(rng, -1, 1, 3);
        if (i + 1 < n) {
            g(i, i + 1) = random_rational(rng, 1, 2, 3);
        }
    }
    return HessenbergTrunc<Q>(g);
}

inline TruncatedMatrix<double> to_double(const QMatrix& a) {
    TruncatedMatrix<double> out(a.window());
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = 0; j < a.window(); ++j) out(i, j) = a(i, j).get_d();
    return out;
}

inline double max_abs_diff(const TruncatedMatrix<double>& a, const TruncatedMatrix<double>& b) {
    const std::size_t w = std::min(a.window(), b.window());
    double m = 0;
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
    return m;
}

/// Largest |a-b| / max(1, |b|) over the common window.
inline double max_rel_diff(const TruncatedMatrix<double>& a, const TruncatedMatrix<double>& b) {
    const std::size_t w = std::min(a.window(), b.window());
    double m = 0;
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j)
            m = std::max(m, std::fabs(a(i, j) - b(i, j)) / std::max(1.0, std::fabs(b(i, j))));
    return m;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Determinant of the leading n x n block by permutation expansion (n <= 8).
template <Scalar S>
S det_by_permutations(const TruncatedMatrix<S>& a, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    S total(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        S term(1);
        for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
        if (inversions % 2) total -= term;
        else total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Dense truncation of U^{p} (p >= 0) or (U^T)^{-p} (p < 0), size n.
template <Scalar S>
TruncatedMatrix<S> shift_power(std::size_t n, long p) {
    TruncatedMatrix<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long di = static_cast<long>(i), dj = static_cast<long>(j);
            if (dj - di == p) out(i, j) = S(1);
        }
    return out;
}

/// phi by explicit matrix products U^{eta-l} A (U^T)^l on the full truncation,
/// cut to the exact (window - eta) block afterwards.
template <Scalar S>
TruncatedMatrix<S> phi_by_products(const TruncatedMatrix<S>& a, std::size_t eta) {
    const std::size_t n = a.window();
    TruncatedMatrix<S> acc(n);
    for (std::size_t l = 0; l <= eta; ++l) {
        const auto left = shift_power<S>(n, static_cast<long>(eta - l));
        const auto right = shift_power<S>(n, -static_cast<long>(l));
        auto term = mat_mul(mat_mul(left, a), right);
        S c = binomial<S>(static_cast<unsigned>(eta), static_cast<unsigned>(l));
        if (l % 2) c = -c;
        acc = add(acc, scale(term, c));
    }
    return acc.leading(n - eta);
}

/// Hankel-Sobolev composition by explicit products (U^T)^k D_k H_k D_k U^k.
inline QMatrix compose_by_products(const HankelLayers<Q>& layers, std::size_t n) {
    QMatrix acc(n);
    for (std::size_t k = 0; k < layers.layers.size() && k < n; ++k) {
        QMatrix h(n);
        for (std::size_t i = 0; i + k < n; ++i)
            for (std::size_t j = 0; j + k < n; ++j) h(i, j) = layers.layers[k].moment(i + j);
        QMatrix dk(n);
        for (std::size_t i = 0; i < n; ++i) {
            Q v(1);
            for (std::size_t r = 1; r <= k; ++r) v *= Q(static_cast<long>(i + r));
            dk(i, i) = v;
        }
        auto inner = mat_mul(mat_mul(dk, h), dk);
        auto term = mat_mul(mat_mul(shift_power<Q>(n, -static_cast<long>(k)), inner), shift_power<Q>(n, static_cast<long>(k)));
        acc = add(acc, term);
    }
    return acc;
}

/// Monic orthogonal polynomials by classical Gram-Schmidt on the monomials
/// under <p,q> = p^T M q, and their recurrence matrix x q_i = sum_j g_ij q_j.
/// Needs M of size k+1 to produce the k x k recurrence block.
struct GramSchmidtResult {
    std::vector<std::vector<Q>> monic;  // coefficient rows
    std::vector<Q> norms;               // <q_i, q_i>
    QMatrix recurrence;                 // k x k
};

inline GramSchmidtResult gram_schmidt(const QMatrix& m, std::size_t k) {
    auto ip = [&](const std::vector<Q>& p, const std::vector<Q>& r) {
        Q acc(0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < r.size(); ++j) acc += p[i] * m(i, j) * r[j];
        return acc;
    };
    GramSchmidtResult out;
    for (std::size_t n = 0; n < k; ++n) {
        std::vector<Q> p(n + 1, Q(0));
        p[n] = 1;
        std::vector<Q> mono = p;
        for (std::size_t j = 0; j < n; ++j) {
            const Q c = ip(mono, out.monic[j]) / out.norms[j];
            for (std::size_t t = 0; t < out.monic[j].size(); ++t) p[t] -= c * out.monic[j][t];
        }
        out.norms.push_back(ip(p, p));
        out.monic.push_back(p);
    }
    out.recurrence = QMatrix(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Q> xq(out.monic[i].size() + 1, Q(0));
        for (std::size_t t = 0; t < out.monic[i].size(); ++t) xq[t + 1] = out.monic[i][t];
        for (std::size_t j = 0; j < k; ++j) out.recurrence(i, j) = ip(xq, out.monic[j]) / out.norms[j];
    }
    return out;
}

/// Two atoms matching m_0..m_3 via the monic annihilating quadratic
/// x^2 + c1 x + c0 (solve the 2x2 Hankel system), then a 2x2 Vandermonde.
struct TwoAtoms {
    double x1, x2, w1, w2;
};

inline TwoAtoms two_atoms_from_moments(double m0, double m1, double m2, double m3) {
    // [m0 m1; m1 m2] [c0; c1] = -[m2; m3]
    const double det = m0 * m2 - m1 * m1;
    const double c0 = (-m2 * m2 + m1 * m3) / det;
    const double c1 = (-m0 * m3 + m1 * m2) / det;
    const double disc = std::sqrt(c1 * c1 - 4 * c0);
    const double x1 = (-c1 - disc) / 2, x2 = (-c1 + disc) / 2;
    const double w2 = (m1 - x1 * m0) / (x2 - x1);
    const double w1 = m0 - w2;
    return {x1, x2, w1, w2};
}

}  // namespace sobfav::testing

#pragma once

/*
 * Truncations of infinite matrices.
 *
 * A TruncatedMatrix stores the leading n x n block of an infinite matrix and a
 * validity window w <= n: only the leading w x w entries are guaranteed to
 * agree with the underlying infinite matrix, and nothing downstream reads past
 * it. Operations that consume validity (shifts, the Phi/Psi operators, ...)
 * return results whose window shrinks accordingly and throw WindowExhausted
 * instead of producing entries they cannot vouch for.
 */

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace sobfav {

template <Scalar S>
class TruncatedMatrix {
public:
    TruncatedMatrix() = default;

    explicit TruncatedMatrix(std::size_t n) : TruncatedMatrix(n, n) {}

    TruncatedMatrix(std::size_t n, std::size_t window) : n_(n), window_(window), data_(n * n, S(0)) {
        if (n == 0 || window == 0 || window > n) {
            throw Error(ErrorKind::InvalidInput,
                        "window must satisfy 1 <= window <= n (n=" + std::to_string(n) +
                            ", window=" + std::to_string(window) + ")");
        }
    }

    static TruncatedMatrix identity(std::size_t n) {
        TruncatedMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = S(1);
        return out;
    }

    /// Leading n x n block of the upper (backward) shift, entry (i,j) = [j == i+1].
    static TruncatedMatrix upper_shift(std::size_t n) {
        TruncatedMatrix out(n);
        for (std::size_t i = 0; i + 1 < n; ++i) out(i, i + 1) = S(1);
        return out;
    }

    static TruncatedMatrix from_rows(const std::vector<std::vector<S>>& rows) {
        const std::size_t n = rows.size();
        TruncatedMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) throw Error(ErrorKind::InvalidInput, "matrix rows must be square");
            for (std::size_t j = 0; j < n; ++j) out(i, j) = rows[i][j];
        }
        return out;
    }

    static TruncatedMatrix from_rows(std::initializer_list<std::initializer_list<S>> rows) {
        std::vector<std::vector<S>> copy;
        for (const auto& r : rows) copy.emplace_back(r);
        return from_rows(copy);
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t window() const noexcept { return window_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    /// Copy of the leading w x w block, window w. Requires w <= window().
    TruncatedMatrix leading(std::size_t w) const {
        if (w == 0 || w > window_) {
            throw Error(ErrorKind::WindowExhausted,
                        "cannot take leading " + std::to_string(w) + " block of window " + std::to_string(window_));
        }
        TruncatedMatrix out(w);
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < w; ++j) out(i, j) = (*this)(i, j);
        return out;
    }

    /// Largest entry magnitude inside the window, as a double (zero-test scale).
    double max_abs() const {
        double m = 0.0;
        for (std::size_t i = 0; i < window_; ++i)
            for (std::size_t j = 0; j < window_; ++j) m = std::max(m, magnitude((*this)(i, j)));
        return m;
    }

    /// True when every entry inside the window passes the zero test.
    bool is_zero(const ZeroTest& zt = {}, double scale = 0.0) const {
        for (std::size_t i = 0; i < window_; ++i)
            for (std::size_t j = 0; j < window_; ++j)
                if (!zt.is_zero((*this)(i, j), scale)) return false;
        return true;
    }

    /// Windows and in-window entries agree.
    friend bool operator==(const TruncatedMatrix& a, const TruncatedMatrix& b) {
        if (a.window_ != b.window_) return false;
        for (std::size_t i = 0; i < a.window_; ++i)
            for (std::size_t j = 0; j < a.window_; ++j)
                if (a(i, j) != b(i, j)) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::size_t window_ = 0;
    std::vector<S> data_;
};

/// Moment sequence r_0..r_m realizing the Hankel matrix with (i,j) entry r_{i+j}.
/// An empty moment list denotes the identically zero sequence of unbounded length.
template <Scalar S>
struct HankelSeq {
    std::vector<S> moments;

    static HankelSeq zero() { return {}; }

    bool unbounded_zero() const noexcept { return moments.empty(); }

    bool is_zero(const ZeroTest& zt = {}, double scale = 0.0) const {
        return std::all_of(moments.begin(), moments.end(), [&](const S& v) { return zt.is_zero(v, scale); });
    }

    /// Whether r_0..r_index are available.
    bool has_moment(std::size_t index) const { return unbounded_zero() || index < moments.size(); }

    S moment(std::size_t index) const {
        if (unbounded_zero()) return S(0);
        if (index >= moments.size()) {
            throw Error(ErrorKind::InsufficientMoments,
                        "moment " + std::to_string(index) + " requested, " + std::to_string(moments.size()) +
                            " available");
        }
        return moments[index];
    }

    /// Largest k such that a k x k truncation is available (0 if none).
    std::size_t max_order() const { return (moments.size() + 1) / 2; }

    friend bool operator==(const HankelSeq&, const HankelSeq&) = default;
};

/// Lower Hessenberg truncation: entry (i,j) = 0 whenever j - i > 1 (checked on construction).
template <Scalar S>
class HessenbergTrunc {
public:
    HessenbergTrunc() = default;

    explicit HessenbergTrunc(TruncatedMatrix<S> base) : base_(std::move(base)) {
        for (std::size_t i = 0; i < base_.window(); ++i)
            for (std::size_t j = i + 2; j < base_.window(); ++j)
                if (ScalarTraits<S>::sign(base_(i, j)) != 0) {
                    throw Error(ErrorKind::InvalidInput, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                             ") lies above the first superdiagonal");
                }
    }

    const TruncatedMatrix<S>& matrix() const noexcept { return base_; }
    std::size_t window() const noexcept { return base_.window(); }
    const S& operator()(std::size_t i, std::size_t j) const { return base_(i, j); }

    /// Every superdiagonal entry g_{i,i+1}, i < window-1, is nonzero.
    bool non_degenerate() const { return first_degenerate_row() == base_.window(); }

    /// First row i with g_{i,i+1} == 0, or window() if none.
    std::size_t first_degenerate_row() const {
        for (std::size_t i = 0; i + 1 < base_.window(); ++i)
            if (ScalarTraits<S>::sign(base_(i, i + 1)) == 0) return i;
        return base_.window();
    }

private:
    TruncatedMatrix<S> base_;
};

// ---------------------------------------------------------------------------
// Structured constructors
// ---------------------------------------------------------------------------

/// diag((k+i)!/i!), i = 0..n-1.
template <Scalar S>
TruncatedMatrix<S> d_matrix(unsigned k, std::size_t n) {
    TruncatedMatrix<S> out(n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = falling_factorial<S>(static_cast<unsigned>(k + i), k);
    return out;
}

template <Scalar S>
TruncatedMatrix<S> hankel_truncation(const HankelSeq<S>& h, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidInput, "Hankel truncation of size 0");
    if (!h.has_moment(2 * n - 2)) {
        throw Error(ErrorKind::InsufficientMoments, "a " + std::to_string(n) + "x" + std::to_string(n) +
                                                        " Hankel truncation needs " + std::to_string(2 * n - 1) +
                                                        " moments, got " + std::to_string(h.moments.size()));
    }
    TruncatedMatrix<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = h.moment(i + j);
    return out;
}

// ---------------------------------------------------------------------------
// Shifts
// ---------------------------------------------------------------------------

/// Truncation of U^up * A * U^{-right}: entry (i,j) = A(i+up, j+right).
template <Scalar S>
TruncatedMatrix<S> shift_conjugate(const TruncatedMatrix<S>& a, std::size_t up, std::size_t right) {
    const std::size_t consumed = std::max(up, right);
    if (consumed >= a.window()) {
        throw Error(ErrorKind::WindowExhausted, "shift by " + std::to_string(consumed) + " exhausts window " +
                                                    std::to_string(a.window()));
    }
    const std::size_t w = a.window() - consumed;
    TruncatedMatrix<S> out(w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) out(i, j) = a(i + up, j + right);
    return out;
}

/// Truncation of U^{-k} * A * U^{k}: A bordered by k leading zero rows and columns.
/// Lossless, so the window grows by k.
template <Scalar S>
TruncatedMatrix<S> shift_embed(const TruncatedMatrix<S>& a, std::size_t k) {
    const std::size_t w = a.window() + k;
    TruncatedMatrix<S> out(w);
    for (std::size_t i = k; i < w; ++i)
        for (std::size_t j = k; j < w; ++j) out(i, j) = a(i - k, j - k);
    return out;
}

// ---------------------------------------------------------------------------
// Plumbing
// ---------------------------------------------------------------------------

/// Product of the leading windows. Exact only when the inner sums are finitely
/// supported inside the window (triangular or banded factors); callers own that.
template <Scalar S>
TruncatedMatrix<S> mat_mul(const TruncatedMatrix<S>& a, const TruncatedMatrix<S>& b) {
    const std::size_t w = std::min(a.window(), b.window());
    TruncatedMatrix<S> out(w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t k = 0; k < w; ++k) {
            if (ScalarTraits<S>::sign(a(i, k)) == 0) continue;
            for (std::size_t j = 0; j < w; ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

template <Scalar S>
TruncatedMatrix<S> transpose(const TruncatedMatrix<S>& a) {
    TruncatedMatrix<S> out(a.window());
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = 0; j < a.window(); ++j) out(i, j) = a(j, i);
    return out;
}

template <Scalar S>
TruncatedMatrix<S> add(const TruncatedMatrix<S>& a, const TruncatedMatrix<S>& b) {
    const std::size_t w = std::min(a.window(), b.window());
    TruncatedMatrix<S> out(w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

template <Scalar S>
TruncatedMatrix<S> subtract(const TruncatedMatrix<S>& a, const TruncatedMatrix<S>& b) {
    const std::size_t w = std::min(a.window(), b.window());
    TruncatedMatrix<S> out(w);
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

template <Scalar S>
TruncatedMatrix<S> scale(const TruncatedMatrix<S>& a, const S& c) {
    TruncatedMatrix<S> out(a.window());
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = 0; j < a.window(); ++j) out(i, j) = a(i, j) * c;
    return out;
}

template <Scalar S>
bool is_symmetric(const TruncatedMatrix<S>& a, const ZeroTest& zt = {}) {
    const double s = is_exact_v<S> ? 0.0 : a.max_abs();
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = i + 1; j < a.window(); ++j) {
            S diff = a(i, j) - a(j, i);
            if (!zt.is_zero(diff, s)) return false;
        }
    return true;
}

/// Hankel on the window: h(i, j+1) == h(i+1, j) for all in-window indices.
template <Scalar S>
bool is_hankel(const TruncatedMatrix<S>& a, const ZeroTest& zt = {}) {
    const double s = is_exact_v<S> ? 0.0 : a.max_abs();
    for (std::size_t i = 0; i + 1 < a.window(); ++i)
        for (std::size_t j = 0; j + 1 < a.window(); ++j) {
            S diff = a(i, j + 1) - a(i + 1, j);
            if (!zt.is_zero(diff, s)) return false;
        }
    return true;
}

template <Scalar S>
bool is_lower_triangular(const TruncatedMatrix<S>& a) {
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = i + 1; j < a.window(); ++j)
            if (ScalarTraits<S>::sign(a(i, j)) != 0) return false;
    return true;
}

/// Forward substitution; the result is lower triangular with reciprocal diagonal.
template <Scalar S>
TruncatedMatrix<S> lower_triangular_inverse(const TruncatedMatrix<S>& t) {
    if (!is_lower_triangular(t)) throw Error(ErrorKind::InvalidInput, "matrix is not lower triangular");
    const std::size_t w = t.window();
    for (std::size_t i = 0; i < w; ++i)
        if (ScalarTraits<S>::sign(t(i, i)) == 0) {
            throw Error(ErrorKind::SingularDiagonal, "zero diagonal entry at row " + std::to_string(i), i);
        }
    TruncatedMatrix<S> inv(w);
    for (std::size_t j = 0; j < w; ++j) {
        inv(j, j) = S(1) / t(j, j);
        for (std::size_t i = j + 1; i < w; ++i) {
            S acc(0);
            for (std::size_t k = j; k < i; ++k) acc += t(i, k) * inv(k, j);
            inv(i, j) = -acc / t(i, i);
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Determinants
// ---------------------------------------------------------------------------

namespace detail {

/// Determinant of the leading n x n block, Bareiss with row pivoting (exact)
/// or Gaussian elimination with partial pivoting (floating point).
template <Scalar S>
S determinant(const TruncatedMatrix<S>& a, std::size_t n) {
    std::vector<S> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> S& { return m[i * n + j]; };
    int sign = 1;
    if constexpr (is_exact_v<S>) {
        S prev(1);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            while (piv < n && ScalarTraits<S>::sign(at(piv, k)) == 0) ++piv;
            if (piv == n) return S(0);
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                for (std::size_t j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
                at(i, k) = 0;
            }
            prev = at(k, k);
        }
        return sign > 0 ? at(n - 1, n - 1) : S(-at(n - 1, n - 1));
    } else {
        S det(1);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::fabs(at(i, k)) > std::fabs(at(piv, k))) piv = i;
            if (at(piv, k) == 0.0) return 0.0;
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                sign = -sign;
            }
            det *= at(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const S f = at(i, k) / at(k, k);
                for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
            }
        }
        return sign * det;
    }
}

}  // namespace detail

/// det([A]_1), ..., det([A]_window).
///
/// Exact path: one fraction-free (Bareiss) sweep without pivoting, whose k-th
/// pivot is exactly det([A]_{k+1}). If a leading minor vanishes the sweep
/// cannot continue, and the remaining minors are computed one by one with
/// pivoted Bareiss. Floating path: each block by partially pivoted elimination.
template <Scalar S>
std::vector<S> leading_principal_minors(const TruncatedMatrix<S>& a) {
    const std::size_t w = a.window();
    std::vector<S> minors;
    minors.reserve(w);
    if constexpr (is_exact_v<S>) {
        std::vector<S> m(w * w);
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < w; ++j) m[i * w + j] = a(i, j);
        auto at = [&](std::size_t i, std::size_t j) -> S& { return m[i * w + j]; };
        S prev(1);
        std::size_t k = 0;
        for (; k < w; ++k) {
            minors.push_back(at(k, k));
            if (ScalarTraits<S>::sign(at(k, k)) == 0) break;
            for (std::size_t i = k + 1; i < w; ++i)
                for (std::size_t j = k + 1; j < w; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            prev = at(k, k);
        }
        for (std::size_t n = k + 2; n <= w; ++n) minors.push_back(detail::determinant(a, n));
    } else {
        for (std::size_t n = 1; n <= w; ++n) minors.push_back(detail::determinant(a, n));
    }
    return minors;
}

}  // namespace sobfav

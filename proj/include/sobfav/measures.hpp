#pragma once

/*
 * Measures, Sobolev moment matrices, and the Hamburger classification of a
 * Hankel moment sequence by its leading principal minors:
 *
 *   all examined minors > 0                     -> PositiveDefiniteUpTo(n)
 *   minors 1..k > 0, k+1..n == 0                -> FiniteOrder(k)  (k atoms)
 *   every examined moment == 0                  -> Zero
 *   a negative minor, or 0 followed by nonzero  -> NotMomentMatrix
 *
 * Measures only ever enter through their moments; nothing is integrated.
 */

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "hankel_sobolev.hpp"
#include "hessenberg.hpp"
#include "matrix.hpp"
#include "scalar.hpp"

namespace sobfav {

template <Scalar S>
struct DiscreteMeasure {
    std::vector<S> points;
    std::vector<S> weights;
};

template <Scalar S>
struct MomentSeqMeasure {
    std::vector<S> moments;
};

/// Uniform density mass/(b-a) on [a, b].
template <Scalar S>
struct UniformInterval {
    S a;
    S b;
    S mass;
};

struct ZeroMeasure {};

template <Scalar S>
using MeasureSpec = std::variant<DiscreteMeasure<S>, MomentSeqMeasure<S>, UniformInterval<S>, ZeroMeasure>;

/// mu_0 .. mu_d of a Sobolev inner product. A level may be ZeroMeasure.
template <Scalar S>
struct MeasureVector {
    std::vector<MeasureSpec<S>> levels;
};

template <Scalar S>
void validate(const MeasureSpec<S>& mu) {
    if (const auto* d = std::get_if<DiscreteMeasure<S>>(&mu)) {
        if (d->points.size() != d->weights.size()) {
            throw Error(ErrorKind::InvalidInput, "discrete measure needs one weight per point");
        }
        for (std::size_t i = 0; i < d->points.size(); ++i) {
            if (ScalarTraits<S>::sign(d->weights[i]) <= 0) {
                throw Error(ErrorKind::InvalidInput, "discrete weights must be positive");
            }
            for (std::size_t j = i + 1; j < d->points.size(); ++j)
                if (d->points[i] == d->points[j]) throw Error(ErrorKind::InvalidInput, "discrete points must be distinct");
        }
    } else if (const auto* u = std::get_if<UniformInterval<S>>(&mu)) {
        if (!(u->a < u->b)) throw Error(ErrorKind::InvalidInput, "uniform interval needs a < b");
        if (ScalarTraits<S>::sign(u->mass) <= 0) throw Error(ErrorKind::InvalidInput, "uniform mass must be positive");
    }
}

/// m_0 .. m_{n_max}.
template <Scalar S>
std::vector<S> measure_moments(const MeasureSpec<S>& mu, std::size_t n_max) {
    validate(mu);
    std::vector<S> out(n_max + 1, S(0));
    if (const auto* d = std::get_if<DiscreteMeasure<S>>(&mu)) {
        for (std::size_t i = 0; i < d->points.size(); ++i) {
            S p(d->weights[i]);
            for (std::size_t n = 0; n <= n_max; ++n) {
                out[n] += p;
                p *= d->points[i];
            }
        }
    } else if (const auto* seq = std::get_if<MomentSeqMeasure<S>>(&mu)) {
        if (seq->moments.size() < n_max + 1) {
            throw Error(ErrorKind::InsufficientMoments, "moment sequence has " + std::to_string(seq->moments.size()) +
                                                            " entries, " + std::to_string(n_max + 1) + " needed");
        }
        std::copy_n(seq->moments.begin(), n_max + 1, out.begin());
    } else if (const auto* u = std::get_if<UniformInterval<S>>(&mu)) {
        // mass * (b^{n+1} - a^{n+1}) / ((n+1)(b-a))
        const S density = u->mass / (u->b - u->a);
        S an(u->a);
        S bn(u->b);
        for (std::size_t n = 0; n <= n_max; ++n) {
            out[n] = density * (bn - an) / S(static_cast<long>(n + 1));
            an *= u->a;
            bn *= u->b;
        }
    }
    return out;
}

/// s_{i,j} = <x^i, x^j> = sum_k <(x^i)^(k), (x^j)^(k)>_{mu_k}.
template <Scalar S>
TruncatedMatrix<S> sobolev_moment_matrix(const MeasureVector<S>& mus, std::size_t n) {
    if (mus.levels.empty()) throw Error(ErrorKind::InvalidInput, "measure vector is empty");
    if (n == 0) throw Error(ErrorKind::InvalidInput, "moment matrix of size 0");
    std::vector<std::vector<S>> moments;
    for (std::size_t k = 0; k < mus.levels.size() && k < n; ++k)
        moments.push_back(measure_moments(mus.levels[k], 2 * (n - 1) - 2 * k));
    TruncatedMatrix<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            S acc(0);
            for (std::size_t k = 0; k < moments.size() && k <= std::min(i, j); ++k) {
                // d^k/dx^k x^i = i!/(i-k)! x^{i-k}
                S ci(1);
                S cj(1);
                for (std::size_t r = 0; r < k; ++r) {
                    ci *= S(static_cast<long>(i - r));
                    cj *= S(static_cast<long>(j - r));
                }
                acc += ci * cj * moments[k][i + j - 2 * k];
            }
            out(i, j) = acc;
            out(j, i) = acc;
        }
    return out;
}

/// Per-level moment sequences long enough for an n x n Sobolev matrix.
template <Scalar S>
HankelLayers<S> measure_layers(const MeasureVector<S>& mus, std::size_t n) {
    HankelLayers<S> out;
    for (std::size_t k = 0; k < mus.levels.size(); ++k) {
        const std::size_t need = k < n ? 2 * (n - 1) - 2 * k : 0;
        out.layers.push_back(HankelSeq<S>{measure_moments(mus.levels[k], need)});
    }
    return out;
}

enum class HankelVerdict { PositiveDefiniteUpTo, FiniteOrder, Zero, NotMomentMatrix };

inline std::string_view verdict_name(HankelVerdict v) {
    switch (v) {
        case HankelVerdict::PositiveDefiniteUpTo: return "PositiveDefiniteUpTo";
        case HankelVerdict::FiniteOrder: return "FiniteOrder";
        case HankelVerdict::Zero: return "Zero";
        case HankelVerdict::NotMomentMatrix: return "NotMomentMatrix";
    }
    return "Unknown";
}

struct HankelClass {
    HankelVerdict verdict = HankelVerdict::Zero;
    /// PositiveDefiniteUpTo: n. FiniteOrder: k. NotMomentMatrix: first violating
    /// minor (1-based). Zero: 0.
    std::size_t order = 0;
    /// Number of leading minors examined; every verdict is qualified by it.
    std::size_t window = 0;

    friend bool operator==(const HankelClass&, const HankelClass&) = default;
};

/// Classify han{h} from its leading n minors. In floating point a minor is
/// zero when it is negligible relative to the last nonzero one:
/// |det_k| <= tol (1 + scale)^{k-j} |det_j|.
template <Scalar S>
HankelClass classify_hankel(const HankelSeq<S>& h, std::size_t n, const ZeroTest& zt = {}) {
    const TruncatedMatrix<S> a = hankel_truncation(h, n);
    HankelClass out;
    out.window = n;
    const double s = a.max_abs();
    if (h.unbounded_zero() || std::all_of(h.moments.begin(), h.moments.begin() + (2 * n - 1),
                                          [&](const S& v) { return zt.is_zero(v, s); })) {
        return out;  // Zero
    }
    const std::vector<S> minors = leading_principal_minors(a);
    std::vector<int> sign(n);
    std::size_t last_nonzero = 0;
    double last_mag = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const S& det = minors[k - 1];
        bool zero;
        if constexpr (is_exact_v<S>) {
            zero = ScalarTraits<S>::sign(det) == 0;
        } else {
            const double bound =
                zt.tolerance * std::pow(1.0 + s, static_cast<double>(k - last_nonzero)) * last_mag;
            zero = std::fabs(det) <= bound;
        }
        sign[k - 1] = zero ? 0 : ScalarTraits<S>::sign(det);
        if (!zero) {
            last_nonzero = k;
            last_mag = magnitude(det);
        }
    }
    // Positive prefix, then the tail must be all zero.
    std::size_t k = 0;
    while (k < n && sign[k] > 0) ++k;
    if (k == n) {
        out.verdict = HankelVerdict::PositiveDefiniteUpTo;
        out.order = n;
        return out;
    }
    if (sign[k] < 0) {
        out.verdict = HankelVerdict::NotMomentMatrix;
        out.order = k + 1;
        return out;
    }
    for (std::size_t j = k + 1; j < n; ++j)
        if (sign[j] != 0) {
            out.verdict = HankelVerdict::NotMomentMatrix;
            out.order = k + 1;
            return out;
        }
    if (k == 0) {
        // m_0 == 0 but some moment is not: no positive measure has that.
        out.verdict = HankelVerdict::NotMomentMatrix;
        out.order = 1;
        return out;
    }
    out.verdict = HankelVerdict::FiniteOrder;
    out.order = k;
    return out;
}

/// k atoms and positive weights reproducing m_0..m_{2k-1}: Gauss quadrature
/// from the monic recurrence of the exact LDL (Jacobi matrix with
/// off-diagonal sqrt(D_{i+1}/D_i)), eigenvalues in double, weights
/// m_0 * (first eigenvector component)^2. Points come back sorted.
template <Scalar S>
DiscreteMeasure<double> recover_discrete_measure(const HankelSeq<S>& h, std::size_t k, const ZeroTest& zt = {}) {
    if (k == 0) throw Error(ErrorKind::OrderMismatch, "order must be at least 1");
    if (h.moments.size() < 2 * k) {
        throw Error(ErrorKind::OrderMismatch, std::to_string(k) + " atoms need " + std::to_string(2 * k) +
                                                  " moments, got " + std::to_string(h.moments.size()));
    }
    // Leading k minors must be positive (k+1 x k block of moments is all that is read).
    HankelSeq<S> head{std::vector<S>(h.moments.begin(), h.moments.begin() + (2 * k - 1))};
    const HankelClass cls = classify_hankel(head, k, zt);
    if (cls.verdict == HankelVerdict::NotMomentMatrix) {
        throw Error(ErrorKind::NotMomentMatrix, "minor " + std::to_string(cls.order) + " violates positivity",
                    cls.order);
    }
    if (cls.verdict != HankelVerdict::PositiveDefiniteUpTo) {
        throw Error(ErrorKind::OrderMismatch,
                    "moments support only " + std::to_string(cls.order) + " atoms, " + std::to_string(k) + " requested");
    }
    // (k+1) x (k+1) Hankel, reading only entries with i + j <= 2k - 1.
    TruncatedMatrix<S> m(k + 1);
    for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j)
            if (i + j <= 2 * k - 1) m(i, j) = h.moments[i + j];
    const MonicHessenberg<S> mono = detail::monic_block(m, k, zt);

    Eigen::VectorXd diag(static_cast<Eigen::Index>(k));
    Eigen::VectorXd off(static_cast<Eigen::Index>(k > 1 ? k - 1 : 0));
    for (std::size_t i = 0; i < k; ++i) diag(static_cast<Eigen::Index>(i)) = to_double(mono.g(i, i));
    for (std::size_t i = 0; i + 1 < k; ++i) off(static_cast<Eigen::Index>(i)) = std::sqrt(to_double(mono.g(i + 1, i)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotMomentMatrix, "Jacobi eigenproblem did not converge");

    const double m0 = to_double(h.moments[0]);
    DiscreteMeasure<double> out;
    for (std::size_t i = 0; i < k; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const double v0 = solver.eigenvectors()(0, idx);
        out.points.push_back(solver.eigenvalues()(idx));
        out.weights.push_back(m0 * v0 * v0);
    }
    return out;
}

}  // namespace sobfav

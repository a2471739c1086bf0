#pragma once

/*
 * Hankel-Sobolev structure: M = sum_k U^{-k} D_k H_k D_k U^k with H_k Hankel
 * and D_k = diag((k+i)!/i!).
 *
 *   compose        layers -> matrix, entry (i,j) = sum_k i^(k) j^(k) h_{k,i+j-2k}
 *                  (x^(k) the falling factorial x!/(x-k)!)
 *   detect_index   smallest d with phi(M,2d+1) = 0 and phi(M,2d) != 0
 *   decompose      peel layers top-down: H_l = (-1)^l/(2l)! phi(M_l, 2l),
 *                  M_{l-1} = M_l - U^{-l} D_l H_l D_l U^l
 *
 * Window bookkeeping for decompose, starting from window W at level d:
 * phi(M_l, 2l) has window w_l - 2l (so H_l gets 2(w_l - 2l) - 1 moments),
 * and the reconstructed R_l is exact on w_l - l, which becomes w_{l-1}.
 * The survivor after level 0 is W - d(d+1)/2.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "operators.hpp"
#include "scalar.hpp"

namespace sobfav {

template <Scalar S>
struct HankelLayers {
    std::vector<HankelSeq<S>> layers;  // H_0 .. H_d
    /// Square window on which these layers are known to reproduce their source
    /// matrix (set by decompose; 0 when the layers were built by hand).
    std::size_t window = 0;

    std::size_t index() const { return layers.empty() ? 0 : layers.size() - 1; }

    /// Some layer below the top is identically zero.
    bool lacunary(const ZeroTest& zt = {}) const {
        for (std::size_t k = 0; k + 1 < layers.size(); ++k)
            if (layers[k].is_zero(zt)) return true;
        return false;
    }

    friend bool operator==(const HankelLayers&, const HankelLayers&) = default;
};

struct IndexReport {
    /// Index(d) when set; InfiniteWithinWindow otherwise.
    std::optional<std::size_t> index;
    std::size_t window_used = 0;
    /// Location of a nonzero entry of phi(M, 2d) (or psi(G, 2d)) when index is set.
    std::optional<std::pair<std::size_t, std::size_t>> witness;

    bool infinite_within_window() const { return !index.has_value(); }
};

template <Scalar S>
TruncatedMatrix<S> compose(const HankelLayers<S>& layers, std::size_t n) {
    if (layers.layers.empty()) throw Error(ErrorKind::InvalidInput, "compose needs at least one layer");
    if (n == 0) throw Error(ErrorKind::InvalidInput, "compose of size 0");
    const std::size_t d = layers.index();
    for (std::size_t k = 0; k <= d && k < n; ++k) {
        const std::size_t need = 2 * (n - 1) - 2 * k;
        if (!layers.layers[k].has_moment(need)) {
            throw Error(ErrorKind::InsufficientMoments, "layer " + std::to_string(k) + " needs moments up to index " +
                                                            std::to_string(need) + " for size " + std::to_string(n));
        }
    }
    TruncatedMatrix<S> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            S acc(0);
            for (std::size_t k = 0; k <= std::min({i, j, d}); ++k) {
                if (layers.layers[k].unbounded_zero()) continue;
                acc += falling_factorial<S>(static_cast<unsigned>(i), static_cast<unsigned>(k)) *
                       falling_factorial<S>(static_cast<unsigned>(j), static_cast<unsigned>(k)) *
                       layers.layers[k].moment(i + j - 2 * k);
            }
            out(i, j) = acc;
            out(j, i) = acc;
        }
    return out;
}

namespace detail {

template <Scalar S>
std::optional<std::pair<std::size_t, std::size_t>> first_nonzero(const TruncatedMatrix<S>& a, const ZeroTest& zt,
                                                                  double scale) {
    for (std::size_t i = 0; i < a.window(); ++i)
        for (std::size_t j = 0; j < a.window(); ++j)
            if (!zt.is_zero(a(i, j), scale)) return std::pair{i, j};
    return std::nullopt;
}

/// `nonzero_witness(eta)` returns a nonzero entry of the operator at level eta,
/// or nothing when that level vanishes. Finds the smallest d with level 2d+1
/// zero and level 2d nonzero.
///
/// Odd levels of a symmetric input are antisymmetric, so a 1 x 1 odd level is
/// zero whatever the input; such a level certifies nothing and ends the scan.
template <typename LevelFn>
IndexReport scan_levels(std::size_t d_max, std::size_t window, LevelFn&& nonzero_witness) {
    IndexReport report;
    report.window_used = window;
    for (std::size_t d = 0; d <= d_max; ++d) {
        if (window < 2 * d + 3) break;
        auto odd = nonzero_witness(2 * d + 1);
        if (odd.has_value()) continue;  // nonzero at 2d+1
        auto even = nonzero_witness(2 * d);
        if (even.has_value()) {
            report.index = d;
            report.witness = even;
        }
        // The first vanishing odd level settles it; higher odd levels vanish too.
        break;
    }
    return report;
}

}  // namespace detail

/// Window-qualified index detection. A zero matrix has no index and is
/// reported as InfiniteWithinWindow.
template <Scalar S>
IndexReport detect_index(const TruncatedMatrix<S>& m, std::size_t d_max, const ZeroTest& zt = {}) {
    if (2 * d_max + 1 >= m.window()) {
        throw Error(ErrorKind::WindowExhausted, "detecting up to index " + std::to_string(d_max) + " needs window > " +
                                                    std::to_string(2 * d_max + 1) + ", have " +
                                                    std::to_string(m.window()));
    }
    if (!is_symmetric(m, zt)) throw Error(ErrorKind::NotSymmetric, "moment matrix is not symmetric on its window");
    const double s = m.max_abs();

    // phi levels 0..2*d_max+1 via phi(A,eta+1) = U phi(A,eta) - phi(A,eta) U^{-1}.
    std::vector<TruncatedMatrix<S>> levels;
    levels.push_back(m.leading(m.window()));
    for (std::size_t eta = 1; eta <= 2 * d_max + 1; ++eta) {
        const auto& prev = levels.back();
        levels.push_back(subtract(shift_conjugate(prev, 1, 0), shift_conjugate(prev, 0, 1)));
    }
    return detail::scan_levels(d_max, m.window(),
                               [&](std::size_t eta) { return detail::first_nonzero(levels[eta], zt, s); });
}

/// One level of the top-down peeling, kept for inspection and testing.
template <Scalar S>
struct DecompositionStep {
    std::size_t level = 0;
    TruncatedMatrix<S> residual;       // M_level on its window
    TruncatedMatrix<S> annihilated;    // phi(M_level, 2*level + 1), zero on its window
    TruncatedMatrix<S> reconstructed;  // U^{-level} D H D U^{level}, window w - level
};

template <Scalar S>
struct Decomposition {
    HankelLayers<S> layers;
    std::vector<DecompositionStep<S>> steps;  // level d first
};

namespace detail {

/// Moments of a Hankel-patterned matrix from its first row and last column,
/// after checking every anti-diagonal is constant.
template <Scalar S>
HankelSeq<S> extract_hankel(const TruncatedMatrix<S>& a, const ZeroTest& zt, double scale, std::size_t level) {
    const std::size_t w = a.window();
    HankelSeq<S> h;
    h.moments.reserve(2 * w - 1);
    for (std::size_t j = 0; j < w; ++j) h.moments.push_back(a(0, j));
    for (std::size_t i = 1; i < w; ++i) h.moments.push_back(a(i, w - 1));
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            S diff = a(i, j) - h.moments[i + j];
            if (!zt.is_zero(diff, scale)) {
                throw Error(ErrorKind::IndexMismatch, "level " + std::to_string(level) +
                                                          " operator value is not Hankel at (" + std::to_string(i) +
                                                          "," + std::to_string(j) + ")");
            }
        }
    return h;
}

}  // namespace detail

template <Scalar S>
Decomposition<S> decompose_traced(const TruncatedMatrix<S>& m, std::size_t d, const ZeroTest& zt = {}) {
    if (m.window() < 2 * d + 2) {
        throw Error(ErrorKind::WindowExhausted, "decomposing index " + std::to_string(d) + " needs window >= " +
                                                    std::to_string(2 * d + 2) + ", have " +
                                                    std::to_string(m.window()));
    }
    if (!is_symmetric(m, zt)) throw Error(ErrorKind::NotSymmetric, "moment matrix is not symmetric on its window");
    const double s = m.max_abs();

    Decomposition<S> out;
    out.layers.layers.resize(d + 1);
    TruncatedMatrix<S> current = m.leading(m.window());
    for (std::size_t step = 0; step <= d; ++step) {
        const std::size_t level = d - step;
        if (current.window() <= 2 * level + 1) {
            throw Error(ErrorKind::WindowExhausted,
                        "window " + std::to_string(current.window()) + " exhausted at level " + std::to_string(level));
        }
        DecompositionStep<S> rec;
        rec.level = level;
        rec.residual = current;
        rec.annihilated = phi(current, 2 * level + 1).value;
        if (auto where = detail::first_nonzero(rec.annihilated, zt, s)) {
            throw Error(ErrorKind::IndexMismatch, "phi(M_" + std::to_string(level) + ", " +
                                                      std::to_string(2 * level + 1) + ") is nonzero at (" +
                                                      std::to_string(where->first) + "," +
                                                      std::to_string(where->second) + ")");
        }
        S c = S(1) / factorial<S>(static_cast<unsigned>(2 * level));
        if (level % 2 == 1) c = -c;
        const TruncatedMatrix<S> top = scale(phi(current, 2 * level).value, c);
        HankelSeq<S> h = detail::extract_hankel(top, zt, s, level);
        if (step == 0 && h.is_zero(zt, s)) {
            throw Error(ErrorKind::IndexMismatch,
                        "top layer " + std::to_string(level) + " vanishes; the index is smaller than requested");
        }
        const std::size_t tw = top.window();
        const TruncatedMatrix<S> dk = d_matrix<S>(static_cast<unsigned>(level), tw);
        rec.reconstructed = shift_embed(mat_mul(mat_mul(dk, top), dk), level);
        out.layers.layers[level] = std::move(h);
        current = subtract(current.leading(rec.reconstructed.window()), rec.reconstructed);
        out.steps.push_back(std::move(rec));
    }
    out.layers.window = current.window();
    return out;
}

/// Layers H_0..H_d of a Hankel-Sobolev matrix of index d (d as found by
/// detect_index). The layers' `window` is the surviving square window.
template <Scalar S>
HankelLayers<S> decompose(const TruncatedMatrix<S>& m, std::size_t d, const ZeroTest& zt = {}) {
    return decompose_traced(m, d, zt).layers;
}

}  // namespace sobfav

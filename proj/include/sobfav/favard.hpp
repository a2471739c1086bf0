#pragma once

/*
 * Favard-type verdicts on finite truncations.
 *
 * Pipeline: detect_index -> decompose -> classify every layer -> match the
 * case table below, first match wins:
 *
 *   Classical           d = 0, H_0 positive definite
 *   Continuous          H_0 and H_d positive definite, layers between
 *                       positive definite or zero
 *   Discrete            d >= 1, H_0 positive definite, H_d finite order,
 *                       layers between finite order or zero
 *   DiscreteContinuous  d >= 1, H_d positive definite, H_0..H_{d-1} finite order
 *   MixedOther          every layer a valid moment sequence, no pattern above
 *   NoRepresentation... infinite index within the window, or some layer is
 *                       not a moment sequence
 *
 * All verdicts are statements about the examined window only.
 */

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hankel_sobolev.hpp"
#include "hessenberg.hpp"
#include "matrix.hpp"
#include "measures.hpp"
#include "scalar.hpp"

namespace sobfav {

enum class FavardCase { Classical, Continuous, Discrete, DiscreteContinuous, MixedOther, NoRepresentationWithinWindow };

inline std::string_view case_name(FavardCase c) {
    switch (c) {
        case FavardCase::Classical: return "Classical";
        case FavardCase::Continuous: return "Continuous";
        case FavardCase::Discrete: return "Discrete";
        case FavardCase::DiscreteContinuous: return "DiscreteContinuous";
        case FavardCase::MixedOther: return "MixedOther";
        case FavardCase::NoRepresentationWithinWindow: return "NoRepresentationWithinWindow";
    }
    return "Unknown";
}

/// Theorem the matched case corresponds to, for reports.
inline std::string_view case_theorem(FavardCase c) {
    switch (c) {
        case FavardCase::Classical: return "Favard theorem (symmetric tridiagonal)";
        case FavardCase::Continuous: return "Favard type theorem, continuous case";
        case FavardCase::Discrete: return "Favard type theorem, discrete case";
        case FavardCase::DiscreteContinuous: return "Favard type theorem, discrete-continuous case";
        case FavardCase::MixedOther: return "Hankel-Sobolev moment problem (no named case)";
        case FavardCase::NoRepresentationWithinWindow: return "none";
    }
    return "none";
}

template <Scalar S>
struct FavardVerdict {
    IndexReport index;
    std::vector<HankelClass> level_classes;  // H_0 .. H_d
    HankelLayers<S> layers;
    FavardCase verdict_case = FavardCase::NoRepresentationWithinWindow;
    std::size_t window = 0;
};

namespace detail {

inline FavardCase match_case(const std::vector<HankelClass>& cls) {
    using V = HankelVerdict;
    const std::size_t d = cls.size() - 1;
    auto is = [&](std::size_t k, V v) { return cls[k].verdict == v; };
    for (const auto& c : cls)
        if (c.verdict == V::NotMomentMatrix) return FavardCase::NoRepresentationWithinWindow;

    if (d == 0 && is(0, V::PositiveDefiniteUpTo)) return FavardCase::Classical;

    auto middle_all = [&](std::size_t lo, std::size_t hi, V v, bool zero_ok) {
        for (std::size_t k = lo; k < hi; ++k)
            if (!(is(k, v) || (zero_ok && is(k, V::Zero)))) return false;
        return true;
    };
    if (is(0, V::PositiveDefiniteUpTo) && is(d, V::PositiveDefiniteUpTo) &&
        middle_all(1, d, V::PositiveDefiniteUpTo, true))
        return FavardCase::Continuous;
    if (d >= 1 && is(0, V::PositiveDefiniteUpTo) && is(d, V::FiniteOrder) && middle_all(1, d, V::FiniteOrder, true))
        return FavardCase::Discrete;
    if (d >= 1 && is(d, V::PositiveDefiniteUpTo) && middle_all(0, d, V::FiniteOrder, false))
        return FavardCase::DiscreteContinuous;
    return FavardCase::MixedOther;
}

}  // namespace detail

template <Scalar S>
FavardVerdict<S> favard_verdict_from_moment_matrix(const TruncatedMatrix<S>& m, std::size_t d_max,
                                                   const ZeroTest& zt = {}) {
    if (m.window() < 2 * d_max + 3) {
        throw Error(ErrorKind::WindowExhausted, "a verdict up to index " + std::to_string(d_max) + " needs window >= " +
                                                    std::to_string(2 * d_max + 3) + ", have " +
                                                    std::to_string(m.window()));
    }
    FavardVerdict<S> out;
    out.window = m.window();
    out.index = detect_index(m, d_max, zt);
    if (out.index.infinite_within_window()) return out;

    out.layers = decompose(m, *out.index.index, zt);
    for (const auto& layer : out.layers.layers) {
        out.level_classes.push_back(classify_hankel(layer, layer.max_order(), zt));
    }
    out.verdict_case = detail::match_case(out.level_classes);
    return out;
}

/// M_G = T^{-1} T^{-T} from the generated polynomials, then as above.
template <Scalar S>
FavardVerdict<S> favard_verdict_from_hessenberg(const HessenbergTrunc<S>& g, std::size_t d_max, const S& t00 = S(1),
                                                const ZeroTest& zt = {}) {
    return favard_verdict_from_moment_matrix(moment_matrix(g, t00), d_max, zt);
}

}  // namespace sobfav

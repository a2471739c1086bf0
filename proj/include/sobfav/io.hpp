#pragma once

/*
 * JSON encoding of every domain type (nlohmann/json).
 *
 * Exact files carry rationals as strings "p/q" (plain integers are accepted on
 * input). Floating-point payloads carry JSON numbers and the tag "float": true,
 * and a reader for one kind rejects the other.
 *
 *   matrix      {"n": 3, "window": 3, "entries": [["1","1/2"], ...]}
 *   hankel      {"hankel": ["1","1/2","1/3"]}               (optional "n")
 *   hessenberg  {"hessenberg": {"n": 4, "window": 4, "band": [[g00,g01], [g10,g11,g12], ...]}}
 *   layers      {"index": 1, "window": 9, "layers": [{"hankel": [...]}, "zero"]}
 *   measures    {"levels": [{"uniform": {"a","b","mass"}}, {"discrete": {"points","weights"}},
 *                           {"moments": [...]}, "zero"]}
 *   polys       {"t00": "1", "rows": [[...], ...]}           (row n has n+1 coefficients)
 */

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "favard.hpp"
#include "hankel_sobolev.hpp"
#include "hessenberg.hpp"
#include "matrix.hpp"
#include "measures.hpp"
#include "scalar.hpp"

namespace sobfav::io {

using json = nlohmann::json;

[[noreturn]] inline void invalid(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

inline bool is_float_tagged(const json& j) {
    return j.is_object() && j.contains("float") && j["float"].is_boolean() && j["float"].get<bool>();
}

template <Scalar S>
void check_tag(const json& j, const char* what) {
    if (is_float_tagged(j) != !is_exact_v<S>) {
        invalid(std::string(what) + (is_exact_v<S> ? " is tagged float where exact data was expected"
                                                   : " is exact where a float-tagged payload was expected"));
    }
}

template <Scalar S>
void tag(json& j) {
    if constexpr (!is_exact_v<S>) j["float"] = true;
}

template <Scalar S>
json scalar_to_json(const S& v) {
    if constexpr (is_exact_v<S>) {
        return format_rational(v);
    } else {
        if (!std::isfinite(v)) invalid("non-finite value cannot be serialized");
        return v;
    }
}

template <Scalar S>
S scalar_from_json(const json& j) {
    if constexpr (is_exact_v<S>) {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        invalid("exact value must be a string \"p/q\" or an integer, got " + j.dump());
    } else {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
        invalid("expected a number, got " + j.dump());
    }
}

template <Scalar S>
json vector_to_json(const std::vector<S>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(scalar_to_json(x));
    return out;
}

template <Scalar S>
std::vector<S> vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) invalid(std::string(what) + " must be an array");
    std::vector<S> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(scalar_from_json<S>(x));
    return out;
}

inline std::size_t size_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) invalid(std::string("field \"") + key + "\" must be a nonnegative integer");
    return j[key].get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

template <Scalar S>
json to_json(const TruncatedMatrix<S>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    json out{{"n", m.size()}, {"window", m.window()}, {"entries", std::move(rows)}};
    tag<S>(out);
    return out;
}

template <Scalar S>
json to_json(const HankelSeq<S>& h) {
    json out{{"hankel", vector_to_json(h.moments)}};
    tag<S>(out);
    return out;
}

template <Scalar S>
HankelSeq<S> hankel_from_json(const json& j) {
    check_tag<S>(j, "hankel sequence");
    if (!j.is_object() || !j.contains("hankel")) invalid("expected {\"hankel\": [...]}");
    return HankelSeq<S>{vector_from_json<S>(j["hankel"], "hankel")};
}

template <Scalar S>
json to_json(const HessenbergTrunc<S>& g) {
    const std::size_t n = g.matrix().size();
    json band = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c <= std::min(i + 1, n - 1); ++c) row.push_back(scalar_to_json(g.matrix()(i, c)));
        band.push_back(std::move(row));
    }
    json out{{"hessenberg", {{"n", n}, {"window", g.window()}, {"band", std::move(band)}}}};
    tag<S>(out);
    return out;
}

template <Scalar S>
TruncatedMatrix<S> entries_from_json(const json& j) {
    const std::size_t n = size_field(j, "n");
    const std::size_t w = j.contains("window") ? size_field(j, "window") : n;
    if (n == 0 || w == 0 || w > n) invalid("matrix needs 1 <= window <= n");
    const json& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != n) invalid("\"entries\" must hold n rows");
    TruncatedMatrix<S> m(n, w);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) invalid("row " + std::to_string(i) + " must hold n entries");
        for (std::size_t c = 0; c < n; ++c) m(i, c) = scalar_from_json<S>(rows[i][c]);
    }
    return m;
}

template <Scalar S>
TruncatedMatrix<S> band_from_json(const json& j) {
    const std::size_t n = size_field(j, "n");
    const std::size_t w = j.contains("window") ? size_field(j, "window") : n;
    if (n == 0 || w == 0 || w > n) invalid("hessenberg needs 1 <= window <= n");
    const json& band = j.at("band");
    if (!band.is_array() || band.size() != n) invalid("\"band\" must hold n rows");
    TruncatedMatrix<S> m(n, w);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = std::min(i + 1, n - 1) + 1;
        if (!band[i].is_array() || band[i].size() != len) {
            invalid("band row " + std::to_string(i) + " must hold " + std::to_string(len) + " entries");
        }
        for (std::size_t c = 0; c < len; ++c) m(i, c) = scalar_from_json<S>(band[i][c]);
    }
    return m;
}

/// Any of the matrix encodings; a Hankel file needs its size from "n" or `n`.
template <Scalar S>
TruncatedMatrix<S> matrix_from_json(const json& j, std::optional<std::size_t> n = std::nullopt) {
    if (!j.is_object()) invalid("matrix file must be a JSON object");
    check_tag<S>(j, "matrix");
    if (j.contains("entries")) return entries_from_json<S>(j);
    if (j.contains("hessenberg")) return band_from_json<S>(j["hessenberg"]);
    if (j.contains("hankel")) {
        const HankelSeq<S> h = hankel_from_json<S>(j);
        std::size_t size = n ? *n : (j.contains("n") ? size_field(j, "n") : h.max_order());
        if (size == 0) invalid("hankel sequence is empty");
        return hankel_truncation(h, size);
    }
    invalid("unrecognized matrix file: expected \"entries\", \"hankel\" or \"hessenberg\"");
}

template <Scalar S>
HessenbergTrunc<S> hessenberg_from_json(const json& j) {
    return HessenbergTrunc<S>(matrix_from_json<S>(j));
}

// ---------------------------------------------------------------------------
// Layers, measures, polynomials
// ---------------------------------------------------------------------------

template <Scalar S>
json to_json(const HankelLayers<S>& l) {
    json layers = json::array();
    for (const auto& h : l.layers) {
        if (h.unbounded_zero()) layers.push_back("zero");
        else layers.push_back(json{{"hankel", vector_to_json(h.moments)}});
    }
    json out{{"index", l.index()}, {"layers", std::move(layers)}};
    if (l.window > 0) out["window"] = l.window;
    tag<S>(out);
    return out;
}

template <Scalar S>
HankelLayers<S> layers_from_json(const json& j) {
    check_tag<S>(j, "layers");
    if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
        invalid("expected {\"index\": d, \"layers\": [...]} with at least one layer");
    }
    HankelLayers<S> out;
    for (const auto& h : j["layers"]) {
        if (h == "zero") out.layers.push_back(HankelSeq<S>::zero());
        else if (h.is_object() && h.contains("hankel")) out.layers.push_back({vector_from_json<S>(h["hankel"], "hankel")});
        else invalid("layer must be {\"hankel\": [...]} or \"zero\"");
    }
    if (j.contains("index") && size_field(j, "index") != out.index()) {
        invalid("\"index\" disagrees with the number of layers");
    }
    if (j.contains("window")) out.window = size_field(j, "window");
    return out;
}

template <Scalar S>
json to_json(const MeasureSpec<S>& mu) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiscreteMeasure<S>>) {
                return {{"discrete", {{"points", vector_to_json(m.points)}, {"weights", vector_to_json(m.weights)}}}};
            } else if constexpr (std::is_same_v<T, MomentSeqMeasure<S>>) {
                return {{"moments", vector_to_json(m.moments)}};
            } else if constexpr (std::is_same_v<T, UniformInterval<S>>) {
                return {{"uniform", {{"a", scalar_to_json(m.a)}, {"b", scalar_to_json(m.b)}, {"mass", scalar_to_json(m.mass)}}}};
            } else {
                return "zero";
            }
        },
        mu);
}

template <Scalar S>
MeasureSpec<S> measure_from_json(const json& j) {
    MeasureSpec<S> out;
    if (j == "zero") {
        out = ZeroMeasure{};
    } else if (j.is_object() && j.contains("discrete")) {
        const json& d = j["discrete"];
        out = DiscreteMeasure<S>{vector_from_json<S>(d.at("points"), "points"), vector_from_json<S>(d.at("weights"), "weights")};
    } else if (j.is_object() && j.contains("uniform")) {
        const json& u = j["uniform"];
        out = UniformInterval<S>{scalar_from_json<S>(u.at("a")), scalar_from_json<S>(u.at("b")),
                                 u.contains("mass") ? scalar_from_json<S>(u["mass"]) : S(1)};
    } else if (j.is_object() && j.contains("moments")) {
        out = MomentSeqMeasure<S>{vector_from_json<S>(j["moments"], "moments")};
    } else {
        invalid("measure must be \"zero\" or an object with \"discrete\", \"uniform\" or \"moments\"");
    }
    validate(out);
    return out;
}

template <Scalar S>
json to_json(const MeasureVector<S>& mus) {
    json levels = json::array();
    for (const auto& mu : mus.levels) levels.push_back(to_json(mu));
    json out{{"levels", std::move(levels)}};
    tag<S>(out);
    return out;
}

template <Scalar S>
MeasureVector<S> measures_from_json(const json& j) {
    check_tag<S>(j, "measure vector");
    if (!j.is_object() || !j.contains("levels") || !j["levels"].is_array() || j["levels"].empty()) {
        invalid("expected {\"levels\": [...]} with at least one level");
    }
    MeasureVector<S> out;
    for (const auto& l : j["levels"]) out.levels.push_back(measure_from_json<S>(l));
    return out;
}

template <Scalar S>
json to_json(const PolySequence<S>& p) {
    json rows = json::array();
    for (std::size_t i = 0; i < p.t.window(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c <= i; ++c) row.push_back(scalar_to_json(p.t(i, c)));
        rows.push_back(std::move(row));
    }
    json out{{"t00", scalar_to_json(p.t00)}, {"rows", std::move(rows)}};
    tag<S>(out);
    return out;
}

template <Scalar S>
PolySequence<S> polys_from_json(const json& j) {
    check_tag<S>(j, "polynomial sequence");
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array() || j["rows"].empty()) {
        invalid("expected {\"t00\": ..., \"rows\": [...]}");
    }
    const json& rows = j["rows"];
    PolySequence<S> out{TruncatedMatrix<S>(rows.size()), scalar_from_json<S>(j.at("t00"))};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto row = vector_from_json<S>(rows[i], "row");
        if (row.size() != i + 1) invalid("row " + std::to_string(i) + " must hold " + std::to_string(i + 1) + " coefficients");
        for (std::size_t c = 0; c <= i; ++c) out.t(i, c) = row[c];
    }
    return out;
}

inline json to_json(const DiscreteMeasure<double>& d, bool tagged) {
    json out{{"discrete", {{"points", d.points}, {"weights", d.weights}}}};
    if (tagged) out["float"] = true;
    return out;
}

inline DiscreteMeasure<double> recovered_from_json(const json& j) {
    check_tag<double>(j, "recovered measure");
    const json& d = j.at("discrete");
    return {vector_from_json<double>(d.at("points"), "points"), vector_from_json<double>(d.at("weights"), "weights")};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const IndexReport& r) {
    json out{{"window_used", r.window_used}};
    if (r.index) {
        out["detected"] = "Index";
        out["index"] = *r.index;
        out["witness"] = {r.witness->first, r.witness->second};
    } else {
        out["detected"] = "InfiniteWithinWindow";
        out["index"] = nullptr;
    }
    return out;
}

inline IndexReport index_report_from_json(const json& j) {
    IndexReport r;
    r.window_used = size_field(j, "window_used");
    if (j.at("detected") == "Index") {
        r.index = size_field(j, "index");
        const json& w = j.at("witness");
        r.witness = std::make_pair(w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>());
    } else if (j.at("detected") != "InfiniteWithinWindow") {
        invalid("\"detected\" must be \"Index\" or \"InfiniteWithinWindow\"");
    }
    return r;
}

inline json to_json(const HankelClass& c) {
    return {{"verdict", verdict_name(c.verdict)}, {"order", c.order}, {"window", c.window}};
}

inline HankelClass hankel_class_from_json(const json& j) {
    const std::string name = j.at("verdict").get<std::string>();
    HankelClass c;
    if (name == "PositiveDefiniteUpTo") c.verdict = HankelVerdict::PositiveDefiniteUpTo;
    else if (name == "FiniteOrder") c.verdict = HankelVerdict::FiniteOrder;
    else if (name == "Zero") c.verdict = HankelVerdict::Zero;
    else if (name == "NotMomentMatrix") c.verdict = HankelVerdict::NotMomentMatrix;
    else invalid("unknown Hankel verdict \"" + name + "\"");
    c.order = size_field(j, "order");
    c.window = size_field(j, "window");
    return c;
}

template <Scalar S>
json to_json(const FavardVerdict<S>& v) {
    json levels = json::array();
    for (const auto& c : v.level_classes) levels.push_back(to_json(c));
    json out{{"case", case_name(v.verdict_case)},
             {"theorem", case_theorem(v.verdict_case)},
             {"index", v.index.index ? json(*v.index.index) : json(nullptr)},
             {"index_report", to_json(v.index)},
             {"levels", std::move(levels)},
             {"window", v.window}};
    if (!v.layers.layers.empty()) out["layers"] = to_json(v.layers);
    tag<S>(out);
    return out;
}

template <Scalar S>
FavardVerdict<S> verdict_from_json(const json& j) {
    check_tag<S>(j, "verdict");
    FavardVerdict<S> v;
    const std::string name = j.at("case").get<std::string>();
    bool found = false;
    for (FavardCase c : {FavardCase::Classical, FavardCase::Continuous, FavardCase::Discrete,
                         FavardCase::DiscreteContinuous, FavardCase::MixedOther,
                         FavardCase::NoRepresentationWithinWindow}) {
        if (case_name(c) == name) {
            v.verdict_case = c;
            found = true;
        }
    }
    if (!found) invalid("unknown Favard case \"" + name + "\"");
    v.index = index_report_from_json(j.at("index_report"));
    for (const auto& c : j.at("levels")) v.level_classes.push_back(hankel_class_from_json(c));
    if (j.contains("layers")) {
        json layers = j["layers"];
        v.layers = layers_from_json<S>(layers);
    }
    v.window = size_field(j, "window");
    return v;
}

inline json error_to_json(const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(e.name()) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    return {{"error", {{"name", e.name()}, {"message", message}}}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        invalid(path + ": " + e.what());
    }
}

/// Two-space indented JSON followed by a newline; object keys come out sorted,
/// so reports are byte-stable.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace sobfav::io

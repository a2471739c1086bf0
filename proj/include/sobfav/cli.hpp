#pragma once

// Command-line front end. `run` parses arguments, dispatches on the payload's
// scalar kind (float-tagged files take the double path), and writes one JSON
// document. Exit status: 0 success, 2 invalid input or usage, 3 mathematical
// precondition failure. Errors are reported as {"error": {"name", "message"}}.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "sobfav.hpp"

namespace sobfav::cli {

using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitMath = 3;

inline int exit_code(const Error& e) { return e.kind() == ErrorKind::InvalidInput ? kExitInvalid : kExitMath; }

/// Bundled inputs used by the documentation and the acceptance suite.
inline std::map<std::string, json> fixtures() {
    std::map<std::string, json> out;

    out["monomial"] = io::to_json(HessenbergTrunc<Rational>(TruncatedMatrix<Rational>::upper_shift(13)));

    TruncatedMatrix<Rational> hilbert(11);
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j) hilbert(i, j) = Rational(1, static_cast<long>(i + j + 1));
    out["hilbert"] = io::to_json(hilbert);

    out["identity12"] = io::to_json(TruncatedMatrix<Rational>::identity(12));

    const MeasureSpec<Rational> uniform = UniformInterval<Rational>{Rational(-1), Rational(1), Rational(2)};
    json sob = io::to_json(MeasureVector<Rational>{{uniform, uniform}});
    sob["n"] = 11;
    out["sob_uniform_d1"] = sob;

    json disc = io::to_json(MeasureVector<Rational>{{uniform, DiscreteMeasure<Rational>{{Rational(0)}, {Rational(1)}}}});
    disc["n"] = 11;
    out["sob_discrete_d1"] = disc;

    json atoms = io::to_json(HankelSeq<Rational>{measure_moments(
        MeasureSpec<Rational>{DiscreteMeasure<Rational>{{Rational(-1), Rational(1, 2), Rational(2)},
                                                        {Rational(1), Rational(2), Rational(1, 3)}}},
        18)});
    out["three_atoms"] = atoms;
    return out;
}

namespace detail {

struct Context {
    ZeroTest zt;
    std::optional<std::size_t> n;
};

/// Runs `f.template operator()<S>()` with S chosen by the payload's tag.
template <typename F>
json with_scalar(const json& payload, F&& f) {
    if (io::is_float_tagged(payload)) return f.template operator()<double>();
    return f.template operator()<Rational>();
}

template <Scalar S>
TruncatedMatrix<S> load_matrix(const json& j, const Context& ctx) {
    if (j.is_object() && j.contains("levels")) {
        const auto mus = io::measures_from_json<S>(j);
        std::optional<std::size_t> n = ctx.n;
        if (!n && j.contains("n")) n = io::size_field(j, "n");
        if (!n) io::invalid("a measure file needs --n (or an \"n\" field) to build its moment matrix");
        return sobolev_moment_matrix(mus, *n);
    }
    TruncatedMatrix<S> m = io::matrix_from_json<S>(j, ctx.n);
    if (ctx.n && !j.contains("hankel")) {
        if (*ctx.n == 0 || *ctx.n > m.window()) io::invalid("--n must lie in 1.." + std::to_string(m.window()));
        m = m.leading(*ctx.n);
    }
    return m;
}

template <Scalar S>
HessenbergTrunc<S> load_hessenberg(const json& j, const Context& ctx) {
    TruncatedMatrix<S> m = io::matrix_from_json<S>(j);
    if (ctx.n) {
        if (*ctx.n == 0 || *ctx.n > m.window()) io::invalid("--n must lie in 1.." + std::to_string(m.window()));
        m = m.leading(*ctx.n);
    }
    return HessenbergTrunc<S>(std::move(m));
}

template <Scalar S>
S parse_scalar(const std::string& text) {
    const Rational r = parse_rational(text);
    if constexpr (is_exact_v<S>) return r;
    else return r.get_d();
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hankel-Sobolev structure, Hessenberg recurrences and Favard-type verdicts on finite truncations",
                 "sobfav"};
    app.require_subcommand(1);
    app.fallthrough();
    double tolerance = 1e-10;
    std::string out_path;
    app.add_option("--tolerance", tolerance, "zero tolerance for floating-point inputs")->capture_default_str();
    app.add_option("--out", out_path, "write the report to this file instead of stdout");

    std::string input;
    std::size_t eta = 0, d_max = 0, d = 0, k = 0, n = 0;
    std::string t00 = "1", from, fixture_name, fixture_dir;

    auto add_input = [&](CLI::App* sub, const char* what) { sub->add_option("input", input, what)->required(); };
    std::vector<CLI::Option*> n_options;
    auto add_n = [&](CLI::App* sub, const char* what) {
        n_options.push_back(sub->add_option("--n", n, what));
        return n_options.back();
    };

    auto* phi_cmd = app.add_subcommand("phi", "apply Phi(A, eta) to a matrix");
    add_input(phi_cmd, "matrix, hankel or measure file");
    phi_cmd->add_option("--eta", eta, "operator level")->required();
    add_n(phi_cmd, "truncation size");

    auto* psi_cmd = app.add_subcommand("psi", "apply Psi(G, eta) to a lower Hessenberg matrix");
    add_input(psi_cmd, "hessenberg or matrix file");
    psi_cmd->add_option("--eta", eta, "operator level")->required();
    add_n(psi_cmd, "truncation size");

    auto* detect_cmd = app.add_subcommand("detect-index", "window-qualified Hankel-Sobolev index");
    add_input(detect_cmd, "matrix, hankel or measure file");
    detect_cmd->add_option("--d-max", d_max, "largest index examined")->required();
    add_n(detect_cmd, "truncation size");

    auto* decompose_cmd = app.add_subcommand("decompose", "Hankel layers H_0..H_d of an index-d matrix");
    add_input(decompose_cmd, "matrix, hankel or measure file");
    decompose_cmd->add_option("--d", d, "index")->required();
    add_n(decompose_cmd, "truncation size");

    auto* compose_cmd = app.add_subcommand("compose", "Hankel-Sobolev matrix from layers");
    add_input(compose_cmd, "layers file");
    add_n(compose_cmd, "output size")->required();

    auto* gen_cmd = app.add_subcommand("generate-polys", "polynomials generated by a Hessenberg matrix");
    add_input(gen_cmd, "hessenberg file");
    gen_cmd->add_option("--t00", t00, "leading constant Q_0 > 0")->capture_default_str();
    add_n(gen_cmd, "number of polynomials");

    auto* mm_cmd = app.add_subcommand("moment-matrix", "formal moment matrix T^-1 T^-T of a Hessenberg matrix");
    add_input(mm_cmd, "hessenberg file");
    mm_cmd->add_option("--t00", t00, "leading constant Q_0 > 0")->capture_default_str();
    add_n(mm_cmd, "output size");

    auto* sob_cmd = app.add_subcommand("sobolev-moments", "Sobolev moment matrix of a measure vector");
    add_input(sob_cmd, "measure file");
    add_n(sob_cmd, "output size");

    auto* classify_cmd = app.add_subcommand("classify-hankel", "Hamburger classification from leading minors");
    add_input(classify_cmd, "hankel file");
    add_n(classify_cmd, "number of minors examined");

    auto* recover_cmd = app.add_subcommand("recover-discrete", "atoms and weights of a finite-order moment sequence");
    add_input(recover_cmd, "hankel file");
    recover_cmd->add_option("--k", k, "number of atoms")->required();

    auto* favard_cmd = app.add_subcommand("favard-check", "Favard-type verdict");
    add_input(favard_cmd, "input file");
    favard_cmd->add_option("--from", from, "input kind")
        ->required()
        ->check(CLI::IsMember({"moment-matrix", "hessenberg", "measures"}));
    favard_cmd->add_option("--d-max", d_max, "largest index examined")->required();
    favard_cmd->add_option("--t00", t00, "leading constant for --from hessenberg")->capture_default_str();
    add_n(favard_cmd, "truncation size");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "print a bundled fixture, list them, or write all of them");
    fixtures_cmd->add_option("name", fixture_name, "fixture to print");
    fixtures_cmd->add_option("--dir", fixture_dir, "write every fixture as <name>.json into this directory");

    auto fail = [&](const Error& e) {
        err << io::dump(io::error_to_json(e));
        return exit_code(e);
    };

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return fail(Error(ErrorKind::InvalidInput, e.what()));
    }

    try {
        if (!(tolerance > 0)) io::invalid("--tolerance must be positive");
        detail::Context ctx{ZeroTest{tolerance}, std::nullopt};
        auto* sub = app.get_subcommands().front();
        for (const CLI::Option* opt : n_options)
            if (opt->count() > 0) ctx.n = n;

        json report;
        if (sub == fixtures_cmd) {
            const auto all = fixtures();
            if (!fixture_dir.empty()) {
                std::filesystem::create_directories(fixture_dir);
                for (const auto& [name, j] : all) {
                    std::ofstream f(std::filesystem::path(fixture_dir) / (name + ".json"));
                    if (!f) io::invalid("cannot write into " + fixture_dir);
                    f << io::dump(j);
                }
            }
            if (!fixture_name.empty()) {
                const auto it = all.find(fixture_name);
                if (it == all.end()) io::invalid("unknown fixture \"" + fixture_name + "\"");
                report = it->second;
            } else {
                json names = json::array();
                for (const auto& entry : all) names.push_back(entry.first);
                report = {{"fixtures", names}};
            }
        } else {
            const json payload = io::read_file(input);
            report = detail::with_scalar(payload, [&]<Scalar S>() -> json {
                if (sub == phi_cmd || sub == psi_cmd) {
                    const auto r = sub == phi_cmd ? phi(detail::load_matrix<S>(payload, ctx), eta)
                                                  : psi(detail::load_hessenberg<S>(payload, ctx), eta);
                    json j{{"operator", sub->get_name()}, {"eta", eta}, {"consumed", r.consumed},
                           {"result", io::to_json(r.value)}};
                    io::tag<S>(j);
                    return j;
                }
                if (sub == detect_cmd) {
                    json j = io::to_json(detect_index(detail::load_matrix<S>(payload, ctx), d_max, ctx.zt));
                    j["d_max"] = d_max;
                    io::tag<S>(j);
                    return j;
                }
                if (sub == decompose_cmd) return io::to_json(decompose(detail::load_matrix<S>(payload, ctx), d, ctx.zt));
                if (sub == compose_cmd) return io::to_json(compose(io::layers_from_json<S>(payload), n));
                if (sub == gen_cmd) {
                    return io::to_json(generate_polynomials(detail::load_hessenberg<S>(payload, ctx), detail::parse_scalar<S>(t00)));
                }
                if (sub == mm_cmd) {
                    return io::to_json(moment_matrix(detail::load_hessenberg<S>(payload, ctx), detail::parse_scalar<S>(t00)));
                }
                if (sub == sob_cmd) {
                    if (!payload.is_object() || !payload.contains("levels")) io::invalid("expected a measure file");
                    return io::to_json(detail::load_matrix<S>(payload, ctx));
                }
                if (sub == classify_cmd) {
                    const auto h = io::hankel_from_json<S>(payload);
                    return io::to_json(classify_hankel(h, ctx.n ? *ctx.n : h.max_order(), ctx.zt));
                }
                if (sub == recover_cmd) {
                    return io::to_json(recover_discrete_measure(io::hankel_from_json<S>(payload), k, ctx.zt), true);
                }
                // favard-check
                if (from == "hessenberg") {
                    return io::to_json(favard_verdict_from_hessenberg(detail::load_hessenberg<S>(payload, ctx), d_max,
                                                                      detail::parse_scalar<S>(t00), ctx.zt));
                }
                if (from == "measures" && !(payload.is_object() && payload.contains("levels"))) {
                    io::invalid("--from measures expects a measure file");
                }
                return io::to_json(favard_verdict_from_moment_matrix(detail::load_matrix<S>(payload, ctx), d_max, ctx.zt));
            });
        }

        if (out_path.empty()) {
            out << io::dump(report);
        } else {
            std::ofstream f(out_path);
            if (!f) io::invalid("cannot write " + out_path);
            f << io::dump(report);
        }
        return kExitOk;
    } catch (const Error& e) {
        return fail(e);
    } catch (const io::json::exception& e) {
        return fail(Error(ErrorKind::InvalidInput, e.what()));
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(Error(ErrorKind::InvalidInput, e.what()));
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    return run(std::move(args), out, err);
}

}  // namespace sobfav::cli

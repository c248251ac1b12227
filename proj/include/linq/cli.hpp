#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: `linmap [flags] <command> <input>...`.
 *
 * Exit codes: 0 success, 1 domain error (error JSON on stdout), 2 malformed
 * command line or input. Requires CLI11.hpp and json.hpp on the include path.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "autogroup.hpp"
#include "error.hpp"
#include "linearize.hpp"
#include "linmap.hpp"
#include "matq.hpp"
#include "separated.hpp"
#include "text.hpp"

namespace linq {

struct CliConfig {
    std::string field;     ///< "q" or "p,r"
    std::string modulus;   ///< optional, comma-separated coefficients from c_0 up
    std::size_t nvars = 0;  ///< 0 infers from the input
    std::optional<std::uint64_t> order;
    std::uint64_t seed = 1;
    bool json = false;
    std::string file;
};

namespace cli {

using nlohmann::ordered_json;

/// A command's result: text lines plus the JSON payload.
struct Output {
    std::vector<std::string> lines;
    ordered_json json;
};

class Usage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        if (s.empty() || s.front() == '-') throw std::invalid_argument(s);
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw Usage(std::string("bad ") + what + ": '" + s + "'");
    }
    if (pos != s.size()) throw Usage(std::string("bad ") + what + ": '" + s + "'");
    return v;
}

inline Fq make_field(const CliConfig& c) {
    if (c.field.empty()) throw Usage("--field is required for this command");
    std::uint64_t p = 0;
    unsigned r = 0;
    const auto parts = split_trim(c.field, ',');
    if (parts.size() == 2) {
        p = parse_u64(parts[0], "--field");
        r = static_cast<unsigned>(parse_u64(parts[1], "--field"));
    } else if (parts.size() == 1) {
        const std::uint64_t q = parse_u64(parts[0], "--field");
        const auto ps = q >= 2 ? detail::prime_factors(q) : std::vector<std::uint64_t>{};
        if (ps.size() != 1) fail(ErrorKind::NotPrime, c.field + " is not a prime power");
        p = ps[0];
        for (std::uint64_t v = q; v > 1; v /= p) ++r;
    } else {
        throw Usage("--field expects q or p,r");
    }
    if (c.modulus.empty()) return Fq::make(p, r);
    std::vector<std::uint64_t> m;
    for (const auto& s : split_trim(c.modulus, ',')) m.push_back(parse_u64(s, "--modulus"));
    return Fq::make(p, r, m);
}

inline std::string format_const(const ConstMatrix& m, const Fq& f) {
    return format_matrix(lift(m, f));
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline ordered_json factor_json(const TameFactor& h, const Fq& f) {
    if (h.kind == TameFactor::Kind::Elementary)
        return {{"kind", "elementary"}, {"i", h.index + 1}, {"poly", format_linpoly(h.shift)}};
    return {{"kind", "linear"}, {"matrix", format_const(h.linear, f)}};
}

inline ordered_json factors_json(const std::vector<TameFactor>& hs, const Fq& f) {
    ordered_json out = ordered_json::array();
    for (const auto& h : hs) out.push_back(factor_json(h, f));
    return out;
}

inline Output single(const std::string& line) { return {{line}, line}; }
inline Output single(bool b) { return {{bool_text(b)}, b}; }

inline std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (auto x : v) out.push_back(x + 1);
    return out;
}

inline SepMap parse_sep_map(const std::string& text, std::size_t nvars) {
    const QMap q = parse_qmap(text, nvars);
    if (q.empty() || q.size() != q.front().nvars())
        fail(ErrorKind::DimensionMismatch, "a map without mixed terms needs as many components as variables");
    SepMap out;
    for (const auto& c : q) out.push_back(classify_no_mixed(c));
    return out;
}

inline std::uint64_t need_order(const CliConfig& c) {
    if (!c.order) throw Usage("--order is required for this command");
    return *c.order;
}

struct Command {
    std::string name;
    std::string help;
    std::size_t arity;
    std::function<Output(const CliConfig&, const std::vector<std::string>&)> run;
};

inline std::vector<Command> field_commands() {
    using Args = std::vector<std::string>;
    auto map_in = [](const CliConfig& c, const std::string& s) { return parse_linmap(s, make_field(c), c.nvars); };
    auto poly_in = [](const CliConfig& c, const std::string& s) { return parse_linpoly(s, make_field(c), c.nvars); };
    auto mat_in = [](const CliConfig& c, const std::string& s) { return parse_matrix(make_field(c), s); };
    return {
        {"jq", "matrix of a linearized map", 1,
         [=](const CliConfig& c, const Args& a) { return single(format_matrix(to_matrix(map_in(c, a[0])))); }},
        {"compose", "f o g for maps f and g", 2,
         [=](const CliConfig& c, const Args& a) {
             const LinMap f = map_in(c, a[0]);
             const LinMap g = parse_linmap(a[1], f.field, c.nvars ? c.nvars : f.nvars());
             return single(format_linmap(compose_matrix(f, g)));
         }},
        {"invert", "inverse of an automorphism", 1,
         [=](const CliConfig& c, const Args& a) { return single(format_linmap(invert_map(map_in(c, a[0])))); }},
        {"is-auto", "whether a map is an automorphism", 1,
         [=](const CliConfig& c, const Args& a) { return single(is_automorphism(map_in(c, a[0]))); }},
        {"tame", "elementary and linear factors of an automorphism", 1,
         [=](const CliConfig& c, const Args& a) {
             const LinMap f = map_in(c, a[0]);
             if (f.nvars() != f.ncomponents() || !is_automorphism(f))
                 fail(ErrorKind::NotUnimodular, "map is not an automorphism");
             const auto hs = tame_decompose(f);
             Output out{{}, factors_json(hs, f.field)};
             for (const auto& h : hs) out.lines.push_back(format_linmap(factor_map(h, f.field, f.nvars())));
             return out;
         }},
        {"diagonalize", "h1, g, h2 with h1 o f o h2 = g diagonal", 1,
         [=](const CliConfig& c, const Args& a) {
             const LinMap f = map_in(c, a[0]);
             const auto d = diagonalize_map(f);
             Output out;
             out.lines = {format_linmap(d.h1), format_linmap(d.g), format_linmap(d.h2)};
             out.json = {{"h1", out.lines[0]},
                         {"g", out.lines[1]},
                         {"h2", out.lines[2]},
                         {"h1_factors", factors_json(d.h1_factors, f.field)},
                         {"h2_factors", factors_json(d.h2_factors, f.field)}};
             return out;
         }},
        {"is-coordinate", "whether a polynomial is a coordinate", 1,
         [=](const CliConfig& c, const Args& a) { return single(is_coordinate(poly_in(c, a[0]))); }},
        {"complete", "automorphism with the given first component", 1,
         [=](const CliConfig& c, const Args& a) { return single(format_linmap(complete_coordinate(poly_in(c, a[0])))); }},
        {"factor-univariate", "h, f~ with f = h(f~), f~ a coordinate", 1,
         [=](const CliConfig& c, const Args& a) {
             const auto u = univariate_factor(poly_in(c, a[0]));
             Output out;
             out.lines = {format_linpoly(u.h_tilde), format_linpoly(u.f_tilde)};
             out.json = {{"h_tilde", out.lines[0]}, {"f_tilde", out.lines[1]}};
             return out;
         }},
        {"ideal-nf", "normal form (h, g_1, ..., g_r) of an ideal", 1,
         [=](const CliConfig& c, const Args& a) {
             const auto gens = parse_components(a[0], make_field(c), c.nvars);
             const auto nf = ideal_normal_form(gens);
             ordered_json gs = ordered_json::array();
             std::string joined;
             for (const auto& g : nf.gs) {
                 gs.push_back(format_linpoly(g));
                 joined += (joined.empty() ? "" : "; ") + format_linpoly(g);
             }
             Output out;
             out.lines = {format_linmap(nf.h), joined.empty() ? "0" : joined};
             out.json = {{"h", out.lines[0]}, {"generators", gs}};
             return out;
         }},
        {"recognize-ring", "whether F_q[X]/(generators) is a polynomial ring", 1,
         [=](const CliConfig& c, const Args& a) {
             const auto r = recognize_polynomial_ring(parse_components(a[0], make_field(c), c.nvars));
             Output out;
             if (r.polynomial_ring) {
                 out.lines = {"polynomial-ring " + std::to_string(r.dim)};
                 out.json = {{"kind", "polynomial-ring"}, {"dim", r.dim}};
             } else {
                 out.lines = {"not-domain " + std::to_string(r.witness + 1)};
                 out.json = {{"kind", "not-domain"}, {"witness", r.witness + 1}};
             }
             return out;
         }},
        {"minpoly", "minimal polynomial of a matrix with A^d = I (--order d)", 1,
         [=](const CliConfig& c, const Args& a) { return single(format_unipoly(min_poly(mat_in(c, a[0]), need_order(c)), "X")); }},
        {"snf", "Smith normal form D = M A N", 1,
         [=](const CliConfig& c, const Args& a) {
             const auto s = smith_normal_form(mat_in(c, a[0]));
             Output out;
             out.lines = {format_matrix(s.D), format_matrix(s.M), format_matrix(s.N)};
             out.json = {{"D", out.lines[0]}, {"M", out.lines[1]}, {"N", out.lines[2]}};
             return out;
         }},
        {"linearize", "conjugate a map or matrix of order d (--order d) to a linear one", 1,
         [=](const CliConfig& c, const Args& a) {
             const std::uint64_t d = need_order(c);
             Output out;
             if (a[0].find('X') != std::string::npos) {
                 const LinMap f = map_in(c, a[0]);
                 const auto r = linearize_map(f, d, c.seed);
                 out.lines = {format_linmap(r.g), format_const(r.linear_part, f.field)};
                 out.json = {{"g", out.lines[0]}, {"linear_part", out.lines[1]}, {"order", d}};
             } else {
                 const PolyMatrix m = mat_in(c, a[0]);
                 const auto cert = linearize_matrix(m, d, c.seed);
                 const Fq& f = detail::matrix_field(m);
                 out.lines = {format_matrix(cert.B), format_matrix(cert.B_inv), format_const(cert.constant, f)};
                 out.json = {{"B", out.lines[0]}, {"B_inv", out.lines[1]}, {"constant", out.lines[2]}, {"order", cert.order}};
             }
             return out;
         }},
    };
}

inline std::vector<Command> sep_commands() {
    using Args = std::vector<std::string>;
    return {
        {"classify", "separated form of a polynomial without mixed terms", 1,
         [](const CliConfig& c, const Args& a) { return single(format_seppoly(parse_seppoly(a[0], c.nvars))); }},
        {"is-coordinate", "whether a polynomial without mixed terms is a coordinate", 1,
         [](const CliConfig& c, const Args& a) { return single(is_coordinate_nomixed(parse_seppoly(a[0], c.nvars))); }},
        {"triangularize", "variable order making a map unitriangular", 1,
         [](const CliConfig& c, const Args& a) {
             const SepMap f = parse_sep_map(a[0], c.nvars);
             const auto pi = triangularize_map(f);
             const auto perm = one_based(pi);
             std::string p;
             for (auto x : perm) p += (p.empty() ? "" : " ") + std::to_string(x);
             const std::string g = format_sepmap(permute_map(f, pi));
             return Output{{p, g}, {{"permutation", perm}, {"map", g}}};
         }},
        {"invert", "inverse of a map without mixed terms", 1,
         [](const CliConfig& c, const Args& a) { return single(format_qmap(invert_nomixed(parse_sep_map(a[0], c.nvars)))); }},
        {"linearize", "conjugate a triangular map of order d (--order d) to a diagonal one", 1,
         [](const CliConfig& c, const Args& a) {
             const QMap f = parse_qmap(a[0], c.nvars);
             const auto r = linearize_triangular(f, need_order(c));
             QMap diag;
             for (std::size_t i = 0; i < r.diagonal.size(); ++i)
                 diag.push_back(QMPoly::variable(Rationals{}, f.size(), i).scaled(r.diagonal[i]));
             Output out;
             out.lines = {format_qmap(r.h), format_qmap(r.h_inv), format_qmap(diag)};
             out.json = {{"h", out.lines[0]}, {"h_inv", out.lines[1]}, {"linear", out.lines[2]}};
             return out;
         }},
    };
}

inline std::vector<std::string> read_inputs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot read " + path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        out.push_back(line.substr(b, line.find_last_not_of(" \t\r") + 1 - b));
    }
    return out;
}

/**
 * Moves every input after a "--" so that inputs such as "-X1 + X2" are not
 * taken for flags; flags, their values and command names keep their order.
 */
inline std::vector<std::string> inputs_last(const std::vector<std::string>& args, const std::vector<Command>& field_cmds,
                                            const std::vector<Command>& sep_cmds) {
    static const std::vector<std::string> valued = {"--field", "--modulus", "--nvars", "--order", "--seed", "--file"};
    auto is_command = [](const std::vector<Command>& cs, const std::string& s) {
        return std::any_of(cs.begin(), cs.end(), [&](const Command& c) { return c.name == s; });
    };
    std::vector<std::string> head, tail;
    bool in_sep = false, have_command = false;
    for (std::size_t k = 0; k < args.size(); ++k) {
        const std::string& a = args[k];
        if (a == "--") {
            tail.insert(tail.end(), args.begin() + static_cast<std::ptrdiff_t>(k) + 1, args.end());
            break;
        }
        const bool is_long = a.starts_with("--");
        if (is_long && a.find('=') == std::string::npos &&
            std::find(valued.begin(), valued.end(), a) != valued.end()) {
            head.push_back(a);
            if (k + 1 < args.size()) head.push_back(args[++k]);
        } else if (is_long || a == "-h") {
            head.push_back(a);
        } else if (!have_command && !in_sep && a == "sep") {
            head.push_back(a);
            in_sep = true;
        } else if (!have_command && is_command(in_sep ? sep_cmds : field_cmds, a)) {
            head.push_back(a);
            have_command = true;
        } else {
            tail.push_back(a);
        }
    }
    if (!have_command && !tail.empty())
        throw Usage(std::string("unknown command '") + (in_sep ? "sep " : "") + tail.front() + "'");
    if (!tail.empty()) {
        head.push_back("--");
        head.insert(head.end(), tail.begin(), tail.end());
    }
    return head;
}

inline ordered_json error_json(std::string_view kind, const std::string& message) {
    return {{"schema", 1}, {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace cli

/// Parses args (program name excluded), runs one command, writes its result.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    std::vector<std::string> inputs;
    std::string order_text, seed_text;
    CLI::App app{"Linearized polynomial maps over F_q[X] and maps without mixed terms over Q", "linmap"};
    app.add_option("--field", cfg.field, "field: q, or p,r");
    app.add_option("--modulus", cfg.modulus, "defining polynomial coefficients c_0,...,c_r");
    app.add_option("--nvars", cfg.nvars, "number of variables (inferred by default)");
    app.add_option("--order", order_text, "order d of the input");
    app.add_option("--seed", seed_text, "seed for randomized factorization");
    app.add_flag("--json", cfg.json, "JSON output");
    app.add_option("--file", cfg.file, "read inputs from a file, one per line");
    app.require_subcommand(1);

    struct Entry {
        CLI::App* app;
        const cli::Command* cmd;
    };
    std::vector<Entry> entries;
    const auto field_cmds = cli::field_commands();
    const auto sep_cmds = cli::sep_commands();
    auto add = [&](CLI::App& parent, const cli::Command& c) {
        CLI::App* sub = parent.add_subcommand(c.name, c.help);
        sub->fallthrough();
        sub->add_option("input", inputs, "input expression(s)");
        entries.push_back({sub, &c});
    };
    for (const auto& c : field_cmds) add(app, c);
    CLI::App* sep = app.add_subcommand("sep", "maps without mixed terms over Q");
    sep->fallthrough();
    sep->require_subcommand(1);
    for (const auto& c : sep_cmds) add(*sep, c);

    const auto fail_usage = [&](const std::string& msg) {
        err << "linmap: " << msg << "\n";
        if (cfg.json) out << cli::error_json("ParseError", msg).dump() << "\n";
        return 2;
    };

    try {
        std::vector<std::string> rev = cli::inputs_last(args, field_cmds, sep_cmds);
        std::reverse(rev.begin(), rev.end());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail_usage(e.what());
    } catch (const cli::Usage& e) {
        return fail_usage(e.what());
    }

    try {
        if (!order_text.empty()) cfg.order = cli::parse_u64(order_text, "--order");
        if (!seed_text.empty()) cfg.seed = cli::parse_u64(seed_text, "--seed");
        if (!cfg.file.empty())
            for (auto& s : cli::read_inputs(cfg.file)) inputs.push_back(std::move(s));
        const Entry* chosen = nullptr;
        for (const auto& e : entries)
            if (e.app->parsed()) chosen = &e;
        if (!chosen) throw cli::Usage("no command given");
        const std::string name = (chosen->app->get_parent() == sep ? "sep " : "") + chosen->cmd->name;
        if (inputs.size() != chosen->cmd->arity)
            throw cli::Usage(name + " expects " + std::to_string(chosen->cmd->arity) + " input(s), got " +
                             std::to_string(inputs.size()));
        const cli::Output res = chosen->cmd->run(cfg, inputs);
        if (cfg.json) {
            cli::ordered_json j{{"schema", 1}, {"command", name}, {"result", res.json}};
            out << j.dump() << "\n";
        } else {
            for (const auto& l : res.lines) out << l << "\n";
        }
        return 0;
    } catch (const cli::Usage& e) {
        return fail_usage(e.what());
    } catch (const ParseError& e) {
        return fail_usage(e.what());
    } catch (const Error& e) {
        auto j = cli::error_json(to_string(e.kind()), e.what());
        if (!e.witness().empty()) j["error"]["witness"] = cli::one_based(e.witness());
        out << j.dump() << "\n";
        if (!cfg.json) err << "linmap: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return 1;
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace linq

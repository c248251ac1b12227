#pragma once

/**
 * @file text.hpp
 * @brief Literal syntax for field elements, F_q[t] polynomials, matrices
 *        over F_q[t], and polynomials over Q.
 *
 * Field elements:  decimal residue (prime field) or polynomial in `a`,
 *                  e.g. `a+1`, `2*a^1+1`.
 * F_q[t]:          `t^2 + a*t + 1`; `0` is the zero polynomial.
 * Matrices:        rows separated by ';', entries by ','.
 * Q polynomials:   `(1/2)*X1^2 + 3*X2`; X, Y, Z, W abbreviate X1..X4.
 */

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "expr.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "mpoly.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace linq {

using PolyMatrix = Matrix<UniPoly>;
using QPoly = Poly<Rationals>;
using QMPoly = MPoly<Rationals>;
using QMap = PolyMap<Rationals>;

inline constexpr std::uint64_t kMaxDenseDegree = std::uint64_t{1} << 24;

namespace detail {

inline FqElem residue(const Fq& f, std::string_view digits) {
    std::uint64_t r = 0;
    for (char c : digits) r = (mulmod(r, 10, f.p()) + static_cast<std::uint64_t>(c - '0')) % f.p();
    return {r};
}

// Parses text in the variables `a` (extension fields only) and `extra`
// over the prime field; returns the MPoly and the index of `extra`.
inline MPoly<Fq> parse_over_prime(const Fq& f, std::string_view text, std::optional<std::string_view> extra) {
    const Fq prime = Fq::make(f.p(), 1);
    ExprContext<Fq> ctx;
    ctx.dom = prime;
    ctx.nvars = 2;
    const bool ext = f.r() > 1;
    ctx.variable = [ext, extra](std::string_view name) -> std::optional<std::size_t> {
        if (ext && name == "a") return 0;
        if (extra && name == *extra) return 1;
        return std::nullopt;
    };
    ctx.integer = [prime](std::string_view d) { return residue(prime, d); };
    return parse_expression(ctx, text);
}

}  // namespace detail

inline FqElem parse_field_elem(const Fq& f, std::string_view text) {
    const auto p = detail::parse_over_prime(f, text, std::nullopt);
    FqElem acc = f.zero();
    for (const auto& [m, c] : p.terms())
        acc = f.add(acc, f.mul(f.from_int(static_cast<std::int64_t>(c.code)), f.pow(f.gen(), m[0])));
    return acc;
}

inline UniPoly parse_unipoly(const Fq& f, std::string_view text, std::string_view var = "t") {
    const auto p = detail::parse_over_prime(f, text, var);
    std::vector<FqElem> c;
    for (const auto& [m, coeff] : p.terms()) {
        if (m[1] > kMaxDenseDegree) fail(ErrorKind::Overflow, "polynomial degree too large");
        const auto k = static_cast<std::size_t>(m[1]);
        if (k >= c.size()) c.resize(k + 1, f.zero());
        c[k] = f.add(c[k], f.mul(f.from_int(static_cast<std::int64_t>(coeff.code)), f.pow(f.gen(), m[0])));
    }
    return UniPoly(f, std::move(c));
}

inline std::string format_unipoly(const UniPoly& g, std::string_view var = "t") {
    if (g.is_zero()) return "0";
    const Fq& f = g.domain();
    const auto& c = g.coeffs();
    const bool single = std::count_if(c.begin(), c.end(), [](FqElem x) { return x.code != 0; }) == 1;
    std::string out;
    for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k].code == 0) continue;
        if (!out.empty()) out += " + ";
        const std::string raw = f.format(c[k]);
        const std::string wrapped = f.is_monomial_literal(c[k]) ? raw : "(" + raw + ")";
        if (k == 0) {
            out += single ? raw : wrapped;
            continue;
        }
        if (c[k].code != 1) out += wrapped + "*";
        out += std::string(var);
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
}

inline PolyMatrix parse_matrix(const Fq& f, std::string_view text) {
    const auto rows = split_trim(text, ';');
    std::vector<std::vector<UniPoly>> cells;
    for (const auto& r : rows) {
        if (r.empty()) throw ParseError("empty matrix row", 0);
        std::vector<UniPoly> row;
        for (const auto& e : split_trim(r, ',')) row.push_back(parse_unipoly(f, e));
        if (!cells.empty() && row.size() != cells.front().size())
            fail(ErrorKind::DimensionMismatch, "ragged matrix: rows have different lengths");
        cells.push_back(std::move(row));
    }
    PolyMatrix m(cells.size(), cells.front().size(), UniPoly(f));
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells[i].size(); ++j) m(i, j) = cells[i][j];
    return m;
}

template <class T, class Fmt>
std::string format_matrix_with(const Matrix<T>& m, Fmt&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) out += "; ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += fmt(m(i, j));
        }
    }
    return out;
}

inline std::string format_matrix(const PolyMatrix& m) {
    return format_matrix_with(m, [](const UniPoly& p) { return format_unipoly(p); });
}

// ---------------------------------------------------------------------------
// Polynomials over Q

namespace detail {

inline std::optional<std::size_t> q_variable_index(std::string_view name) {
    if (name.size() == 1) {
        switch (name[0]) {
            case 'X': return 0;
            case 'Y': return 1;
            case 'Z': return 2;
            case 'W': return 3;
            default: return std::nullopt;
        }
    }
    if (name[0] != 'X') return std::nullopt;
    const std::size_t k = std::stoul(std::string(name.substr(1)));
    if (k == 0) return std::nullopt;
    return k - 1;
}

}  // namespace detail

/// Number of variables mentioned in the text (largest index used).
inline std::size_t infer_nvars(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (std::isalpha(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (auto k = detail::q_variable_index(text.substr(i, j - i))) n = std::max(n, *k + 1);
            i = j;
        } else {
            ++i;
        }
    }
    return n;
}

inline QMPoly parse_qpoly(std::string_view text, std::size_t nvars) {
    ExprContext<Rationals> ctx;
    ctx.nvars = nvars;
    ctx.variable = [nvars](std::string_view name) -> std::optional<std::size_t> {
        auto k = detail::q_variable_index(name);
        if (k && *k < nvars) return k;
        return std::nullopt;
    };
    ctx.integer = [](std::string_view d) { return Rational(BigInt(std::string(d))); };
    ctx.allow_division = true;
    return parse_expression(ctx, text);
}

/// Semicolon-separated components; nvars = 0 infers from the text (at least the component count).
inline QMap parse_qmap(std::string_view text, std::size_t nvars = 0) {
    const auto parts = split_trim(text, ';');
    if (nvars == 0) nvars = std::max(parts.size(), infer_nvars(text));
    QMap out;
    for (const auto& p : parts) out.push_back(parse_qpoly(p, nvars));
    return out;
}

inline std::string format_monomial(const Monomial& m) {
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!out.empty()) out += "*";
        out += "X" + std::to_string(i + 1);
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out;
}

/// Terms in descending lexicographic monomial order (X1 most significant).
inline std::string format_qpoly(const QMPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    const auto& terms = p.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [m, c] = *it;
        const bool neg = c < 0;
        const Rational a = neg ? Rational(-c) : c;
        if (out.empty()) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        const bool integral = boost::multiprecision::denominator(a) == 1;
        const std::string coef = integral ? to_string(a) : "(" + to_string(a) + ")";
        const std::string mono = format_monomial(m);
        if (mono.empty()) out += coef;
        else if (a == 1) out += mono;
        else out += coef + "*" + mono;
    }
    return out;
}

inline std::string format_qmap(const QMap& f) {
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += "; ";
        out += format_qpoly(f[i]);
    }
    return out;
}

}  // namespace linq

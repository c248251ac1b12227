#pragma once

/**
 * @file linmap.hpp
 * @brief Linearized polynomials over F_q and their q-Jacobian matrices.
 *
 * A linearized polynomial in X_1..X_n is an F_q-combination of monomials
 * X_j^{q^m}. It is stored as its row (delta_1(f), ..., delta_n(f)) over
 * F_q[t], where delta_j sends X_j^{q^m} to t^m. A linearized map with m
 * components is stored as the m x n matrix of these rows (the q-Jacobian);
 * composition of maps is then the matrix product.
 *
 * Text form (one component):
 *
 *     component := term (('+'|'-') term)*
 *     term      := factor ('*' factor)*
 *     factor    := coef | 'X' index ['^[' m ']' | '^' e]
 *
 * where `X3^[2]` means X_3^{q^2}, a plain exponent must be a power of q,
 * and a coefficient that is a sum (`a+1`) must be parenthesized. Maps
 * separate components with ';'.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "factor.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "mpoly.hpp"
#include "poly.hpp"
#include "text.hpp"

namespace linq {

/// Expanded form: a sparse polynomial over F_q with literal exponents.
using DensePoly = MPoly<Fq>;

struct LinPoly {
    Fq field;
    std::vector<UniPoly> row;  ///< entry j is delta_j(f)

    LinPoly() = default;
    LinPoly(Fq f, std::size_t nvars) : field(f), row(nvars, UniPoly(f)) {}
    LinPoly(Fq f, std::vector<UniPoly> r) : field(f), row(std::move(r)) {}

    std::size_t nvars() const noexcept { return row.size(); }
    bool is_zero() const {
        return std::all_of(row.begin(), row.end(), [](const UniPoly& p) { return p.is_zero(); });
    }
    friend bool operator==(const LinPoly& a, const LinPoly& b) { return a.field == b.field && a.row == b.row; }
};

struct LinMap {
    Fq field;
    PolyMatrix jq;  ///< ncomponents x nvars

    LinMap() = default;
    LinMap(Fq f, PolyMatrix m) : field(f), jq(std::move(m)) {}

    std::size_t nvars() const noexcept { return jq.cols(); }
    std::size_t ncomponents() const noexcept { return jq.rows(); }

    LinPoly component(std::size_t i) const { return LinPoly(field, jq.row(i)); }

    friend bool operator==(const LinMap& a, const LinMap& b) { return a.field == b.field && a.jq == b.jq; }
};

inline PolyMatrix zero_matrix(const Fq& f, std::size_t rows, std::size_t cols) {
    return PolyMatrix(rows, cols, UniPoly(f));
}

inline PolyMatrix identity_matrix(const Fq& f, std::size_t n) {
    return PolyMatrix::identity(n, UniPoly(f), UniPoly::one(f));
}

inline LinMap identity_map(const Fq& f, std::size_t n) { return LinMap(f, identity_matrix(f, n)); }

inline LinMap from_rows(const Fq& f, const std::vector<LinPoly>& comps, std::size_t nvars) {
    PolyMatrix m = zero_matrix(f, comps.size(), nvars);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].nvars() != nvars) fail(ErrorKind::DimensionMismatch, "components have different arity");
        for (std::size_t j = 0; j < nvars; ++j) m(i, j) = comps[i].row[j];
    }
    return LinMap(f, std::move(m));
}

/// The map whose q-Jacobian is M.
inline LinMap from_matrix(const PolyMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) fail(ErrorKind::DimensionMismatch, "empty matrix");
    const Fq f = m(0, 0).domain();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!(m(i, j).domain() == f)) fail(ErrorKind::FieldMismatch, "matrix entries over different fields");
    return LinMap(f, m);
}

inline const PolyMatrix& to_matrix(const LinMap& f) { return f.jq; }

/// Composition via the product of q-Jacobians.
inline LinMap compose_matrix(const LinMap& f, const LinMap& g) {
    if (!(f.field == g.field)) fail(ErrorKind::FieldMismatch, "maps over different fields");
    if (f.nvars() != g.ncomponents())
        fail(ErrorKind::DimensionMismatch, "compose: f takes " + std::to_string(f.nvars()) + " inputs but g has " +
                                               std::to_string(g.ncomponents()) + " components");
    return LinMap(f.field, f.jq * g.jq);
}

// ---------------------------------------------------------------------------
// Term syntax

namespace detail {

// An exponent either stored literally or, when too large, as q^m.
struct LinExponent {
    std::optional<std::uint64_t> plain;
    std::uint64_t qpow = 0;
};

inline std::optional<std::uint64_t> checked_qpow(std::uint64_t q, std::uint64_t m) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (v > std::numeric_limits<std::uint64_t>::max() / q) return std::nullopt;
        v *= q;
    }
    return v;
}

inline std::optional<std::uint64_t> q_log(std::uint64_t q, std::uint64_t e) {
    if (e == 0) return std::nullopt;
    std::uint64_t m = 0;
    while (e % q == 0) {
        e /= q;
        ++m;
    }
    if (e != 1) return std::nullopt;
    return m;
}

class LinPolyParser {
public:
    LinPolyParser(const Fq& f, std::string_view s, std::size_t nvars) : f_(f), s_(s), nvars_(nvars) {}

    // Returns (variable, q-exponent, coefficient) triples; variable indices are 0-based.
    struct Term {
        std::size_t var;
        std::uint64_t m;
        FqElem c;
    };

    std::vector<Term> parse() {
        std::vector<Term> out;
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty component", pos_);
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        for (;;) {
            term(neg, out);
            if (accept('+')) neg = false;
            else if (accept('-')) neg = true;
            else break;
        }
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return out;
    }

    std::size_t max_var() const noexcept { return max_var_; }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::uint64_t integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected an integer", pos_);
        if (pos_ - start > 18) throw ParseError("integer too large", start);
        return std::stoull(std::string(s_.substr(start, pos_ - start)));
    }

    void term(bool neg, std::vector<Term>& out) {
        FqElem c = f_.one();
        std::optional<std::size_t> var;
        LinExponent ex;
        bool any_var = false;
        const std::size_t start = pos_;
        do {
            skip_ws();
            if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
            const char ch = s_[pos_];
            if (ch == 'X') {
                ++pos_;
                const std::size_t at = pos_;
                const std::uint64_t idx = integer();
                if (idx == 0) throw ParseError("variables are numbered from X1", at);
                LinExponent e{1, 0};
                if (accept('^')) {
                    if (accept('[')) {
                        const std::uint64_t m = integer();
                        if (!accept(']')) throw ParseError("expected ']'", pos_);
                        e = {checked_qpow(f_.q(), m), m};
                    } else {
                        e = {integer(), 0};
                    }
                }
                const std::size_t v = static_cast<std::size_t>(idx - 1);
                max_var_ = std::max(max_var_, v + 1);
                if (any_var) {
                    if (*var != v) fail(ErrorKind::MixedOrNonQPowerTerm, "mixed monomial in '" + std::string(s_.substr(start, pos_ - start)) + "'");
                    ex = combine(ex, e, start);
                } else {
                    var = v;
                    ex = e;
                    any_var = true;
                }
            } else if (ch == '(') {
                const std::size_t close = matching_paren(pos_);
                c = f_.mul(c, parse_field_elem(f_, s_.substr(pos_ + 1, close - pos_ - 1)));
                pos_ = close + 1;
            } else if (std::isdigit(static_cast<unsigned char>(ch))) {
                const std::size_t s0 = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                c = f_.mul(c, detail::residue(f_, s_.substr(s0, pos_ - s0)));
            } else if (ch == 'a') {
                ++pos_;
                std::uint64_t k = 1;
                if (accept('^')) k = integer();
                if (f_.r() == 1) throw ParseError("'a' is not an element of a prime field", pos_);
                c = f_.mul(c, f_.pow(f_.gen(), k));
            } else {
                throw ParseError(std::string("unexpected '") + ch + "'", pos_);
            }
        } while (accept('*'));
        if (neg) c = f_.neg(c);
        if (!any_var) {
            if (!f_.is_zero(c)) fail(ErrorKind::MixedOrNonQPowerTerm, "constant term is not linearized");
            return;
        }
        std::uint64_t m;
        if (ex.plain) {
            auto lg = q_log(f_.q(), *ex.plain);
            if (!lg)
                fail(ErrorKind::MixedOrNonQPowerTerm, "X" + std::to_string(*var + 1) + "^" + std::to_string(*ex.plain) +
                                                          " is not a q-power monomial (q = " + std::to_string(f_.q()) + ")");
            m = *lg;
        } else {
            m = ex.qpow;
        }
        out.push_back({*var, m, c});
    }

    LinExponent combine(const LinExponent& a, const LinExponent& b, std::size_t at) {
        if (f_.q() == 2) {
            const auto ma = a.plain ? q_log(2, *a.plain) : std::optional<std::uint64_t>(a.qpow);
            const auto mb = b.plain ? q_log(2, *b.plain) : std::optional<std::uint64_t>(b.qpow);
            if (ma && mb && *ma == *mb) {
                const std::uint64_t m = *ma + 1;
                return {checked_qpow(2, m), m};
            }
        }
        if (a.plain && b.plain && *a.plain <= std::numeric_limits<std::uint64_t>::max() - *b.plain)
            return {*a.plain + *b.plain, 0};
        fail(ErrorKind::MixedOrNonQPowerTerm, "product term at offset " + std::to_string(at) + " is not a q-power monomial");
    }

    std::size_t matching_paren(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < s_.size(); ++k) {
            if (s_[k] == '(') ++depth;
            if (s_[k] == ')' && --depth == 0) return k;
        }
        throw ParseError("unbalanced '('", open);
    }

    const Fq& f_;
    std::string_view s_;
    std::size_t nvars_;
    std::size_t pos_ = 0;
    std::size_t max_var_ = 0;
};

inline LinPoly assemble(const Fq& f, const std::vector<LinPolyParser::Term>& terms, std::size_t nvars) {
    LinPoly out(f, nvars);
    for (const auto& t : terms) {
        if (t.var >= nvars)
            fail(ErrorKind::DimensionMismatch, "X" + std::to_string(t.var + 1) + " exceeds nvars = " + std::to_string(nvars));
        if (t.m > kMaxDenseDegree) fail(ErrorKind::Overflow, "q-exponent too large");
        UniPoly& e = out.row[t.var];
        e.set_coeff(static_cast<std::size_t>(t.m), f.add(e.coeff(static_cast<std::size_t>(t.m)), t.c));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Expanded form

/// Sum over nonzero t^m-coefficients c of entry j of c * X_j^{q^m}.
inline DensePoly expand(const LinPoly& f) {
    DensePoly out(f.field, f.nvars());
    for (std::size_t j = 0; j < f.nvars(); ++j) {
        const auto& c = f.row[j].coeffs();
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (c[m].code == 0) continue;
            const auto e = detail::checked_qpow(f.field.q(), m);
            if (!e) fail(ErrorKind::Overflow, "X^{q^m} exponent does not fit in 64 bits");
            Monomial mono(f.nvars(), 0);
            mono[j] = *e;
            out.add_term(std::move(mono), c[m]);
        }
    }
    return out;
}

/// Inverse of expand: classifies a dense polynomial as linearized.
inline LinPoly collect(const DensePoly& p) {
    const Fq& f = p.domain();
    LinPoly out(f, p.nvars());
    for (const auto& [m, c] : p.terms()) {
        if (DensePoly::support_size(m) != 1)
            fail(ErrorKind::MixedOrNonQPowerTerm, "monomial " + format_monomial(m) + " is not of the form X_i^{q^m}");
        std::size_t j = 0;
        while (m[j] == 0) ++j;
        const auto lg = detail::q_log(f.q(), m[j]);
        if (!lg) fail(ErrorKind::MixedOrNonQPowerTerm, "monomial " + format_monomial(m) + " is not of the form X_i^{q^m}");
        out.row[j].set_coeff(static_cast<std::size_t>(*lg), c);
    }
    return out;
}

/// General polynomial text over F_q in X1..Xn (X, Y, Z, W allowed), expanded.
inline DensePoly parse_dense(std::string_view text, const Fq& f, std::size_t nvars) {
    ExprContext<Fq> ctx;
    ctx.dom = f;
    ctx.nvars = nvars;
    ctx.variable = [nvars](std::string_view name) -> std::optional<std::size_t> {
        auto k = detail::q_variable_index(name);
        if (k && *k < nvars) return k;
        return std::nullopt;
    };
    ctx.constant = [f](std::string_view name) -> std::optional<FqElem> {
        if (name == "a" && f.r() > 1) return f.gen();
        return std::nullopt;
    };
    ctx.integer = [f](std::string_view d) { return detail::residue(f, d); };
    ctx.qpower = [f](std::uint64_t m) {
        const auto e = detail::checked_qpow(f.q(), m);
        if (!e) fail(ErrorKind::Overflow, "q^m does not fit in 64 bits");
        return *e;
    };
    return parse_expression(ctx, text);
}

// ---------------------------------------------------------------------------
// Parsing and printing

/**
 * Parses linearized polynomials, one per ';'-separated component. Text
 * outside the term syntax (parentheses, products of sums, X/Y/Z/W names)
 * is expanded as an ordinary polynomial and then classified. Throws
 * Error(MixedOrNonQPowerTerm) if some monomial is not c*X_i^{q^m}.
 * nvars = 0 infers the arity from the largest variable index.
 */
inline std::vector<LinPoly> parse_components(std::string_view text, const Fq& f, std::size_t nvars = 0) {
    std::vector<std::vector<detail::LinPolyParser::Term>> terms;
    std::size_t maxv = 1;
    try {
        for (const auto& s : split_trim(text, ';')) {
            detail::LinPolyParser p(f, s, nvars);
            terms.push_back(p.parse());
            maxv = std::max(maxv, p.max_var());
        }
    } catch (const ParseError&) {
        if (nvars == 0) nvars = std::max<std::size_t>(infer_nvars(text), 1);
        std::vector<LinPoly> comps;
        for (const auto& part : split_trim(text, ';')) comps.push_back(collect(parse_dense(part, f, nvars)));
        return comps;
    }
    if (nvars == 0) nvars = maxv;
    std::vector<LinPoly> comps;
    for (const auto& t : terms) comps.push_back(detail::assemble(f, t, nvars));
    return comps;
}

inline LinPoly parse_linpoly(std::string_view text, const Fq& f, std::size_t nvars = 0) {
    if (const auto k = text.find(';'); k != std::string_view::npos) throw ParseError("a single component was expected", k);
    return parse_components(text, f, nvars).front();
}

inline LinMap parse_linmap(std::string_view text, const Fq& f, std::size_t nvars = 0) {
    const auto comps = parse_components(text, f, nvars);
    return from_rows(f, comps, comps.front().nvars());
}

inline std::string format_linpoly(const LinPoly& p) {
    std::string out;
    for (std::size_t j = 0; j < p.row.size(); ++j) {
        const auto& c = p.row[j].coeffs();
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (c[m].code == 0) continue;
            if (!out.empty()) out += " + ";
            if (c[m].code != 1) {
                const std::string lit = p.field.format(c[m]);
                out += (p.field.is_monomial_literal(c[m]) ? lit : "(" + lit + ")") + "*";
            }
            out += "X" + std::to_string(j + 1);
            if (m) out += "^[" + std::to_string(m) + "]";
        }
    }
    return out.empty() ? "0" : out;
}

inline std::string format_linmap(const LinMap& f) {
    std::string out;
    for (std::size_t i = 0; i < f.ncomponents(); ++i) {
        if (i) out += "; ";
        out += format_linpoly(f.component(i));
    }
    return out;
}

/**
 * Value of f at a point of F_{q^k}^n, where ext = F_{q^k} over f's field.
 * Uses x^{q^m} = (Frobenius^r)^m (x).
 */
inline FqElem evaluate(const LinPoly& f, const Extension& ext, std::span<const FqElem> point) {
    if (!(ext.base() == f.field)) fail(ErrorKind::FieldMismatch, "extension is not over the polynomial's field");
    if (point.size() != f.nvars()) fail(ErrorKind::DimensionMismatch, "point has wrong number of coordinates");
    const Fq& big = ext.field();
    FqElem acc = big.zero();
    for (std::size_t j = 0; j < f.nvars(); ++j) {
        if (point[j].code >= big.q()) fail(ErrorKind::FieldMismatch, "point coordinate is not in the extension field");
        FqElem x = point[j];
        const auto& c = f.row[j].coeffs();
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (c[m].code) acc = big.add(acc, big.mul(ext.embed(c[m]), x));
            for (unsigned s = 0; s < f.field.r(); ++s) x = big.frobenius(x);
        }
    }
    return acc;
}

/**
 * Composition by literal substitution of the expanded polynomials; the
 * independent check of compose_matrix. Each q-th power g_j^{q^{m+1}} is
 * formed from g_j^{q^m} by plain repeated multiplication.
 */
inline LinMap compose_symbolic(const LinMap& f, const LinMap& g) {
    if (!(f.field == g.field)) fail(ErrorKind::FieldMismatch, "maps over different fields");
    if (f.nvars() != g.ncomponents()) fail(ErrorKind::DimensionMismatch, "compose: inner dimensions differ");
    const Fq& F = f.field;
    const std::size_t n = f.nvars(), l = g.nvars();
    std::vector<DensePoly> gexp;
    for (std::size_t j = 0; j < n; ++j) gexp.push_back(expand(g.component(j)));

    auto pth_power = [&](const DensePoly& x) {
        DensePoly acc = x;
        for (std::uint64_t k = 1; k < F.p(); ++k) acc = acc * x;
        return acc;
    };
    std::vector<std::vector<DensePoly>> powers(n);  // powers[j][m] = g_j^{q^m}
    auto power = [&](std::size_t j, std::size_t m) -> const DensePoly& {
        auto& pw = powers[j];
        if (pw.empty()) pw.push_back(gexp[j]);
        while (pw.size() <= m) {
            DensePoly next = pw.back();
            for (unsigned s = 0; s < F.r(); ++s) next = pth_power(next);
            pw.push_back(std::move(next));
        }
        return pw[m];
    };

    std::vector<LinPoly> comps;
    for (std::size_t i = 0; i < f.ncomponents(); ++i) {
        DensePoly acc(F, l);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& c = f.jq(i, j).coeffs();
            for (std::size_t m = 0; m < c.size(); ++m)
                if (c[m].code) acc += power(j, m).scaled(c[m]);
        }
        comps.push_back(collect(acc));
    }
    return from_rows(F, comps, l);
}

}  // namespace linq

#pragma once

/**
 * @file expr.hpp
 * @brief A small recursive-descent parser from polynomial text to MPoly.
 *
 *   expr    := ['+'|'-'] term (('+'|'-') term)*
 *   term    := factor (['*'|'/'] factor)*      (juxtaposition multiplies)
 *   factor  := '-' factor | primary ['^' exp]
 *   exp     := INT | '[' INT ']'               ('^[m]' means ^(q^m))
 *   primary := INT | NAME | '(' expr ')'
 *
 * NAME is a letter followed by digits (X1, a, t, Y). Division is only by
 * nonzero constants. Variable names, integer literals and the meaning of
 * '^[m]' are supplied by the caller.
 */

#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"
#include "mpoly.hpp"

namespace linq {

template <CoefficientDomain D>
struct ExprContext {
    D dom;
    std::size_t nvars = 0;
    /// Maps a name to a variable index, or nullopt if unknown.
    std::function<std::optional<std::size_t>(std::string_view)> variable;
    /// Named constants (checked after variables); may be empty.
    std::function<std::optional<typename D::element>(std::string_view)> constant;
    /// Converts a decimal literal to a domain element.
    std::function<typename D::element(std::string_view)> integer;
    /// Exponent denoted by '^[m]'; empty means the notation is rejected.
    std::function<std::uint64_t(std::uint64_t)> qpower;
    bool allow_division = false;
};

template <CoefficientDomain D>
class ExprParser {
public:
    ExprParser(const ExprContext<D>& ctx, std::string_view text) : ctx_(ctx), s_(text) {}

    MPoly<D> parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        MPoly<D> v = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return v;
    }

private:
    using P = MPoly<D>;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    std::string_view digits() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected an integer", pos_);
        return s_.substr(start, pos_ - start);
    }

    std::uint64_t small_int() {
        const std::size_t at = pos_;
        const auto d = digits();
        if (d.size() > 18) throw ParseError("integer too large", at);
        return std::stoull(std::string(d));
    }

    P expr() {
        P acc(ctx_.dom, ctx_.nvars);
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        P t = term();
        acc = negate ? -t : t;
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else break;
        }
        return acc;
    }

    bool starts_primary() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(';
    }

    P term() {
        P acc = factor();
        for (;;) {
            if (accept('*')) {
                acc *= factor();
            } else if (peek('/')) {
                const std::size_t at = pos_;
                ++pos_;
                if (!ctx_.allow_division) throw ParseError("division is not allowed here", at);
                P d = factor();
                if (!d.is_constant() || d.is_zero()) throw ParseError("division only by nonzero constants", at);
                acc = acc.scaled(ctx_.dom.inv(d.constant_term()));
            } else if (starts_primary()) {
                acc *= factor();
            } else {
                break;
            }
        }
        return acc;
    }

    P factor() {
        if (accept('-')) return -factor();
        P base = primary();
        if (accept('^')) {
            std::uint64_t e;
            if (accept('[')) {
                const std::size_t at = pos_;
                const std::uint64_t m = small_int();
                expect(']');
                if (!ctx_.qpower) throw ParseError("'^[m]' notation is not available here", at);
                e = ctx_.qpower(m);
            } else {
                e = small_int();
            }
            if (base.terms().size() == 1 && ctx_.dom.eq(base.terms().begin()->second, ctx_.dom.one())) {
                Monomial m = base.terms().begin()->first;
                for (auto& x : m) x = checked_mul(x, e);
                P r(ctx_.dom, ctx_.nvars);
                r.add_term(std::move(m), ctx_.dom.one());
                return r;
            }
            return base.pow(e);
        }
        return base;
    }

    P primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            P v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const auto d = digits();
            return P::constant(ctx_.dom, ctx_.nvars, ctx_.integer(d));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const auto name = s_.substr(start, pos_ - start);
            const auto idx = ctx_.variable ? ctx_.variable(name) : std::nullopt;
            if (idx) return P::variable(ctx_.dom, ctx_.nvars, *idx);
            if (ctx_.constant)
                if (auto c = ctx_.constant(name)) return P::constant(ctx_.dom, ctx_.nvars, *c);
            throw ParseError("unknown symbol '" + std::string(name) + "'", start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    const ExprContext<D>& ctx_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

template <CoefficientDomain D>
MPoly<D> parse_expression(const ExprContext<D>& ctx, std::string_view text) {
    return ExprParser<D>(ctx, text).parse();
}

/// Splits on a separator character, trimming surrounding whitespace.
inline std::vector<std::string> split_trim(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t k = s.find(sep, start);
        auto piece = s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start);
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) piece.remove_prefix(1);
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) piece.remove_suffix(1);
        out.emplace_back(piece);
        if (k == std::string_view::npos) break;
        start = k + 1;
    }
    return out;
}

}  // namespace linq

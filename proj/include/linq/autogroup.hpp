#pragma once

/**
 * @file autogroup.hpp
 * @brief Automorphisms of linearized maps: invertibility, inverses, tame
 *        factorizations, diagonalization, coordinates, and normal forms of
 *        ideals generated by linearized polynomials.
 *
 * Everything here is matrix algebra on q-Jacobians. A linearized map f in n
 * variables is an automorphism iff det J_q(f) is a nonzero constant.
 * Factor lists compose left to right: the list [h_1, ..., h_k] denotes
 * h_1 o h_2 o ... o h_k, whose q-Jacobian is J(h_1) J(h_2) ... J(h_k).
 */

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linmap.hpp"
#include "matq.hpp"

namespace linq {

/// A matrix over F_q (no t).
using ConstMatrix = Matrix<FqElem>;

inline PolyMatrix lift(const ConstMatrix& c, const Fq& f) {
    PolyMatrix out(c.rows(), c.cols(), UniPoly(f));
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) out(i, j) = UniPoly::constant(f, c(i, j));
    return out;
}

inline bool is_constant_matrix(const PolyMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_constant()) return false;
    return true;
}

/// The constant matrix of a; ConsistencyFailure if some entry involves t.
inline ConstMatrix constant_part(const PolyMatrix& a) {
    if (!is_constant_matrix(a)) fail(ErrorKind::ConsistencyFailure, "matrix is not constant");
    ConstMatrix out(a.rows(), a.cols(), FqElem{0});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).coeff(0);
    return out;
}

/**
 * Elementary: (X_1, ..., X_i + shift, ..., X_n) with shift free of X_i.
 * Linear: X -> C X with C invertible over F_q.
 */
struct TameFactor {
    enum class Kind { Elementary, Linear };

    Kind kind = Kind::Linear;
    std::size_t index = 0;
    LinPoly shift;
    ConstMatrix linear;

    static TameFactor elementary(std::size_t i, LinPoly s) {
        if (i >= s.nvars() || !s.row[i].is_zero())
            fail(ErrorKind::ConsistencyFailure, "elementary shift must not involve its own variable");
        return {Kind::Elementary, i, std::move(s), {}};
    }
    static TameFactor make_linear(ConstMatrix c) { return {Kind::Linear, 0, {}, std::move(c)}; }

    bool is_identity() const {
        if (kind == Kind::Elementary) return shift.is_zero();
        for (std::size_t i = 0; i < linear.rows(); ++i)
            for (std::size_t j = 0; j < linear.cols(); ++j)
                if (linear(i, j).code != (i == j ? 1u : 0u)) return false;
        return true;
    }
};

/// J_q of a single factor.
inline PolyMatrix factor_matrix(const TameFactor& h, const Fq& f, std::size_t n) {
    if (h.kind == TameFactor::Kind::Linear) return lift(h.linear, f);
    PolyMatrix m = identity_matrix(f, n);
    for (std::size_t j = 0; j < n; ++j)
        if (j != h.index) m(h.index, j) = h.shift.row[j];
    return m;
}

inline LinMap factor_map(const TameFactor& h, const Fq& f, std::size_t n) { return LinMap(f, factor_matrix(h, f, n)); }

/// h_1 o h_2 o ... o h_k.
inline LinMap compose_factors(const std::vector<TameFactor>& hs, const Fq& f, std::size_t n) {
    PolyMatrix acc = identity_matrix(f, n);
    for (const auto& h : hs) acc = acc * factor_matrix(h, f, n);
    return LinMap(f, std::move(acc));
}

namespace detail {

// The factor whose q-Jacobian is the matrix of op (acting on n x n matrices).
inline TameFactor factor_of_op(const ElementaryOp& op, const Fq& f, std::size_t n) {
    using K = ElementaryOp::Kind;
    if (op.kind == K::AddRow || op.kind == K::AddCol) {
        // AddRow(i, j, p) is I + p e_ij; AddCol(i, j, p) is I + p e_ji.
        const std::size_t target = op.kind == K::AddRow ? op.i : op.j;
        const std::size_t source = op.kind == K::AddRow ? op.j : op.i;
        LinPoly s(f, n);
        s.row[source] = op.p;
        return TameFactor::elementary(target, std::move(s));
    }
    return TameFactor::make_linear(constant_part(op_matrix(op, f, n)));
}

inline ConstMatrix const_product(const ConstMatrix& a, const ConstMatrix& b, const Fq& f) {
    ConstMatrix c(a.rows(), b.cols(), FqElem{0});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).code == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(a(i, k), b(k, j)));
        }
    return c;
}

}  // namespace detail

/**
 * Merges neighbours that are the same kind of generator (two shifts of the
 * same variable, or two maps that are both linear, an elementary factor
 * with a constant shift counting as linear) and drops identities.
 */
inline std::vector<TameFactor> simplify_factors(std::vector<TameFactor> hs, const Fq& f, std::size_t n) {
    auto is_const = [](const TameFactor& h) {
        if (h.kind == TameFactor::Kind::Linear) return true;
        return std::all_of(h.shift.row.begin(), h.shift.row.end(), [](const UniPoly& p) { return p.is_constant(); });
    };
    std::vector<TameFactor> out;
    for (auto& h : hs) {
        if (h.is_identity()) continue;
        if (!out.empty()) {
            TameFactor& last = out.back();
            const bool both_elementary = last.kind == TameFactor::Kind::Elementary && h.kind == TameFactor::Kind::Elementary;
            if (both_elementary && last.index == h.index) {
                for (std::size_t j = 0; j < h.shift.nvars(); ++j) last.shift.row[j] += h.shift.row[j];
                if (last.is_identity()) out.pop_back();
                continue;
            }
            if (is_const(last) && is_const(h)) {
                last = TameFactor::make_linear(
                    detail::const_product(constant_part(factor_matrix(last, f, n)), constant_part(factor_matrix(h, f, n)), f));
                if (last.is_identity()) out.pop_back();
                continue;
            }
        }
        out.push_back(std::move(h));
    }
    return out;
}

inline bool is_automorphism(const LinMap& f) {
    if (f.ncomponents() != f.nvars())
        fail(ErrorKind::DimensionMismatch, "automorphism test needs as many components as variables");
    return mat_det(f.jq).is_unit();
}

/// The inverse automorphism; NotUnimodular if f is not invertible.
inline LinMap invert_map(const LinMap& f) {
    if (f.ncomponents() != f.nvars()) fail(ErrorKind::DimensionMismatch, "only square maps can be inverted");
    return LinMap(f.field, inverse_unimodular(f.jq));
}

/**
 * Writes an automorphism as elementary and linear factors, read off the
 * Smith form: M A N = I gives A = M^{-1} N^{-1}, and each recorded
 * operation inverts to one generator. Neighbouring generators of the same
 * kind are merged.
 */
inline std::vector<TameFactor> tame_decompose(const LinMap& f) {
    if (!is_automorphism(f)) fail(ErrorKind::NotUnimodular, "map is not an automorphism (det J_q not a unit)");
    const Fq& F = f.field;
    const std::size_t n = f.nvars();
    const SnfResult s = smith_normal_form(f.jq);
    std::vector<TameFactor> hs;
    for (const auto& op : s.ops_left) hs.push_back(detail::factor_of_op(inverse_op(op, F), F, n));
    for (auto it = s.ops_right.rbegin(); it != s.ops_right.rend(); ++it)
        hs.push_back(detail::factor_of_op(inverse_op(*it, F), F, n));
    hs = simplify_factors(std::move(hs), F, n);
    if (!(compose_factors(hs, F, n) == f)) fail(ErrorKind::ConsistencyFailure, "tame factors do not recompose");
    return hs;
}

struct DiagonalizationResult {
    LinMap h1;  ///< m x m automorphism
    LinMap g;   ///< diagonal
    LinMap h2;  ///< n x n automorphism
    std::vector<TameFactor> h1_factors;
    std::vector<TameFactor> h2_factors;
};

/// h1 o f o h2 = g with g diagonal (Smith form), h1 and h2 tame.
inline DiagonalizationResult diagonalize_map(const LinMap& f) {
    const Fq& F = f.field;
    const SnfResult s = smith_normal_form(f.jq);
    std::vector<TameFactor> left, right;
    // M = E_k ... E_1, N = F_1 ... F_l
    for (auto it = s.ops_left.rbegin(); it != s.ops_left.rend(); ++it)
        left.push_back(detail::factor_of_op(*it, F, f.ncomponents()));
    for (const auto& op : s.ops_right) right.push_back(detail::factor_of_op(op, F, f.nvars()));
    return {LinMap(F, s.M), LinMap(F, s.D), LinMap(F, s.N), simplify_factors(std::move(left), F, f.ncomponents()),
            simplify_factors(std::move(right), F, f.nvars())};
}

/// True iff the entries of the row of f generate the unit ideal of F_q[t].
inline bool is_coordinate(const LinPoly& f) {
    if (f.is_zero()) return false;
    UniPoly g(f.field);
    for (const auto& e : f.row)
        if (!e.is_zero()) g = g.is_zero() ? e.monic() : gcd(g, e);
    return g.is_one();
}

/// An automorphism whose first component is f; NotUnimodularRow otherwise.
inline LinMap complete_coordinate(const LinPoly& f) { return LinMap(f.field, complete_unimodular_row(f.row)); }

struct UnivariateFactorization {
    LinPoly h_tilde;  ///< one variable; delta(h_tilde) is the monic gcd of f's row
    LinPoly f_tilde;  ///< a coordinate
};

/// f = h_tilde(f_tilde) with h_tilde univariate and f_tilde a coordinate.
inline UnivariateFactorization univariate_factor(const LinPoly& f) {
    if (f.is_zero()) fail(ErrorKind::ZeroInput, "the zero polynomial has no such factorization");
    UniPoly h(f.field);
    for (const auto& e : f.row)
        if (!e.is_zero()) h = h.is_zero() ? e.monic() : gcd(h, e);
    LinPoly ft(f.field, f.nvars());
    for (std::size_t j = 0; j < f.nvars(); ++j) ft.row[j] = f.row[j] / h;
    return {LinPoly(f.field, std::vector<UniPoly>{h}), ft};
}

/// g(f) for a univariate g and a single polynomial f.
inline LinPoly substitute_univariate(const LinPoly& g, const LinPoly& f) {
    if (g.nvars() != 1) fail(ErrorKind::DimensionMismatch, "outer polynomial must be univariate");
    LinPoly out(f.field, f.nvars());
    for (std::size_t j = 0; j < f.nvars(); ++j) out.row[j] = g.row[0] * f.row[j];
    return out;
}

struct IdealNormalForm {
    LinMap h;                ///< n x n automorphism
    std::vector<LinPoly> gs;  ///< gs[i] lies in F_q[X_i]^(q) (n-variable row, only entry i nonzero)

    std::size_t rank() const noexcept { return gs.size(); }
    /// delta_i(g_i) as a polynomial in t.
    const UniPoly& diagonal(std::size_t i) const { return gs.at(i).row.at(i); }
};

namespace detail {

inline PolyMatrix generator_matrix(const std::vector<LinPoly>& gens) {
    if (gens.empty()) fail(ErrorKind::DimensionMismatch, "no generators");
    const Fq& f = gens.front().field;
    const std::size_t n = gens.front().nvars();
    PolyMatrix m(gens.size(), n, UniPoly(f));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].nvars() != n) fail(ErrorKind::DimensionMismatch, "generators in different numbers of variables");
        if (!(gens[i].field == f)) fail(ErrorKind::FieldMismatch, "generators over different fields");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = gens[i].row[j];
    }
    return m;
}

}  // namespace detail

/// Rows of (g_1(h_1), ..., g_r(h_r)) as a matrix: the r x n matrix D N^{-1}.
inline PolyMatrix normal_form_matrix(const IdealNormalForm& nf) {
    const Fq& f = nf.h.field;
    const std::size_t n = nf.h.nvars();
    PolyMatrix out(nf.rank(), n, UniPoly(f));
    for (std::size_t i = 0; i < nf.rank(); ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = nf.diagonal(i) * nf.h.jq(i, j);
    return out;
}

/**
 * The ideal generated by linearized polynomials written as
 * (g_1(h_1), ..., g_r(h_r)) with h an automorphism and g_i univariate.
 * From M J N = D: the rows of J and of D N^{-1} span the same module, so
 * h = N^{-1} and g_i = D_ii. The result is checked by comparing Hermite
 * forms of the two row modules.
 */
inline IdealNormalForm ideal_normal_form(const std::vector<LinPoly>& gens) {
    const PolyMatrix j = detail::generator_matrix(gens);
    const Fq& f = gens.front().field;
    const std::size_t n = j.cols();
    const SnfResult s = smith_normal_form(j);
    IdealNormalForm nf{LinMap(f, inverse_unimodular(s.N)), {}};
    for (std::size_t i = 0; i < s.rank(); ++i) {
        LinPoly g(f, n);
        g.row[i] = s.D(i, i);
        nf.gs.push_back(std::move(g));
    }
    const PolyMatrix lhs = hermite_form(j);
    const PolyMatrix rhs = nf.rank() ? hermite_form(normal_form_matrix(nf)) : PolyMatrix(0, n, UniPoly(f));
    if (!(lhs == rhs)) fail(ErrorKind::ConsistencyFailure, "normal form generates a different row module");
    return nf;
}

struct RingRecognition {
    bool polynomial_ring = false;
    std::size_t dim = 0;      ///< n - r when polynomial_ring
    std::size_t witness = 0;  ///< index i with deg delta_i(g_i) >= 1 otherwise
    IdealNormalForm normal_form;
};

/// F_q[X]/(gens) is a polynomial ring iff every g_i of the normal form is X_i up to a unit.
inline RingRecognition recognize_polynomial_ring(const std::vector<LinPoly>& gens) {
    RingRecognition out;
    out.normal_form = ideal_normal_form(gens);
    const std::size_t n = gens.front().nvars();
    for (std::size_t i = 0; i < out.normal_form.rank(); ++i)
        if (!out.normal_form.diagonal(i).is_unit()) {
            out.witness = i;
            return out;
        }
    out.polynomial_ring = true;
    out.dim = n - out.normal_form.rank();
    return out;
}

}  // namespace linq

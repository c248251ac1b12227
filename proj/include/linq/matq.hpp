#pragma once

/**
 * @file matq.hpp
 * @brief Matrices over F_q[t]: determinant, Smith normal form with a
 *        recorded operation log, inverses of unimodular matrices, row
 *        completion, kernels and the Hermite row form.
 *
 * Smith form pivoting is deterministic: among the nonzero entries of the
 * remaining submatrix take one of least degree, ties broken by smallest
 * (row, column).
 */

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "linmap.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace linq {

struct ElementaryOp {
    enum class Kind { AddRow, SwapRows, ScaleRow, AddCol, SwapCols, ScaleCol };

    Kind kind;
    std::size_t i = 0;
    std::size_t j = 0;
    UniPoly p;      ///< AddRow: row_i += p * row_j;  AddCol: col_i += p * col_j
    FqElem c{1};    ///< Scale factor, nonzero

    bool is_row() const noexcept { return kind == Kind::AddRow || kind == Kind::SwapRows || kind == Kind::ScaleRow; }

    static ElementaryOp add_row(std::size_t i, std::size_t j, UniPoly p) { return {Kind::AddRow, i, j, std::move(p), {1}}; }
    static ElementaryOp swap_rows(std::size_t i, std::size_t j, const Fq& f) { return {Kind::SwapRows, i, j, UniPoly(f), {1}}; }
    static ElementaryOp scale_row(std::size_t i, FqElem c, const Fq& f) { return {Kind::ScaleRow, i, i, UniPoly(f), c}; }
    static ElementaryOp add_col(std::size_t i, std::size_t j, UniPoly p) { return {Kind::AddCol, i, j, std::move(p), {1}}; }
    static ElementaryOp swap_cols(std::size_t i, std::size_t j, const Fq& f) { return {Kind::SwapCols, i, j, UniPoly(f), {1}}; }
    static ElementaryOp scale_col(std::size_t i, FqElem c, const Fq& f) { return {Kind::ScaleCol, i, i, UniPoly(f), c}; }
};

/// Applies a row operation on the left or a column operation on the right.
inline void apply_op(PolyMatrix& a, const ElementaryOp& op) {
    using K = ElementaryOp::Kind;
    switch (op.kind) {
        case K::AddRow:
            for (std::size_t k = 0; k < a.cols(); ++k)
                if (!a(op.j, k).is_zero()) a(op.i, k) += op.p * a(op.j, k);
            break;
        case K::SwapRows: a.swap_rows(op.i, op.j); break;
        case K::ScaleRow:
            for (std::size_t k = 0; k < a.cols(); ++k) a(op.i, k) = a(op.i, k).scaled(op.c);
            break;
        case K::AddCol:
            for (std::size_t k = 0; k < a.rows(); ++k)
                if (!a(k, op.j).is_zero()) a(k, op.i) += op.p * a(k, op.j);
            break;
        case K::SwapCols: a.swap_cols(op.i, op.j); break;
        case K::ScaleCol:
            for (std::size_t k = 0; k < a.rows(); ++k) a(k, op.i) = a(k, op.i).scaled(op.c);
            break;
    }
}

/**
 * The n x n matrix E of an operation: op(A) = E A for row operations and
 * op(A) = A E for column operations.
 */
inline PolyMatrix op_matrix(const ElementaryOp& op, const Fq& f, std::size_t n) {
    PolyMatrix e = identity_matrix(f, n);
    apply_op(e, op);
    return e;
}

/// The operation undoing op.
inline ElementaryOp inverse_op(const ElementaryOp& op, const Fq& f) {
    using K = ElementaryOp::Kind;
    switch (op.kind) {
        case K::AddRow: return ElementaryOp::add_row(op.i, op.j, -op.p);
        case K::AddCol: return ElementaryOp::add_col(op.i, op.j, -op.p);
        case K::ScaleRow: return ElementaryOp::scale_row(op.i, f.inv(op.c), f);
        case K::ScaleCol: return ElementaryOp::scale_col(op.i, f.inv(op.c), f);
        default: return op;
    }
}

struct SnfResult {
    PolyMatrix M;  ///< m x m, unimodular
    PolyMatrix D;  ///< m x n, diagonal
    PolyMatrix N;  ///< n x n, unimodular
    std::vector<ElementaryOp> ops_left;   ///< row operations, in order
    std::vector<ElementaryOp> ops_right;  ///< column operations, in order

    /// Number of nonzero diagonal entries.
    std::size_t rank() const {
        std::size_t r = 0;
        while (r < std::min(D.rows(), D.cols()) && !D(r, r).is_zero()) ++r;
        return r;
    }
};

namespace detail {

inline const Fq& matrix_field(const PolyMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) fail(ErrorKind::DimensionMismatch, "empty matrix");
    return a.zero().domain();
}

class SnfEngine {
public:
    explicit SnfEngine(const PolyMatrix& a)
        : f_(matrix_field(a)), a_(a), m_(identity_matrix(f_, a.rows())), n_(identity_matrix(f_, a.cols())) {}

    SnfResult run() {
        const std::size_t rows = a_.rows(), cols = a_.cols();
        for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
            if (!reduce_at(k)) break;
            const FqElem lead = a_(k, k).leading();
            if (!f_.is_one(lead)) row(ElementaryOp::scale_row(k, f_.inv(lead), f_));
        }
        return {std::move(m_), std::move(a_), std::move(n_), std::move(left_), std::move(right_)};
    }

private:
    void row(ElementaryOp op) {
        apply_op(a_, op);
        apply_op(m_, op);
        left_.push_back(std::move(op));
    }
    void col(ElementaryOp op) {
        apply_op(a_, op);
        apply_op(n_, op);
        right_.push_back(std::move(op));
    }

    std::optional<std::pair<std::size_t, std::size_t>> pivot(std::size_t k) const {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        int bd = 0;
        for (std::size_t i = k; i < a_.rows(); ++i)
            for (std::size_t j = k; j < a_.cols(); ++j) {
                const int d = a_(i, j).degree();
                if (d < 0) continue;
                if (!best || d < bd) {
                    best = {i, j};
                    bd = d;
                }
            }
        return best;
    }

    // Brings a divisibility-respecting pivot to (k, k) and clears row and column k.
    bool reduce_at(std::size_t k) {
        for (;;) {
            const auto pv = pivot(k);
            if (!pv) return false;
            if (pv->first != k) row(ElementaryOp::swap_rows(k, pv->first, f_));
            if (pv->second != k) col(ElementaryOp::swap_cols(k, pv->second, f_));
            const UniPoly piv = a_(k, k);
            bool clean = true;
            for (std::size_t i = k + 1; i < a_.rows(); ++i) {
                if (a_(i, k).is_zero()) continue;
                row(ElementaryOp::add_row(i, k, -(a_(i, k) / piv)));
                clean = clean && a_(i, k).is_zero();
            }
            for (std::size_t j = k + 1; j < a_.cols(); ++j) {
                if (a_(k, j).is_zero()) continue;
                col(ElementaryOp::add_col(j, k, -(a_(k, j) / piv)));
                clean = clean && a_(k, j).is_zero();
            }
            if (!clean) continue;
            // Divisibility: fold a row with an entry not divisible by the pivot into row k.
            std::optional<std::size_t> bad;
            for (std::size_t i = k + 1; i < a_.rows() && !bad; ++i)
                for (std::size_t j = k + 1; j < a_.cols(); ++j)
                    if (!divides(piv, a_(i, j))) {
                        bad = i;
                        break;
                    }
            if (!bad) return true;
            row(ElementaryOp::add_row(k, *bad, UniPoly::one(f_)));
        }
    }

    Fq f_;
    PolyMatrix a_, m_, n_;
    std::vector<ElementaryOp> left_, right_;
};

}  // namespace detail

/// M A N = D with D in Smith form (monic diagonal, each entry dividing the next).
inline SnfResult smith_normal_form(const PolyMatrix& a) { return detail::SnfEngine(a).run(); }

/// Replays the logs of an SNF on a: the result equals D.
inline PolyMatrix replay(const PolyMatrix& a, const SnfResult& s) {
    PolyMatrix out = a;
    for (const auto& op : s.ops_left) apply_op(out, op);
    for (const auto& op : s.ops_right) apply_op(out, op);
    return out;
}

/// Fraction-free (Bareiss) elimination; exact divisions in F_q[t].
inline UniPoly mat_det(const PolyMatrix& a) {
    const Fq& f = detail::matrix_field(a);
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
    const std::size_t n = a.rows();
    PolyMatrix w = a;
    UniPoly prev = UniPoly::one(f);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w(k, k).is_zero()) {
            std::size_t s = k + 1;
            while (s < n && w(s, k).is_zero()) ++s;
            if (s == n) return UniPoly(f);
            w.swap_rows(k, s);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) w(i, j) = (w(i, j) * w(k, k) - w(i, k) * w(k, j)) / prev;
        prev = w(k, k);
    }
    return negate ? -w(n - 1, n - 1) : w(n - 1, n - 1);
}

inline bool is_unimodular(const PolyMatrix& a) { return a.is_square() && mat_det(a).is_unit(); }

/// A^{-1} = N M from the Smith form (whose D is then the identity).
inline PolyMatrix inverse_unimodular(const PolyMatrix& a) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    const UniPoly det = mat_det(a);
    if (!det.is_unit())
        fail(ErrorKind::NotUnimodular, "determinant " + format_unipoly(det) + " is not a nonzero constant");
    const SnfResult s = smith_normal_form(a);
    return s.N * s.M;
}

/**
 * A unimodular matrix whose first row is the given row. From the Smith
 * form c * row * N = (1, 0, ..., 0), so row = (c^{-1}, 0, ..., 0) N^{-1}:
 * take N^{-1} and scale its first row by c^{-1}.
 */
inline PolyMatrix complete_unimodular_row(const std::vector<UniPoly>& row) {
    if (row.empty()) fail(ErrorKind::DimensionMismatch, "empty row");
    const Fq& f = row.front().domain();
    const std::size_t n = row.size();
    PolyMatrix a(1, n, UniPoly(f));
    for (std::size_t j = 0; j < n; ++j) a(0, j) = row[j];
    const SnfResult s = smith_normal_form(a);
    if (!s.D(0, 0).is_one()) {
        const std::string g = s.D(0, 0).is_zero() ? "0" : format_unipoly(s.D(0, 0));
        fail(ErrorKind::NotUnimodularRow, "gcd of the row entries is " + g + ", not a unit");
    }
    PolyMatrix out = inverse_unimodular(s.N);
    const FqElem cinv = f.inv(s.M(0, 0).coeff(0));
    for (std::size_t j = 0; j < n; ++j) out(0, j) = out(0, j).scaled(cinv);
    for (std::size_t j = 0; j < n; ++j)
        if (!(out(0, j) == row[j])) fail(ErrorKind::ConsistencyFailure, "row completion does not reproduce the row");
    return out;
}

/// A basis of {v : A v = 0}: the columns of N past the rank.
inline std::vector<std::vector<UniPoly>> kernel_basis(const PolyMatrix& a) {
    const SnfResult s = smith_normal_form(a);
    std::vector<std::vector<UniPoly>> out;
    for (std::size_t j = s.rank(); j < a.cols(); ++j) out.push_back(s.N.col(j));
    return out;
}

/**
 * Hermite row form of the row module: echelon, monic pivots, entries above
 * each pivot reduced modulo it, zero rows dropped. Two matrices have the
 * same row module over F_q[t] iff their Hermite forms are equal.
 */
inline PolyMatrix hermite_form(const PolyMatrix& a) {
    const Fq& f = a.zero().domain();
    PolyMatrix w = a;
    std::size_t r = 0;
    for (std::size_t c = 0; c < w.cols() && r < w.rows(); ++c) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < w.rows(); ++i)
                if (!w(i, c).is_zero() && (!best || w(i, c).degree() < w(*best, c).degree())) best = i;
            if (!best) break;
            w.swap_rows(r, *best);
            bool done = true;
            for (std::size_t i = r + 1; i < w.rows(); ++i) {
                if (w(i, c).is_zero()) continue;
                apply_op(w, ElementaryOp::add_row(i, r, -(w(i, c) / w(r, c))));
                done = done && w(i, c).is_zero();
            }
            if (done) break;
        }
        if (r >= w.rows() || w(r, c).is_zero()) continue;
        apply_op(w, ElementaryOp::scale_row(r, f.inv(w(r, c).leading()), f));
        for (std::size_t i = 0; i < r; ++i)
            if (!w(i, c).is_zero()) apply_op(w, ElementaryOp::add_row(i, r, -(w(i, c) / w(r, c))));
        ++r;
    }
    PolyMatrix out(r, w.cols(), UniPoly(f));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) out(i, j) = w(i, j);
    return out;
}

}  // namespace linq

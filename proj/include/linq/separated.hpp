#pragma once

/**
 * @file separated.hpp
 * @brief Polynomial maps without mixed terms over Q.
 *
 * A polynomial has no mixed terms when every monomial involves at most one
 * variable, f = f_1(X_1) + ... + f_n(X_n) + c. The Jacobian of such a map
 * is a matrix in separated variables: entry (i, j) depends on X_j only.
 * When the linear part is the identity and det J is a nonzero constant,
 * every principal minor of J equals 1, and a permutation of the variables
 * makes the map unitriangular. Everything is exact rational arithmetic.
 */

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "mpoly.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "text.hpp"

namespace linq {

using QUniPoly = QPoly;
using QMatrix = Matrix<Rational>;
using QMPolyMatrix = Matrix<QMPoly>;

/// f = parts[0](X_1) + ... + parts[n-1](X_n) + constant; each part has zero constant term.
struct SepPoly {
    std::size_t n = 0;
    std::vector<QUniPoly> parts;
    Rational constant{0};

    SepPoly() = default;
    explicit SepPoly(std::size_t nvars) : n(nvars), parts(nvars, QUniPoly(Rationals{})) {}

    /// Coefficient of X_j^1.
    Rational linear_coeff(std::size_t j) const { return parts.at(j).coeff(1); }

    friend bool operator==(const SepPoly& a, const SepPoly& b) {
        return a.n == b.n && a.parts == b.parts && a.constant == b.constant;
    }
};

using SepMap = std::vector<SepPoly>;

/// Entry (i, j) is a polynomial in X_j.
using SepMatrix = Matrix<QUniPoly>;

inline QMPoly to_mpoly(const SepPoly& f) {
    QMPoly out = QMPoly::constant(Rationals{}, f.n, f.constant);
    for (std::size_t j = 0; j < f.n; ++j) out += in_variable(f.parts[j], f.n, j);
    return out;
}

inline QMap to_qmap(const SepMap& f) {
    QMap out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(to_mpoly(c));
    return out;
}

/// Accepts p iff every monomial involves at most one variable; MixedTerm names the first offender.
inline SepPoly classify_no_mixed(const QMPoly& p) {
    SepPoly out(p.nvars());
    std::vector<std::vector<Rational>> coeffs(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        const std::size_t k = QMPoly::support_size(m);
        if (k == 0) {
            out.constant = c;
            continue;
        }
        if (k > 1) fail(ErrorKind::MixedTerm, "mixed term " + format_monomial(m));
        const auto j = static_cast<std::size_t>(std::find_if(m.begin(), m.end(), [](auto e) { return e != 0; }) - m.begin());
        if (m[j] > kMaxDenseDegree) fail(ErrorKind::Overflow, "degree too large");
        auto& cj = coeffs[j];
        if (cj.size() <= m[j]) cj.resize(static_cast<std::size_t>(m[j]) + 1, Rational(0));
        cj[static_cast<std::size_t>(m[j])] = c;
    }
    for (std::size_t j = 0; j < p.nvars(); ++j) out.parts[j] = QUniPoly(Rationals{}, std::move(coeffs[j]));
    return out;
}

inline SepPoly parse_seppoly(std::string_view text, std::size_t nvars = 0) {
    if (nvars == 0) nvars = std::max<std::size_t>(1, infer_nvars(text));
    return classify_no_mixed(parse_qpoly(text, nvars));
}

/// Semicolon-separated components; component count must equal the number of variables.
inline SepMap parse_sepmap(std::string_view text) {
    const QMap q = parse_qmap(text);
    if (q.empty() || q.size() != q.front().nvars())
        fail(ErrorKind::DimensionMismatch, "a map without mixed terms needs as many components as variables");
    SepMap out;
    for (const auto& c : q) out.push_back(classify_no_mixed(c));
    return out;
}

inline std::string format_seppoly(const SepPoly& f) { return format_qpoly(to_mpoly(f)); }
inline std::string format_sepmap(const SepMap& f) { return format_qmap(to_qmap(f)); }

inline SepMap sep_identity(std::size_t n) {
    SepMap out(n, SepPoly(n));
    for (std::size_t i = 0; i < n; ++i) out[i].parts[i] = QUniPoly::var(Rationals{});
    return out;
}

inline void check_square(const SepMap& f) {
    for (const auto& c : f)
        if (c.n != f.size()) fail(ErrorKind::DimensionMismatch, "component count differs from variable count");
}

inline SepMatrix sep_jacobian(const SepMap& f) {
    check_square(f);
    const std::size_t n = f.size();
    SepMatrix out(n, n, QUniPoly(Rationals{}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = f[i].parts[j].derivative();
    return out;
}

inline QMPolyMatrix to_mpoly_matrix(const SepMatrix& a) {
    const std::size_t n = a.cols();
    QMPolyMatrix out(a.rows(), n, QMPoly(Rationals{}, n));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = in_variable(a(i, j), n, j);
    return out;
}

/// Value at 0 of each entry.
inline QMatrix at_origin(const SepMatrix& a) {
    QMatrix out(a.rows(), a.cols(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).coeff(0);
    return out;
}

namespace detail {

// Determinant of the submatrix on rows rs and columns cs by dynamic programming
// over column subsets (no division needed).
inline QMPoly minor_det(const QMPolyMatrix& a, const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) {
    const std::size_t k = rs.size();
    const std::size_t nv = a.zero().nvars();
    if (k == 0) return QMPoly::constant(Rationals{}, nv, Rational(1));
    std::vector<QMPoly> dp(std::size_t{1} << k, QMPoly(Rationals{}, nv));
    dp[0] = QMPoly::constant(Rationals{}, nv, Rational(1));
    for (std::size_t mask = 0; mask + 1 < dp.size(); ++mask) {
        if (dp[mask].is_zero()) continue;
        const auto row = static_cast<std::size_t>(std::popcount(mask));
        // sign: number of used columns to the right of c
        for (std::size_t c = 0; c < k; ++c) {
            if (mask >> c & 1) continue;
            const QMPoly& e = a(rs[row], cs[c]);
            if (e.is_zero()) continue;
            const auto above = static_cast<std::size_t>(std::popcount(mask >> (c + 1)));
            QMPoly term = dp[mask] * e;
            dp[mask | (std::size_t{1} << c)] += above % 2 ? -term : term;
        }
    }
    return dp.back();
}

}  // namespace detail

inline QMPoly mpoly_det(const QMPolyMatrix& a) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
    std::vector<std::size_t> idx(a.rows());
    std::iota(idx.begin(), idx.end(), 0);
    return detail::minor_det(a, idx, idx);
}

inline QMPoly sep_det(const SepMatrix& a) { return mpoly_det(to_mpoly_matrix(a)); }

/// Smallest index subset (by size, then lexicographically) whose principal minor is not 1.
inline std::optional<std::vector<std::size_t>> principal_minor_violation(const QMPolyMatrix& a) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "principal minors of a non-square matrix");
    const std::size_t n = a.rows();
    if (n > 20) fail(ErrorKind::Overflow, "too many principal minors");
    const QMPoly one = QMPoly::constant(Rationals{}, a.zero().nvars(), Rational(1));
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(), [](auto x, auto y) {
        if (std::popcount(x) != std::popcount(y)) return std::popcount(x) < std::popcount(y);
        // lexicographic on sorted index lists: lowest differing bit decides
        const auto low = std::countr_zero(x ^ y);
        return ((x >> low) & 1) != 0;
    });
    for (auto m : masks) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1) s.push_back(i);
        if (!(detail::minor_det(a, s, s) == one)) return s;
    }
    return std::nullopt;
}

/**
 * For A whose principal minors all equal 1: an ordering perm of the indices
 * such that B(i, k) = A(perm[i], perm[k]) is upper unitriangular. Built by
 * repeatedly taking an elementary column of the remaining principal
 * submatrix (diagonal 1, zeros elsewhere), smallest index first.
 */
inline std::vector<std::size_t> prinmin_unitriangularize(const QMPolyMatrix& a) {
    if (auto bad = principal_minor_violation(a)) {
        std::string s;
        for (auto i : *bad) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
        throw Error(ErrorKind::PrincipalMinorNotOne, "principal minor on {" + s + "} is not 1").with_witness(*bad);
    }
    const std::size_t n = a.rows();
    const QMPoly one = QMPoly::constant(Rationals{}, a.zero().nvars(), Rational(1));
    std::vector<std::size_t> rest(n), perm;
    std::iota(rest.begin(), rest.end(), 0);
    while (!rest.empty()) {
        auto it = std::find_if(rest.begin(), rest.end(), [&](std::size_t j) {
            if (!(a(j, j) == one)) return false;
            return std::all_of(rest.begin(), rest.end(), [&](std::size_t k) { return k == j || a(k, j).is_zero(); });
        });
        if (it == rest.end()) fail(ErrorKind::ConsistencyFailure, "no elementary column although all principal minors are 1");
        perm.push_back(*it);
        rest.erase(it);
    }
    return perm;
}

inline std::vector<std::size_t> prinmin_unitriangularize(const QMatrix& a) {
    QMPolyMatrix m(a.rows(), a.cols(), QMPoly(Rationals{}, 0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = QMPoly::constant(Rationals{}, 0, a(i, j));
    return prinmin_unitriangularize(m);
}

template <class T>
Matrix<T> conjugate_by_permutation(const Matrix<T>& a, const std::vector<std::size_t>& perm) {
    return a.submatrix(perm, perm);
}

/// The relabelled map g with g_i = f_{perm[i]} after renaming X_{perm[k]} to X_k.
inline SepMap permute_map(const SepMap& f, const std::vector<std::size_t>& perm) {
    const std::size_t n = f.size();
    SepMap out(n, SepPoly(n));
    for (std::size_t i = 0; i < n; ++i) {
        out[i].constant = f[perm[i]].constant;
        for (std::size_t k = 0; k < n; ++k) out[i].parts[k] = f[perm[i]].parts[perm[k]];
    }
    return out;
}

/// The variable permutation sigma with X_{perm[k]} -> X_k; permute_map(f, perm) = sigma^{-1} o f o sigma.
inline QMap permutation_map(const std::vector<std::size_t>& perm) {
    const std::size_t n = perm.size();
    QMap out(n, QMPoly(Rationals{}, n));
    for (std::size_t k = 0; k < n; ++k) out[perm[k]] = QMPoly::variable(Rationals{}, n, k);
    return out;
}

/// X_i plus a polynomial in later variables without constant or linear terms.
inline bool is_unitriangular(const SepMap& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].constant != 0) return false;
        for (std::size_t k = 0; k < f.size(); ++k) {
            const auto& pk = f[i].parts[k];
            if (k < i && !pk.is_zero()) return false;
            if (k == i && !(pk == QUniPoly::var(Rationals{}))) return false;
            if (k > i && pk.coeff(1) != 0) return false;
        }
    }
    return true;
}

inline QMatrix linear_part(const SepMap& f) {
    check_square(f);
    const std::size_t n = f.size();
    QMatrix out(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = f[i].linear_coeff(j);
    return out;
}

/**
 * For f with identity linear part and det Jf in Q^*: an ordering perm with
 * permute_map(f, perm) unitriangular. A Jacobian that rules this out is
 * reported through its principal minors.
 */
inline std::vector<std::size_t> triangularize_map(const SepMap& f) {
    check_square(f);
    const std::size_t n = f.size();
    const QMatrix l = linear_part(f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (l(i, j) != (i == j ? 1 : 0)) fail(ErrorKind::LinearPartNotIdentity, "linear part is not the identity");
    auto perm = prinmin_unitriangularize(to_mpoly_matrix(sep_jacobian(f)));
    if (!is_unitriangular(permute_map(f, perm)))
        fail(ErrorKind::ConsistencyFailure, "permuted map is not unitriangular");
    return perm;
}

namespace detail {

inline QMatrix q_inverse(const QMatrix& a) {
    const std::size_t n = a.rows();
    QMatrix m = a;
    QMatrix inv = QMatrix::identity(n, Rational(0), Rational(1));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0) ++piv;
        if (piv == n) fail(ErrorKind::JacobianNotConstant, "linear part is singular");
        m.swap_rows(piv, c);
        inv.swap_rows(piv, c);
        const Rational s = Rational(1) / m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) *= s;
            inv(c, j) *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m(r, c) == 0) continue;
            const Rational k = m(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) -= k * m(c, j);
                inv(r, j) -= k * inv(c, j);
            }
        }
    }
    return inv;
}

// L X + c as a map.
inline QMap affine_map(const QMatrix& l, const std::vector<Rational>& c) {
    const std::size_t n = l.rows();
    QMap out;
    for (std::size_t i = 0; i < n; ++i) {
        QMPoly p = QMPoly::constant(Rationals{}, n, c[i]);
        for (std::size_t j = 0; j < n; ++j) p += QMPoly::variable(Rationals{}, n, j).scaled(l(i, j));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

/**
 * Inverse of a map without mixed terms with det Jf in Q^*. The inverse is
 * a general polynomial map: it may contain mixed terms.
 */
inline QMap invert_nomixed(const SepMap& f) {
    check_square(f);
    const std::size_t n = f.size();
    const QMPoly det = sep_det(sep_jacobian(f));
    if (!det.is_constant() || det.is_zero())
        fail(ErrorKind::JacobianNotConstant, "det Jf = " + format_qpoly(det) + " is not a nonzero constant");
    const QMatrix l = linear_part(f);
    const QMatrix l_inv = detail::q_inverse(l);

    // f1 = L^{-1} (f - f(0)) has identity linear part and still no mixed terms
    SepMap f1(n, SepPoly(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (l_inv(i, k) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) f1[i].parts[j] = f1[i].parts[j] + f[k].parts[j].scaled(l_inv(i, k));
        }
    const auto perm = triangularize_map(f1);
    const SepMap g = permute_map(f1, perm);

    // back-substitution: x_i = y_i - s_i(x_{i+1}, ..., x_n)
    QMap g_inv = identity_map(Rationals{}, n);
    for (std::size_t i = n; i-- > 0;) {
        SepPoly s = g[i];
        s.parts[i] = QUniPoly(Rationals{});
        g_inv[i] = QMPoly::variable(Rationals{}, n, i) - substitute(to_mpoly(s), g_inv);
    }

    // f = c + L (sigma g sigma^{-1})  =>  f^{-1} = sigma g^{-1} sigma^{-1} L^{-1} (y - c)
    std::vector<Rational> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = f[i].constant;
    std::vector<Rational> shift(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) shift[i] -= l_inv(i, k) * c[k];
    const QMap sigma = permutation_map(perm);
    std::vector<std::size_t> back(n);
    for (std::size_t k = 0; k < n; ++k) back[perm[k]] = k;
    const QMap sigma_inv = permutation_map(back);
    QMap out = compose(compose(compose(sigma, g_inv), sigma_inv), detail::affine_map(l_inv, shift));
    // f(out(x)) = x at a few fixed rational points; a symbolic round trip is much more expensive
    const QMap fq = to_qmap(f);
    for (int s = 1; s <= 3; ++s) {
        std::vector<Rational> x(n), y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = Rational(static_cast<long long>(s * (i + 2) + 1)) / Rational(s + 1 + static_cast<long long>(i));
        for (std::size_t i = 0; i < n; ++i) y[i] = out[i].evaluate(x);
        for (std::size_t i = 0; i < n; ++i) z[i] = fq[i].evaluate(y);
        if (z != x) fail(ErrorKind::ConsistencyFailure, "inverse failed the round trip");
    }
    return out;
}

/// f_i - a_i X_i involves only X_{i+1}, ..., X_n, with a_i a nonzero constant.
inline bool is_triangular(const QMap& f) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i].nvars() != n) return false;
        Monomial xi(n, 0);
        xi[i] = 1;
        if (f[i].coeff(xi) == 0) return false;
        for (const auto& [m, c] : f[i].terms()) {
            if (m == xi) continue;
            for (std::size_t k = 0; k <= i; ++k)
                if (m[k]) return false;
        }
    }
    return true;
}

struct TriangularLinearization {
    QMap h;                    ///< h^{-1} o f o h = diag(a_1, ..., a_n) X
    QMap h_inv;
    std::vector<QMPoly> shifts;  ///< h = (X_1 - q_1, ...) o ... o (..., X_n - q_n), one q_i per variable
    std::vector<Rational> diagonal;
};

/**
 * Conjugates a triangular map of finite order d to (a_1 X_1, ..., a_n X_n),
 * peeling one variable at a time: with f = (a X_1 + p, g) and
 * f^k = (a^k X_1 + p_k, g^k), the shift q = sum_{k=1}^{d-1} p_k / (d a^k)
 * gives h = (X_1 - q, X_2, ..., X_n) with h^{-1} f h = (a X_1, g).
 */
inline TriangularLinearization linearize_triangular(const QMap& f, std::uint64_t d) {
    const std::size_t n = f.size();
    if (!is_triangular(f)) fail(ErrorKind::NotTriangular, "map is not triangular");
    if (d == 0) fail(ErrorKind::OrderViolated, "order must be positive");
    const QMap id = identity_map(Rationals{}, n);
    QMap power = id;
    for (std::uint64_t k = 0; k < d; ++k) power = compose(power, f);
    if (power != id) fail(ErrorKind::OrderViolated, "f^" + std::to_string(d) + " is not the identity");

    TriangularLinearization out{id, id, {}, {}};
    QMap cur = f;
    for (std::size_t i = 0; i < n; ++i) {
        Monomial xi(n, 0);
        xi[i] = 1;
        const Rational a = cur[i].coeff(xi);
        const QMPoly p = cur[i] - QMPoly::variable(Rationals{}, n, i).scaled(a);
        QMPoly q(Rationals{}, n);
        QMPoly pk = p;
        Rational ak = a;
        for (std::uint64_t k = 1; k < d; ++k) {
            q += pk.scaled(Rational(1) / (Rational(static_cast<long long>(d)) * ak));
            pk = substitute(pk, cur) + p.scaled(ak);
            ak *= a;
        }
        if (!pk.is_zero()) fail(ErrorKind::ConsistencyFailure, "p_d is not zero");
        QMap h = id, h_inv = id;
        h[i] -= q;
        h_inv[i] += q;
        cur = compose(compose(h_inv, cur), h);
        if (!(cur[i] == QMPoly::variable(Rationals{}, n, i).scaled(a)))
            fail(ErrorKind::ConsistencyFailure, "peeling did not isolate the variable");
        out.h = compose(out.h, h);
        out.h_inv = compose(h_inv, out.h_inv);
        out.shifts.push_back(q);
        out.diagonal.push_back(a);
    }
    return out;
}

inline TriangularLinearization linearize_triangular(const SepMap& f, std::uint64_t d) {
    check_square(f);
    return linearize_triangular(to_qmap(f), d);
}

/// Some part equals c X_i with c != 0.
inline bool is_coordinate_nomixed(const SepPoly& f) {
    return std::any_of(f.parts.begin(), f.parts.end(), [](const QUniPoly& p) { return p.degree() == 1; });
}

}  // namespace linq

#pragma once

/**
 * @file linearize.hpp
 * @brief Conjugating a finite-order matrix over F_q[t] to a constant matrix.
 *
 * Pipeline for A with A^d = I and p not dividing d: minimal polynomial g
 * (coefficients in F_q), factorization of g into coprime irreducibles,
 * splitting F_q[t]^n into the kernels of f_i(A), and for each block a
 * conjugation to companion matrices computed over F_q(alpha)[t] for a root
 * alpha of f_i.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "autogroup.hpp"
#include "error.hpp"
#include "factor.hpp"
#include "linmap.hpp"
#include "matq.hpp"

namespace linq {

/// Ones on the subdiagonal, -c_0, ..., -c_{d-1} in the last column.
inline ConstMatrix companion_matrix(const UniPoly& g) {
    if (g.degree() < 1 || !g.is_monic()) fail(ErrorKind::Undefined, "companion matrix needs a monic polynomial of positive degree");
    const Fq& f = g.domain();
    const auto d = static_cast<std::size_t>(g.degree());
    ConstMatrix c(d, d, f.zero());
    for (std::size_t i = 0; i + 1 < d; ++i) c(i + 1, i) = f.one();
    for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = f.neg(g.coeff(i));
    return c;
}

inline PolyMatrix mat_pow(PolyMatrix a, std::uint64_t e) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "matrix power needs a square matrix");
    PolyMatrix r = identity_matrix(detail::matrix_field(a), a.rows());
    while (e) {
        if (e & 1) r = r * a;
        e >>= 1;
        if (e) a = a * a;
    }
    return r;
}

/// g(A) for g with coefficients in the field of A's entries.
inline PolyMatrix poly_at_matrix(const UniPoly& g, const PolyMatrix& a) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "polynomial of a non-square matrix");
    const Fq& f = g.domain();
    PolyMatrix acc = zero_matrix(f, a.rows(), a.cols());
    const auto& c = g.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = acc * a;
        for (std::size_t i = 0; i < a.rows(); ++i) acc(i, i) = acc(i, i) + UniPoly::constant(f, c[k]);
    }
    return acc;
}

inline PolyMatrix block_diagonal(const std::vector<PolyMatrix>& blocks, const Fq& f) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.rows();
    PolyMatrix out = zero_matrix(f, n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return out;
}

namespace detail {

inline void check_order(const PolyMatrix& a, std::uint64_t d) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "finite order needs a square matrix");
    const Fq& f = matrix_field(a);
    if (d == 0) fail(ErrorKind::OrderViolated, "order must be positive");
    if (d % f.p() == 0)
        fail(ErrorKind::CharDividesOrder, "characteristic " + std::to_string(f.p()) + " divides the order " + std::to_string(d));
    if (mat_pow(a, d) != identity_matrix(f, a.rows()))
        fail(ErrorKind::OrderViolated, "A^" + std::to_string(d) + " is not the identity");
}

/// Incremental row echelon form over F_q that remembers how each row was combined.
class RelationFinder {
public:
    RelationFinder(const Fq& f, std::size_t width) : f_(f), width_(width) {}

    /// Adds vector number k; returns the monic relation if it became dependent.
    std::optional<std::vector<FqElem>> add(std::vector<FqElem> v) {
        const std::size_t k = count_++;
        std::vector<FqElem> combo(k + 1, f_.zero());
        combo[k] = f_.one();
        for (auto& row : rows_) row.combo.resize(k + 1, f_.zero());
        for (const auto& row : rows_) {
            const FqElem c = v[row.pivot];
            if (f_.is_zero(c)) continue;
            for (std::size_t j = 0; j < width_; ++j) v[j] = f_.sub(v[j], f_.mul(c, row.v[j]));
            for (std::size_t j = 0; j <= k; ++j) combo[j] = f_.sub(combo[j], f_.mul(c, row.combo[j]));
        }
        std::size_t piv = 0;
        while (piv < width_ && f_.is_zero(v[piv])) ++piv;
        if (piv == width_) return combo;
        const FqElem inv = f_.inv(v[piv]);
        for (auto& x : v) x = f_.mul(x, inv);
        for (auto& x : combo) x = f_.mul(x, inv);
        rows_.push_back({std::move(v), std::move(combo), piv});
        return std::nullopt;
    }

private:
    struct Row {
        std::vector<FqElem> v;
        std::vector<FqElem> combo;
        std::size_t pivot;
    };
    Fq f_;
    std::size_t width_;
    std::size_t count_ = 0;
    std::vector<Row> rows_;
};

/**
 * Coordinates of F_{q^e} over the embedded F_q in the basis 1, alpha, ...,
 * alpha^{e-1}. Works over F_p: the products beta^i alpha^k (beta the image
 * of a) form an F_p-basis of the extension, and one matrix inversion mod p
 * turns code digits into coordinates.
 */
class PowerBasis {
public:
    PowerBasis(const Extension& ext, FqElem alpha) : ext_(ext) {
        const Fq& big = ext.field();
        const Fq& base = ext.base();
        p_ = big.p();
        r_ = base.r();
        e_ = ext.degree();
        const std::size_t dim = r_ * e_;
        // columns: digits of beta^i alpha^k, column index k*r + i
        std::vector<std::vector<std::uint64_t>> m(dim, std::vector<std::uint64_t>(2 * dim, 0));
        FqElem ak = big.one();
        for (std::size_t k = 0; k < e_; ++k) {
            FqElem bi = ak;
            for (std::size_t i = 0; i < r_; ++i) {
                const auto dg = big.coeffs(bi);
                for (std::size_t row = 0; row < dim; ++row) m[row][k * r_ + i] = row < dg.size() ? dg[row] : 0;
                bi = big.mul(bi, ext.beta());
            }
            ak = big.mul(ak, alpha);
        }
        for (std::size_t i = 0; i < dim; ++i) m[i][dim + i] = 1;
        for (std::size_t c = 0; c < dim; ++c) {
            std::size_t piv = c;
            while (piv < dim && m[piv][c] == 0) ++piv;
            if (piv == dim) fail(ErrorKind::ConsistencyFailure, "powers of alpha are not a basis over F_q");
            std::swap(m[piv], m[c]);
            const std::uint64_t inv = detail::powmod(m[c][c], p_ - 2, p_);
            for (auto& x : m[c]) x = detail::mulmod(x, inv, p_);
            for (std::size_t row = 0; row < dim; ++row) {
                if (row == c || m[row][c] == 0) continue;
                const std::uint64_t s = m[row][c];
                for (std::size_t j = 0; j < 2 * dim; ++j)
                    m[row][j] = (m[row][j] + p_ - detail::mulmod(s, m[c][j], p_)) % p_;
            }
        }
        inv_.assign(dim, std::vector<std::uint64_t>(dim));
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) inv_[i][j] = m[i][dim + j];
    }

    std::vector<FqElem> coords(FqElem y) const {
        const std::size_t dim = r_ * e_;
        const auto dg = ext_.field().coeffs(y);
        std::vector<std::uint64_t> u(dim, 0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dg.size() && j < dim; ++j)
                u[i] = (u[i] + detail::mulmod(inv_[i][j], dg[j], p_)) % p_;
        std::vector<FqElem> out;
        out.reserve(e_);
        for (std::size_t k = 0; k < e_; ++k)
            out.push_back(ext_.base().from_coeffs(std::span<const std::uint64_t>(u.data() + k * r_, r_)));
        return out;
    }

private:
    const Extension& ext_;
    std::uint64_t p_ = 2;
    std::size_t r_ = 1;
    std::size_t e_ = 1;
    std::vector<std::vector<std::uint64_t>> inv_;
};

inline PolyMatrix embed_matrix(const Extension& ext, const PolyMatrix& a) {
    PolyMatrix out(a.rows(), a.cols(), UniPoly(ext.field()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = ext.embed(a(i, j));
    return out;
}

inline PolyMatrix columns_to_matrix(const std::vector<std::vector<UniPoly>>& cols, std::size_t n, const Fq& f) {
    PolyMatrix out = zero_matrix(f, n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = cols[j][i];
    return out;
}

}  // namespace detail

/**
 * Minimal polynomial of A, which has coefficients in F_q. The relation is
 * found among I, A, A^2, ... by linear algebra over F_q on the
 * t-coefficients of the entries.
 */
inline UniPoly min_poly(const PolyMatrix& a, std::uint64_t d) {
    detail::check_order(a, d);
    const Fq& f = detail::matrix_field(a);
    const std::size_t n = a.rows();
    std::vector<PolyMatrix> powers{identity_matrix(f, n)};
    for (std::size_t k = 1; k <= n; ++k) powers.push_back(powers.back() * a);
    int maxdeg = 0;
    for (const auto& m : powers)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) maxdeg = std::max(maxdeg, m(i, j).degree());
    const std::size_t stride = static_cast<std::size_t>(maxdeg) + 1;
    detail::RelationFinder rf(f, n * n * stride);
    for (const auto& m : powers) {
        std::vector<FqElem> v(n * n * stride, f.zero());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto& c = m(i, j).coeffs();
                for (std::size_t k = 0; k < c.size(); ++k) v[(i * n + j) * stride + k] = c[k];
            }
        if (auto rel = rf.add(std::move(v))) {
            UniPoly g(f, std::move(*rel));
            UniPoly xd1 = UniPoly::monomial(f, f.one(), static_cast<std::size_t>(d)) - UniPoly::one(f);
            if (!divides(g, xd1)) fail(ErrorKind::ConsistencyFailure, "minimal polynomial does not divide X^d - 1");
            return g;
        }
    }
    fail(ErrorKind::ConsistencyFailure, "no relation among I, A, ..., A^n");
}

struct SplitBlock {
    UniPoly f;      ///< monic irreducible in X
    PolyMatrix a;   ///< restriction of A to Ker f(A)
};

struct CoprimeSplit {
    PolyMatrix P;                   ///< unimodular; P^{-1} A P = diag(blocks)
    PolyMatrix P_inv;
    std::vector<SplitBlock> blocks;
};

/// Splits F_q[t]^n into Ker f_1(A) + ... + Ker f_r(A) for the irreducible factors f_i of f.
inline CoprimeSplit coprime_split(const PolyMatrix& a, const UniPoly& f, std::uint64_t seed = 1) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "coprime_split needs a square matrix");
    const Fq& field = detail::matrix_field(a);
    if (!(f.domain() == field)) fail(ErrorKind::FieldMismatch, "annihilator and matrix live over different fields");
    const std::size_t n = a.rows();
    if (poly_at_matrix(f, a) != zero_matrix(field, n, n)) fail(ErrorKind::Undefined, "f(A) is not zero");
    const auto factors = factor_squarefree(f, seed);
    CoprimeSplit out;
    if (factors.size() == 1) {
        out.P = out.P_inv = identity_matrix(field, n);
        out.blocks.push_back({factors[0], a});
        return out;
    }
    std::vector<std::vector<UniPoly>> cols;
    std::vector<std::size_t> sizes;
    for (const auto& fi : factors) {
        auto basis = kernel_basis(poly_at_matrix(fi, a));
        sizes.push_back(basis.size());
        for (auto& v : basis) cols.push_back(std::move(v));
    }
    if (cols.size() != n) fail(ErrorKind::ConsistencyFailure, "kernel ranks do not add up to n");
    out.P = detail::columns_to_matrix(cols, n, field);
    out.P_inv = inverse_unimodular(out.P);
    const PolyMatrix conj = out.P_inv * a * out.P;
    std::size_t off = 0;
    for (std::size_t b = 0; b < factors.size(); ++b) {
        std::vector<std::size_t> idx(sizes[b]);
        for (std::size_t k = 0; k < sizes[b]; ++k) idx[k] = off + k;
        out.blocks.push_back({factors[b], conj.submatrix(idx, idx)});
        off += sizes[b];
    }
    if (block_diagonal([&] {
            std::vector<PolyMatrix> bs;
            for (const auto& b : out.blocks) bs.push_back(b.a);
            return bs;
        }(), field) != conj)
        fail(ErrorKind::ConsistencyFailure, "kernels are not A-invariant");
    return out;
}

struct IrreducibleConjugation {
    PolyMatrix D;      ///< D A D^{-1} = diag(C, ..., C), C the companion matrix of g
    PolyMatrix D_inv;
    std::uint64_t alpha_code = 0;  ///< root of g used, as an element code of F_{q^deg g}
};

/**
 * Conjugates A with irreducible separable minimal polynomial g to copies of
 * the companion matrix of g. With alpha the smallest root of g in
 * F_{q^e}, e = deg g, a basis of Ker(A - alpha I) gives B with AB = alpha B;
 * writing B = D E_alpha coefficientwise in 1, alpha, ..., alpha^{e-1} gives a
 * unimodular D over F_q[t] with D^{-1} A D = diag(C^T, ...). A constant
 * Krylov matrix then turns C^T into C.
 */
inline IrreducibleConjugation conjugate_irreducible(const PolyMatrix& a, const UniPoly& g) {
    if (!a.is_square()) fail(ErrorKind::DimensionMismatch, "conjugate_irreducible needs a square matrix");
    const Fq& f = detail::matrix_field(a);
    if (!(g.domain() == f)) fail(ErrorKind::FieldMismatch, "g and A live over different fields");
    if (!g.is_monic() || !is_irreducible(g)) fail(ErrorKind::NotIrreducible, "g is not a monic irreducible polynomial");
    const std::size_t n = a.rows();
    const auto e = static_cast<std::size_t>(g.degree());
    if (n % e != 0) fail(ErrorKind::ConsistencyFailure, "deg g does not divide n");
    const std::size_t m = n / e;

    const Extension ext(f, static_cast<unsigned>(e));
    const Fq& big = ext.field();
    const auto rs = roots(ext.embed(g));
    if (rs.empty()) fail(ErrorKind::ConsistencyFailure, "g has no root in its splitting field");
    const FqElem alpha = rs.front();

    PolyMatrix shifted = detail::embed_matrix(ext, a);
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) = shifted(i, i) - UniPoly::constant(big, alpha);
    const auto kern = kernel_basis(shifted);
    if (kern.size() != m)
        fail(ErrorKind::ConsistencyFailure, "Ker(A - alpha I) has rank " + std::to_string(kern.size()) + ", expected " + std::to_string(m));

    // D(i, j e + k) = alpha^k-coordinate of B(i, j), coefficientwise in t
    const detail::PowerBasis basis(ext, alpha);
    PolyMatrix D = zero_matrix(f, n, n);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = kern[j][i].coeffs();
            std::vector<std::vector<FqElem>> parts(e, std::vector<FqElem>(c.size(), f.zero()));
            for (std::size_t deg = 0; deg < c.size(); ++deg) {
                const auto co = basis.coords(c[deg]);
                for (std::size_t k = 0; k < e; ++k) parts[k][deg] = co[k];
            }
            for (std::size_t k = 0; k < e; ++k) D(i, j * e + k) = UniPoly(f, std::move(parts[k]));
        }
    if (!is_unimodular(D)) fail(ErrorKind::ConsistencyFailure, "coordinate matrix of the kernel basis is not unimodular");
    const PolyMatrix D_inv = inverse_unimodular(D);

    // Krylov matrix K = [e_0, C^T e_0, ...] satisfies K^{-1} C^T K = C
    const ConstMatrix ct = companion_matrix(g).transpose();
    ConstMatrix krylov(e, e, f.zero());
    std::vector<FqElem> v(e, f.zero());
    v[0] = f.one();
    for (std::size_t k = 0; k < e; ++k) {
        for (std::size_t i = 0; i < e; ++i) krylov(i, k) = v[i];
        std::vector<FqElem> w(e, f.zero());
        for (std::size_t i = 0; i < e; ++i)
            for (std::size_t j = 0; j < e; ++j) w[i] = f.add(w[i], f.mul(ct(i, j), v[j]));
        v = std::move(w);
    }
    const PolyMatrix K = lift(krylov, f);
    const PolyMatrix K_inv = inverse_unimodular(K);
    const PolyMatrix Kd = block_diagonal(std::vector<PolyMatrix>(m, K), f);
    const PolyMatrix Kd_inv = block_diagonal(std::vector<PolyMatrix>(m, K_inv), f);

    IrreducibleConjugation out;
    out.D = Kd_inv * D_inv;
    out.D_inv = D * Kd;
    out.alpha_code = alpha.code;
    const PolyMatrix target = block_diagonal(std::vector<PolyMatrix>(m, lift(companion_matrix(g), f)), f);
    if (out.D * a * out.D_inv != target) fail(ErrorKind::ConsistencyFailure, "conjugation did not reach the companion form");
    return out;
}

struct ConjugationCertificate {
    PolyMatrix B;          ///< unimodular
    PolyMatrix B_inv;
    ConstMatrix constant;  ///< B^{-1} A B
    std::uint64_t order = 1;
};

/// Checks a certificate against A by multiplication only.
inline bool verify_certificate(const PolyMatrix& a, const ConjugationCertificate& c) {
    const Fq& f = detail::matrix_field(a);
    const std::size_t n = a.rows();
    if (!is_unimodular(c.B)) return false;
    if (c.B * c.B_inv != identity_matrix(f, n)) return false;
    const PolyMatrix conj = c.B_inv * a * c.B;
    if (!is_constant_matrix(conj) || conj != lift(c.constant, f)) return false;
    return mat_pow(conj, c.order) == identity_matrix(f, n);
}

inline ConjugationCertificate linearize_matrix(const PolyMatrix& a, std::uint64_t d, std::uint64_t seed = 1) {
    const UniPoly g = min_poly(a, d);
    const Fq& f = detail::matrix_field(a);
    ConjugationCertificate out;
    out.order = d;
    if (is_constant_matrix(a)) {
        out.B = out.B_inv = identity_matrix(f, a.rows());
        out.constant = constant_part(a);
        return out;
    }
    const CoprimeSplit split = coprime_split(a, g, seed);
    std::vector<PolyMatrix> q, q_inv;
    for (const auto& blk : split.blocks) {
        const auto c = conjugate_irreducible(blk.a, blk.f);
        q.push_back(c.D_inv);
        q_inv.push_back(c.D);
    }
    out.B = split.P * block_diagonal(q, f);
    out.B_inv = block_diagonal(q_inv, f) * split.P_inv;
    out.constant = constant_part(out.B_inv * a * out.B);
    if (!verify_certificate(a, out)) fail(ErrorKind::ConsistencyFailure, "certificate failed verification");
    return out;
}

struct LinearizedMap {
    LinMap g;                 ///< automorphism with g^{-1} o f o g linear
    ConstMatrix linear_part;  ///< matrix of g^{-1} o f o g
};

inline LinearizedMap linearize_map(const LinMap& f, std::uint64_t d, std::uint64_t seed = 1) {
    if (f.ncomponents() != f.nvars()) fail(ErrorKind::DimensionMismatch, "finite order needs as many components as variables");
    if (d == 0) fail(ErrorKind::OrderViolated, "order must be positive");
    if (d % f.field.p() == 0)
        fail(ErrorKind::CharDividesOrder, "characteristic " + std::to_string(f.field.p()) + " divides the order " + std::to_string(d));
    LinMap power = identity_map(f.field, f.nvars());
    for (std::uint64_t k = 0; k < d; ++k) power = compose_matrix(power, f);
    if (power != identity_map(f.field, f.nvars())) fail(ErrorKind::OrderViolated, "f^" + std::to_string(d) + " is not the identity");
    const auto cert = linearize_matrix(f.jq, d, seed);
    return {from_matrix(cert.B), cert.constant};
}

}  // namespace linq

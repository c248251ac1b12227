#pragma once

// Generators and brute-force oracles for maps without mixed terms over Q.

#include <linq/separated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

namespace linq::testing {

inline Rational small_rational(std::mt19937_64& rng, bool nonzero = false) {
    for (;;) {
        const auto num = static_cast<long long>(rng() % 7) - 3;
        const auto den = static_cast<long long>(1 + rng() % 3);
        if (!nonzero || num != 0) return Rational(num) / Rational(den);
    }
}

inline std::vector<std::size_t> random_perm(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline std::vector<std::size_t> inverse_perm(const std::vector<std::size_t>& p) {
    std::vector<std::size_t> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) q[p[k]] = k;
    return q;
}

// X_i plus terms of degree 2..max_deg in later variables.
inline SepMap random_unitriangular_map(std::size_t n, std::mt19937_64& rng, std::size_t max_deg = 3) {
    SepMap g = sep_identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            if (rng() % 2) continue;
            std::vector<Rational> c(max_deg + 1, Rational(0));
            for (std::size_t e = 2; e <= max_deg; ++e) c[e] = small_rational(rng);
            g[i].parts[k] = QUniPoly(Rationals{}, std::move(c));
        }
    return g;
}

// c + L f as a map without mixed terms.
inline SepMap affine_combination(const QMatrix& l, const SepMap& f, const std::vector<Rational>& c) {
    const std::size_t n = f.size();
    SepMap out(n, SepPoly(n));
    for (std::size_t i = 0; i < n; ++i) {
        out[i].constant = c[i];
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i].parts[j] = out[i].parts[j] + f[k].parts[j].scaled(l(i, k));
    }
    return out;
}

inline QMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
    // unit lower times upper with nonzero diagonal, rows permuted
    QMatrix lo = QMatrix::identity(n, Rational(0), Rational(1)), up = lo;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j < i) lo(i, j) = small_rational(rng);
            if (j > i) up(i, j) = small_rational(rng);
            if (j == i) up(i, i) = small_rational(rng, true);
        }
    QMatrix m = lo * up;
    if (n > 1) m.swap_rows(0, rng() % n);
    return m;
}

inline bool is_upper_unitriangular(const QMPolyMatrix& b) {
    const QMPoly one = QMPoly::constant(Rationals{}, b.zero().nvars(), Rational(1));
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j && !(b(i, j) == one)) return false;
            if (i != j && !b(i, j).is_zero()) return false;
        }
    return true;
}

inline QMPolyMatrix constants(const QMatrix& a) {
    QMPolyMatrix m(a.rows(), a.cols(), QMPoly(Rationals{}, 0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = QMPoly::constant(Rationals{}, 0, a(i, j));
    return m;
}

// Oracle: try all n! orderings.
inline bool some_permutation_unitriangularizes(const QMPolyMatrix& a) {
    std::vector<std::size_t> p(a.rows());
    std::iota(p.begin(), p.end(), 0);
    do {
        if (is_upper_unitriangular(a.submatrix(p, p))) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

}  // namespace linq::testing

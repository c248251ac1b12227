#pragma once

/**
 * @file factor.hpp
 * @brief Factorization of squarefree polynomials over F_q, root finding,
 *        and extension fields F_{q^e} with an explicit embedding of F_q.
 *
 * Factorization is distinct-degree splitting followed by randomized
 * equal-degree splitting (Cantor-Zassenhaus). The random source is a
 * caller-seeded mt19937_64; the returned factor list is sorted, so the
 * result does not depend on the seed.
 */

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "poly.hpp"

namespace linq {

namespace detail {

inline bool poly_less(const UniPoly& a, const UniPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (std::size_t k = ca.size(); k-- > 0;)
        if (ca[k] != cb[k]) return ca[k] < cb[k];
    return false;
}

inline UniPoly random_poly_below(const Fq& f, int deg_bound, std::mt19937_64& rng) {
    std::vector<FqElem> c(static_cast<std::size_t>(deg_bound));
    for (auto& x : c) x = FqElem{rng() % f.q()};
    return UniPoly(f, std::move(c));
}

// Splits g, a product of distinct monic irreducibles all of degree d.
inline void equal_degree_split(const UniPoly& g, int d, std::mt19937_64& rng, std::vector<UniPoly>& out) {
    if (g.degree() == d) {
        out.push_back(g.monic());
        return;
    }
    const Fq& f = g.domain();
    const UniPoly one = UniPoly::one(f);
    for (;;) {
        UniPoly a = random_poly_below(f, g.degree(), rng);
        if (a.degree() < 1) continue;
        UniPoly b(f);
        if (f.p() == 2) {
            // absolute trace F_{q^d} -> F_2 of a: sum of a^{2^j}, j < r*d
            UniPoly term = a % g;
            b = term;
            const std::uint64_t steps = static_cast<std::uint64_t>(f.r()) * static_cast<std::uint64_t>(d);
            for (std::uint64_t j = 1; j < steps; ++j) {
                term = (term * term) % g;
                b = b + term;
            }
        } else {
            // a^{(q^d-1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
            UniPoly norm = one;
            UniPoly cur = a % g;
            for (int i = 0; i < d; ++i) {
                norm = (norm * cur) % g;
                if (i + 1 < d) cur = powmod(cur, f.q(), g);
            }
            b = powmod(norm, (f.q() - 1) / 2, g) - one;
        }
        if (b.is_zero()) continue;
        UniPoly h = gcd(g, b);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree_split(h, d, rng, out);
            equal_degree_split(g / h, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

inline bool is_squarefree(const UniPoly& f) {
    if (f.is_zero()) return false;
    if (f.degree() == 0) return true;
    return gcd(f, f.derivative()).is_one();
}

/**
 * Distinct monic irreducible factors of a monic squarefree f, sorted by
 * degree and then by coefficient codes from the top.
 */
inline std::vector<UniPoly> factor_squarefree(const UniPoly& f, std::uint64_t seed) {
    if (f.is_zero()) fail(ErrorKind::Undefined, "cannot factor the zero polynomial");
    if (!f.is_monic()) fail(ErrorKind::Undefined, "factor_squarefree expects a monic polynomial");
    if (!is_squarefree(f)) fail(ErrorKind::NotSquarefree, "input is not squarefree (gcd(f, f') != 1)");
    const Fq& field = f.domain();
    std::mt19937_64 rng(seed);
    std::vector<UniPoly> out;
    const UniPoly x = UniPoly::var(field);
    UniPoly rest = f;
    UniPoly h = x;
    for (int i = 1; rest.degree() >= 2 * i; ++i) {
        h = powmod(h, field.q(), rest);
        UniPoly g = gcd(rest, h - x);
        if (g.degree() > 0) {
            detail::equal_degree_split(g, i, rng, out);
            rest = rest / g;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) out.push_back(rest.monic());
    std::sort(out.begin(), out.end(), detail::poly_less);
    return out;
}

/// Ben-Or irreducibility test over F_q.
inline bool is_irreducible(const UniPoly& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const Fq& field = f.domain();
    const UniPoly g = f.monic();
    const UniPoly x = UniPoly::var(field);
    UniPoly h = x;
    for (int i = 1; i <= g.degree() / 2; ++i) {
        h = powmod(h, field.q(), g);
        if (!gcd(g, h - x).is_one()) return false;
    }
    return true;
}

/// Distinct roots of f in its coefficient field, in element enumeration order.
inline std::vector<FqElem> roots(const UniPoly& f) {
    if (f.is_zero()) fail(ErrorKind::Undefined, "every element is a root of the zero polynomial");
    if (f.degree() < 1) return {};
    const Fq& field = f.domain();
    const UniPoly x = UniPoly::var(field);
    const UniPoly g = gcd(f, powmod(x, field.q(), f.monic()) - x);
    std::vector<FqElem> out;
    if (g.degree() < 1) return out;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::vector<UniPoly> lin;
    detail::equal_degree_split(g, 1, rng, lin);
    for (const auto& l : lin) out.push_back(field.neg(l.coeff(0)));
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * F_{q^e} built over the same prime with degree r*e and the default modulus,
 * together with the embedding F_q -> F_{q^e} that sends a to the smallest
 * root (in element enumeration order) of the modulus of F_q.
 */
class Extension {
public:
    Extension(const Fq& base, unsigned degree) : base_(base), degree_(degree) {
        if (degree == 0) fail(ErrorKind::InvalidModulus, "extension degree must be positive");
        big_ = Fq::make(base.p(), base.r() * degree);
        if (degree == 1 && big_ == base_) {
            beta_ = base.gen();
        } else if (base.r() == 1) {
            beta_ = big_.zero();
        } else {
            std::vector<FqElem> m;
            for (auto c : base.modulus()) m.push_back(big_.from_int(static_cast<std::int64_t>(c)));
            const auto rs = roots(UniPoly(big_, std::move(m)));
            if (rs.empty()) fail(ErrorKind::ConsistencyFailure, "modulus of the base field has no root in the extension");
            beta_ = rs.front();
        }
        beta_pows_.push_back(big_.one());
        for (unsigned i = 1; i < base.r(); ++i) beta_pows_.push_back(big_.mul(beta_pows_.back(), beta_));
    }

    const Fq& base() const noexcept { return base_; }
    const Fq& field() const noexcept { return big_; }
    unsigned degree() const noexcept { return degree_; }
    /// Image of the base generator a.
    FqElem beta() const noexcept { return beta_; }

    FqElem embed(FqElem x) const {
        if (base_.r() == 1) return big_.from_int(static_cast<std::int64_t>(x.code));
        const auto c = base_.coeffs(x);
        FqElem acc = big_.zero();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i]) acc = big_.add(acc, big_.mul(big_.from_int(static_cast<std::int64_t>(c[i])), beta_pows_[i]));
        return acc;
    }

    UniPoly embed(const UniPoly& f) const {
        std::vector<FqElem> c;
        c.reserve(f.coeffs().size());
        for (auto x : f.coeffs()) c.push_back(embed(x));
        return UniPoly(big_, std::move(c));
    }

private:
    Fq base_;
    Fq big_;
    unsigned degree_;
    FqElem beta_{};
    std::vector<FqElem> beta_pows_;
};

}  // namespace linq

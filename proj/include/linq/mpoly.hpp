#pragma once

/**
 * @file mpoly.hpp
 * @brief Sparse multivariate polynomials over a coefficient domain.
 *
 * Used for expanded linearized polynomials (the composition oracle),
 * for parsing, and for the characteristic-zero maps, whose inverses can
 * acquire mixed terms.
 */

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "poly.hpp"

namespace linq {

using Monomial = std::vector<std::uint64_t>;

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) fail(ErrorKind::Overflow, "exponent overflow");
    return a + b;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) fail(ErrorKind::Overflow, "exponent overflow");
    return a * b;
}

template <CoefficientDomain D>
class MPoly {
public:
    using elem = typename D::element;
    using Terms = std::map<Monomial, elem>;

    MPoly() = default;
    MPoly(D dom, std::size_t nvars) : dom_(std::move(dom)), n_(nvars) {}

    static MPoly constant(const D& dom, std::size_t nvars, const elem& c) {
        MPoly p(dom, nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }
    static MPoly variable(const D& dom, std::size_t nvars, std::size_t i, std::uint64_t exponent = 1) {
        MPoly p(dom, nvars);
        Monomial m(nvars, 0);
        m.at(i) = exponent;
        p.add_term(std::move(m), dom.one());
        return p;
    }

    const D& domain() const noexcept { return dom_; }
    std::size_t nvars() const noexcept { return n_; }
    const Terms& terms() const noexcept { return t_; }
    bool is_zero() const noexcept { return t_.empty(); }
    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && is_constant_monomial(t_.begin()->first));
    }
    elem constant_term() const {
        auto it = t_.find(Monomial(n_, 0));
        return it == t_.end() ? dom_.zero() : it->second;
    }
    elem coeff(const Monomial& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? dom_.zero() : it->second;
    }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (const auto& [m, c] : t_) {
            std::uint64_t s = 0;
            for (auto e : m) s = checked_add(s, e);
            d = std::max(d, s);
        }
        return d;
    }

    /// Number of distinct variables occurring in the monomial.
    static std::size_t support_size(const Monomial& m) {
        std::size_t k = 0;
        for (auto e : m) k += e != 0;
        return k;
    }
    static bool is_constant_monomial(const Monomial& m) { return support_size(m) == 0; }

    void add_term(Monomial m, const elem& c) {
        if (m.size() != n_) fail(ErrorKind::DimensionMismatch, "monomial arity differs from polynomial arity");
        if (dom_.is_zero(c)) return;
        auto [it, inserted] = t_.try_emplace(std::move(m), c);
        if (!inserted) {
            it->second = dom_.add(it->second, c);
            if (dom_.is_zero(it->second)) t_.erase(it);
        }
    }

    MPoly operator-() const {
        MPoly r(dom_, n_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, dom_.neg(c));
        return r;
    }

    MPoly scaled(const elem& s) const {
        MPoly r(dom_, n_);
        if (dom_.is_zero(s)) return r;
        for (const auto& [m, c] : t_) r.add_term(m, dom_.mul(c, s));
        return r;
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        a.check_same(b);
        MPoly r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        a.check_same(b);
        MPoly r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, a.dom_.neg(c));
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check_same(b);
        MPoly r(a.dom_, a.n_);
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                Monomial m(a.n_);
                for (std::size_t i = 0; i < a.n_; ++i) m[i] = checked_add(ma[i], mb[i]);
                r.add_term(std::move(m), a.dom_.mul(ca, cb));
            }
        return r;
    }
    MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
    MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        if (a.n_ != b.n_ || !(a.dom_ == b.dom_) || a.t_.size() != b.t_.size()) return false;
        auto ib = b.t_.begin();
        for (const auto& [m, c] : a.t_) {
            if (m != ib->first || !a.dom_.eq(c, ib->second)) return false;
            ++ib;
        }
        return true;
    }

    MPoly pow(std::uint64_t e) const {
        MPoly r = constant(dom_, n_, dom_.one());
        MPoly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    /// Partial derivative with respect to variable i.
    MPoly derivative(std::size_t i) const {
        MPoly r(dom_, n_);
        for (const auto& [m, c] : t_) {
            if (m[i] == 0) continue;
            Monomial mm = m;
            --mm[i];
            elem k = dom_.zero();
            elem acc = dom_.one();
            for (std::uint64_t e = m[i]; e; e >>= 1) {
                if (e & 1) k = dom_.add(k, acc);
                acc = dom_.add(acc, acc);
            }
            r.add_term(std::move(mm), dom_.mul(k, c));
        }
        return r;
    }

    /// Value at a point of D^n.
    elem evaluate(const std::vector<elem>& x) const {
        if (x.size() != n_) fail(ErrorKind::DimensionMismatch, "evaluation point has wrong arity");
        elem acc = dom_.zero();
        for (const auto& [m, c] : t_) {
            elem v = c;
            for (std::size_t i = 0; i < n_; ++i) {
                elem b = x[i];
                for (std::uint64_t e = m[i]; e; e >>= 1) {
                    if (e & 1) v = dom_.mul(v, b);
                    b = dom_.mul(b, b);
                }
            }
            acc = dom_.add(acc, v);
        }
        return acc;
    }

    void check_same(const MPoly& o) const {
        if (n_ != o.n_) fail(ErrorKind::DimensionMismatch, "polynomials in different numbers of variables");
        if (!(dom_ == o.dom_)) fail(ErrorKind::FieldMismatch, "polynomials over different coefficient domains");
    }

private:
    D dom_{};
    std::size_t n_ = 0;
    Terms t_;
};

/// A polynomial map: one MPoly per component, all in the same variables.
template <class D>
using PolyMap = std::vector<MPoly<D>>;

/**
 * Substitution f(g_1, ..., g_n). Powers of each g_j are cached, so this
 * is brute-force expansion with memoized repeated multiplication.
 */
template <class D>
MPoly<D> substitute(const MPoly<D>& f, const PolyMap<D>& g) {
    if (g.size() != f.nvars()) fail(ErrorKind::DimensionMismatch, "substitution needs one polynomial per variable");
    const std::size_t out_n = g.empty() ? 0 : g.front().nvars();
    const auto& dom = f.domain();
    std::vector<std::map<std::uint64_t, MPoly<D>>> cache(g.size());
    auto power = [&](std::size_t j, std::uint64_t e) -> const MPoly<D>& {
        auto it = cache[j].find(e);
        if (it != cache[j].end()) return it->second;
        MPoly<D> v = g[j].pow(e);
        return cache[j].emplace(e, std::move(v)).first->second;
    };
    MPoly<D> out(dom, out_n);
    for (const auto& [m, c] : f.terms()) {
        MPoly<D> term = MPoly<D>::constant(dom, out_n, c);
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[j]) term = term * power(j, m[j]);
        out += term;
    }
    return out;
}

/// (f o g)_i = f_i(g).
template <class D>
PolyMap<D> compose(const PolyMap<D>& f, const PolyMap<D>& g) {
    PolyMap<D> out;
    out.reserve(f.size());
    for (const auto& fi : f) out.push_back(substitute(fi, g));
    return out;
}

template <class D>
PolyMap<D> identity_map(const D& dom, std::size_t n) {
    PolyMap<D> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(MPoly<D>::variable(dom, n, i));
    return out;
}

/// A univariate polynomial placed in variable i of an n-variable ring.
template <class D>
MPoly<D> in_variable(const Poly<D>& f, std::size_t n, std::size_t i) {
    MPoly<D> out(f.domain(), n);
    const auto& c = f.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
        Monomial m(n, 0);
        m[i] = k;
        out.add_term(std::move(m), c[k]);
    }
    return out;
}

}  // namespace linq

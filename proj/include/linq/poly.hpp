#pragma once

/**
 * @file poly.hpp
 * @brief Dense univariate polynomials over an exact coefficient domain.
 *
 * Poly<D> is F_q[t] when D = Fq and Q[X] when D = Rationals. A coefficient
 * domain is a small value object that knows how to add, multiply and
 * invert its elements; the polynomial stores a copy of it, so every Poly
 * carries its own field.
 */

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"

namespace linq {

template <class D>
concept CoefficientDomain = requires(const D& d, const typename D::element& a) {
    { d.zero() } -> std::convertible_to<typename D::element>;
    { d.one() } -> std::convertible_to<typename D::element>;
    { d.add(a, a) } -> std::convertible_to<typename D::element>;
    { d.sub(a, a) } -> std::convertible_to<typename D::element>;
    { d.mul(a, a) } -> std::convertible_to<typename D::element>;
    { d.neg(a) } -> std::convertible_to<typename D::element>;
    { d.inv(a) } -> std::convertible_to<typename D::element>;
    { d.is_zero(a) } -> std::convertible_to<bool>;
    { d.eq(a, a) } -> std::convertible_to<bool>;
    { d == d } -> std::convertible_to<bool>;
};

template <CoefficientDomain D>
class Poly {
public:
    using domain_type = D;
    using elem = typename D::element;

    /// Degree reported for the zero polynomial; every real degree is >= 0.
    static constexpr int kDegreeOfZero = -1;

    Poly() = default;
    explicit Poly(D dom) : dom_(std::move(dom)) {}
    Poly(D dom, std::vector<elem> coeffs) : dom_(std::move(dom)), c_(std::move(coeffs)) { normalize(); }

    static Poly constant(const D& dom, const elem& c) { return Poly(dom, {c}); }
    static Poly one(const D& dom) { return Poly(dom, {dom.one()}); }
    static Poly monomial(const D& dom, const elem& c, std::size_t k) {
        std::vector<elem> v(k + 1, dom.zero());
        v[k] = c;
        return Poly(dom, std::move(v));
    }
    /// The indeterminate itself.
    static Poly var(const D& dom) { return monomial(dom, dom.one(), 1); }

    const D& domain() const noexcept { return dom_; }
    const std::vector<elem>& coeffs() const noexcept { return c_; }

    int degree() const noexcept { return c_.empty() ? kDegreeOfZero : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    /// Nonzero constant, i.e. a unit of the polynomial ring over a field.
    bool is_unit() const noexcept { return c_.size() == 1; }
    bool is_one() const { return c_.size() == 1 && dom_.eq(c_[0], dom_.one()); }
    bool is_monic() const { return !c_.empty() && dom_.eq(c_.back(), dom_.one()); }

    elem coeff(std::size_t k) const { return k < c_.size() ? c_[k] : dom_.zero(); }
    elem leading() const { return c_.empty() ? dom_.zero() : c_.back(); }

    void set_coeff(std::size_t k, const elem& v) {
        if (k >= c_.size()) c_.resize(k + 1, dom_.zero());
        c_[k] = v;
        normalize();
    }

    Poly monic() const {
        if (c_.empty()) return *this;
        return scaled(dom_.inv(c_.back()));
    }

    Poly scaled(const elem& s) const {
        std::vector<elem> v(c_);
        for (auto& x : v) x = dom_.mul(x, s);
        return Poly(dom_, std::move(v));
    }

    /// Multiplication by var^k.
    Poly shifted(std::size_t k) const {
        if (c_.empty()) return *this;
        std::vector<elem> v(k, dom_.zero());
        v.insert(v.end(), c_.begin(), c_.end());
        return Poly(dom_, std::move(v));
    }

    Poly derivative() const {
        std::vector<elem> v;
        for (std::size_t k = 1; k < c_.size(); ++k) {
            // k as a domain element, by doubling; works in any characteristic.
            elem kk = dom_.zero();
            elem acc = dom_.one();
            std::size_t n = k;
            while (n) {
                if (n & 1) kk = dom_.add(kk, acc);
                acc = dom_.add(acc, acc);
                n >>= 1;
            }
            v.push_back(dom_.mul(kk, c_[k]));
        }
        return Poly(dom_, std::move(v));
    }

    /// Horner evaluation at a domain element.
    elem eval(const elem& x) const {
        elem acc = dom_.zero();
        for (std::size_t k = c_.size(); k-- > 0;) acc = dom_.add(dom_.mul(acc, x), c_[k]);
        return acc;
    }

    Poly operator-() const {
        std::vector<elem> v(c_);
        for (auto& x : v) x = dom_.neg(x);
        return Poly(dom_, std::move(v));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        a.check_same(b);
        const auto& dom = a.dom_;
        std::vector<elem> v(std::max(a.c_.size(), b.c_.size()), dom.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = dom.add(v[i], b.c_[i]);
        return Poly(dom, std::move(v));
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        a.check_same(b);
        const auto& dom = a.dom_;
        std::vector<elem> v(std::max(a.c_.size(), b.c_.size()), dom.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = dom.sub(v[i], b.c_[i]);
        return Poly(dom, std::move(v));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_same(b);
        const auto& dom = a.dom_;
        if (a.c_.empty() || b.c_.empty()) return Poly(dom);
        std::vector<elem> v(a.c_.size() + b.c_.size() - 1, dom.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (dom.is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = dom.add(v[i + j], dom.mul(a.c_[i], b.c_[j]));
        }
        return Poly(dom, std::move(v));
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (!(a.dom_ == b.dom_) || a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!a.dom_.eq(a.c_[i], b.c_[i])) return false;
        return true;
    }

    void check_same(const Poly& o) const {
        if (!(dom_ == o.dom_)) fail(ErrorKind::FieldMismatch, "polynomials over different coefficient domains");
    }

private:
    void normalize() {
        while (!c_.empty() && dom_.is_zero(c_.back())) c_.pop_back();
    }

    D dom_{};
    std::vector<elem> c_;
};

using UniPoly = Poly<Fq>;

/// Quotient and remainder; deg(remainder) < deg(divisor).
template <class D>
std::pair<Poly<D>, Poly<D>> divmod(const Poly<D>& f, const Poly<D>& g) {
    f.check_same(g);
    if (g.is_zero()) fail(ErrorKind::DivisionByZero, "division by the zero polynomial");
    const auto& dom = f.domain();
    using elem = typename D::element;
    std::vector<elem> r(f.coeffs());
    const int dg = g.degree();
    if (static_cast<int>(r.size()) - 1 < dg) return {Poly<D>(dom), f};
    std::vector<elem> quo(r.size() - static_cast<std::size_t>(dg), dom.zero());
    const elem lead_inv = dom.inv(g.leading());
    const auto& gc = g.coeffs();
    for (std::size_t k = quo.size(); k-- > 0;) {
        const elem c = dom.mul(r[k + static_cast<std::size_t>(dg)], lead_inv);
        quo[k] = c;
        if (dom.is_zero(c)) continue;
        for (std::size_t i = 0; i < gc.size(); ++i) r[k + i] = dom.sub(r[k + i], dom.mul(c, gc[i]));
    }
    r.resize(static_cast<std::size_t>(dg));
    return {Poly<D>(dom, std::move(quo)), Poly<D>(dom, std::move(r))};
}

template <class D>
Poly<D> operator/(const Poly<D>& f, const Poly<D>& g) {
    return divmod(f, g).first;
}

template <class D>
Poly<D> operator%(const Poly<D>& f, const Poly<D>& g) {
    return divmod(f, g).second;
}

template <class D>
bool divides(const Poly<D>& d, const Poly<D>& f) {
    if (d.is_zero()) return f.is_zero();
    return (f % d).is_zero();
}

template <class D>
struct GcdExt {
    Poly<D> d;  ///< monic gcd
    Poly<D> u;
    Poly<D> v;  ///< d = u*f + v*g
};

/**
 * Extended Euclid. The gcd is normalized monic and the normalizing unit is
 * folded into the cofactors, so d = u f + v g holds exactly.
 */
template <class D>
GcdExt<D> gcd_ext(const Poly<D>& f, const Poly<D>& g) {
    f.check_same(g);
    if (f.is_zero() && g.is_zero()) fail(ErrorKind::Undefined, "gcd(0, 0) is undefined");
    const auto& dom = f.domain();
    Poly<D> r0 = f, r1 = g;
    Poly<D> s0 = Poly<D>::one(dom), s1(dom);
    Poly<D> t0(dom), t1 = Poly<D>::one(dom);
    while (!r1.is_zero()) {
        auto [quo, rem] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        Poly<D> s2 = s0 - quo * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly<D> t2 = t0 - quo * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    const auto li = dom.inv(r0.leading());
    return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

template <class D>
Poly<D> gcd(const Poly<D>& f, const Poly<D>& g) {
    if (f.is_zero() && g.is_zero()) fail(ErrorKind::Undefined, "gcd(0, 0) is undefined");
    Poly<D> a = f, b = g;
    while (!b.is_zero()) {
        Poly<D> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// f^e mod m by square-and-multiply.
template <class D, std::unsigned_integral E>
Poly<D> powmod(Poly<D> f, E e, const Poly<D>& m) {
    Poly<D> r = Poly<D>::one(f.domain()) % m;
    f = f % m;
    while (e) {
        if (e & 1) r = (r * f) % m;
        f = (f * f) % m;
        e >>= 1;
    }
    return r;
}

template <class D, std::unsigned_integral E>
Poly<D> pow(Poly<D> f, E e) {
    Poly<D> r = Poly<D>::one(f.domain());
    while (e) {
        if (e & 1) r = r * f;
        e >>= 1;
        if (e) f = f * f;
    }
    return r;
}

/// f(g): substitution of a polynomial into a polynomial (Horner).
template <class D>
Poly<D> compose(const Poly<D>& f, const Poly<D>& g) {
    f.check_same(g);
    Poly<D> acc(f.domain());
    const auto& c = f.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * g + Poly<D>::constant(f.domain(), c[k]);
    return acc;
}

}  // namespace linq

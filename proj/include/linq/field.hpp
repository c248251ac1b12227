#pragma once

/**
 * @file field.hpp
 * @brief Exact arithmetic in F_q, q = p^r, for runtime-chosen p and r.
 *
 * A field is described once by an immutable, process-wide interned
 * descriptor; `Fq` is a cheap handle to it and `FqElem` is a plain code.
 * Element codes enumerate F_q: the element c_0 + c_1 a + ... + c_{r-1} a^{r-1}
 * has code c_0 + c_1 p + ... + c_{r-1} p^{r-1}. Code order is the
 * "element enumeration order" used wherever a deterministic choice among
 * field elements is needed.
 *
 * Arithmetic runs on one of three paths:
 *  - r == 1: machine modular arithmetic;
 *  - r > 1 and q <= 2^16: log/antilog tables for mul/inv;
 *  - otherwise: digit vectors reduced modulo the defining polynomial.
 * `detail::reference_mul` always uses the digit path, so tests can check the
 * table path against it.
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace linq {

struct FqElem {
    std::uint64_t code = 0;

    friend bool operator==(FqElem, FqElem) = default;
    friend auto operator<=>(FqElem, FqElem) = default;
};

namespace detail {

using Digits = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Dense polynomials over F_p, constant term first, no trailing zeros.

inline void trim(Digits& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Digits mod_p_mul(const Digits& f, const Digits& g, std::uint64_t p) {
    if (f.empty() || g.empty()) return {};
    Digits h(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (std::size_t j = 0; j < g.size(); ++j)
            h[i + j] = (h[i + j] + mulmod(f[i], g[j], p)) % p;
    }
    trim(h);
    return h;
}

// Remainder of f modulo g (g nonzero).
inline Digits mod_p_rem(Digits f, const Digits& g, std::uint64_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    const std::uint64_t lead_inv = powmod(g.back(), p - 2, p);
    while (f.size() > dg) {
        const std::uint64_t c = mulmod(f.back(), lead_inv, p);
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t i = 0; i <= dg; ++i)
            f[shift + i] = (f[shift + i] + p - mulmod(c, g[i], p)) % p;
        trim(f);
    }
    return f;
}

inline Digits mod_p_gcd(Digits a, Digits b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Digits r = mod_p_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Digits mod_p_powmod(Digits base, std::uint64_t e, const Digits& m, std::uint64_t p) {
    Digits r{1};
    base = mod_p_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mod_p_rem(mod_p_mul(r, base, p), m, p);
        base = mod_p_rem(mod_p_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

/// Ben-Or test: f of degree r is irreducible over F_p iff gcd(f, x^{p^i} - x) = 1 for i <= r/2.
inline bool mod_p_irreducible(const Digits& f, std::uint64_t p) {
    const std::size_t r = f.size() - 1;
    if (r == 0) return false;
    if (r == 1) return true;
    Digits xp{0, 1};
    for (std::size_t i = 1; i <= r / 2; ++i) {
        xp = mod_p_powmod(xp, p, f, p);
        Digits d = xp;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = (d[1] + p - 1) % p;
        trim(d);
        Digits g = mod_p_gcd(f, d, p);
        if (g.size() != 1) return false;
    }
    return true;
}

struct FieldData {
    std::uint64_t p = 2;
    unsigned r = 1;
    std::uint64_t q = 2;
    Digits modulus;                   // monic, degree r, constant first
    std::vector<std::uint64_t> ppow;  // p^0 .. p^{r-1}
    std::vector<std::uint32_t> log;   // log[code], undefined at 0
    std::vector<std::uint32_t> exp;   // exp[i] for i in [0, 2(q-1))

    bool has_tables() const noexcept { return !exp.empty(); }

    Digits digits(std::uint64_t code) const {
        Digits d(r);
        for (unsigned i = 0; i < r; ++i) {
            d[i] = code % p;
            code /= p;
        }
        return d;
    }

    std::uint64_t code_of(const Digits& d) const {
        std::uint64_t c = 0;
        for (unsigned i = 0; i < r && i < d.size(); ++i) c += d[i] * ppow[i];
        return c;
    }

    std::uint64_t add(std::uint64_t x, std::uint64_t y) const {
        if (r == 1) {
            const std::uint64_t s = x + y;
            return s >= p ? s - p : s;
        }
        if (p == 2) return x ^ y;
        std::uint64_t out = 0;
        for (unsigned i = 0; i < r; ++i) {
            const std::uint64_t a = x % p, b = y % p;
            x /= p;
            y /= p;
            out += ((a + b) % p) * ppow[i];
        }
        return out;
    }

    std::uint64_t neg(std::uint64_t x) const {
        if (r == 1) return x == 0 ? 0 : p - x;
        if (p == 2) return x;
        std::uint64_t out = 0;
        for (unsigned i = 0; i < r; ++i) {
            const std::uint64_t a = x % p;
            x /= p;
            out += ((p - a) % p) * ppow[i];
        }
        return out;
    }

    std::uint64_t mul_digits(std::uint64_t x, std::uint64_t y) const {
        return code_of(mod_p_rem(mod_p_mul(digits(x), digits(y), p), modulus, p));
    }

    std::uint64_t mul(std::uint64_t x, std::uint64_t y) const {
        if (r == 1) return mulmod(x, y, p);
        if (x == 0 || y == 0) return 0;
        if (has_tables()) return exp[log[x] + log[y]];
        return mul_digits(x, y);
    }

    std::uint64_t pow(std::uint64_t x, std::uint64_t e) const {
        if (e == 0) return 1;
        if (x == 0) return 0;
        if (r == 1) return powmod(x, e, p);
        if (has_tables()) return exp[static_cast<std::uint64_t>((static_cast<unsigned __int128>(log[x]) * e) % (q - 1))];
        std::uint64_t result = 1, base = x;
        while (e) {
            if (e & 1) result = mul_digits(result, base);
            base = mul_digits(base, base);
            e >>= 1;
        }
        return result;
    }

    std::uint64_t inv(std::uint64_t x) const {
        if (x == 0) fail(ErrorKind::DivisionByZero, "inverse of zero in F_" + std::to_string(q));
        if (r == 1) return powmod(x, p - 2, p);
        if (has_tables()) return exp[(q - 1 - log[x]) % (q - 1)];
        return pow(x, q - 2);
    }

    void build_tables() {
        const std::uint64_t order = q - 1;
        const auto primes = prime_factors(order);
        std::uint64_t gen = 0;
        for (std::uint64_t c = 2; c < q && !gen; ++c) {
            bool primitive = true;
            for (std::uint64_t l : primes) {
                std::uint64_t acc = 1, base = c, e = order / l;
                while (e) {
                    if (e & 1) acc = mul_digits(acc, base);
                    base = mul_digits(base, base);
                    e >>= 1;
                }
                if (acc == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) gen = c;
        }
        if (!gen) fail(ErrorKind::ConsistencyFailure, "no primitive element found");
        exp.assign(2 * order, 0);
        log.assign(q, 0);
        std::uint64_t cur = 1;
        for (std::uint64_t i = 0; i < order; ++i) {
            exp[i] = static_cast<std::uint32_t>(cur);
            exp[i + order] = static_cast<std::uint32_t>(cur);
            log[cur] = static_cast<std::uint32_t>(i);
            cur = mul_digits(cur, gen);
        }
    }
};

inline constexpr std::uint64_t kTableLimit = 1u << 16;

inline const FieldData* intern_field(std::uint64_t p, Digits modulus) {
    static std::mutex mu;
    static std::map<Digits, std::unique_ptr<FieldData>> registry;
    Digits key = modulus;
    key.push_back(p);
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second.get();
    auto fd = std::make_unique<FieldData>();
    fd->p = p;
    fd->r = static_cast<unsigned>(modulus.size() - 1);
    fd->modulus = std::move(modulus);
    fd->q = 1;
    for (unsigned i = 0; i < fd->r; ++i) {
        fd->ppow.push_back(fd->q);
        fd->q *= p;
    }
    if (fd->r > 1 && fd->q <= kTableLimit) fd->build_tables();
    const FieldData* out = fd.get();
    registry.emplace(std::move(key), std::move(fd));
    return out;
}

}  // namespace detail

/// Handle to an interned finite field F_q = F_p[a]/(modulus).
class Fq {
public:
    using element = FqElem;

    /**
     * Builds F_{p^r}. Without a modulus, the first monic irreducible
     * polynomial of degree r is used, counting c_0 + c_1 p + ... upward
     * over the coefficient tuples (c_0, ..., c_{r-1}).
     */
    static Fq make(std::uint64_t p, unsigned r, std::optional<std::vector<std::uint64_t>> modulus = std::nullopt) {
        if (!detail::is_prime(p) || p >= (std::uint64_t{1} << 32))
            fail(ErrorKind::NotPrime, std::to_string(p) + " is not a supported prime");
        if (r == 0) fail(ErrorKind::InvalidModulus, "extension degree must be positive");
        {
            unsigned __int128 q = 1;
            for (unsigned i = 0; i < r; ++i) {
                q *= p;
                if (q > (static_cast<unsigned __int128>(1) << 62))
                    fail(ErrorKind::Overflow, "field size exceeds 2^62");
            }
        }
        detail::Digits m;
        if (modulus) {
            m = *modulus;
            for (auto& c : m) c %= p;
            detail::trim(m);
            if (m.size() != r + 1 || m.back() != 1)
                fail(ErrorKind::InvalidModulus, "modulus must be monic of degree " + std::to_string(r));
            if (!detail::mod_p_irreducible(m, p))
                fail(ErrorKind::InvalidModulus, "modulus is reducible over F_" + std::to_string(p));
        } else {
            std::uint64_t count = 1;
            for (unsigned i = 0; i < r; ++i) count *= p;
            for (std::uint64_t n = 0; n < count; ++n) {
                detail::Digits cand(r + 1, 0);
                std::uint64_t v = n;
                for (unsigned i = 0; i < r; ++i) {
                    cand[i] = v % p;
                    v /= p;
                }
                cand[r] = 1;
                if (r > 1 && cand[0] == 0) continue;
                if (detail::mod_p_irreducible(cand, p)) {
                    m = std::move(cand);
                    break;
                }
            }
        }
        return Fq(detail::intern_field(p, std::move(m)));
    }

    /// Builds F_q from q itself (q must be a prime power), default modulus.
    static Fq of_order(std::uint64_t q) {
        if (q < 2) fail(ErrorKind::NotPrime, "field order must be a prime power");
        const auto ps = detail::prime_factors(q);
        if (ps.size() != 1) fail(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
        unsigned r = 0;
        for (std::uint64_t v = q; v > 1; v /= ps[0]) ++r;
        return make(ps[0], r);
    }

    /// F_2; a valid default so that containers of field-carrying values can be resized.
    Fq() : d_(default_field()) {}

    std::uint64_t p() const noexcept { return d_->p; }
    unsigned r() const noexcept { return d_->r; }
    std::uint64_t q() const noexcept { return d_->q; }
    bool is_prime_field() const noexcept { return d_->r == 1; }
    const std::vector<std::uint64_t>& modulus() const noexcept { return d_->modulus; }
    bool uses_tables() const noexcept { return d_->has_tables(); }

    FqElem zero() const noexcept { return {0}; }
    FqElem one() const noexcept { return {1}; }
    /// The class of a in F_p[a]/(modulus); zero when r == 1.
    FqElem gen() const noexcept { return {d_->r == 1 ? 0 : d_->p}; }

    FqElem from_int(std::int64_t v) const {
        const auto p = static_cast<std::int64_t>(d_->p);
        std::int64_t m = v % p;
        if (m < 0) m += p;
        return {static_cast<std::uint64_t>(m)};
    }
    FqElem from_code(std::uint64_t code) const {
        if (code >= d_->q) fail(ErrorKind::FieldMismatch, "code out of range for F_" + std::to_string(d_->q));
        return {code};
    }
    FqElem from_coeffs(std::span<const std::uint64_t> c) const {
        detail::Digits d(c.begin(), c.end());
        for (auto& x : d) x %= d_->p;
        if (d.size() > d_->r) d = detail::mod_p_rem(std::move(d), d_->modulus, d_->p);
        return {d_->code_of(d)};
    }
    std::vector<std::uint64_t> coeffs(FqElem x) const { return d_->digits(x.code); }

    FqElem add(FqElem x, FqElem y) const { return {d_->add(x.code, y.code)}; }
    FqElem sub(FqElem x, FqElem y) const { return {d_->add(x.code, d_->neg(y.code))}; }
    FqElem neg(FqElem x) const { return {d_->neg(x.code)}; }
    FqElem mul(FqElem x, FqElem y) const { return {d_->mul(x.code, y.code)}; }
    FqElem inv(FqElem x) const { return {d_->inv(x.code)}; }
    FqElem div(FqElem x, FqElem y) const { return mul(x, inv(y)); }
    FqElem pow(FqElem x, std::uint64_t e) const { return {d_->pow(x.code, e)}; }
    FqElem frobenius(FqElem x) const { return pow(x, d_->p); }
    bool is_zero(FqElem x) const noexcept { return x.code == 0; }
    bool is_one(FqElem x) const noexcept { return x.code == 1; }
    bool eq(FqElem x, FqElem y) const noexcept { return x == y; }

    /// Canonical literal: decimal residue for prime fields, polynomial in `a` otherwise.
    std::string format(FqElem x) const {
        if (d_->r == 1) return std::to_string(x.code);
        if (x.code == 0) return "0";
        const auto d = coeffs(x);
        std::string out;
        for (unsigned i = d_->r; i-- > 0;) {
            if (!d[i]) continue;
            if (!out.empty()) out += "+";
            if (i == 0) {
                out += std::to_string(d[i]);
                continue;
            }
            if (d[i] != 1) out += std::to_string(d[i]) + "*";
            out += "a";
            if (i > 1) out += "^" + std::to_string(i);
        }
        return out;
    }

    /// True when the literal of x is a single product (needs no parentheses as a coefficient).
    bool is_monomial_literal(FqElem x) const {
        if (d_->r == 1) return true;
        const auto d = coeffs(x);
        return std::count_if(d.begin(), d.end(), [](auto c) { return c != 0; }) <= 1;
    }

    friend bool operator==(const Fq& a, const Fq& b) noexcept { return a.d_ == b.d_; }

    const detail::FieldData* data() const noexcept { return d_; }

private:
    explicit Fq(const detail::FieldData* d) : d_(d) {}
    static const detail::FieldData* default_field() {
        static const detail::FieldData* f2 = detail::intern_field(2, {0, 1});
        return f2;
    }
    const detail::FieldData* d_;
};

namespace detail {
inline FqElem reference_mul(const Fq& f, FqElem x, FqElem y) {
    if (f.r() == 1) return f.mul(x, y);
    return {f.data()->mul_digits(x.code, y.code)};
}
}  // namespace detail

}  // namespace linq

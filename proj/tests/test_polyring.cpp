#include <gtest/gtest.h>

#include <linq/factor.hpp>
#include <linq/poly.hpp>
#include <linq/text.hpp>

#include <random>

using namespace linq;

namespace {

UniPoly P(const Fq& f, std::string_view s) { return parse_unipoly(f, s); }

UniPoly random_poly(const Fq& f, int max_deg, std::mt19937_64& rng) {
    std::vector<FqElem> c(static_cast<std::size_t>(rng() % static_cast<unsigned>(max_deg + 1)) + 1);
    for (auto& x : c) x = FqElem{rng() % f.q()};
    return UniPoly(f, std::move(c));
}

// Irreducibility by the root criterion over extensions: no roots in F_{q^k}
// for k <= deg/2, via gcd(f, t^{q^k} - t).
bool irreducible_by_gcd(const UniPoly& f) {
    const Fq& F = f.domain();
    const UniPoly t = UniPoly::var(F);
    UniPoly h = t;
    for (int k = 1; k <= f.degree() / 2; ++k) {
        h = powmod(h, F.q(), f);
        if (gcd(f, h - t).degree() > 0) return false;
    }
    return f.degree() >= 1;
}

}  // namespace

TEST(Polyring, ArithmeticExamples) {
    const Fq f2 = Fq::make(2, 1), f3 = Fq::make(3, 1);
    EXPECT_EQ(P(f2, "t+1") * P(f2, "t+1"), P(f2, "t^2+1"));
    const auto [q, r] = divmod(P(f3, "t^2-1"), P(f3, "t-1"));
    EXPECT_EQ(q, P(f3, "t+1"));
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(UniPoly(f3).degree(), UniPoly::kDegreeOfZero);
    EXPECT_EQ(P(f3, "t^2+2").eval(FqElem{2}), FqElem{0});
    try {
        divmod(P(f3, "t"), UniPoly(f3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
    }
}

TEST(Polyring, GcdExtExamples) {
    const Fq f2 = Fq::make(2, 1), f3 = Fq::make(3, 1);
    {
        const auto g = gcd_ext(P(f2, "t"), UniPoly(f2));
        EXPECT_EQ(g.d, P(f2, "t"));
        EXPECT_EQ(g.u, P(f2, "1"));
        EXPECT_TRUE(g.v.is_zero());
    }
    {
        const auto a = P(f2, "1+t"), b = P(f2, "t^2");
        const auto g = gcd_ext(a, b);
        EXPECT_TRUE(g.d.is_one());
        EXPECT_EQ(g.u * a + g.v * b, UniPoly::one(f2));
    }
    {
        const auto a = P(f3, "t^2-1"), b = P(f3, "t-1");
        const auto g = gcd_ext(a, b);
        EXPECT_EQ(g.d, P(f3, "t-1"));
        EXPECT_TRUE(g.u.is_zero());
        EXPECT_TRUE(g.v.is_one());
    }
    try {
        gcd_ext(UniPoly(f3), UniPoly(f3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Undefined);
    }
}

TEST(Polyring, RandomizedDivmodAndBezout) {
    std::mt19937_64 rng(11);
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 8u, 9u, 25u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 60; ++it) {
            const UniPoly a = random_poly(f, 9, rng), b = random_poly(f, 6, rng);
            if (!b.is_zero()) {
                const auto [quo, rem] = divmod(a, b);
                ASSERT_EQ(quo * b + rem, a);
                ASSERT_LT(rem.degree(), b.degree());
            }
            if (a.is_zero() && b.is_zero()) continue;
            const auto g = gcd_ext(a, b);
            ASSERT_EQ(g.u * a + g.v * b, g.d);
            ASSERT_TRUE(g.d.is_monic());
            ASSERT_TRUE(divides(g.d, a));
            ASSERT_TRUE(divides(g.d, b));
            // any common divisor divides d: check with a planted common factor
            const UniPoly c = random_poly(f, 3, rng);
            if (c.is_zero()) continue;
            const auto gc = gcd(a * c, b * c);
            ASSERT_TRUE(divides(c.monic(), gc));
        }
    }
}

TEST(Polyring, TextRoundTrip) {
    const Fq f9 = Fq::make(3, 2);
    const UniPoly g = P(f9, "t^2 + a*t + 1");
    EXPECT_EQ(format_unipoly(g), "t^2 + a*t + 1");
    EXPECT_EQ(P(f9, format_unipoly(g * g)), g * g);
    EXPECT_EQ(format_unipoly(UniPoly(f9)), "0");
    EXPECT_EQ(format_unipoly(P(f9, "(a+1)*t")), "(a+1)*t");
    std::mt19937_64 rng(5);
    for (std::uint64_t q : {2u, 7u, 8u, 9u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 50; ++it) {
            const auto a = random_poly(f, 7, rng);
            ASSERT_EQ(P(f, format_unipoly(a)), a);
        }
    }
}

TEST(Polyring, FactorExamples) {
    const Fq f2 = Fq::make(2, 1), f3 = Fq::make(3, 1);
    EXPECT_EQ(factor_squarefree(P(f2, "t"), 1), std::vector<UniPoly>{P(f2, "t")});
    EXPECT_EQ(factor_squarefree(P(f2, "t^3+1"), 1), (std::vector<UniPoly>{P(f2, "t+1"), P(f2, "t^2+t+1")}));
    EXPECT_EQ(factor_squarefree(P(f3, "t^2-1"), 1), (std::vector<UniPoly>{P(f3, "t+1"), P(f3, "t+2")}));
    try {
        factor_squarefree(P(f2, "t^2+1"), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotSquarefree);
    }
}

TEST(Polyring, FactorProperties) {
    std::mt19937_64 rng(17);
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 8u, 9u, 49u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 40; ++it) {
            UniPoly a = random_poly(f, 12, rng);
            if (a.degree() < 1) continue;
            a = a.monic();
            if (!is_squarefree(a)) continue;
            const auto fs = factor_squarefree(a, rng());
            UniPoly prod = UniPoly::one(f);
            for (const auto& g : fs) {
                ASSERT_TRUE(g.is_monic());
                ASSERT_TRUE(irreducible_by_gcd(g));
                ASSERT_EQ(is_irreducible(g), true);
                prod *= g;
            }
            ASSERT_EQ(prod, a);
            // seed independence
            ASSERT_EQ(factor_squarefree(a, 12345), fs);
        }
    }
}

TEST(Polyring, DivisorsOfXdMinusOne) {
    // X^d - 1 with p not dividing d splits into the cyclotomic-orbit factors;
    // the number of linear factors is gcd(d, q - 1).
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        const Fq f = Fq::of_order(q);
        for (std::uint64_t d = 1; d <= 24; ++d) {
            if (d % f.p() == 0) continue;
            const UniPoly xd = UniPoly::monomial(f, f.one(), d) - UniPoly::one(f);
            const auto fs = factor_squarefree(xd, d);
            const auto linear = std::count_if(fs.begin(), fs.end(), [](const UniPoly& g) { return g.degree() == 1; });
            ASSERT_EQ(static_cast<std::uint64_t>(linear), std::gcd(d, q - 1)) << "q=" << q << " d=" << d;
        }
    }
}

TEST(Polyring, RootsAndIrreducibility) {
    const Fq f4 = Fq::make(2, 2);
    const auto r = roots(P(f4, "t^2+t+1"));
    EXPECT_EQ(r, (std::vector<FqElem>{f4.gen(), f4.add(f4.gen(), f4.one())}));
    EXPECT_FALSE(is_irreducible(P(Fq::make(2, 1), "t^2+1")));
    EXPECT_TRUE(is_irreducible(P(Fq::make(2, 1), "t^3+t+1")));
}

TEST(Polyring, ExtensionEmbeddingIsHomomorphism) {
    for (auto [q, e] : std::vector<std::pair<std::uint64_t, unsigned>>{{4, 2}, {9, 2}, {8, 2}, {4, 3}, {3, 4}}) {
        const Fq base = Fq::of_order(q);
        const Extension ext(base, e);
        const Fq& big = ext.field();
        EXPECT_EQ(big.q(), [&] {
            std::uint64_t v = 1;
            for (unsigned i = 0; i < e; ++i) v *= q;
            return v;
        }());
        for (std::uint64_t x = 0; x < q; ++x)
            for (std::uint64_t y = 0; y < q; ++y) {
                ASSERT_EQ(ext.embed(base.mul({x}, {y})), big.mul(ext.embed({x}), ext.embed({y})));
                ASSERT_EQ(ext.embed(base.add({x}, {y})), big.add(ext.embed({x}), ext.embed({y})));
            }
    }
}

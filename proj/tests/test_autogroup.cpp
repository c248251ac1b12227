#include <gtest/gtest.h>

#include <linq/autogroup.hpp>

#include <random>

#include "families.hpp"
#include "generators.hpp"

using namespace linq;
using namespace linq::testing;

namespace {

LinMap Map(const Fq& f, std::string_view s, std::size_t n) { return parse_linmap(s, f, n); }
LinPoly Lp(const Fq& f, std::string_view s, std::size_t n) { return parse_linpoly(s, f, n); }

std::vector<TameFactor> random_factors(const Fq& f, std::size_t n, int count, std::mt19937_64& rng) {
    std::vector<TameFactor> hs;
    for (int k = 0; k < count; ++k) {
        if (n > 1 && rng() % 3) {
            const std::size_t i = rng() % n;
            LinPoly s(f, n);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && rng() % 2) s.row[j] = random_poly(f, 2, rng);
            hs.push_back(TameFactor::elementary(i, s));
        } else {
            // invertible constant: permutation times unit lower triangular times diagonal
            PolyMatrix c = identity_matrix(f, n);
            for (std::size_t i = 0; i < n; ++i) {
                c(i, i) = UniPoly::constant(f, random_nonzero(f, rng));
                for (std::size_t j = 0; j < i; ++j) c(i, j) = UniPoly::constant(f, FqElem{rng() % f.q()});
            }
            if (n > 1) c.swap_rows(0, rng() % n);
            hs.push_back(TameFactor::make_linear(constant_part(c)));
        }
    }
    return hs;
}

}  // namespace

TEST(Autogroup, IsAutomorphismExamples) {
    const Fq f2 = Fq::make(2, 1);
    EXPECT_TRUE(is_automorphism(identity_map(f2, 3)));
    EXPECT_TRUE(is_automorphism(Map(f2, "X1 + X1^[2] + X2^[2]; X1^[2] + X2 + X2^[2]", 2)));
    EXPECT_FALSE(is_automorphism(Map(f2, "X1^[1]; X2", 2)));
    EXPECT_EQ(kind_of([&] { is_automorphism(Map(f2, "X1; X2", 3)); }), ErrorKind::DimensionMismatch);
}

TEST(Autogroup, InvertExamples) {
    const Fq f2 = Fq::make(2, 1);
    EXPECT_EQ(invert_map(identity_map(f2, 2)), identity_map(f2, 2));
    const LinMap f = Map(f2, "X1 + X1^[2] + X2^[2]; X1^[2] + X2 + X2^[2]", 2);
    const LinMap g = invert_map(f);
    EXPECT_EQ(compose_matrix(f, g), identity_map(f2, 2));
    EXPECT_EQ(compose_symbolic(g, f), identity_map(f2, 2));
    EXPECT_EQ(kind_of([&] { invert_map(Map(f2, "X1^[1]; X2", 2)); }), ErrorKind::NotUnimodular);
}

TEST(Autogroup, InvertRandomTameProducts) {
    std::mt19937_64 rng(31);
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 9u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 20; ++it) {
            const std::size_t n = 1 + rng() % 4;
            const LinMap a = compose_factors(random_factors(f, n, 1 + static_cast<int>(rng() % 6), rng), f, n);
            ASSERT_TRUE(is_automorphism(a));
            const LinMap b = invert_map(a);
            ASSERT_EQ(compose_matrix(a, b), identity_map(f, n));
            ASSERT_EQ(compose_matrix(b, a), identity_map(f, n));
        }
    }
}

TEST(Autogroup, TameDecomposeExamples) {
    const Fq f2 = Fq::make(2, 1);
    EXPECT_TRUE(tame_decompose(identity_map(f2, 3)).empty());
    const LinMap e = Map(f2, "X1 + X2^[1]; X2", 2);
    const auto hs = tame_decompose(e);
    ASSERT_EQ(hs.size(), 1u);
    EXPECT_EQ(hs[0].kind, TameFactor::Kind::Elementary);
    EXPECT_EQ(hs[0].index, 0u);
    EXPECT_EQ(format_linpoly(hs[0].shift), "X2^[1]");
    EXPECT_EQ(kind_of([&] { tame_decompose(Map(f2, "X1^[1]; X2", 2)); }), ErrorKind::NotUnimodular);
    // a constant automorphism is a single linear factor
    const auto lin = tame_decompose(Map(f2, "X2; X1 + X2", 2));
    ASSERT_EQ(lin.size(), 1u);
    EXPECT_EQ(lin[0].kind, TameFactor::Kind::Linear);
}

TEST(Autogroup, TameDecomposeRecomposes) {
    std::mt19937_64 rng(32);
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 8u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 25; ++it) {
            const std::size_t n = 1 + rng() % 4;
            const auto planted = random_factors(f, n, 5, rng);
            const LinMap a = compose_factors(planted, f, n);
            const auto hs = tame_decompose(a);
            ASSERT_EQ(compose_factors(hs, f, n), a);
            int maxdeg = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) maxdeg = std::max(maxdeg, a.jq(i, j).degree());
            ASSERT_LE(hs.size(), n * n * static_cast<std::size_t>(maxdeg) + n);
            for (const auto& h : hs) {
                if (h.kind == TameFactor::Kind::Elementary) ASSERT_TRUE(h.shift.row[h.index].is_zero());
                else ASSERT_TRUE(is_unimodular(lift(h.linear, f)));
            }
        }
    }
}

TEST(Autogroup, DiagonalizeExamples) {
    const Fq f2 = Fq::make(2, 1);
    {
        const LinMap d = Map(f2, "X1^[1]; X2^[2] + X2", 2);
        const auto r = diagonalize_map(d);
        EXPECT_EQ(compose_matrix(compose_matrix(r.h1, d), r.h2), r.g);
    }
    {
        const LinMap f = Map(f2, "X1^[1]; X1", 1);
        const auto r = diagonalize_map(f);
        EXPECT_EQ(format_linmap(r.g), "X1; 0");
        EXPECT_EQ(compose_matrix(compose_matrix(r.h1, f), r.h2), r.g);
    }
    {
        // already diagonal with a divisibility chain: nothing to do
        const LinMap f = Map(f2, "X1; X2^[1]", 2);
        const auto r = diagonalize_map(f);
        EXPECT_EQ(r.h1, identity_map(f2, 2));
        EXPECT_EQ(r.h2, identity_map(f2, 2));
        EXPECT_EQ(r.g, f);
    }
}

TEST(Autogroup, DiagonalizeRandom) {
    std::mt19937_64 rng(33);
    for (std::uint64_t q : {2u, 3u, 4u, 7u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 25; ++it) {
            const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
            const LinMap a = from_matrix(random_matrix(f, m, n, 3, rng));
            const auto r = diagonalize_map(a);
            const LinMap g = compose_matrix(compose_matrix(r.h1, a), r.h2);
            ASSERT_EQ(g, r.g);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) ASSERT_TRUE(g.jq(i, j).is_zero());
            ASSERT_EQ(compose_factors(r.h1_factors, f, m), r.h1);
            ASSERT_EQ(compose_factors(r.h2_factors, f, n), r.h2);
            ASSERT_TRUE(is_automorphism(r.h1));
            ASSERT_TRUE(is_automorphism(r.h2));
        }
    }
}

TEST(Autogroup, CoordinateExamples) {
    const Fq f2 = Fq::make(2, 1);
    EXPECT_TRUE(is_coordinate(Lp(f2, "X1", 2)));
    EXPECT_FALSE(is_coordinate(Lp(f2, "X1^[1]", 1)));
    EXPECT_TRUE(is_coordinate(Lp(f2, "X1 + X1^[1] + X2^[2]", 2)));
    EXPECT_FALSE(is_coordinate(LinPoly(f2, 2)));
    EXPECT_EQ(complete_coordinate(Lp(f2, "X1", 3)), identity_map(f2, 3));
    const LinMap c = complete_coordinate(Lp(f2, "X1 + X1^[1] + X2^[2]", 2));
    EXPECT_EQ(c.component(0), Lp(f2, "X1 + X1^[1] + X2^[2]", 2));
    EXPECT_TRUE(is_automorphism(c));
    EXPECT_EQ(kind_of([&] { complete_coordinate(Lp(f2, "X1^[1]", 1)); }), ErrorKind::NotUnimodularRow);
}

TEST(Autogroup, CoordinateDuality) {
    std::mt19937_64 rng(34);
    for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 40; ++it) {
            const std::size_t n = 1 + rng() % 4;
            const LinPoly p = it % 2 ? LinPoly(f, random_unimodular(f, n, 2, 5, rng).row(0))
                                     : LinPoly(f, random_matrix(f, 1, n, 3, rng).row(0));
            const bool gcd_says = is_coordinate(p);
            bool completed = false;
            try {
                const LinMap c = complete_coordinate(p);
                ASSERT_EQ(c.component(0), p);
                completed = is_automorphism(c);
            } catch (const Error& e) {
                ASSERT_EQ(e.kind(), ErrorKind::NotUnimodularRow);
            }
            ASSERT_EQ(gcd_says, completed) << format_linpoly(p);
            if (it % 2) ASSERT_TRUE(gcd_says);
        }
    }
}

TEST(Autogroup, UnivariateFactorExamples) {
    const Fq f2 = Fq::make(2, 1);
    {
        const auto r = univariate_factor(Lp(f2, "X1 + X2^[3]", 2));
        EXPECT_EQ(format_linpoly(r.h_tilde), "X1");
        EXPECT_EQ(r.f_tilde, Lp(f2, "X1 + X2^[3]", 2));
    }
    {
        const auto r = univariate_factor(Lp(f2, "X1^[1] + X2^[1]", 2));
        EXPECT_EQ(format_linpoly(r.h_tilde), "X1^[1]");
        EXPECT_EQ(format_linpoly(r.f_tilde), "X1 + X2");
    }
    {
        const auto r = univariate_factor(Lp(f2, "X1^[2]", 1));
        EXPECT_EQ(format_linpoly(r.h_tilde), "X1^[2]");
        EXPECT_EQ(format_linpoly(r.f_tilde), "X1");
    }
    EXPECT_EQ(kind_of([&] { univariate_factor(LinPoly(f2, 2)); }), ErrorKind::ZeroInput);
}

TEST(Autogroup, UnivariateFactorProperties) {
    std::mt19937_64 rng(35);
    for (std::uint64_t q : {2u, 3u, 4u, 9u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 40; ++it) {
            const std::size_t n = 1 + rng() % 4;
            // plant a common factor so the gcd is nontrivial
            LinPoly p(f, random_matrix(f, 1, n, 3, rng).row(0));
            const UniPoly c = random_poly(f, 2, rng);
            if (!c.is_zero())
                for (auto& e : p.row) e *= c;
            if (p.is_zero()) continue;
            const auto r = univariate_factor(p);
            ASSERT_EQ(substitute_univariate(r.h_tilde, r.f_tilde), p);
            const LinMap outer(f, PolyMatrix(1, 1, r.h_tilde.row[0]));
            ASSERT_EQ(compose_symbolic(outer, from_rows(f, {r.f_tilde}, n)), from_rows(f, {p}, n));
            ASSERT_TRUE(is_coordinate(r.f_tilde));
            ASSERT_TRUE(r.h_tilde.row[0].is_monic());
        }
    }
}

TEST(Autogroup, IdealNormalFormExamples) {
    const Fq f2 = Fq::make(2, 1);
    {
        const auto nf = ideal_normal_form({Lp(f2, "X1", 1)});
        EXPECT_EQ(nf.h, identity_map(f2, 1));
        ASSERT_EQ(nf.rank(), 1u);
        EXPECT_EQ(format_linpoly(nf.gs[0]), "X1");
    }
    {
        const auto nf = ideal_normal_form({Lp(f2, "X1^[1]", 1), Lp(f2, "X1", 1)});
        ASSERT_EQ(nf.rank(), 1u);
        EXPECT_EQ(format_linpoly(nf.gs[0]), "X1");
        EXPECT_TRUE(is_automorphism(nf.h));
    }
    {
        const auto nf = ideal_normal_form({Lp(f2, "X1 + X2", 2)});
        ASSERT_EQ(nf.rank(), 1u);
        EXPECT_EQ(format_linpoly(nf.gs[0]), "X1");
        EXPECT_EQ(nf.h.component(0), Lp(f2, "X1 + X2", 2));
        EXPECT_TRUE(is_automorphism(nf.h));
    }
    {
        const auto nf = ideal_normal_form({LinPoly(f2, 2), LinPoly(f2, 2)});
        EXPECT_EQ(nf.rank(), 0u);
        EXPECT_EQ(nf.h, identity_map(f2, 2));
    }
}

TEST(Autogroup, IdealNormalFormRandom) {
    std::mt19937_64 rng(36);
    for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 25; ++it) {
            const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
            const PolyMatrix j = random_matrix(f, m, n, 3, rng);
            std::vector<LinPoly> gens;
            for (std::size_t i = 0; i < m; ++i) gens.emplace_back(f, j.row(i));
            const auto nf = ideal_normal_form(gens);
            ASSERT_TRUE(is_automorphism(nf.h));
            ASSERT_LE(nf.rank(), std::min(m, n));
            for (std::size_t i = 0; i < nf.rank(); ++i) {
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i) ASSERT_TRUE(nf.gs[i].row[k].is_zero());
                ASSERT_FALSE(nf.diagonal(i).is_zero());
            }
            const PolyMatrix out = normal_form_matrix(nf);
            ASSERT_EQ(hermite_form(j), nf.rank() ? hermite_form(out) : PolyMatrix(0, n, UniPoly(f)));
            // each output row g_i(h_i) as a composition, checked by substitution
            for (std::size_t i = 0; i < nf.rank(); ++i) {
                const LinMap gi(f, PolyMatrix(1, 1, nf.diagonal(i)));
                const LinMap hi = from_rows(f, {nf.h.component(i)}, n);
                ASSERT_EQ(compose_symbolic(gi, hi).jq.row(0), out.row(i));
            }
        }
    }
}

TEST(Autogroup, RecognizeRingExamples) {
    const Fq f2 = Fq::make(2, 1);
    {
        const auto r = recognize_polynomial_ring({Lp(f2, "X1", 2)});
        EXPECT_TRUE(r.polynomial_ring);
        EXPECT_EQ(r.dim, 1u);
    }
    {
        const auto r = recognize_polynomial_ring({Lp(f2, "X1^[1]", 1)});
        EXPECT_FALSE(r.polynomial_ring);
        EXPECT_EQ(r.witness, 0u);
    }
    {
        const auto r = recognize_polynomial_ring({Lp(f2, "X1 + X2^[1]", 2)});
        EXPECT_TRUE(r.polynomial_ring);
        EXPECT_EQ(r.dim, 1u);
    }
}

TEST(Autogroup, SingleGeneratorConsistency) {
    // polynomial-ring quotient by one generator <=> generator is a coordinate
    std::mt19937_64 rng(37);
    for (std::uint64_t q : {2u, 3u, 4u}) {
        const Fq f = Fq::of_order(q);
        for (int it = 0; it < 40; ++it) {
            const std::size_t n = 1 + rng() % 4;
            const LinPoly p = it % 2 ? LinPoly(f, random_unimodular(f, n, 2, 4, rng).row(0))
                                     : LinPoly(f, random_matrix(f, 1, n, 2, rng).row(0));
            if (p.is_zero()) continue;
            const auto r = recognize_polynomial_ring({p});
            ASSERT_EQ(r.polynomial_ring, is_coordinate(p));
            if (r.polynomial_ring) ASSERT_EQ(r.dim, n - 1);
        }
    }
}

TEST(Autogroup, CoordinateFamily) {
    for (std::uint64_t q : {2u, 3u}) {
        const Fq f = Fq::of_order(q);
        for (auto [m, n] : std::vector<std::pair<unsigned, unsigned>>{{1, 1}, {2, 2}, {2, 3}, {3, 2}, {1, 4}, {4, 3}}) {
            const LinMap a = parse_linmap(family_map(m, n), f, 2);
            ASSERT_EQ(a.jq, parse_matrix(f, family_matrix(m, n)));
            ASSERT_TRUE(mat_det(a.jq).is_one());
            ASSERT_TRUE(is_automorphism(a));
            ASSERT_EQ(compose_symbolic(a, invert_map(a)), identity_map(f, 2));
            if (m >= 2 && n >= 2) {
                const LinMap b = parse_linmap(family_map_reduced(m, n), f, 2);
                ASSERT_EQ(b.jq, parse_matrix(f, family_matrix_reduced(m, n)));
                ASSERT_TRUE(mat_det(b.jq).is_one());
                ASSERT_TRUE(is_automorphism(b));
                ASSERT_EQ(compose_symbolic(invert_map(b), b), identity_map(f, 2));
            }
            ASSERT_TRUE(is_coordinate(a.component(0)));
        }
    }
}

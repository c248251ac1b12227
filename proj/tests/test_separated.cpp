#include <gtest/gtest.h>

#include <linq/separated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "generators.hpp"
#include "sep_generators.hpp"

using namespace linq;
using namespace linq::testing;

namespace {

QMap Q(std::string_view s, std::size_t n = 0) { return parse_qmap(s, n); }

}  // namespace

TEST(Separated, ClassifyExamples) {
    const SepPoly f = parse_seppoly("X + Y^3");
    EXPECT_EQ(f.n, 2u);
    EXPECT_EQ(f.parts[1].degree(), 3);
    EXPECT_EQ(format_seppoly(f), "X1 + X2^3");
    try {
        parse_seppoly("X*Y");
        FAIL() << "mixed term accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MixedTerm);
        EXPECT_NE(std::string(e.what()).find("X1*X2"), std::string::npos);
    }
    for (int p : {2, 3, 5}) {
        const std::string text = "Y^" + std::to_string(p * p) + " - X^" + std::to_string(2 * p) + " - X";
        const SepPoly g = parse_seppoly(text);
        EXPECT_EQ(g.parts[0].degree(), 2 * p);
        EXPECT_EQ(g.parts[1].degree(), p * p);
    }
    EXPECT_EQ(parse_seppoly("(1/2)*X1^2 + 3*X2 + 7", 2).constant, Rational(7));
    EXPECT_EQ(kind_of([] { parse_sepmap("X + Y"); }), ErrorKind::DimensionMismatch);
}

TEST(Separated, ClassifyRoundTrip) {
    std::mt19937_64 rng(51);
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 1 + rng() % 4;
        SepPoly f(n);
        f.constant = small_rational(rng);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> c(1 + rng() % 4, Rational(0));
            for (std::size_t e = 1; e < c.size(); ++e) c[e] = small_rational(rng);
            f.parts[j] = QUniPoly(Rationals{}, std::move(c));
        }
        ASSERT_EQ(classify_no_mixed(to_mpoly(f)), f);
        ASSERT_EQ(parse_seppoly(format_seppoly(f), n), f);
    }
}

TEST(Separated, JacobianExamples) {
    {
        const SepMatrix j = sep_jacobian(parse_sepmap("X + Y^2; Y"));
        EXPECT_EQ(format_qmap({in_variable(j(0, 0), 2, 0), in_variable(j(0, 1), 2, 1), in_variable(j(1, 0), 2, 0),
                               in_variable(j(1, 1), 2, 1)}),
                  "1; 2*X2; 0; 1");
    }
    const SepMatrix id = sep_jacobian(sep_identity(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(id(i, k), i == k ? QUniPoly::one(Rationals{}) : QUniPoly(Rationals{}));
    const SepMatrix cube = sep_jacobian(parse_sepmap("X^3; Y"));
    EXPECT_EQ(format_qpoly(in_variable(cube(0, 0), 2, 0)), "3*X1^2");
    EXPECT_TRUE(cube(0, 1).is_zero());
    EXPECT_TRUE(cube(1, 1).is_one());
    EXPECT_EQ(format_qpoly(sep_det(cube)), "3*X1^2");
}

TEST(Separated, JacobianMatchesPartialDerivatives) {
    std::mt19937_64 rng(52);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 1 + rng() % 4;
        const SepMap f = affine_combination(random_invertible(n, rng), random_unitriangular_map(n, rng),
                                            std::vector<Rational>(n, Rational(1)));
        const QMap q = to_qmap(f);
        const QMPolyMatrix j = to_mpoly_matrix(sep_jacobian(f));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(j(i, k), q[i].derivative(k));
    }
}

TEST(Separated, DeterminantMatchesLeibniz) {
    std::mt19937_64 rng(53);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 1 + rng() % 4;
        QMatrix a(n, n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = small_rational(rng);
        Rational leibniz = 0;
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            Rational term = 1;
            for (std::size_t i = 0; i < n; ++i) term *= a(i, p[i]);
            std::size_t inv = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
            leibniz += inv % 2 ? -term : term;
        } while (std::next_permutation(p.begin(), p.end()));
        ASSERT_EQ(mpoly_det(constants(a)).constant_term(), leibniz);
    }
}

TEST(Separated, PrinminExamples) {
    EXPECT_EQ(prinmin_unitriangularize(QMatrix::identity(4, Rational(0), Rational(1))),
              (std::vector<std::size_t>{0, 1, 2, 3}));
    QMatrix a = QMatrix::identity(2, Rational(0), Rational(1));
    a(1, 0) = 5;
    const auto perm = prinmin_unitriangularize(a);
    EXPECT_EQ(perm, (std::vector<std::size_t>{1, 0}));
    const QMatrix b = conjugate_by_permutation(a, perm);
    EXPECT_EQ(b(0, 1), Rational(5));
    EXPECT_EQ(b(1, 0), Rational(0));
    // a 2-cycle of nonzero off-diagonal entries has determinant 1 - xy != 1
    QMatrix c = QMatrix::identity(3, Rational(0), Rational(1));
    c(0, 1) = 1;
    c(1, 0) = 1;
    try {
        prinmin_unitriangularize(c);
        FAIL() << "expected PrincipalMinorNotOne";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PrincipalMinorNotOne);
        EXPECT_EQ(e.witness(), (std::vector<std::size_t>{0, 1}));
    }
    QMatrix d = QMatrix::identity(2, Rational(0), Rational(1));
    d(1, 1) = 2;
    try {
        prinmin_unitriangularize(d);
        FAIL() << "expected PrincipalMinorNotOne";
    } catch (const Error& e) {
        EXPECT_EQ(e.witness(), (std::vector<std::size_t>{1}));
    }
}

TEST(Separated, PrinminRecoversHiddenTriangularity) {
    std::mt19937_64 rng(54);
    for (int it = 0; it < 60; ++it) {
        const std::size_t n = 1 + rng() % 6;
        QMatrix u = QMatrix::identity(n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng() % 2) u(i, j) = small_rational(rng);
        const auto sigma = random_perm(n, rng);
        const QMatrix a = u.submatrix(inverse_perm(sigma), inverse_perm(sigma));
        const auto pi = prinmin_unitriangularize(a);
        ASSERT_TRUE(is_upper_unitriangular(constants(conjugate_by_permutation(a, pi))));
    }
}

TEST(Separated, PrinminAgreesWithBruteForce) {
    // sparse 0/1 matrices with unit diagonal, n <= 5; half of them are not triangularizable
    std::mt19937_64 rng(55);
    int rejected = 0, accepted = 0;
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 2 + rng() % 4;
        QMatrix a = QMatrix::identity(n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng() % 4 == 0) a(i, j) = 1 + static_cast<long long>(rng() % 2);
        const QMPolyMatrix m = constants(a);
        const bool oracle = some_permutation_unitriangularizes(m);
        try {
            const auto pi = prinmin_unitriangularize(a);
            ASSERT_TRUE(oracle);
            ASSERT_TRUE(is_upper_unitriangular(m.submatrix(pi, pi)));
            ++accepted;
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::PrincipalMinorNotOne);
            ASSERT_FALSE(oracle);
            const auto& w = e.witness();
            ASSERT_FALSE(w.empty());
            ASSERT_FALSE(mpoly_det(m.submatrix(w, w)).constant_term() == 1 && mpoly_det(m.submatrix(w, w)).is_constant());
            ++rejected;
        }
    }
    EXPECT_GT(accepted, 20);
    EXPECT_GT(rejected, 20);
}

TEST(Separated, TriangularizeMapExamples) {
    EXPECT_EQ(triangularize_map(parse_sepmap("X + Y^2; Y")), (std::vector<std::size_t>{0, 1}));
    const SepMap f = parse_sepmap("X; Y + X^3");
    const auto perm = triangularize_map(f);
    EXPECT_EQ(perm, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(format_sepmap(permute_map(f, perm)), "X1 + X2^3; X2");
    // the relabelling is conjugation by the permutation map
    const QMap sigma = permutation_map(perm);
    const QMap sigma_inv = permutation_map(inverse_perm(perm));
    EXPECT_EQ(compose(compose(sigma_inv, to_qmap(f)), sigma), to_qmap(permute_map(f, perm)));
    // cyclic shape: det J = 1 + 8 XYZ, so no ordering works
    try {
        triangularize_map(parse_sepmap("X + Z^2; Y + X^2; Z + Y^2"));
        FAIL() << "expected PrincipalMinorNotOne";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PrincipalMinorNotOne);
        EXPECT_EQ(e.witness(), (std::vector<std::size_t>{0, 1, 2}));
    }
    EXPECT_EQ(kind_of([] { triangularize_map(parse_sepmap("2*X; Y")); }), ErrorKind::LinearPartNotIdentity);
}

TEST(Separated, TriangularizeRandomMaps) {
    std::mt19937_64 rng(56);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n = 1 + rng() % 5;
        const auto sigma = random_perm(n, rng);
        const SepMap f = permute_map(random_unitriangular_map(n, rng), sigma);
        const auto pi = triangularize_map(f);
        ASSERT_TRUE(is_unitriangular(permute_map(f, pi)));
    }
}

TEST(Separated, InvertExamples) {
    EXPECT_EQ(format_qmap(invert_nomixed(parse_sepmap("2*X + Y^2; 3*Y"))), "(1/2)*X1 - (1/18)*X2^2; (1/3)*X2");
    EXPECT_EQ(compose(Q("(X - (Y/3)^2)/2; Y/3"), to_qmap(parse_sepmap("2*X + Y^2; 3*Y"))), identity_map(Rationals{}, 2));
    EXPECT_EQ(invert_nomixed(sep_identity(3)), identity_map(Rationals{}, 3));
    EXPECT_EQ(kind_of([] { invert_nomixed(parse_sepmap("X^2; Y")); }), ErrorKind::JacobianNotConstant);
    EXPECT_EQ(kind_of([] { invert_nomixed(parse_sepmap("X + Z^2; Y + X^2; Z + Y^2")); }), ErrorKind::JacobianNotConstant);
    // inverses can have mixed terms
    const QMap inv = invert_nomixed(parse_sepmap("X + Y^2; Y + Z^3; Z"));
    EXPECT_EQ(format_qmap(inv), "X1 - X2^2 + 2*X2*X3^3 - X3^6; X2 - X3^3; X3");
}

TEST(Separated, InvertRoundTrip) {
    // the inverse of a depth-k chain of degree-m shifts has degree m^k, and
    // composing it with a dense affine mix grows fast; n <= 3 keeps this exact check cheap
    std::mt19937_64 rng(57);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = 1 + rng() % 3;
        const SepMap g = permute_map(random_unitriangular_map(n, rng, n <= 2 ? 3 : 2), random_perm(n, rng));
        std::vector<Rational> c(n);
        for (auto& x : c) x = small_rational(rng);
        const SepMap f = affine_combination(random_invertible(n, rng), g, c);
        const QMap inv = invert_nomixed(f);
        const QMap fq = to_qmap(f);
        ASSERT_EQ(compose(fq, inv), identity_map(Rationals{}, n)) << format_sepmap(f);
        ASSERT_EQ(compose(inv, fq), identity_map(Rationals{}, n)) << format_sepmap(f);
    }
}

TEST(Separated, InvertLargerMaps) {
    // n = 4, 5: f o f^{-1} symbolically, f^{-1} o f at exact rational points
    std::mt19937_64 rng(60);
    for (int it = 0; it < 10; ++it) {
        const std::size_t n = 4 + rng() % 2;
        const SepMap g = permute_map(random_unitriangular_map(n, rng, 2), random_perm(n, rng));
        std::vector<Rational> c(n);
        for (auto& x : c) x = small_rational(rng);
        const SepMap f = affine_combination(random_invertible(n, rng), g, c);
        const QMap inv = invert_nomixed(f);
        const QMap fq = to_qmap(f);
        ASSERT_EQ(compose(fq, inv), identity_map(Rationals{}, n)) << format_sepmap(f);
        for (int k = 0; k < 5; ++k) {
            std::vector<Rational> x(n), y(n), z(n);
            for (auto& v : x) v = small_rational(rng);
            for (std::size_t i = 0; i < n; ++i) y[i] = fq[i].evaluate(x);
            for (std::size_t i = 0; i < n; ++i) z[i] = inv[i].evaluate(y);
            ASSERT_EQ(z, x);
        }
    }
}

TEST(Separated, LinearizeTriangularExamples) {
    {
        const auto r = linearize_triangular(parse_sepmap("-X; -Y"), 2);
        EXPECT_EQ(r.h, identity_map(Rationals{}, 2));
        EXPECT_EQ(r.diagonal, (std::vector<Rational>{-1, -1}));
    }
    EXPECT_EQ(kind_of([] { linearize_triangular(parse_sepmap("-X; 2*Y"), 2); }), ErrorKind::OrderViolated);
    {
        const SepMap f = parse_sepmap("-X + Y^2; -Y");
        const auto r = linearize_triangular(f, 2);
        EXPECT_EQ(format_qmap(r.h), "X1 + (1/2)*X2^2; X2");
        EXPECT_EQ(compose(compose(r.h_inv, to_qmap(f)), r.h), Q("-X; -Y"));
        EXPECT_EQ(format_qpoly(r.shifts[0]), "-(1/2)*X2^2");
    }
    EXPECT_EQ(linearize_triangular(sep_identity(2), 1).h, identity_map(Rationals{}, 2));
    EXPECT_EQ(kind_of([] { linearize_triangular(parse_sepmap("X + Y^2; Y"), 3); }), ErrorKind::OrderViolated);
    EXPECT_EQ(kind_of([] { linearize_triangular(parse_sepmap("Y; X"), 2); }), ErrorKind::NotTriangular);
}

TEST(Separated, LinearizeTriangularRandom) {
    // f = k D k^{-1} with D = diag(+-1) and k triangular has order 2
    std::mt19937_64 rng(58);
    for (int it = 0; it < 25; ++it) {
        const std::size_t n = 1 + rng() % 3;
        const SepMap ks = random_unitriangular_map(n, rng);
        const QMap kq = to_qmap(ks);
        const QMap kq_inv = invert_nomixed(ks);
        QMap diag;
        for (std::size_t i = 0; i < n; ++i)
            diag.push_back(QMPoly::variable(Rationals{}, n, i).scaled(Rational(rng() % 2 ? 1 : -1)));
        const QMap f = compose(compose(kq, diag), kq_inv);
        ASSERT_TRUE(is_triangular(f));
        const std::uint64_t d = 2 * (1 + rng() % 2);
        const auto r = linearize_triangular(f, d);
        const QMap lin = compose(compose(r.h_inv, f), r.h);
        for (std::size_t i = 0; i < n; ++i)
            ASSERT_EQ(lin[i], QMPoly::variable(Rationals{}, n, i).scaled(r.diagonal[i])) << format_qmap(f);
        ASSERT_EQ(compose(r.h, r.h_inv), identity_map(Rationals{}, n));
    }
}

TEST(Separated, CoordinateRecognition) {
    EXPECT_TRUE(is_coordinate_nomixed(parse_seppoly("X + Y^3")));
    EXPECT_FALSE(is_coordinate_nomixed(parse_seppoly("X^2 + Y^2")));
    EXPECT_TRUE(is_coordinate_nomixed(parse_seppoly("5*X")));
    EXPECT_FALSE(is_coordinate_nomixed(parse_seppoly("X + X^2 + Y^2")));
    std::mt19937_64 rng(59);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = 1 + rng() % 4;
        SepPoly f(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> c(1 + rng() % 3, Rational(0));
            for (std::size_t e = 1; e < c.size(); ++e)
                if (rng() % 2) c[e] = small_rational(rng);
            f.parts[j] = QUniPoly(Rationals{}, std::move(c));
        }
        // some partial derivative is a nonzero constant
        const QMPoly p = to_mpoly(f);
        bool oracle = false;
        for (std::size_t j = 0; j < n; ++j) {
            const QMPoly dj = p.derivative(j);
            oracle = oracle || (dj.is_constant() && !dj.is_zero());
        }
        ASSERT_EQ(is_coordinate_nomixed(f), oracle) << format_seppoly(f);
    }
}

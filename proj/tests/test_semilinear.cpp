#include <random>

#include <gtest/gtest.h>

#include "svf/semilinear.hpp"

using namespace svf;

namespace {

constexpr long kPrec = 40;

Isocrystal iso(const QqContextPtr& ctx, std::initializer_list<std::initializer_list<long>> rows) {
    Matrix<mpz_class> m(rows.size(), rows.size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long x : r) m(i, j++) = x;
        ++i;
    }
    return make_isocrystal(ctx, m, kPrec);
}

std::vector<mpq_class> expanded(const SlopeProfile& s) { return s.expanded(); }

// Oracle: unit root of x^2 + 3x + 5 over Z_5 by Newton iteration on integers.
mpz_class unit_root_mod(long k) {
    const mpz_class mod = mpz_pow(5, k);
    mpz_class u = -3;
    for (int it = 0; it < 10; ++it) {
        mpz_class f = u * u + 3 * u + 5;
        mpz_class df = 2 * u + 3;
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), mod.get_mpz_t());
        u = (u - f * inv) % mod;
        if (u < 0) u += mod;
    }
    return u;
}

QqMatrix random_invertible_integral(const QqContextPtr& ctx, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> d(-4, 4);
    while (true) {
        QqMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Coeffs c(ctx->degree());
                for (auto& x : c) x = d(rng);
                m(i, j) = QqElement::from_coeffs(ctx, 0, c, kPrec);
            }
        try {
            if (det_valuation(m) == 0) return m;
        } catch (const Error&) {
        }
    }
}

} // namespace

TEST(Linearize, Examples) {
    auto ctx1 = QqContext::make(5, 1);
    auto e = iso(ctx1, {{1, 2}, {3, 4}});
    EXPECT_EQ(linearize(e), e.matrix);
    auto ctx2 = QqContext::make(3, 2);
    auto id = iso(ctx2, {{1, 0}, {0, 1}});
    EXPECT_EQ(linearize(id), id.matrix);
    auto swap = iso(ctx2, {{0, 1}, {1, 0}});
    const auto sq = linearize(swap);
    EXPECT_TRUE(agrees(sq(0, 0), QqElement::one(ctx2, kPrec)));
    EXPECT_TRUE(sq(0, 1).is_zero());
    EXPECT_TRUE(sq(1, 0).is_zero());
    EXPECT_TRUE(agrees(sq(1, 1), QqElement::one(ctx2, kPrec)));
}

TEST(Linearize, ConjugationEquivariant) {
    auto ctx = QqContext::make(3, 2);
    std::mt19937_64 rng(4);
    auto e = iso(ctx, {{0, 3}, {1, 1}});
    auto p = random_invertible_integral(ctx, 2, rng);
    Isocrystal conj{ctx, inverse(p) * e.matrix * apply_frobenius(p, 1)};
    const QqMatrix lhs = linearize(conj);
    const QqMatrix rhs = inverse(p) * linearize(e) * p;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(agrees(lhs(i, j), rhs(i, j)));
}

TEST(Slopes, Examples) {
    auto ctx = QqContext::make(5, 1);
    // companion of 1 + 3t + 5t^2 (ordinary), 1 + 5t^2 (supersingular)
    EXPECT_EQ(expanded(slopes(iso(ctx, {{0, -5}, {1, -3}}))), (std::vector<mpq_class>{0, 1}));
    EXPECT_EQ(expanded(slopes(iso(ctx, {{0, -5}, {1, 0}}))), (std::vector<mpq_class>{mpq_class(1, 2), mpq_class(1, 2)}));
    EXPECT_EQ(expanded(slopes(iso(ctx, {{5}}))), (std::vector<mpq_class>{1}));
    // from polynomials directly
    EXPECT_EQ(expanded(slopes_of_polynomial(make_int_poly({1, -2, 5}), 1, 5)), (std::vector<mpq_class>{0, 1}));
    EXPECT_EQ(expanded(slopes_of_polynomial(make_int_poly({1, 0, 25}), 2, 5)),
              (std::vector<mpq_class>{mpq_class(1, 2), mpq_class(1, 2)}));
}

TEST(Slopes, DegenerateCrystalRejected) {
    auto ctx = QqContext::make(5, 1);
    try {
        (void)slopes(iso(ctx, {{1, 1}, {1, 1}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_crystal);
    }
}

TEST(Slopes, InvariantUnderSemilinearChangeOfBasis) {
    std::mt19937_64 rng(8);
    for (auto [p, a] : {std::pair{5L, 1u}, {3L, 2u}, {2L, 2u}}) {
        auto ctx = QqContext::make(p, a);
        const std::vector<Isocrystal> samples{iso(ctx, {{0, p}, {1, 0}}), iso(ctx, {{1, 0, 0}, {0, p, 1}, {0, 0, p * p}}),
                                              iso(ctx, {{0, 0, p}, {1, 0, 0}, {0, 1, 0}})};
        for (const auto& e : samples) {
            const auto base = slopes(e);
            for (int t = 0; t < 4; ++t) {
                auto pm = random_invertible_integral(ctx, e.rank(), rng);
                Isocrystal conj{ctx, inverse(pm) * e.matrix * apply_frobenius(pm, 1)};
                EXPECT_EQ(slopes(conj).segments, base.segments);
            }
            // sum of slopes = ord_q det F^a
            EXPECT_EQ(base.total() * static_cast<long>(a), mpq_class(det_valuation(linearize(e))));
        }
    }
}

TEST(SlopeDecompose, SingleSlope) {
    auto ctx = QqContext::make(5, 1);
    auto e = iso(ctx, {{0, -5}, {1, 0}});
    auto pieces = slope_decompose(e);
    ASSERT_EQ(pieces.size(), 1u);
    EXPECT_EQ(pieces[0].first, mpq_class(1, 2));
    EXPECT_EQ(pieces[0].second.matrix, e.matrix);
}

TEST(SlopeDecompose, OrdinaryEllipticUnitRoot) {
    auto ctx = QqContext::make(5, 1);
    auto pieces = slope_decompose(iso(ctx, {{0, -5}, {1, -3}}));
    ASSERT_EQ(pieces.size(), 2u);
    EXPECT_EQ(pieces[0].first, 0);
    EXPECT_EQ(pieces[1].first, 1);
    ASSERT_EQ(pieces[0].second.rank(), 1u);
    const QqElement u = pieces[0].second.matrix(0, 0);
    const QqElement w = pieces[1].second.matrix(0, 0);
    EXPECT_EQ(u.valuation(), 0);
    EXPECT_EQ(w.valuation(), 1);
    const long digits = std::min<long>(u.rel_prec(), 20);
    ASSERT_GE(digits, 10);
    const mpz_class oracle = unit_root_mod(digits);
    EXPECT_TRUE(agrees(u.truncated(digits), QqElement::from_integer(ctx, oracle, digits)));
    EXPECT_TRUE(agrees((u * w).truncated(digits), QqElement::from_integer(ctx, 5, digits)));
}

TEST(SlopeDecompose, FactorsMultiplyBack) {
    std::mt19937_64 rng(21);
    for (auto [p, a] : {std::pair{5L, 1u}, {3L, 2u}}) {
        auto ctx = QqContext::make(p, a);
        auto base = iso(ctx, {{1, 0, 0}, {0, 0, p}, {0, 1, 0}});
        auto pm = random_invertible_integral(ctx, 3, rng);
        Isocrystal e{ctx, inverse(pm) * base.matrix * apply_frobenius(pm, 1)};
        const auto prof = slope_profile_with_factors(e);
        ASSERT_EQ(prof.factors.size(), 2u);
        QqPoly prod{QqElement::one(ctx, kPrec)};
        for (const auto& f : prof.factors) {
            EXPECT_EQ(slopes_of_polynomial(f, a).segments.size(), 1u);
            QqPoly next(prod.size() + f.size() - 1, QqElement::zero(ctx));
            for (std::size_t i = 0; i < prod.size(); ++i)
                for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += prod[i] * f[j];
            prod = next;
        }
        const auto full = charpoly(linearize(e));
        ASSERT_EQ(prod.size(), full.size());
        for (std::size_t i = 0; i < full.size(); ++i) EXPECT_TRUE(agrees(prod[i], full[i])) << i;
    }
}

TEST(SlopeDecompose, DirectSumRefinesBlocks) {
    auto ctx = QqContext::make(3, 1);
    auto x = iso(ctx, {{0, 3}, {1, 0}});                 // slope 1/2
    auto y = iso(ctx, {{2, 0}, {0, 9}});                 // slopes 0, 2
    Isocrystal sum{ctx, direct_sum(x.matrix, y.matrix, QqElement::zero(ctx))};
    auto pieces = slope_decompose(sum);
    ASSERT_EQ(pieces.size(), 3u);
    EXPECT_EQ(pieces[0].first, 0);
    EXPECT_EQ(pieces[1].first, mpq_class(1, 2));
    EXPECT_EQ(pieces[2].first, 2);
    EXPECT_EQ(pieces[1].second.rank(), 2u);
}

TEST(Slopes, FirstSlopeByIteration) {
    // ord_p(F^{an} v) / (a n) approaches the least slope.
    for (auto [p, a] : {std::pair{3L, 1u}, {2L, 2u}}) {
        auto ctx = QqContext::make(p, a);
        auto e = iso(ctx, {{0, 0, p}, {p, 0, 0}, {0, p * p, 0}});
        const mpq_class least = slopes(e).segments.front().slope;
        const QqMatrix m = linearize(e);
        QqMatrix v(3, 1);
        for (std::size_t i = 0; i < 3; ++i) v(i, 0) = QqElement::from_integer(ctx, static_cast<long>(i + 1), kPrec);
        QqMatrix w = v;
        for (long n = 1; n <= 12; ++n) {
            w = m * w;
            mpq_class ratio(min_valuation(w), static_cast<long>(a) * n);
            ratio.canonicalize();
            // |ratio - least| <= C / n with C bounded by the lattice distortion
            EXPECT_LE(abs(ratio - least), mpq_class(2, n)) << n;
        }
    }
}

TEST(Eigenproduct, Examples) {
    // 1 - t, r = 0
    auto d0 = eigenproduct_excluding(to_rat(make_int_poly({1, -1})), mpq_class(1),
                                     slopes_of_polynomial(make_int_poly({1, -1}), 1, 5), 0, 1, 5);
    EXPECT_EQ(d0.multiplicity, 1u);
    EXPECT_EQ(d0.value_valuation, 0);
    EXPECT_EQ(d0.slope_deficit, 0);
    // 1 + 3t + 5t^2, q = 5, r = 1: value 9/5
    const IntPoly ell = make_int_poly({1, 3, 5});
    auto d1 = eigenproduct_excluding(to_rat(ell), mpq_class(5), slopes_of_polynomial(ell, 1, 5), 1, 1, 5);
    EXPECT_EQ(d1.multiplicity, 0u);
    EXPECT_EQ(*d1.value, mpq_class(9, 5));
    EXPECT_EQ(d1.value_valuation, -1);
    EXPECT_EQ(d1.slope_deficit, 1);
    // 1 - 5t, r = 1
    const IntPoly l = make_int_poly({1, -5});
    auto d2 = eigenproduct_excluding(to_rat(l), mpq_class(5), slopes_of_polynomial(l, 1, 5), 1, 1, 5);
    EXPECT_EQ(d2.multiplicity, 1u);
    EXPECT_EQ(*d2.value, 1);
    EXPECT_EQ(d2.slope_deficit, 0);
}

TEST(Eigenproduct, PadicRouteMatchesExact) {
    auto ctx = QqContext::make(5, 1);
    const IntPoly ell = make_int_poly({1, 3, 5});
    QqPoly f;
    for (const auto& c : ell) f.push_back(QqElement::from_integer(ctx, c, kPrec));
    const QqElement c = QqElement::from_integer(ctx, 5, kPrec);
    auto d = eigenproduct_excluding(f, c, slopes_of_polynomial(f, 1), 1, 1);
    EXPECT_EQ(d.multiplicity, 0u);
    EXPECT_EQ(d.value_valuation, -1);
    EXPECT_GE(d.certified_digits, kGuardDigits);
}

TEST(Eigenproduct, MatchesBruteForceOnDiagonal) {
    // diagonal F^a with explicit entries: compute both products directly
    const long p = 3;
    const std::vector<std::vector<long>> diags{{1, 3, 9}, {2, 3, 3}, {9, 5, 27}, {1, 1, 4}};
    for (long r = 0; r <= 2; ++r)
        for (const auto& dg : diags) {
            const mpq_class c = r == 0 ? 1 : (r == 1 ? 3 : 9);
            // brute force
            mpq_class prod1 = 1, deficit = 0;
            unsigned mult = 0;
            for (long a : dg) {
                if (mpq_class(a) == c) {
                    ++mult;
                    continue;
                }
                prod1 *= 1 - mpq_class(a) / c;
            }
            for (long a : dg) {
                const long s = mpz_valuation(a, p);
                if (s < r) deficit += r - s;
            }
            IntPoly f{1};
            for (long a : dg) f = poly_mul(f, IntPoly{1, -a});
            bool simple = true;
            for (std::size_t i = 0; i < dg.size(); ++i)
                for (std::size_t j = i + 1; j < dg.size(); ++j) (void)simple;
            auto d = eigenproduct_excluding(to_rat(f), c, slopes_of_polynomial(f, 1, p), r, 1, p);
            EXPECT_EQ(d.multiplicity, mult);
            EXPECT_EQ(d.value_valuation, mpq_valuation(prod1, p));
            EXPECT_EQ(*d.value, prod1);
            EXPECT_EQ(d.slope_deficit, deficit);
        }
}

TEST(Semisimple, Examples) {
    auto ctx = QqContext::make(5, 1);
    EXPECT_TRUE(semisimple_at(iso(ctx, {{5, 0}, {0, 5}}), 1));
    EXPECT_FALSE(semisimple_at(iso(ctx, {{5, 1}, {0, 5}}), 1));
    EXPECT_TRUE(semisimple_at(iso(ctx, {{0, -5}, {1, -3}}), 1));
    try {
        (void)eigenproduct_excluding(iso(ctx, {{5, 1}, {0, 5}}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::multiple_root);
    }
    Matrix<mpq_class> jordan{{5, 1}, {0, 5}}, diag{{5, 0}, {0, 5}};
    EXPECT_FALSE(semisimple_at(jordan, mpq_class(5)));
    EXPECT_TRUE(semisimple_at(diag, mpq_class(5)));
    EXPECT_TRUE(semisimple_at(jordan, mpq_class(1)));
}

TEST(Purity, Examples) {
    auto r1 = purity_check(make_int_poly({1, 3, 5}), 1, 5);
    EXPECT_TRUE(r1.compatible);
    EXPECT_TRUE(r1.pure);
    auto r2 = purity_check(make_int_poly({1, -1}), 0, 5);
    EXPECT_TRUE(r2.compatible);
    EXPECT_TRUE(r2.pure);
    auto r3 = purity_check(make_int_poly({1, -6, 5}), 1, 5);
    EXPECT_TRUE(r3.compatible);
    EXPECT_FALSE(r3.pure); // mixed-compatible
    auto r4 = purity_check(make_int_poly({1, 1, 5}), 2, 5);
    EXPECT_FALSE(r4.compatible);
}

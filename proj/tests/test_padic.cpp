#include <random>

#include <gtest/gtest.h>

#include "svf/padic.hpp"

using namespace svf;

namespace {

QqElement random_element(const QqContextPtr& ctx, std::mt19937_64& rng, long prec, int vmin = -3, int vmax = 3) {
    std::uniform_int_distribution<int> vd(vmin, vmax);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(rng());
    Coeffs c(ctx->degree());
    for (auto& x : c) x = gr.get_z_range(ctx->p_power(prec));
    return QqElement::from_coeffs(ctx, vd(rng), c, prec);
}

// Oracle: iterate x -> x^p modulo p^k until the value stops changing.
long teichmuller_by_iteration(long p, long x, long k) {
    long mod = 1;
    for (long i = 0; i < k; ++i) mod *= p;
    long cur = x % mod;
    for (int it = 0; it < 100; ++it) {
        long next = 1;
        for (long i = 0; i < p; ++i) next = next * cur % mod;
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

} // namespace

TEST(Padic, ValuationOfP) {
    auto ctx = QqContext::make(5, 1);
    EXPECT_EQ(QqElement::from_integer(ctx, 5, 32).valuation(), 1);
    auto one = QqElement::one(ctx, 32);
    auto one_plus_p = QqElement::from_integer(ctx, 6, 32);
    EXPECT_EQ((one - one_plus_p).valuation(), 1);
}

TEST(Padic, ZeroAtPrecisionIsNotExactZero) {
    auto ctx = QqContext::make(5, 1);
    auto z = QqElement::from_coeffs(ctx, 0, Coeffs{0}, 16);
    EXPECT_TRUE(z.is_indistinguishable_from_zero());
    EXPECT_FALSE(z.is_exact_zero());
    EXPECT_EQ(z.abs_prec(), 16);
    try {
        (void)z.valuation();
        FAIL() << "expected precision-exhausted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::precision_exhausted);
    }
    EXPECT_EQ(QqElement::zero(ctx).valuation(), kInfinity);
    // x - x keeps the precision of x
    auto x = QqElement::from_integer(ctx, 7, 10);
    auto d = x - x;
    EXPECT_TRUE(d.is_indistinguishable_from_zero());
    EXPECT_EQ(d.abs_prec(), 10);
}

TEST(Padic, PrecisionNeverInflates) {
    auto ctx = QqContext::make(3, 1);
    auto x = QqElement::from_integer(ctx, 2, 10);
    auto y = QqElement::from_integer(ctx, 9, 20); // val 2, abs 22
    EXPECT_EQ((x + y).abs_prec(), 10);
    EXPECT_EQ((x * y).rel_prec(), 10);
    auto z = QqElement::from_integer(ctx, 1, 10) - QqElement::from_integer(ctx, 10, 10); // -9
    EXPECT_EQ(z.valuation(), 2);
    EXPECT_EQ(z.rel_prec(), 8);
}

TEST(Padic, RationalRoundTrip) {
    auto ctx = QqContext::make(5, 1);
    auto x = QqElement::from_rational(ctx, mpq_class(9, 4), 20);
    EXPECT_EQ(x.valuation(), 0);
    auto four = QqElement::from_integer(ctx, 4, 20);
    EXPECT_TRUE(agrees(x * four, QqElement::from_integer(ctx, 9, 20)));
    auto y = QqElement::from_rational(ctx, mpq_class(3, 25), 20);
    EXPECT_EQ(y.valuation(), -2);
}

TEST(Padic, SmallestIrreducibleModulus) {
    auto ctx = QqContext::make(5, 2);
    EXPECT_EQ(ctx->modulus(), (Coeffs{2, 0, 1})); // x^2 + 2
    auto ctx2 = QqContext::make(2, 3);
    EXPECT_EQ(ctx2->modulus(), (Coeffs{1, 1, 0, 1})); // x^3 + x + 1
}

TEST(Padic, FrobeniusTrivialOverQp) {
    auto ctx = QqContext::make(7, 1);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        auto x = random_element(ctx, rng, 32);
        EXPECT_EQ(x.frobenius(), x);
    }
}

TEST(Padic, FrobeniusOrderA) {
    for (auto [p, a] : {std::pair{5L, 2u}, {2L, 3u}, {3L, 4u}}) {
        auto ctx = QqContext::make(p, a);
        std::mt19937_64 rng(p * 100 + a);
        for (int i = 0; i < 10; ++i) {
            auto x = random_element(ctx, rng, 32);
            QqElement y = x;
            for (unsigned k = 0; k < a; ++k) y = y.frobenius();
            EXPECT_EQ(y, x);
            EXPECT_EQ(x.frobenius().frobenius_inverse(), x);
        }
    }
}

TEST(Padic, FrobeniusIsRingHomomorphism) {
    auto ctx = QqContext::make(3, 3);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
        auto x = random_element(ctx, rng, 32);
        auto y = random_element(ctx, rng, 32);
        EXPECT_TRUE(agrees((x + y).frobenius(), x.frobenius() + y.frobenius()));
        EXPECT_EQ((x * y).frobenius(), x.frobenius() * y.frobenius());
    }
}

TEST(Padic, FrobeniusReducesToPthPower) {
    auto ctx = QqContext::make(5, 2);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        auto x = random_element(ctx, rng, 16, 0, 0);
        EXPECT_EQ(x.frobenius().residue(), x.residue().frobenius());
    }
}

TEST(Padic, ValuationProperties) {
    auto ctx = QqContext::make(3, 2);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto x = random_element(ctx, rng, 32);
        auto y = random_element(ctx, rng, 32);
        EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
        auto s = x + y;
        if (s.is_zero()) continue;
        EXPECT_GE(s.valuation(), std::min(x.valuation(), y.valuation()));
        if (x.valuation() != y.valuation()) {
            EXPECT_EQ(s.valuation(), std::min(x.valuation(), y.valuation()));
        }
    }
}

TEST(Padic, InverseIsInverse) {
    auto ctx = QqContext::make(2, 4);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto x = random_element(ctx, rng, 40);
        auto one = x * x.inverse();
        EXPECT_TRUE(agrees(one, QqElement::one(ctx, 40)));
        EXPECT_EQ(one.valuation(), 0);
    }
}

TEST(Teichmuller, BasicValues) {
    auto ctx = QqContext::make(5, 1);
    auto field = ctx->residue_field();
    auto one = teichmuller(ctx, FiniteFieldElement::constant(field, 1), 20);
    EXPECT_EQ(one, QqElement::one(ctx, 20));
    auto minus_one = teichmuller(ctx, FiniteFieldElement::constant(field, -1), 20);
    EXPECT_TRUE(agrees(minus_one, -QqElement::one(ctx, 20)));
}

TEST(Teichmuller, TwoModFiveCubed) {
    auto ctx = QqContext::make(5, 1);
    const long oracle = teichmuller_by_iteration(5, 2, 3);
    EXPECT_EQ(oracle, 57);
    auto t = teichmuller(ctx, FiniteFieldElement::constant(ctx->residue_field(), 2), 3);
    EXPECT_EQ(t.unit()[0], oracle);
}

TEST(Teichmuller, MultiplicativeAndFrobeniusCompatible) {
    auto ctx = QqContext::make(3, 2);
    auto field = ctx->residue_field();
    const long prec = 24;
    const unsigned long q = 9;
    for (long c0 = 0; c0 < 3; ++c0)
        for (long c1 = 0; c1 < 3; ++c1) {
            FiniteFieldElement w(field, {c0, c1});
            if (w.is_zero()) continue;
            auto tw = teichmuller(ctx, w, prec);
            EXPECT_TRUE(agrees(tw.pow(static_cast<long>(q - 1)), QqElement::one(ctx, prec)));
            EXPECT_EQ(tw.frobenius(), teichmuller(ctx, w.pow(3), prec));
            FiniteFieldElement v(field, {1, 1});
            EXPECT_TRUE(agrees(teichmuller(ctx, w * v, prec), tw * teichmuller(ctx, v, prec)));
        }
}

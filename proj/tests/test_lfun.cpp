#include <gtest/gtest.h>

#include "svf/lfun.hpp"

using namespace svf;

namespace {

RatPoly rp(std::initializer_list<long> c) { return to_rat(make_int_poly(c)); }

RationalFunction p1(long q) { return assemble({{0, make_int_poly({1, -1})}, {2, make_int_poly({1, -q})}}); }

} // namespace

TEST(Assemble, Examples) {
    auto z = p1(5);
    EXPECT_EQ(z.numerator, rp({1}));
    EXPECT_EQ(z.denominator, rp({1, -6, 5}));
    EXPECT_EQ(z.to_string(), "1 / ((1 - t) (1 - 5t))");
    auto e = assemble({});
    EXPECT_EQ(e.numerator, rp({1}));
    EXPECT_EQ(e.denominator, rp({1}));
    auto ell = assemble({{0, make_int_poly({1, -1})}, {1, make_int_poly({1, 3, 5})}, {2, make_int_poly({1, -5})}});
    EXPECT_EQ(ell.numerator, rp({1, 3, 5}));
    EXPECT_EQ(ell.denominator, rp({1, -6, 5}));
}

TEST(Assemble, CancelsCommonFactors) {
    // G_m: (1 - t) / (1 - q t) arrives as degree 1 over degree 2
    auto g = assemble({{1, make_int_poly({1, -1})}, {2, make_int_poly({1, -3})}, {0, make_int_poly({1, -1})}});
    EXPECT_EQ(g.numerator, rp({1}));
    EXPECT_EQ(g.denominator, rp({1, -3}));
}

TEST(PoleOrder, Examples) {
    auto z = p1(5);
    EXPECT_EQ(pole_order_at(z, 5, 1), 1);
    EXPECT_EQ(pole_order_at(z, 5, 0), 1);
    EXPECT_EQ(pole_order_at(z, 5, 2), 0);
    auto zero = assemble({{1, make_int_poly({1, -10, 25})}});
    EXPECT_EQ(pole_order_at(zero, 5, 1), -2);
}

TEST(LeadingCoefficient, Examples) {
    for (long q : {2L, 3L, 5L, 9L}) {
        auto z = p1(q);
        EXPECT_EQ(leading_coefficient(z, q, 1, 1), mpq_class(q, q - 1));
        EXPECT_EQ(leading_coefficient(z, q, 0, 1), mpq_class(-1, q - 1));
    }
    auto ell = assemble({{0, make_int_poly({1, -1})}, {1, make_int_poly({1, 3, 5})}, {2, make_int_poly({1, -5})}});
    EXPECT_EQ(leading_coefficient(ell, 5, 1, 1), mpq_class(9, 4));
    EXPECT_THROW((void)leading_coefficient(ell, 5, 1, 0), Error);
}

TEST(LeadingCoefficient, ReconstructsSeries) {
    // Z(t) = c (1 - q^r t)^{-rho} (1 + O(1 - q^r t)); check Z (1 - q^r t)^rho
    // is a rational function regular at q^{-r} taking the value c.
    auto z = p1(3);
    const long rho = pole_order_at(z, 3, 1);
    RatPoly num = z.numerator;
    for (long i = 0; i < rho; ++i) num = poly_mul(num, rp({1, -3}));
    const RationalFunction local{num, z.denominator, {}};
    RationalFunction reduced = local;
    normalize(reduced);
    EXPECT_EQ(reduced.denominator, rp({1, -1}));
    EXPECT_EQ(poly_eval(reduced.numerator, mpq_class(1, 3)) / poly_eval(reduced.denominator, mpq_class(1, 3)),
              leading_coefficient(z, 3, 1, rho));
    // first five series terms of Z agree with those of reduced / (1 - 3t)
    RationalFunction back = reduced;
    back.denominator = poly_mul(back.denominator, rp({1, -3}));
    EXPECT_EQ(back.series(5), z.series(5));
}

TEST(AbsValuationInverse, Examples) {
    EXPECT_EQ(abs_valuation_inverse(mpq_class(9, 4), 5), 0);
    EXPECT_EQ(abs_valuation_inverse(mpq_class(9, 4), 3), 2);
    EXPECT_EQ(abs_valuation_inverse(mpq_class(9, 8), 3), 2);
    EXPECT_EQ(abs_valuation_inverse(mpq_class(9, 8), 2), -3);
    EXPECT_EQ(abs_valuation_inverse(mpq_class(25, 24), 5), 2); // q/(q-1), q = 25
}

TEST(EulerProduct, AffineLineOverF2) {
    // closed points of A^1/F_2: 2, 1, 2, 3, ...
    EulerFactorData d;
    const std::vector<long> a{2, 1, 2, 3, 6, 9, 18, 30, 56, 99};
    for (std::size_t i = 0; i < a.size(); ++i) d.factors[static_cast<long>(i + 1)].push_back({{1, -1}, a[i]});
    auto s = euler_product_series(d, 11);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k], mpq_class(1L << k)) << k;
}

TEST(EulerProduct, EmptyAndIncomplete) {
    EulerFactorData empty;
    for (long d = 1; d <= 4; ++d) empty.factors[d] = {};
    auto s = euler_product_series(empty, 5);
    EXPECT_EQ(s, (RatPoly{1, 0, 0, 0, 0}));
    EulerFactorData gap;
    gap.factors[1].push_back({{1, -1}, 1});
    EXPECT_THROW((void)euler_product_series(gap, 4), Error);
}

TEST(Series, RationalFunctionExpansion) {
    auto g = assemble({{1, make_int_poly({1, -1})}, {2, make_int_poly({1, -4})}});
    // (1 - t)/(1 - 4t) = 1 + 3t + 12t^2 + 48 t^3
    EXPECT_EQ(g.series(4), (RatPoly{1, 3, 12, 48}));
}

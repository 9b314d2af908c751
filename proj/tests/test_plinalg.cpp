#include <random>
#include <set>

#include <gtest/gtest.h>

#include "svf/plinalg.hpp"

using namespace svf;

namespace {

constexpr long kPrec = 32;

QqMatrix int_matrix(const QqContextPtr& ctx, std::initializer_list<std::initializer_list<long>> rows) {
    QqMatrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (long x : r) m(i, j++) = QqElement::from_integer(ctx, x, kPrec);
        ++i;
    }
    return m;
}

QqMatrix rat_matrix(const QqContextPtr& ctx, const Matrix<mpq_class>& m) {
    return m.map([&](const mpq_class& x) { return QqElement::from_rational(ctx, x, kPrec); });
}

// Random integer matrix that is unimodular over Z: product of elementary
// operations.
Matrix<long> random_unimodular(std::size_t n, std::mt19937_64& rng) {
    Matrix<long> m(n, n, 0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> coef(-3, 3);
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const long c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
    }
    return m;
}

Matrix<long> mul(const Matrix<long>& a, const Matrix<long>& b) {
    Matrix<long> r(a.rows(), b.cols(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < a.cols(); ++k) r(i, j) += a(i, k) * b(k, j);
    return r;
}

QqMatrix to_qq(const QqContextPtr& ctx, const Matrix<long>& m) {
    return m.map([&](long x) { return QqElement::from_integer(ctx, x, kPrec); });
}

// Oracle: |Z^n / A Z^n| computed modulo p^k by enumerating the image of A.
long cokernel_order_by_enumeration(const Matrix<long>& a, long p, int k) {
    long mod = 1;
    for (int i = 0; i < k; ++i) mod *= p;
    const std::size_t n = a.rows();
    std::set<std::vector<long>> image;
    std::vector<long> x(n, 0);
    while (true) {
        std::vector<long> y(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            long acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
            y[i] = ((acc % mod) + mod) % mod;
        }
        image.insert(y);
        std::size_t pos = 0;
        while (pos < n && ++x[pos] == mod) x[pos++] = 0;
        if (pos == n) break;
    }
    long total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= mod;
    return total / static_cast<long>(image.size());
}

// Oracle membership: v in lattice with basis B iff B^{-1} v is p-integral.
bool member(const Matrix<mpq_class>& basis_inverse, const std::vector<long>& v, long p) {
    for (std::size_t i = 0; i < basis_inverse.rows(); ++i) {
        mpq_class acc = 0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += basis_inverse(i, j) * v[j];
        if (acc != 0 && mpq_valuation(acc, p) < 0) return false;
    }
    return true;
}

} // namespace

TEST(Smith, DiagonalAndIdentity) {
    auto ctx = QqContext::make(5, 1);
    EXPECT_EQ(smith_normal_form(int_matrix(ctx, {{1, 0}, {0, 5}})).divisors.exponents, (std::vector<long>{0, 1}));
    EXPECT_EQ(smith_normal_form(int_matrix(ctx, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).divisors.exponents,
              (std::vector<long>{0, 0, 0}));
}

TEST(Smith, DeterminantPMatrix) {
    auto ctx = QqContext::make(5, 1);
    Matrix<long> a{{1, 1}, {1, 6}};
    EXPECT_EQ(cokernel_order_by_enumeration(a, 5, 3), 5);
    const auto s = smith_normal_form(to_qq(ctx, a));
    EXPECT_EQ(s.divisors.exponents, (std::vector<long>{0, 1}));
    EXPECT_EQ(s.divisors.zero_columns, 0u);
}

TEST(Smith, TransformsReconstructInput) {
    auto ctx = QqContext::make(3, 2);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> d(-20, 20);
    for (int t = 0; t < 10; ++t) {
        QqMatrix a(3, 4);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                a(i, j) = QqElement::from_coeffs(ctx, 0, Coeffs{d(rng) * 3, d(rng)}, kPrec);
        const auto s = smith_normal_form(a);
        const QqMatrix back = s.u * s.d * s.v;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(agrees(back(i, j), a(i, j)));
        const QqMatrix diag = s.left * a * s.right;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(agrees(diag(i, j), s.d(i, j)));
    }
}

TEST(Smith, DivisorsInvariantUnderUnimodularChange) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 5);
    std::uniform_int_distribution<int> ex(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const long p = trial % 2 ? 3 : 2;
        auto ctx = QqContext::make(p, 1);
        const std::size_t n = size(rng);
        Matrix<long> diag(n, n, 0);
        std::vector<long> expected;
        for (std::size_t i = 0; i < n; ++i) {
            const int e = ex(rng);
            diag(i, i) = 1;
            for (int k = 0; k < e; ++k) diag(i, i) *= p;
            expected.push_back(e);
        }
        std::sort(expected.begin(), expected.end());
        const Matrix<long> a = mul(mul(random_unimodular(n, rng), diag), random_unimodular(n, rng));
        EXPECT_EQ(smith_normal_form(to_qq(ctx, a)).divisors.exponents, expected);
    }
}

TEST(Smith, CokernelOrderMatchesEnumeration) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> e(-6, 6);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        const long p = trial % 2 ? 2 : 3;
        const std::size_t n = trial % 3 ? 2 : 1;
        Matrix<long> a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = e(rng);
        auto ctx = QqContext::make(p, 1);
        SmithForm s;
        try {
            s = smith_normal_form(to_qq(ctx, a));
        } catch (const Error&) {
            continue;
        }
        if (s.rank != n) continue;
        const long maxe = s.divisors.exponents.back();
        if (maxe > 2) continue;
        long order = 1;
        for (long i = 0; i < s.divisors.total(); ++i) order *= p;
        EXPECT_EQ(cokernel_order_by_enumeration(a, p, static_cast<int>(maxe) + 1), order);
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

TEST(Smith, AmbiguousPivotIsPrecisionExhausted) {
    auto ctx = QqContext::make(5, 1);
    QqMatrix a(1, 2);
    a(0, 0) = QqElement::from_integer(ctx, 25, 4);   // valuation 2
    a(0, 1) = QqElement::zero_to(ctx, 1);            // only known mod 5
    EXPECT_THROW(smith_normal_form(a), Error);
}

TEST(Lattice, IntersectBasics) {
    auto ctx = QqContext::make(5, 1);
    auto n = Lattice::standard(ctx, 2, kPrec);
    EXPECT_EQ(lattice_intersect(n, n), n);
    auto zp = Lattice::standard(ctx, 1, kPrec);
    EXPECT_EQ(lattice_intersect(zp, zp.scaled(1)), zp.scaled(1));
}

TEST(Lattice, IntersectMixedScales) {
    const long p = 5;
    auto ctx = QqContext::make(p, 1);
    Matrix<mpq_class> b2{{mpq_class(1, 5), 0}, {0, 5}};
    Lattice n1 = Lattice::standard(ctx, 2, kPrec);
    Lattice n2(rat_matrix(ctx, b2));
    Lattice expected(int_matrix(ctx, {{1, 0}, {0, 5}}));
    const Lattice got = lattice_intersect(n1, n2);
    EXPECT_EQ(got, expected);

    // enumeration mod p^3 over integral vectors: membership in both
    Matrix<mpq_class> b2inv{{5, 0}, {0, mpq_class(1, 5)}};
    Matrix<mpq_class> id{{1, 0}, {0, 1}};
    long count = 0;
    for (long x = 0; x < 125; ++x)
        for (long y = 0; y < 125; ++y)
            if (member(id, {x, y}, p) && member(b2inv, {x, y}, p)) ++count;
    // index of the intersection in Z_p^2 is p^{index_exponent}
    const long idx = n1.index_exponent(got);
    long expect_count = 125 * 125;
    for (long i = 0; i < idx; ++i) expect_count /= p;
    EXPECT_EQ(count, expect_count);
}

TEST(Lattice, IntersectionLaws) {
    auto ctx = QqContext::make(3, 1);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-9, 9);
    auto random_lattice = [&] {
        while (true) {
            QqMatrix m(2, 2);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) m(i, j) = QqElement::from_integer(ctx, d(rng), kPrec);
            try {
                (void)inverse(m);
                return Lattice(m);
            } catch (const Error&) {
            }
        }
    };
    for (int t = 0; t < 15; ++t) {
        auto a = random_lattice(), b = random_lattice(), c = random_lattice();
        const Lattice ab = lattice_intersect(a, b);
        EXPECT_EQ(ab, lattice_intersect(b, a));
        EXPECT_EQ(lattice_intersect(ab, ab), ab);
        EXPECT_EQ(lattice_intersect(ab, c), lattice_intersect(a, lattice_intersect(b, c)));
        EXPECT_TRUE(a.contains(ab));
        EXPECT_TRUE(b.contains(ab));
        // maximality: every integral vector mod 27 in both lattices lies in ab
        const auto inv_a = inverse(a.basis()), inv_b = inverse(b.basis()), inv_ab = inverse(ab.basis());
        auto in = [&](const QqMatrix& inv, long x, long y) {
            for (std::size_t i = 0; i < 2; ++i) {
                QqElement s = inv(i, 0) * QqElement::from_integer(ctx, x, kPrec) +
                              inv(i, 1) * QqElement::from_integer(ctx, y, kPrec);
                if (!s.is_zero() && s.valuation() < 0) return false;
            }
            return true;
        };
        for (long x = 0; x < 27; x += 2)
            for (long y = 0; y < 27; y += 3)
                if (in(inv_a, x, y) && in(inv_b, x, y)) {
                    EXPECT_TRUE(in(inv_ab, x, y));
                }
    }
}

TEST(Lattice, SemilinearPreimage) {
    auto ctx = QqContext::make(5, 1);
    auto n = Lattice::standard(ctx, 2, kPrec);
    auto id = qq_identity(ctx, 2, kPrec);
    EXPECT_EQ(semilinear_preimage(id, n), n);
    auto p_times = int_matrix(ctx, {{5, 0}, {0, 5}});
    EXPECT_EQ(semilinear_preimage(p_times, n), n.scaled(-1));
    auto ss = int_matrix(ctx, {{0, 5}, {1, 0}});
    EXPECT_EQ(semilinear_preimage(ss, n.scaled(1)), Lattice(int_matrix(ctx, {{5, 0}, {0, 1}})));
    auto singular = int_matrix(ctx, {{1, 1}, {1, 1}});
    try {
        (void)semilinear_preimage(singular, n);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_crystal);
    }
}

TEST(Lattice, SemilinearPreimageUnramifiedDegreeTwo) {
    auto ctx = QqContext::make(3, 2);
    const QqElement x = QqElement::from_coeffs(ctx, 0, Coeffs{0, 1}, kPrec);
    const QqElement one = QqElement::one(ctx, kPrec), zero = QqElement::zero(ctx);
    QqMatrix a(2, 2);
    a(0, 0) = x;
    a(0, 1) = one.shift(1);
    a(1, 0) = one;
    a(1, 1) = x.shift(1);
    auto n = Lattice::standard(ctx, 2, kPrec);
    const Lattice pre = semilinear_preimage(a, n.scaled(1));
    // F maps every basis vector of the preimage into pN
    const QqMatrix image = a * apply_frobenius(pre.basis(), 1);
    EXPECT_TRUE(n.scaled(1).contains(Lattice(image)));
    EXPECT_EQ(Lattice(image), n.scaled(1));
}

TEST(Charpoly, Examples) {
    auto ctx = QqContext::make(5, 1);
    auto zero = int_matrix(ctx, {{0, 0}, {0, 0}});
    auto c0 = charpoly(zero);
    EXPECT_TRUE(agrees(c0[0], QqElement::one(ctx, kPrec)));
    EXPECT_TRUE(c0[1].is_zero() && c0[2].is_zero());

    auto c1 = charpoly(int_matrix(ctx, {{2, 0}, {0, 7}}));
    EXPECT_TRUE(agrees(c1[1], QqElement::from_integer(ctx, -9, kPrec)));
    EXPECT_TRUE(agrees(c1[2], QqElement::from_integer(ctx, 14, kPrec)));

    // companion matrix of T^2 + 3T + 5
    Matrix<mpz_class> comp{{0, -5}, {1, -3}};
    EXPECT_EQ(charpoly(comp), (IntPoly{1, 3, 5}));
    auto c2 = charpoly(to_qq(ctx, Matrix<long>{{0, -5}, {1, -3}}));
    EXPECT_TRUE(agrees(c2[1], QqElement::from_integer(ctx, 3, kPrec)));
    EXPECT_TRUE(agrees(c2[2], QqElement::from_integer(ctx, 5, kPrec)));
}

TEST(Charpoly, BerkowitzMatchesExpansion) {
    // 3x3 exact: det(1 - tA) by cofactor expansion of a hand matrix
    Matrix<mpz_class> a{{2, 1, 0}, {0, 3, 4}, {5, 0, 1}};
    // trace 6; sum of principal 2-minors: (6-0)+(2-0)+(3-0)=11; det = 2*3 - 1*(0-20) = 26
    EXPECT_EQ(charpoly(a), (IntPoly{1, -6, 11, -26}));
}

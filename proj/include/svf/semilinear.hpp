#pragma once

// F-isocrystals over F_q: a sigma-semilinear bijection F(v) = A sigma(v) on
// Q_q^n. Everything eigenvalue-related goes through det(1 - t F^a).

#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svf/plinalg.hpp"
#include "svf/poly.hpp"

namespace svf {

struct Isocrystal {
    QqContextPtr ctx;
    QqMatrix matrix; // F(v) = matrix * sigma(v)

    std::size_t rank() const noexcept { return matrix.rows(); }
    long p() const { return ctx->p(); }
    unsigned a() const { return ctx->degree(); }
};

/// Isocrystal with an integer Frobenius matrix.
inline Isocrystal make_isocrystal(const QqContextPtr& ctx, const Matrix<mpz_class>& m, long prec) {
    return {ctx, qq_from_integers(ctx, m, prec)};
}

/// Slopes in ord_q units with multiplicities, weakly increasing.
struct SlopeProfile {
    std::vector<SlopeSegment> segments;
    std::vector<QqPoly> factors; // per-slope factors of det(1 - t F^a), when computed

    long rank() const {
        long n = 0;
        for (const auto& s : segments) n += s.length;
        return n;
    }
    /// sum of slope * multiplicity = ord_q det(F^a)
    mpq_class total() const {
        mpq_class t = 0;
        for (const auto& s : segments) t += s.slope * s.length;
        return t;
    }
    long multiplicity(const mpq_class& slope) const {
        for (const auto& s : segments)
            if (s.slope == slope) return s.length;
        return 0;
    }
    /// Multiset of slopes, one entry per dimension.
    std::vector<mpq_class> expanded() const {
        std::vector<mpq_class> out;
        for (const auto& s : segments)
            for (long i = 0; i < s.length; ++i) out.push_back(s.slope);
        return out;
    }
};

/// The linear map F^a = A sigma(A) ... sigma^{a-1}(A).
inline QqMatrix linearize(const Isocrystal& e) {
    QqMatrix m = e.matrix;
    for (unsigned k = 1; k < e.a(); ++k) m = m * apply_frobenius(e.matrix, k);
    return m;
}

inline SlopeProfile slopes_of_polynomial(const QqPoly& charpoly_coeffs, unsigned a) {
    return {newton_polygon(charpoly_coeffs, static_cast<long>(a)), {}};
}

inline SlopeProfile slopes_of_polynomial(const IntPoly& f, unsigned a, long p) {
    std::vector<long> vals;
    for (const auto& c : f) vals.push_back(mpz_valuation(c, p));
    return {newton_polygon(vals, static_cast<long>(a)), {}};
}

/// Newton polygon of det(1 - t F^a) with respect to ord_q.
inline SlopeProfile slopes(const Isocrystal& e) {
    if (e.rank() == 0) return {};
    (void)inverse(e.matrix); // degenerate-crystal check
    return slopes_of_polynomial(charpoly(linearize(e)), e.a());
}

namespace detail {

// Entries are kept to absolute precision prec so valuations stay bounded.
inline QqMatrix cut(QqMatrix m, long prec) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_exact_zero()) m(i, j) = m(i, j).truncated(prec);
    return m;
}

inline QqMatrix matrix_pow(QqMatrix base, mpz_class e, const QqContextPtr& ctx, long prec) {
    QqMatrix r = qq_identity(ctx, base.rows(), prec);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = cut(r * base, prec);
        e >>= 1;
        if (e > 0) base = cut(base * base, prec);
    }
    return r;
}

inline long working_precision(const QqMatrix& m) {
    long prec = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_exact_zero()) prec = std::max(prec, m(i, j).rel_prec());
    return prec;
}

/// Split off the generalized eigenspace of the smallest slope. Returns the
/// change of basis P (columns: smallest-slope piece first) and its size.
inline std::pair<QqMatrix, std::size_t> split_smallest_slope(const Isocrystal& e, const SlopeSegment& seg) {
    const auto& ctx = e.ctx;
    const std::size_t n = e.rank();
    const long prec = std::min(working_precision(e.matrix), ctx->cap());
    const long num = seg.slope.get_num().get_si();
    const long den = seg.slope.get_den().get_si();
    // M' = M^den / p^{a num}: the smallest slope becomes 0, the rest positive.
    const QqMatrix m = linearize(e);
    QqMatrix mp = m;
    for (long i = 1; i < den; ++i) mp = mp * m;
    mp = shifted(mp, -static_cast<long>(e.a()) * num);

    // Stable lattice L = sum_i M'^i Z_q^n, reached after finitely many steps.
    Lattice l = Lattice::standard(ctx, n, prec);
    for (int it = 0;; ++it) {
        if (it > 64 * static_cast<int>(n) + 64)
            fail(ErrorKind::precision_exhausted, "no stable lattice found while splitting slopes");
        Lattice next = lattice_sum(l, mp * l.basis());
        if (next == l) break;
        l = std::move(next);
    }
    const QqMatrix b = l.basis();
    const QqMatrix integral = inverse(b) * mp * b;

    // Spectral projector onto the unit-root part: residues of unit
    // eigenvalues live in F_{q^f} with f | lcm(1..n).
    unsigned long f = 1;
    for (unsigned long i = 2; i <= n; ++i) f = std::lcm(f, i);
    const mpz_class exponent = mpz_pow(ctx->p(), static_cast<long>(e.a() * f)) - 1;
    QqMatrix proj = matrix_pow(integral, exponent, ctx, prec);
    for (long i = 0; i < prec + 2; ++i) proj = matrix_pow(proj, ctx->p(), ctx, prec);

    const std::size_t k = static_cast<std::size_t>(seg.length);
    const SmithForm s = smith_normal_form(proj, k);
    QqMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) c(i, j) = s.u(i, j);
        for (std::size_t j = k; j < n; ++j) c(i, j) = s.right(i, j);
    }
    return {b * c, k};
}

} // namespace detail

/// Decomposition of an isocrystal into single-slope pieces, smallest slope
/// first. Each piece's Frobenius is the diagonal block of P^{-1} A sigma(P).
inline std::vector<std::pair<mpq_class, Isocrystal>> slope_decompose(const Isocrystal& e) {
    const SlopeProfile prof = slopes(e);
    if (prof.segments.size() <= 1) return {{prof.segments.empty() ? mpq_class(0) : prof.segments[0].slope, e}};

    const auto [change, k] = detail::split_smallest_slope(e, prof.segments[0]);
    const QqMatrix conj = inverse(change) * e.matrix * apply_frobenius(change, 1);
    const std::size_t n = e.rank();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool off = (i < k) != (j < k);
            if (off && !conj(i, j).is_zero()) {
                const long gap = conj(i, j).valuation();
                fail(ErrorKind::precision_exhausted,
                     "slope pieces not separated at working precision (coupling of valuation " +
                         std::to_string(gap) + ")");
            }
        }
    Isocrystal first{e.ctx, conj.block(0, 0, k, k)};
    Isocrystal rest{e.ctx, conj.block(k, k, n - k, n - k)};
    std::vector<std::pair<mpq_class, Isocrystal>> out{{prof.segments[0].slope, first}};
    for (auto& piece : slope_decompose(rest)) out.push_back(std::move(piece));
    return out;
}

/// Slope profile with the per-slope factors of det(1 - t F^a) filled in.
inline SlopeProfile slope_profile_with_factors(const Isocrystal& e) {
    SlopeProfile prof = slopes(e);
    for (const auto& [slope, piece] : slope_decompose(e)) prof.factors.push_back(charpoly(linearize(piece)));
    return prof;
}

/// Valuation data of prod_{a != c}(1 - a/c) and prod_{ord_q a < r} c/a for
/// c = q^r, computed from det(1 - t F^a) without extracting roots.
struct EigenproductData {
    unsigned multiplicity = 0;        // of q^r as an inverse root
    long value_valuation = 0;         // v_p of the deflated polynomial at t = q^{-r}
    std::optional<mpq_class> value;   // exact value when the input is exact
    mpq_class slope_deficit = 0;      // sum_{lambda < r} (r - lambda) mult(lambda), ord_q units
    mpq_class slope_deficit_p = 0;    // the same in v_p units (times a)
    long certified_digits = kInfinity; // relative precision left on the value
};

inline mpq_class slope_deficit(const SlopeProfile& profile, long r) {
    mpq_class s = 0;
    for (const auto& seg : profile.segments)
        if (seg.slope < r) s += (mpq_class(r) - seg.slope) * seg.length;
    return s;
}

/// Exact version for rational polynomials.
inline EigenproductData eigenproduct_excluding(const RatPoly& f, const mpq_class& c, const SlopeProfile& profile,
                                               long r, unsigned a, long p) {
    EigenproductData d;
    auto [m, quotient] = deflate(f, c);
    d.multiplicity = m;
    const mpq_class v = poly_eval(quotient, mpq_class(1 / c));
    if (v == 0) fail(ErrorKind::inconsistent, "deflated polynomial vanishes at 1/c");
    d.value = v;
    d.value_valuation = mpq_valuation(v, p);
    d.slope_deficit = slope_deficit(profile, r);
    d.slope_deficit_p = d.slope_deficit * a;
    return d;
}

/// p-adic version: inverse roots equal to c are detected as remainders that
/// are zero at working precision, in the variable u = c t.
inline EigenproductData eigenproduct_excluding(const QqPoly& f, const QqElement& c, const SlopeProfile& profile,
                                               long r, unsigned a) {
    EigenproductData d;
    if (f.empty()) fail(ErrorKind::inconsistent, "empty polynomial");
    const auto& ctx = c.context();
    // g(u) = f(u / c); inverse root c of f <-> inverse root 1 of g
    QqPoly g(f.size());
    const QqElement cinv = c.inverse();
    QqElement pw = QqElement::one(ctx, ctx->cap());
    for (std::size_t i = 0; i < f.size(); ++i) {
        g[i] = f[i] * pw;
        pw *= cinv;
    }
    const QqElement one = QqElement::one(ctx, ctx->cap());
    while (g.size() > 1) {
        auto [q, rem] = divide_one_minus(g, one);
        if (!rem.is_zero()) break;
        g = std::move(q);
        ++d.multiplicity;
    }
    QqElement value = QqElement::zero(ctx);
    for (const auto& x : g) value += x;
    if (value.is_zero())
        fail(ErrorKind::precision_exhausted, "deflated value indistinguishable from zero");
    d.value_valuation = value.valuation();
    d.certified_digits = value.rel_prec();
    d.slope_deficit = slope_deficit(profile, r);
    d.slope_deficit_p = d.slope_deficit * a;
    return d;
}

/// True iff c is not a multiple root of the minimal polynomial of F^a,
/// i.e. rank (F^a - c)^2 == rank (F^a - c).
inline bool semisimple_at(const QqMatrix& linear, const QqElement& c) {
    const std::size_t n = linear.rows();
    QqMatrix nmat = linear;
    for (std::size_t i = 0; i < n; ++i) nmat(i, i) -= c;
    auto rank_of = [](const QqMatrix& m) {
        const long v = min_valuation(m);
        if (v >= kInfinity) return std::size_t{0};
        return smith_normal_form(shifted(m, -v)).rank;
    };
    return rank_of(nmat * nmat) == rank_of(nmat);
}

inline bool semisimple_at(const Isocrystal& e, long r) {
    const QqElement c = QqElement::from_integer(e.ctx, e.ctx->q(), e.ctx->cap()).pow(r);
    return semisimple_at(linearize(e), c);
}

/// Exact version for a rational matrix of F^a.
inline bool semisimple_at(const Matrix<mpq_class>& linear, const mpq_class& c) {
    Matrix<mpq_class> nmat = linear;
    for (std::size_t i = 0; i < nmat.rows(); ++i) nmat(i, i) -= c;
    return rank(nmat * nmat) == rank(nmat);
}

inline EigenproductData eigenproduct_excluding(const Isocrystal& e, long r) {
    if (!semisimple_at(e, r))
        fail(ErrorKind::multiple_root, "q^" + std::to_string(r) + " is a multiple root of the minimal polynomial");
    const QqElement c = QqElement::from_integer(e.ctx, e.ctx->q(), e.ctx->cap()).pow(r);
    return eigenproduct_excluding(charpoly(linearize(e)), c, slopes(e), r, e.a());
}

struct PurityReport {
    bool compatible = false; // inverse roots stable under alpha -> q^w / alpha
    bool pure = false;       // all |alpha| = q^{w/2} (numerical check)
};

/// Pairing check for an integer polynomial with constant term 1: P equals
/// its q^w-reversal. The "pure" flag is a floating-point diagnostic only.
inline PurityReport purity_check(const IntPoly& f, long w, const mpz_class& q) {
    PurityReport rep;
    if (f.empty() || f[0] != 1) fail(ErrorKind::parse, "purity check needs constant term 1");
    const RatPoly rf = to_rat(f);
    if (f.size() == 1) return {true, true};
    mpq_class c = 1;
    for (long i = 0; i < std::abs(w); ++i) c *= q;
    if (w < 0) c = 1 / c;
    rep.compatible = pairing_reversal(rf, c) == rf;

    // Durand-Kerner on the monic reversal x^n P(1/x) = prod (x - alpha),
    // squarefree so that repeated roots do not stall convergence.
    const RatPoly sf = squarefree_part(rf);
    const std::size_t n = sf.size() - 1;
    std::vector<std::complex<long double>> coef(n + 1);
    for (std::size_t i = 0; i <= n; ++i) coef[i] = static_cast<long double>(sf[i].get_d()); // coef of x^{n-i}
    std::vector<std::complex<long double>> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = std::pow(std::complex<long double>(0.4L, 0.9L), static_cast<int>(i));
    auto eval = [&](std::complex<long double> x) {
        std::complex<long double> acc = coef[0];
        for (std::size_t i = 1; i <= n; ++i) acc = acc * x + coef[i];
        return acc;
    };
    const long double scale = std::sqrt(static_cast<long double>(c.get_d()));
    for (auto& x : roots) x *= scale;
    for (int it = 0; it < 500; ++it)
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<long double> den = 1;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= roots[i] - roots[j];
            roots[i] -= eval(roots[i]) / den;
        }
    rep.pure = true;
    for (const auto& x : roots)
        if (std::abs(std::abs(x) - scale) > 1e-6L * std::max(1.0L, scale)) rep.pure = false;
    return rep;
}

} // namespace svf

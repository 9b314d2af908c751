#pragma once

// Linear algebra over Z_q / Q_q at finite precision: Smith normal form with
// minimal-valuation pivoting, kernels, inverses, and lattices.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "svf/matrix.hpp"
#include "svf/padic.hpp"
#include "svf/poly.hpp"

namespace svf {

using QqMatrix = Matrix<QqElement>;

inline QqMatrix qq_identity(const QqContextPtr& ctx, std::size_t n, long prec) {
    return QqMatrix::identity(n, QqElement::zero(ctx), QqElement::one(ctx, prec));
}

inline QqMatrix qq_from_integers(const QqContextPtr& ctx, const Matrix<mpz_class>& m, long prec) {
    return m.map([&](const mpz_class& x) { return QqElement::from_integer(ctx, x, prec); });
}

/// Smallest valuation over the entries not known to be zero (kInfinity if
/// there are none).
inline long min_valuation(const QqMatrix& m) {
    long v = kInfinity;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) v = std::min(v, m(i, j).valuation());
    return v;
}

inline QqMatrix shifted(const QqMatrix& m, long k) {
    return m.map([k](const QqElement& x) { return x.shift(k); });
}

inline QqMatrix apply_frobenius(const QqMatrix& m, unsigned power) {
    return m.map([power](const QqElement& x) { return x.frobenius(power); });
}

inline bool is_integral(const QqMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j).valuation_lower_bound() < 0) return false;
    return true;
}

/// Sorted exponents e_1 <= ... <= e_r of the nonzero invariant factors
/// p^{e_i}, plus the number of zero columns.
struct ElementaryDivisors {
    std::vector<long> exponents;
    std::size_t zero_columns = 0;

    long total() const {
        long s = 0;
        for (long e : exponents) s += e;
        return s;
    }
    friend bool operator==(const ElementaryDivisors&, const ElementaryDivisors&) = default;
};

/// A = U D V with U, V invertible over Z_q and D diagonal with entries p^{e_i}.
/// left * A * right = D; U = left^{-1}, V = right^{-1}.
struct SmithForm {
    ElementaryDivisors divisors;
    std::size_t rank = 0;
    QqMatrix d, u, v, left, right;
};

/// Smith normal form of an integral matrix. The pivot is always an entry of
/// minimal valuation, ties broken in row-major order. Entries that are zero
/// at their precision count as zero unless that makes the pivot choice
/// ambiguous, which raises precision-exhausted.
inline SmithForm smith_normal_form(const QqMatrix& a, std::optional<std::size_t> expected_rank = std::nullopt) {
    const std::size_t m = a.rows(), n = a.cols();
    QqContextPtr ctx;
    long prec = 1;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& x = a(i, j);
            if (x.context()) ctx = x.context();
            if (!x.is_zero() && x.valuation() < 0) fail(ErrorKind::inconsistent, "Smith form needs an integral matrix");
            if (!x.is_exact_zero()) prec = std::max(prec, x.abs_prec());
        }
    if (!ctx) fail(ErrorKind::inconsistent, "Smith form of a matrix without p-adic context");
    prec = std::min(prec, ctx->cap());

    SmithForm s;
    s.d = a;
    s.left = qq_identity(ctx, m, prec);
    s.u = qq_identity(ctx, m, prec);
    s.right = qq_identity(ctx, n, prec);
    s.v = qq_identity(ctx, n, prec);
    const QqElement zero = QqElement::zero(ctx);

    std::size_t k = 0;
    for (; k < std::min(m, n); ++k) {
        std::size_t pi = 0, pj = 0;
        long best = kInfinity, fuzzy = kInfinity;
        for (std::size_t i = k; i < m; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const auto& x = s.d(i, j);
                if (x.is_exact_zero()) continue;
                if (x.is_indistinguishable_from_zero()) {
                    fuzzy = std::min(fuzzy, x.abs_prec());
                    continue;
                }
                if (x.valuation() < best) {
                    best = x.valuation();
                    pi = i;
                    pj = j;
                }
            }
        if (best == kInfinity) break;
        if (fuzzy < best)
            fail(ErrorKind::precision_exhausted,
                 "pivot valuation " + std::to_string(best) + " not certified (entry known only mod p^" +
                     std::to_string(fuzzy) + ")");
        s.d.swap_rows(k, pi);
        s.left.swap_rows(k, pi);
        s.u.swap_cols(k, pi);
        s.d.swap_cols(k, pj);
        s.right.swap_cols(k, pj);
        s.v.swap_rows(k, pj);

        const QqElement pivot = s.d(k, k);
        const QqElement pivot_inv = pivot.inverse();
        for (std::size_t i = k + 1; i < m; ++i) {
            if (s.d(i, k).is_exact_zero()) continue;
            const QqElement f = s.d(i, k) * pivot_inv;
            for (std::size_t j = k; j < n; ++j) s.d(i, j) -= f * s.d(k, j);
            for (std::size_t j = 0; j < m; ++j) s.left(i, j) -= f * s.left(k, j);
            for (std::size_t j = 0; j < m; ++j) s.u(j, k) += f * s.u(j, i);
            s.d(i, k) = zero;
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (s.d(k, j).is_exact_zero()) continue;
            const QqElement f = s.d(k, j) * pivot_inv;
            for (std::size_t i = 0; i < n; ++i) s.right(i, j) -= f * s.right(i, k);
            for (std::size_t i = 0; i < n; ++i) s.v(k, i) += f * s.v(j, i);
            s.d(k, j) = zero;
        }
        // scale the pivot row to make the pivot a pure power of p
        QqElement unit = pivot.shift(-best);
        QqElement unit_inv = unit.inverse();
        for (std::size_t j = 0; j < m; ++j) s.left(k, j) *= unit_inv;
        for (std::size_t j = 0; j < m; ++j) s.u(j, k) *= unit;
        s.d(k, k) = QqElement::one(ctx, pivot.rel_prec()).shift(best);
        s.divisors.exponents.push_back(best);
    }
    s.rank = k;
    s.divisors.zero_columns = n - k;
    if (expected_rank && *expected_rank != s.rank) {
        if (s.rank < *expected_rank)
            fail(ErrorKind::precision_exhausted, "rank " + std::to_string(s.rank) + " below expected " +
                                                     std::to_string(*expected_rank) + " at working precision");
        fail(ErrorKind::inconsistent, "rank exceeds the expected value");
    }
    return s;
}

/// Basis (as columns) of the saturated kernel of an integral matrix.
inline QqMatrix kernel(const QqMatrix& a, std::optional<std::size_t> expected_rank = std::nullopt) {
    const SmithForm s = smith_normal_form(a, expected_rank);
    return s.right.block(0, s.rank, a.cols(), a.cols() - s.rank);
}

/// Inverse over Q_q; degenerate-crystal if singular at working precision.
inline QqMatrix inverse(const QqMatrix& a) {
    if (!a.square()) fail(ErrorKind::inconsistent, "inverse of a non-square matrix");
    const long shift = -min_valuation(a);
    if (shift <= -kInfinity) fail(ErrorKind::degenerate_crystal, "zero matrix is not invertible");
    SmithForm s;
    try {
        s = smith_normal_form(shifted(a, shift));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::precision_exhausted) fail(ErrorKind::degenerate_crystal, e.what());
        throw;
    }
    if (s.rank != a.rows()) fail(ErrorKind::degenerate_crystal, "matrix is singular at working precision");
    // (p^shift A)^{-1} = right * D^{-1} * left
    QqMatrix dinv = s.d;
    for (std::size_t i = 0; i < a.rows(); ++i) dinv(i, i) = s.d(i, i).inverse();
    return shifted(s.right * dinv * s.left, shift);
}

/// v_p(det A) from the Smith form.
inline long det_valuation(const QqMatrix& a) {
    const long shift = -min_valuation(a);
    const SmithForm s = smith_normal_form(shifted(a, shift));
    if (s.rank != a.rows()) fail(ErrorKind::degenerate_crystal, "determinant is zero at working precision");
    return s.divisors.total() - shift * static_cast<long>(a.rows());
}

/// det(1 - t A), lowest degree first.
inline QqPoly charpoly(const QqMatrix& a) {
    QqContextPtr ctx;
    long prec = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j).context()) {
                ctx = a(i, j).context();
                prec = std::max(prec, a(i, j).rel_prec() == kInfinity ? 1 : a(i, j).rel_prec());
            }
    if (!ctx) fail(ErrorKind::inconsistent, "characteristic polynomial of a matrix without p-adic context");
    auto c = berkowitz(a, QqElement::zero(ctx), QqElement::one(ctx, std::min(prec, ctx->cap())));
    return c; // highest-first for x I - A is lowest-first for det(1 - tA)
}

/// Exact det(1 - t A) for an integer matrix.
inline IntPoly charpoly(const Matrix<mpz_class>& a) { return berkowitz(a, mpz_class(0), mpz_class(1)); }

/// Exact rank over Q by fraction-free elimination.
inline std::size_t rank(Matrix<mpq_class> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        m.swap_rows(r, piv);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            const mpq_class f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

/// A full Z_q-lattice in Q_q^n given by a basis in the columns of an
/// invertible matrix. Equality is decided by two-sided integrality of the
/// change of basis, never by comparing basis matrices.
class Lattice {
public:
    explicit Lattice(QqMatrix basis) : basis_(std::move(basis)) {
        if (!basis_.square()) fail(ErrorKind::inconsistent, "lattice basis must be square");
    }

    static Lattice standard(const QqContextPtr& ctx, std::size_t n, long prec) {
        return Lattice(qq_identity(ctx, n, prec));
    }

    std::size_t dim() const noexcept { return basis_.rows(); }
    const QqMatrix& basis() const noexcept { return basis_; }

    Lattice scaled(long k) const { return Lattice(shifted(basis_, k)); }

    /// True when other is contained in this lattice.
    bool contains(const Lattice& other) const { return is_integral(inverse(basis_) * other.basis_); }

    friend bool operator==(const Lattice& x, const Lattice& y) { return x.contains(y) && y.contains(x); }

    /// log_q [this : sub] for sub contained in this lattice.
    long index_exponent(const Lattice& sub) const {
        const QqMatrix change = inverse(basis_) * sub.basis_;
        if (!is_integral(change)) fail(ErrorKind::inconsistent, "index of a non-sublattice");
        return det_valuation(change);
    }

    /// Direct sum with another lattice (block diagonal basis).
    Lattice direct_sum_with(const Lattice& o, const QqContextPtr& ctx) const {
        return Lattice(direct_sum(basis_, o.basis_, QqElement::zero(ctx)));
    }

private:
    QqMatrix basis_;
};

/// Intersection through the kernel of (x, y) -> B1 x - B2 y.
inline Lattice lattice_intersect(const Lattice& l1, const Lattice& l2) {
    const std::size_t n = l1.dim();
    if (l2.dim() != n) fail(ErrorKind::inconsistent, "lattices live in different spaces");
    QqMatrix joint(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            joint(i, j) = l1.basis()(i, j);
            joint(i, n + j) = -l2.basis()(i, j);
        }
    const long shift = -min_valuation(joint);
    const QqMatrix ker = kernel(shifted(joint, shift), n);
    return Lattice(l1.basis() * ker.block(0, 0, n, n));
}

/// Column span of [x | y] as a lattice (x, y of full rank n together).
inline Lattice lattice_sum(const Lattice& x, const QqMatrix& y) {
    const std::size_t n = x.dim();
    QqMatrix joint(n, n + y.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) joint(i, j) = x.basis()(i, j);
        for (std::size_t j = 0; j < y.cols(); ++j) joint(i, n + j) = y(i, j);
    }
    const long shift = -min_valuation(joint);
    const SmithForm s = smith_normal_form(shifted(joint, shift), n);
    // span = U * D restricted to the first n columns
    QqMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = s.u(i, j) * s.d(j, j);
    return Lattice(shifted(basis, -shift));
}

inline Lattice lattice_sum(const Lattice& x, const Lattice& y) { return lattice_sum(x, y.basis()); }

/// Preimage {v : A sigma(v) in L} = sigma^{-1}(A^{-1} B) Z_q^n of a lattice
/// under the sigma-semilinear map v -> A sigma(v).
inline Lattice semilinear_preimage(const QqMatrix& frobenius_matrix, const Lattice& l) {
    const QqMatrix inv = inverse(frobenius_matrix);
    QqContextPtr ctx = inv(0, 0).context();
    for (std::size_t i = 0; !ctx && i < inv.rows(); ++i)
        for (std::size_t j = 0; !ctx && j < inv.cols(); ++j) ctx = inv(i, j).context();
    const unsigned back = ctx ? ctx->degree() - 1 : 0;
    return Lattice(apply_frobenius(inv * l.basis(), back));
}

} // namespace svf

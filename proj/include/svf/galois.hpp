#pragma once

// Modules over Z_l (l = p allowed) with an action of the Frobenius
// generator gamma. The free part is modelled by a rational matrix with
// l-integral entries; Smith forms over the local ring Z_(l) are exact.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "svf/matrix.hpp"
#include "svf/plinalg.hpp"
#include "svf/poly.hpp"

namespace svf {

using RatMatrix = Matrix<mpq_class>;

struct TorsionComponent {
    long exponent = 1; // Z / l^exponent
    mpz_class unit;    // gamma acts by multiplication
    friend bool operator==(const TorsionComponent&, const TorsionComponent&) = default;
};

struct GammaModule {
    long prime = 0;
    bool padic = false; // ring tag: Z_p (the residue characteristic) or Z_l
    RatMatrix gamma;
    std::vector<TorsionComponent> torsion;

    std::size_t rank() const { return gamma.rows(); }
};

/// Smith form over Z_(l): L A R = diag(l^{v_1} u_1, ..., l^{v_k} u_k, 0, ...)
/// with L, R invertible over Z_(l). Only R is kept.
struct LocalSmith {
    std::size_t rank = 0;
    std::vector<long> exponents; // v_1 <= ... <= v_rank
    RatMatrix right;
};

inline LocalSmith local_smith(RatMatrix a, long l) {
    const std::size_t m = a.rows(), n = a.cols();
    LocalSmith s;
    s.right = RatMatrix::identity(n, 0, 1);
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        long best = kInfinity;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < m; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (a(i, j) != 0) {
                    const long v = mpq_valuation(a(i, j), l);
                    if (v < best) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
        if (best >= kInfinity) break;
        a.swap_rows(k, bi);
        a.swap_cols(k, bj);
        s.right.swap_cols(k, bj);
        const mpq_class piv = a(k, k);
        for (std::size_t i = k + 1; i < m; ++i) {
            if (a(i, k) == 0) continue;
            const mpq_class f = a(i, k) / piv;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (a(k, j) == 0) continue;
            const mpq_class f = a(k, j) / piv;
            for (std::size_t i = k; i < m; ++i) a(i, j) -= f * a(i, k);
            for (std::size_t i = 0; i < n; ++i) s.right(i, j) -= f * s.right(i, k);
        }
        s.exponents.push_back(best);
        ++s.rank;
    }
    return s;
}

inline bool is_local_integral(const RatMatrix& a, long l) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0 && mpq_valuation(a(i, j), l) < 0) return false;
    return true;
}

inline void validate(const GammaModule& m) {
    if (!fp::is_prime(m.prime)) fail(ErrorKind::parse, "module prime must be prime");
    if (!m.gamma.square()) fail(ErrorKind::parse, "gamma must be square");
    if (!is_local_integral(m.gamma, m.prime)) fail(ErrorKind::parse, "gamma is not integral over Z_l");
    const LocalSmith s = local_smith(m.gamma, m.prime);
    if (s.rank != m.rank() || (!s.exponents.empty() && s.exponents.back() != 0))
        fail(ErrorKind::parse, "gamma is not invertible over Z_l");
    for (const auto& t : m.torsion) {
        if (t.exponent < 1) fail(ErrorKind::parse, "torsion exponent must be positive");
        if (mpz_valuation(t.unit, m.prime) != 0) fail(ErrorKind::parse, "gamma must act on torsion by a unit");
    }
}

/// A finitely generated Z_l-module: free rank plus cyclic torsion l^{e_i}.
struct ModuleStructure {
    long free_rank = 0;
    std::vector<long> torsion;
    long torsion_length() const {
        long s = 0;
        for (long e : torsion) s += e;
        return s;
    }
    friend bool operator==(const ModuleStructure&, const ModuleStructure&) = default;
};

inline RatMatrix one_minus_gamma(const GammaModule& m) {
    RatMatrix n = m.gamma;
    for (std::size_t i = 0; i < n.rows(); ++i)
        for (std::size_t j = 0; j < n.cols(); ++j) n(i, j) = (i == j ? 1 : 0) - m.gamma(i, j);
    return n;
}

/// l-adic valuation of 1 - u, capped at e, for gamma = u on Z/l^e.
inline long torsion_fixed_length(const TorsionComponent& t, long l) {
    const mpz_class d = 1 - t.unit;
    return std::min(mpz_valuation(d, l), t.exponent);
}

/// M^Gamma = ker(1 - gamma), M_Gamma = coker(1 - gamma).
inline std::pair<ModuleStructure, ModuleStructure> invariants_coinvariants(const GammaModule& m) {
    validate(m);
    const LocalSmith s = local_smith(one_minus_gamma(m), m.prime);
    ModuleStructure inv, coinv;
    inv.free_rank = coinv.free_rank = static_cast<long>(m.rank() - s.rank);
    for (long v : s.exponents)
        if (v > 0) coinv.torsion.push_back(v);
    for (const auto& t : m.torsion) {
        const long w = torsion_fixed_length(t, m.prime);
        if (w > 0) {
            inv.torsion.push_back(w);
            coinv.torsion.push_back(w);
        }
    }
    std::sort(inv.torsion.begin(), inv.torsion.end());
    std::sort(coinv.torsion.begin(), coinv.torsion.end());
    return {inv, coinv};
}

/// z(f) = l^exponent, together with the pieces it came from.
struct ZfValue {
    long exponent = 0;
    long kernel_length = 0;   // log_l [Ker f]
    long cokernel_length = 0; // log_l [coker f]
};

/// SNF route: f : ker N -> coker N is induced by the identity (N = 1 - gamma).
/// On the free part Ker f = ker N ∩ N M and coker f = M / (ker N + N M).
inline ZfValue z_of_f_snf(const GammaModule& m) {
    validate(m);
    const std::size_t n = m.rank();
    const RatMatrix nm = one_minus_gamma(m);
    const LocalSmith s = local_smith(nm, m.prime);
    ZfValue z;
    if (n > 0) {
        // saturated kernel basis: the last columns of R
        RatMatrix joint(n, (n - s.rank) + n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = s.rank; j < n; ++j) joint(i, j - s.rank) = s.right(i, j);
            for (std::size_t j = 0; j < n; ++j) joint(i, n - s.rank + j) = nm(i, j);
        }
        const LocalSmith js = local_smith(joint, m.prime);
        if (js.rank < n)
            fail(ErrorKind::multiple_root_at_one, "1 is a multiple root of the minimal polynomial of gamma");
        for (long v : js.exponents) z.cokernel_length += v;
    }
    for (const auto& t : m.torsion) {
        // ker = l^{e-w} Z/l^e, im = l^w Z/l^e
        const long w = torsion_fixed_length(t, m.prime);
        const long meet = std::min(w, t.exponent - w);
        z.kernel_length += meet;
        z.cokernel_length += meet;
    }
    z.exponent = z.kernel_length - z.cokernel_length;
    return z;
}

/// Exact det(1 - t A) for a rational matrix.
inline RatPoly charpoly(const RatMatrix& a) { return berkowitz(a, mpq_class(0), mpq_class(1)); }

/// Exact rank(N^2) == rank(N) for N = A - c.
inline bool semisimple_eigenvalue(const RatMatrix& a, const mpq_class& c) {
    RatMatrix nm = a;
    for (std::size_t i = 0; i < nm.rows(); ++i) nm(i, i) -= c;
    return rank(nm * nm) == rank(nm);
}

/// Polynomial route: |prod_{a_i != 1} (1 - a_i)|_l from det(1 - t gamma)
/// deflated at t = 1. Finite torsion contributes trivially.
inline ZfValue z_of_f_polynomial(const GammaModule& m) {
    validate(m);
    ZfValue z;
    if (m.rank() == 0) return z;
    if (!semisimple_eigenvalue(m.gamma, 1))
        fail(ErrorKind::multiple_root_at_one, "1 is a multiple root of the minimal polynomial of gamma");
    auto [mult, q] = deflate(charpoly(m.gamma), 1);
    (void)mult;
    mpq_class v = 0;
    for (const auto& c : q) v += c;
    z.exponent = -mpq_valuation(v, m.prime);
    z.cokernel_length = -z.exponent;
    return z;
}

/// Both routes; they must agree.
inline ZfValue z_of_f(const GammaModule& m) {
    const ZfValue a = z_of_f_snf(m);
    const ZfValue b = z_of_f_polynomial(m);
    if (a.exponent != b.exponent)
        fail(ErrorKind::inconsistent, "z(f) routes disagree: l^" + std::to_string(a.exponent) + " vs l^" +
                                          std::to_string(b.exponent));
    return a;
}

/// Multiplicity of 1 as an eigenvalue of gamma on M ⊗ Q.
inline unsigned eigenvalue_one_multiplicity(const GammaModule& m) {
    if (m.rank() == 0) return 0;
    return deflate(charpoly(m.gamma), 1).first;
}

/// N(r): gamma multiplied by q^{-r}. Needs q to be an l-unit.
inline GammaModule tate_twist(const GammaModule& m, const mpz_class& q, long r) {
    if (mpz_valuation(q, m.prime) != 0) fail(ErrorKind::unsupported, "Tate twist of a module needs q prime to l");
    mpq_class s = 1;
    for (long i = 0; i < std::abs(r); ++i) s *= q;
    if (r > 0) s = 1 / s;
    GammaModule out = m;
    for (std::size_t i = 0; i < out.gamma.rows(); ++i)
        for (std::size_t j = 0; j < out.gamma.cols(); ++j) out.gamma(i, j) *= s;
    for (auto& t : out.torsion) {
        const mpz_class num = s.get_num(), den = s.get_den();
        mpz_class inv;
        const mpz_class me = mpz_pow(m.prime, t.exponent);
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), me.get_mpz_t());
        t.unit = (t.unit * num * inv) % me;
        if (t.unit < 0) t.unit += me;
    }
    return out;
}

/// rank Ext^j = m_j + m_{j-1} from the multiplicities of q^r per degree.
inline std::map<long, long> ext_ranks(const std::map<long, unsigned>& multiplicities) {
    std::map<long, long> r;
    if (multiplicities.empty()) return r;
    const long lo = multiplicities.begin()->first, hi = multiplicities.rbegin()->first + 1;
    auto mult = [&](long j) -> long {
        auto it = multiplicities.find(j);
        return it == multiplicities.end() ? 0 : static_cast<long>(it->second);
    };
    for (long j = lo; j <= hi; ++j) r[j] = mult(j) + mult(j - 1);
    return r;
}

/// chi = prod_j z(f_j)^{(-1)^j}, as an exponent of the prime.
inline long chi_from_zf(const std::map<long, long>& z_exponents) {
    long e = 0;
    for (const auto& [j, z] : z_exponents) e += (j % 2 == 0 ? z : -z);
    return e;
}

} // namespace svf

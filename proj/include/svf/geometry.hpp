#pragma once

// Desk-scale varieties over F_q: exhaustive point counts and cohomology
// packages with explicit Frobenius data per degree.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svf/ffield.hpp"
#include "svf/lfun.hpp"
#include "svf/matrix.hpp"
#include "svf/plinalg.hpp"
#include "svf/poly.hpp"

namespace svf {

using IntMatrix = Matrix<mpz_class>;

constexpr unsigned long kDefaultBudget = 10'000'000;

enum class VarietyKind { point, projective, affine, torus, elliptic, product, complement };

struct VarietySpec {
    VarietyKind kind = VarietyKind::point;
    long p = 2;
    unsigned a = 1;
    long n = 0;                       // dimension for projective, affine, torus
    std::vector<long> coeffs;         // a1, a2, a3, a4, a6 for elliptic curves
    std::vector<VarietySpec> parts;   // factors, or the base of a complement
    long removed_points = 0;          // complement: number of rational points
    bool removed_hyperplane = false;  // complement: P^{n-1} inside P^n
    std::optional<IntMatrix> twist;   // constant isocrystal on the point

    mpz_class q() const { return mpz_pow(p, a); }
};

inline std::string kind_name(VarietyKind k) {
    switch (k) {
    case VarietyKind::point: return "point";
    case VarietyKind::projective: return "projective";
    case VarietyKind::affine: return "affine";
    case VarietyKind::torus: return "torus";
    case VarietyKind::elliptic: return "elliptic";
    case VarietyKind::product: return "product";
    case VarietyKind::complement: return "complement";
    }
    return "unknown";
}

/// Discriminant of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, mod p.
inline long weierstrass_discriminant(const std::vector<long>& c, long p) {
    const mpz_class a1 = c[0], a2 = c[1], a3 = c[2], a4 = c[3], a6 = c[4];
    const mpz_class b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    const mpz_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    mpz_class d = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    mpz_class r = d % p;
    if (r < 0) r += p;
    return r.get_si();
}

inline void validate(const VarietySpec& s) {
    if (!fp::is_prime(s.p)) fail(ErrorKind::parse, "p must be prime");
    if (s.a < 1 || s.a > 16) fail(ErrorKind::parse, "a must lie in 1..16");
    switch (s.kind) {
    case VarietyKind::point: break;
    case VarietyKind::projective:
    case VarietyKind::affine:
    case VarietyKind::torus:
        if (s.n < 0 || s.n > 8) fail(ErrorKind::parse, "dimension must lie in 0..8");
        break;
    case VarietyKind::elliptic:
        if (s.coeffs.size() != 5) fail(ErrorKind::parse, "elliptic curves need five coefficients a1 a2 a3 a4 a6");
        if (weierstrass_discriminant(s.coeffs, s.p) == 0) fail(ErrorKind::parse, "singular Weierstrass equation");
        break;
    case VarietyKind::product:
        if (s.parts.size() < 2) fail(ErrorKind::parse, "a product needs at least two factors");
        break;
    case VarietyKind::complement:
        if (s.parts.size() != 1) fail(ErrorKind::parse, "a complement needs exactly one base variety");
        if (s.removed_hyperplane == (s.removed_points > 0))
            fail(ErrorKind::parse, "remove either rational points or a hyperplane");
        if (s.removed_points < 0) fail(ErrorKind::parse, "negative number of removed points");
        break;
    }
    for (const auto& part : s.parts) {
        if (part.p != s.p || part.a != s.a) fail(ErrorKind::parse, "all parts must live over the same field");
        if (part.twist) fail(ErrorKind::parse, "twists are only allowed at the top level");
        validate(part);
    }
    if (s.twist && (!s.twist->square() || s.twist->rows() == 0)) fail(ErrorKind::parse, "twist must be a square matrix");
}

/// #E(F_{q^e}) for a Weierstrass curve with coefficients in F_p.
inline mpz_class count_elliptic(const std::vector<long>& c, long p, unsigned k) {
    const TabulatedField f(p, k);
    // everything in the log domain: one Zech lookup per addition
    const auto lg = [&](long v) { return f.log_of(f.constant(v)); };
    const std::uint32_t a1 = lg(c[0]), a2 = lg(c[1]), a3 = lg(c[2]), a4 = lg(c[3]), a6 = lg(c[4]), four = lg(4);
    const unsigned long m = f.order() - 1;
    auto affine_points = [&](std::uint32_t x) -> unsigned long {
        const std::uint32_t x2 = f.log_mul(x, x);
        // rhs = x^3 + a2 x^2 + a4 x + a6, b = a1 x + a3
        const std::uint32_t rhs = f.log_add(f.log_add(f.log_mul(x2, x), f.log_mul(a2, x2)), f.log_add(f.log_mul(a4, x), a6));
        const std::uint32_t b = f.log_add(f.log_mul(a1, x), a3);
        if (p != 2) return static_cast<unsigned long>(1 + f.quadratic_character_log(f.log_add(f.log_mul(b, b), f.log_mul(four, rhs))));
        if (b == TabulatedField::kLogZero) return 1; // squaring is bijective
        if (rhs == TabulatedField::kLogZero) return 2;
        // y = b z: z^2 + z = rhs / b^2 has two roots iff the trace vanishes
        const auto l = static_cast<std::uint32_t>((rhs + 2 * (m - b)) % m);
        return f.trace2(f.exp_of(l)) == 0 ? 2 : 0;
    };
    unsigned long count = 1 + affine_points(TabulatedField::kLogZero); // infinity and x = 0
    for (unsigned long n = 0; n < m; ++n) count += affine_points(static_cast<std::uint32_t>(n));
    return count;
}

/// #F_{p^k} elements satisfying pred, by enumeration.
template <class Pred>
mpz_class count_field_elements(long p, unsigned k, Pred pred) {
    const unsigned long order = fp::ipow(static_cast<unsigned long>(p), k);
    unsigned long n = 0;
    for (unsigned long x = 0; x < order; ++x)
        if (pred(x)) ++n;
    return n;
}

inline mpz_class point_count(const VarietySpec& s, unsigned e, unsigned long budget) {
    const unsigned k = s.a * e;
    auto check_budget = [&]() {
        const double size = std::pow(static_cast<double>(s.p), static_cast<double>(k));
        if (size > static_cast<double>(budget))
            fail(ErrorKind::budget_exceeded, "enumerating F_{" + std::to_string(s.p) + "^" + std::to_string(k) +
                                                 "} exceeds the budget of " + std::to_string(budget));
    };
    switch (s.kind) {
    case VarietyKind::point: return 1;
    case VarietyKind::affine:
    case VarietyKind::projective:
    case VarietyKind::torus: {
        if (s.n == 0) return 1;
        check_budget();
        const mpz_class line = count_field_elements(s.p, k, [](unsigned long) { return true; });
        if (s.kind == VarietyKind::affine) return mpz_pow(line, s.n);
        if (s.kind == VarietyKind::torus)
            return mpz_pow(count_field_elements(s.p, k, [](unsigned long x) { return x != 0; }), s.n);
        mpz_class total = 0; // P^n = A^n ⊔ ... ⊔ A^0
        for (long i = 0; i <= s.n; ++i) total += mpz_pow(line, i);
        return total;
    }
    case VarietyKind::elliptic: check_budget(); return count_elliptic(s.coeffs, s.p, k);
    case VarietyKind::product: {
        mpz_class total = 1;
        for (const auto& part : s.parts) total *= point_count(part, e, budget);
        return total;
    }
    case VarietyKind::complement: {
        const mpz_class base = point_count(s.parts[0], e, budget);
        if (s.removed_points > 0) return base - s.removed_points;
        VarietySpec h = s.parts[0];
        h.n -= 1;
        return base - point_count(h, e, budget);
    }
    }
    fail(ErrorKind::unsupported, "unknown variety kind");
}

/// (N_1, ..., N_B), N_e = #V(F_{q^e}); the budget bounds each field size.
inline std::vector<mpz_class> point_counts(const VarietySpec& s, unsigned count, unsigned long budget = kDefaultBudget) {
    validate(s);
    std::vector<mpz_class> n;
    for (unsigned e = 1; e <= count; ++e) n.push_back(point_count(s, e, budget));
    return n;
}

inline int moebius(long n) {
    int m = 1;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            m = -m;
        }
    return n > 1 ? -m : m;
}

/// a_d = (1/d) sum_{e | d} mu(d/e) N_e, the number of closed points of degree d.
inline std::vector<mpz_class> closed_points(const std::vector<mpz_class>& counts) {
    std::vector<mpz_class> a;
    for (long d = 1; d <= static_cast<long>(counts.size()); ++d) {
        mpz_class s = 0;
        for (long e = 1; e <= d; ++e)
            if (d % e == 0) s += moebius(d / e) * counts[static_cast<std::size_t>(e - 1)];
        if (s % d != 0 || s < 0)
            fail(ErrorKind::inconsistent, "point counts give a non-integral or negative number of closed points");
        a.push_back(s / d);
    }
    return a;
}

/// Frobenius data of one cohomological degree.
struct DegreeData {
    IntPoly charpoly{1};                 // det(1 - t F^a)
    std::optional<IntMatrix> semilinear; // integer matrix A of F, so F^a = A^a
    std::optional<IntMatrix> linear;     // F^a when no semilinear matrix is known
    std::optional<std::map<long, long>> hodge;
    long unipotent = 0;                  // u_j = ord_q [U^j(k)]
    std::optional<long> weight;          // pure weight, when known

    std::optional<IntMatrix> linearized(unsigned a) const {
        if (linear) return linear;
        if (!semilinear) return std::nullopt;
        IntMatrix m = *semilinear;
        for (unsigned i = 1; i < a; ++i) m = m * *semilinear;
        return m;
    }
};

struct CohomologyPackage {
    std::string name;
    long p = 2;
    unsigned a = 1;
    std::map<long, DegreeData> degrees;
    bool padic_only = false; // coefficients not known to come from a compatible system

    mpz_class q() const { return mpz_pow(p, a); }
    std::map<long, IntPoly> charpolys() const {
        std::map<long, IntPoly> out;
        for (const auto& [j, d] : degrees) out[j] = d.charpoly;
        return out;
    }
};

inline IntMatrix int_identity(std::size_t n) { return IntMatrix::identity(n, 0, 1); }

inline IntMatrix scalar_matrix(const mpz_class& x) { return IntMatrix{{x}}; }

/// Companion-type matrix with det(1 - tC) = f for f(0) = 1.
inline IntMatrix companion(const IntPoly& f) {
    const std::size_t n = f.size() - 1;
    IntMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = 0;
    // char poly x^n + f_1 x^{n-1} + ... + f_n; last column -f_{n-i}
    for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -f[n - i];
    return c;
}

inline void check_package(const CohomologyPackage& pkg) {
    if (!fp::is_prime(pkg.p)) fail(ErrorKind::parse, "package prime must be prime");
    for (const auto& [j, d] : pkg.degrees) {
        if (j < 0) fail(ErrorKind::parse, "negative cohomological degree");
        if (d.charpoly.empty() || d.charpoly[0] != 1) fail(ErrorKind::parse, "P_" + std::to_string(j) + "(0) must be 1");
        if (auto m = d.linearized(pkg.a)) {
            if (!m->square() || m->rows() + 1 != d.charpoly.size())
                fail(ErrorKind::parse, "degree " + std::to_string(j) + ": matrix size does not match P_j");
            IntPoly cp = charpoly(*m);
            trim_poly(cp);
            if (cp != d.charpoly) fail(ErrorKind::parse, "degree " + std::to_string(j) + ": matrix does not match P_j");
        }
    }
}

namespace detail {

inline CohomologyPackage base_package(const VarietySpec& s, unsigned long budget) {
    CohomologyPackage pkg;
    pkg.p = s.p;
    pkg.a = s.a;
    const mpz_class p = s.p;
    auto lefschetz = [&](long i, std::optional<long> weight) {
        DegreeData d;
        d.charpoly = {1, -mpz_pow(s.q(), i)};
        d.semilinear = scalar_matrix(mpz_pow(p, i));
        d.hodge = std::map<long, long>{{i, 1}};
        d.weight = weight;
        return d;
    };
    switch (s.kind) {
    case VarietyKind::point: pkg.degrees[0] = lefschetz(0, 0); break;
    case VarietyKind::projective:
        for (long i = 0; i <= s.n; ++i) pkg.degrees[2 * i] = lefschetz(i, 2 * i);
        break;
    case VarietyKind::affine: pkg.degrees[2 * s.n] = lefschetz(s.n, std::nullopt); break;
    case VarietyKind::torus:
        // G_m: H^1_c = 1 - t, H^2_c = 1 - q t; higher tori are products
        if (s.n == 0) {
            pkg.degrees[0] = lefschetz(0, 0);
        } else {
            pkg.degrees[1] = lefschetz(0, std::nullopt);
            pkg.degrees[2] = lefschetz(1, std::nullopt);
        }
        break;
    case VarietyKind::elliptic: {
        const mpz_class n1 = point_count(s, 1, budget);
        const mpz_class trace = s.q() + 1 - n1;
        pkg.degrees[0] = lefschetz(0, 0);
        DegreeData h1;
        h1.charpoly = {1, -trace, s.q()};
        h1.weight = 1;
        h1.hodge = std::map<long, long>{{0, 1}, {1, 1}};
        if (trace * trace == 4 * s.q()) {
            IntMatrix m{{trace / 2, 0}, {0, trace / 2}};
            h1.linear = m;
        } else if (s.a == 1) {
            h1.semilinear = IntMatrix{{0, -s.q()}, {1, trace}};
        } else {
            h1.linear = IntMatrix{{0, -s.q()}, {1, trace}};
        }
        pkg.degrees[1] = h1;
        pkg.degrees[2] = lefschetz(1, 2);
        break;
    }
    default: fail(ErrorKind::unsupported, "not a basic variety");
    }
    return pkg;
}

inline std::map<long, long> convolve(const std::map<long, long>& x, const std::map<long, long>& y) {
    std::map<long, long> r;
    for (const auto& [i, m] : x)
        for (const auto& [k, n] : y) r[i + k] += m * n;
    return r;
}

inline std::map<long, long> add_hodge(std::map<long, long> x, const std::map<long, long>& y) {
    for (const auto& [i, m] : y) x[i] += m;
    return x;
}

/// D = D_1 ⊗ D_2 for one pair of degrees.
inline DegreeData tensor_degree(const DegreeData& x, const DegreeData& y, unsigned a) {
    DegreeData d;
    d.charpoly = tensor(x.charpoly, y.charpoly);
    if (x.semilinear && y.semilinear)
        d.semilinear = kronecker(*x.semilinear, *y.semilinear);
    else if (auto lx = x.linearized(a), ly = y.linearized(a); lx && ly)
        d.linear = kronecker(*lx, *ly);
    if (x.hodge && y.hodge) d.hodge = convolve(*x.hodge, *y.hodge);
    if (x.weight && y.weight) d.weight = *x.weight + *y.weight;
    return d;
}

/// D ⊕ E inside one degree.
inline DegreeData sum_degree(const DegreeData& x, const DegreeData& y, unsigned a) {
    DegreeData d;
    d.charpoly = poly_mul(x.charpoly, y.charpoly);
    if (x.semilinear && y.semilinear)
        d.semilinear = direct_sum(*x.semilinear, *y.semilinear, mpz_class(0));
    else if (auto lx = x.linearized(a), ly = y.linearized(a); lx && ly)
        d.linear = direct_sum(*lx, *ly, mpz_class(0));
    if (x.hodge && y.hodge) d.hodge = add_hodge(*x.hodge, *y.hodge);
    if (x.weight && y.weight && *x.weight == *y.weight) d.weight = x.weight;
    d.unipotent = x.unipotent + y.unipotent;
    return d;
}

inline CohomologyPackage kunneth(const CohomologyPackage& x, const CohomologyPackage& y) {
    CohomologyPackage r;
    r.p = x.p;
    r.a = x.a;
    for (const auto& [i, dx] : x.degrees)
        for (const auto& [j, dy] : y.degrees) {
            DegreeData t = tensor_degree(dx, dy, x.a);
            auto it = r.degrees.find(i + j);
            if (it == r.degrees.end())
                r.degrees.emplace(i + j, std::move(t));
            else
                it->second = sum_degree(it->second, t, x.a);
        }
    return r;
}

inline DegreeData trivial_block(std::size_t count) {
    DegreeData d;
    d.charpoly = poly_pow(IntPoly{1, -1}, static_cast<unsigned>(count));
    d.semilinear = int_identity(count);
    d.hodge = std::map<long, long>{{0, static_cast<long>(count)}};
    return d;
}

} // namespace detail

namespace detail {

inline CohomologyPackage untwisted_package(const VarietySpec& s, unsigned long budget) {
    switch (s.kind) {
    case VarietyKind::torus:
        if (s.n > 1) {
            VarietySpec g = s;
            g.n = 1;
            CohomologyPackage r = base_package(g, budget);
            for (long i = 1; i < s.n; ++i) r = kunneth(r, base_package(g, budget));
            return r;
        }
        return base_package(s, budget);
    case VarietyKind::product: {
        CohomologyPackage r = untwisted_package(s.parts[0], budget);
        for (std::size_t i = 1; i < s.parts.size(); ++i) r = kunneth(r, untwisted_package(s.parts[i], budget));
        return r;
    }
    case VarietyKind::complement: {
        const VarietySpec& base = s.parts[0];
        if (s.removed_hyperplane) {
            // P^n minus P^{n-1}: restriction is an isomorphism below the top degree
            if (base.kind != VarietyKind::projective || base.n < 1)
                fail(ErrorKind::unsupported, "hyperplane complements are only supported in projective space");
            VarietySpec an = base;
            an.kind = VarietyKind::affine;
            return base_package(an, budget);
        }
        // removing k rational points: H^0_c(X) -> H^0(points) is injective
        // (X connected and proper) or zero (H^0_c(X) = 0)
        CohomologyPackage r = untwisted_package(base, budget);
        long h0 = 0;
        if (auto it = r.degrees.find(0); it != r.degrees.end()) {
            if (it->second.charpoly != IntPoly{1, -1})
                fail(ErrorKind::unsupported, "removing points needs H^0_c of rank at most one");
            h0 = 1;
        }
        if (s.removed_points < h0) fail(ErrorKind::unsupported, "nothing removed");
        r.degrees.erase(0);
        const long extra = s.removed_points - h0;
        if (extra > 0) {
            DegreeData block = trivial_block(static_cast<std::size_t>(extra));
            auto it = r.degrees.find(1);
            if (it == r.degrees.end()) {
                r.degrees.emplace(1, block);
            } else {
                it->second = sum_degree(it->second, block, s.a);
                it->second.weight.reset();
            }
        }
        return r;
    }
    default: return base_package(s, budget);
    }
}

} // namespace detail

/// Cohomology package of a corpus variety, optionally twisted by a constant
/// isocrystal on the point (integer matrix of F).
inline CohomologyPackage package(const VarietySpec& s, unsigned long budget = kDefaultBudget) {
    validate(s);
    CohomologyPackage pkg = detail::untwisted_package(s, budget);
    if (s.twist) {
        DegreeData t;
        IntMatrix lin = *s.twist;
        for (unsigned i = 1; i < s.a; ++i) lin = lin * *s.twist;
        t.charpoly = charpoly(lin);
        trim_poly(t.charpoly);
        t.semilinear = *s.twist;
        for (auto& [j, d] : pkg.degrees) {
            DegreeData tw = detail::tensor_degree(d, t, s.a);
            tw.hodge.reset();
            tw.unipotent = d.unipotent;
            d = std::move(tw);
        }
    }
    pkg.p = s.p;
    pkg.a = s.a;
    check_package(pkg);
    return pkg;
}

/// Euler factors from the closed points: det(1 - u (F^a)^d) per point of
/// degree d, with F the twist (trivial when absent).
inline EulerFactorData euler_data_from_counts(const VarietySpec& s, const std::vector<mpz_class>& counts) {
    const auto a = closed_points(counts);
    EulerFactorData data;
    std::optional<IntMatrix> lin;
    if (s.twist) {
        lin = *s.twist;
        for (unsigned i = 1; i < s.a; ++i) *lin = *lin * *s.twist;
    }
    for (std::size_t d = 1; d <= a.size(); ++d) {
        IntPoly local{1, -1};
        if (lin) {
            IntMatrix g = *lin;
            for (std::size_t i = 1; i < d; ++i) g = g * *lin;
            local = charpoly(g);
            trim_poly(local);
        }
        data.factors[static_cast<long>(d)].emplace_back(local, a[d - 1].get_si());
    }
    return data;
}

inline EulerFactorData euler_data(const VarietySpec& s, unsigned count, unsigned long budget = kDefaultBudget) {
    return euler_data_from_counts(s, point_counts(s, count, budget));
}

} // namespace svf

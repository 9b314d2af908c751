#pragma once

// Zeta and L-functions as rational functions in t with integer
// coefficients, kept both normalized and factored by cohomological degree.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "svf/poly.hpp"

namespace svf {

struct RationalFunction {
    RatPoly numerator{1};
    RatPoly denominator{1};
    // per-degree factors with sign (-1)^{j+1}: odd j in the numerator
    std::map<long, IntPoly> factors;

    /// Power series to order t^{terms-1}.
    RatPoly series(std::size_t terms) const;
    std::string to_string(const std::string& var = "t") const;
};

/// Normalize so that gcd(num, den) = 1 and den(0) = 1.
inline void normalize(RationalFunction& z) {
    const RatPoly g = poly_gcd(z.numerator, z.denominator);
    if (g.size() > 1) {
        z.numerator = poly_exact_div(z.numerator, g);
        z.denominator = poly_exact_div(z.denominator, g);
    }
    if (z.denominator.empty() || z.denominator[0] == 0) fail(ErrorKind::inconsistent, "denominator vanishes at t = 0");
    const mpq_class c = z.denominator[0];
    for (auto& x : z.numerator) x /= c;
    for (auto& x : z.denominator) x /= c;
}

/// prod_j P_j^{(-1)^{j+1}}.
inline RationalFunction assemble(const std::map<long, IntPoly>& per_degree) {
    RationalFunction z;
    z.factors = per_degree;
    for (const auto& [j, p] : per_degree) {
        if (j % 2 != 0)
            z.numerator = poly_mul(z.numerator, to_rat(p));
        else
            z.denominator = poly_mul(z.denominator, to_rat(p));
    }
    normalize(z);
    return z;
}

/// Power series inverse of f with f(0) != 0, to order t^{terms-1}.
inline RatPoly series_inverse(const RatPoly& f, std::size_t terms) {
    if (f.empty() || f[0] == 0) fail(ErrorKind::inconsistent, "series inverse needs a nonzero constant term");
    RatPoly g(terms, 0);
    if (terms == 0) return g;
    g[0] = 1 / f[0];
    for (std::size_t k = 1; k < terms; ++k) {
        mpq_class s = 0;
        for (std::size_t i = 1; i <= k && i < f.size(); ++i) s += f[i] * g[k - i];
        g[k] = -s / f[0];
    }
    return g;
}

inline RatPoly series_mul(const RatPoly& a, const RatPoly& b, std::size_t terms) {
    RatPoly r(terms, 0);
    for (std::size_t i = 0; i < a.size() && i < terms; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < terms; ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline RatPoly RationalFunction::series(std::size_t terms) const {
    return series_mul(numerator, series_inverse(denominator, terms), terms);
}

inline std::string RationalFunction::to_string(const std::string& var) const {
    if (factors.empty()) {
        const std::string n = poly_to_string(numerator, var), d = poly_to_string(denominator, var);
        return d == "1" ? n : "(" + n + ") / (" + d + ")";
    }
    std::string num, den;
    int den_factors = 0;
    for (const auto& [j, p] : factors) {
        if (p.size() <= 1) continue;
        std::string& side = j % 2 != 0 ? num : den;
        if (j % 2 == 0) ++den_factors;
        if (!side.empty()) side += " ";
        side += "(" + poly_to_string(p, var) + ")";
    }
    if (num.empty()) num = "1";
    if (den_factors > 1) den = "(" + den + ")";
    return den.empty() ? num : num + " / " + den;
}

/// Multiplicity of t = c^{-1} as a root of an exact polynomial.
inline unsigned vanishing_order(const RatPoly& f, const mpq_class& c) { return deflate(f, c).first; }

inline mpq_class q_power(const mpz_class& q, long r) {
    mpq_class c = 1;
    for (long i = 0; i < std::abs(r); ++i) c *= q;
    return r < 0 ? mpq_class(1 / c) : c;
}

/// Pole order at t = q^{-r}: order of the denominator minus the numerator.
inline long pole_order_at(const RationalFunction& z, const mpz_class& q, long r) {
    const mpq_class c = q_power(q, r);
    return static_cast<long>(vanishing_order(z.denominator, c)) - static_cast<long>(vanishing_order(z.numerator, c));
}

/// lim_{t -> q^{-r}} Z(t) (1 - q^r t)^rho.
inline mpq_class leading_coefficient(const RationalFunction& z, const mpz_class& q, long r, long rho) {
    const mpq_class c = q_power(q, r);
    auto [mn, qn] = deflate(z.numerator, c);
    auto [md, qd] = deflate(z.denominator, c);
    if (static_cast<long>(md) - static_cast<long>(mn) != rho)
        fail(ErrorKind::inconsistent, "pole order does not match the rational function");
    const mpq_class x = 1 / c;
    const mpq_class v = poly_eval(qn, x) / poly_eval(qd, x);
    if (v == 0) fail(ErrorKind::inconsistent, "leading coefficient vanishes after cancellation");
    return v;
}

/// |x|^{-1} = prime^{v(x)}, returned as the exponent v(x).
inline long abs_valuation_inverse(const mpq_class& x, long prime) {
    if (x == 0) fail(ErrorKind::inconsistent, "valuation of zero");
    return mpq_valuation(x, prime);
}

/// Local factors of an Euler product: for each closed-point degree d, the
/// polynomials det(1 - u F_v) in u = t^d, one per closed point (with
/// multiplicity).
struct EulerFactorData {
    std::map<long, std::vector<std::pair<IntPoly, long>>> factors; // d -> (local factor, count)
};

/// prod_v det(1 - t^{deg v} F_v)^{-1} mod t^{terms}.
inline RatPoly euler_product_series(const EulerFactorData& data, std::size_t terms) {
    RatPoly s(terms, 0);
    if (terms == 0) return s;
    s[0] = 1;
    for (long d = 1; d < static_cast<long>(terms); ++d)
        if (!data.factors.count(d)) fail(ErrorKind::inconsistent, "no closed-point data in degree " + std::to_string(d));
    for (const auto& [d, list] : data.factors) {
        if (d <= 0) fail(ErrorKind::inconsistent, "closed point of non-positive degree");
        if (d >= static_cast<long>(terms)) continue;
        for (const auto& [local, count] : list) {
            if (count < 0) fail(ErrorKind::inconsistent, "negative closed-point count");
            if (count == 0) continue;
            // substitute u = t^d
            RatPoly f(1, 0);
            for (std::size_t i = 0; i < local.size(); ++i) {
                const std::size_t deg = i * static_cast<std::size_t>(d);
                if (deg >= terms) break;
                if (f.size() <= deg) f.resize(deg + 1, 0);
                f[deg] = local[i];
            }
            RatPoly inv = series_inverse(f, terms);
            // inv^count by repeated squaring
            RatPoly pw(terms, 0);
            pw[0] = 1;
            for (long e = count; e > 0; e >>= 1) {
                if (e & 1) pw = series_mul(pw, inv, terms);
                if (e > 1) inv = series_mul(inv, inv, terms);
            }
            s = series_mul(s, pw, terms);
        }
    }
    return s;
}

} // namespace svf

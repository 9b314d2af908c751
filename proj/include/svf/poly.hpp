#pragma once

// Polynomials in t stored lowest degree first. Integer and rational
// polynomials are exact; p-adic ones carry per-coefficient precision.
// Everything about eigenvalues is phrased through these polynomials:
// evaluation, deflation by (1 - c t)^m and Newton polygons.

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "svf/error.hpp"
#include "svf/padic.hpp"

namespace svf {

using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;
using QqPoly = std::vector<QqElement>;

template <class T>
void trim_poly(std::vector<T>& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline IntPoly make_int_poly(std::initializer_list<long> c) {
    IntPoly f(c.begin(), c.end());
    trim_poly(f);
    return f;
}

template <class T>
std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<T> r(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim_poly(r);
    return r;
}

template <class T>
std::vector<T> poly_pow(const std::vector<T>& a, unsigned e) {
    std::vector<T> r{T(1)};
    for (unsigned i = 0; i < e; ++i) r = poly_mul(r, a);
    return r;
}

inline RatPoly to_rat(const IntPoly& f) { return RatPoly(f.begin(), f.end()); }

inline bool is_integral(const RatPoly& f) {
    return std::all_of(f.begin(), f.end(), [](const mpq_class& c) { return c.get_den() == 1; });
}

inline IntPoly to_int(const RatPoly& f) {
    if (!is_integral(f)) fail(ErrorKind::inconsistent, "polynomial is not integral");
    IntPoly r;
    for (const auto& c : f) r.push_back(c.get_num());
    trim_poly(r);
    return r;
}

template <class T>
T poly_eval(const std::vector<T>& f, const T& x) {
    T acc(0);
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

/// Division by (1 - c t) for c != 0: returns Q and R = f(1/c) with
/// f = (1 - c t) Q + R. Works over any field-like T.
template <class T>
std::pair<std::vector<T>, T> divide_one_minus(const std::vector<T>& f, const T& c) {
    const std::size_t n = f.size();
    if (n == 0) return {{}, T{}};
    std::vector<T> q(n > 1 ? n - 1 : 0);
    if (n == 1) return {{}, f[0]};
    // (1 - c t) Q: coefficient of t^i is q_i - c q_{i-1}
    q[n - 2] = -(f[n - 1] / c);
    for (std::size_t i = n - 2; i >= 1; --i) q[i - 1] = (q[i] - f[i]) / c;
    T r = f[0] - q[0];
    return {std::move(q), r};
}

/// Multiplicity of c as an inverse root of an exact polynomial and the
/// deflated quotient f / (1 - c t)^m.
inline std::pair<unsigned, RatPoly> deflate(RatPoly f, const mpq_class& c) {
    trim_poly(f);
    if (f.empty()) fail(ErrorKind::inconsistent, "deflating the zero polynomial");
    unsigned m = 0;
    while (f.size() > 1) {
        auto [q, r] = divide_one_minus(f, c);
        if (r != 0) break;
        f = std::move(q);
        trim_poly(f);
        ++m;
    }
    return {m, std::move(f)};
}

/// Power sums s_k = sum alpha^k (k = 1..count) of the inverse roots of
/// f = prod (1 - alpha t), from t f'/f.
inline std::vector<mpq_class> inverse_root_power_sums(const RatPoly& f, std::size_t count) {
    if (f.empty() || f[0] != 1) fail(ErrorKind::inconsistent, "power sums need constant term 1");
    auto coeff = [&](std::size_t i) { return i < f.size() ? f[i] : mpq_class(0); };
    std::vector<mpq_class> s(count + 1, 0);
    for (std::size_t k = 1; k <= count; ++k) {
        mpq_class v = -mpq_class(static_cast<long>(k)) * coeff(k);
        for (std::size_t i = 1; i < k; ++i) v -= coeff(i) * s[k - i];
        s[k] = v;
    }
    return s;
}

/// Inverse of inverse_root_power_sums for a polynomial of given degree.
inline RatPoly from_power_sums(const std::vector<mpq_class>& s, std::size_t degree) {
    RatPoly f(degree + 1, 0);
    f[0] = 1;
    for (std::size_t k = 1; k <= degree; ++k) {
        mpq_class v = s[k];
        for (std::size_t i = 1; i < k; ++i) v += f[i] * s[k - i];
        f[k] = -v / static_cast<long>(k);
    }
    trim_poly(f);
    return f;
}

/// The polynomial whose inverse roots are the pairwise products of those of
/// f and g (characteristic polynomial of a tensor product).
inline IntPoly tensor(const IntPoly& f, const IntPoly& g) {
    const std::size_t n = f.size() - 1, m = g.size() - 1;
    if (n == 0 || m == 0) return {1};
    const auto sf = inverse_root_power_sums(to_rat(f), n * m);
    const auto sg = inverse_root_power_sums(to_rat(g), n * m);
    std::vector<mpq_class> s(n * m + 1);
    for (std::size_t k = 1; k <= n * m; ++k) s[k] = sf[k] * sg[k];
    RatPoly r = from_power_sums(s, n * m);
    return to_int(r);
}

/// Polynomial whose inverse roots are c / alpha for the inverse roots alpha
/// of f: coefficient k is f_{n-k} c^k / f_n.
inline RatPoly pairing_reversal(const RatPoly& f, const mpq_class& c) {
    const std::size_t n = f.size() - 1;
    RatPoly r(n + 1);
    mpq_class ck = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        r[k] = f[n - k] * ck / f[n];
        ck *= c;
    }
    return r;
}

template <class T>
std::string poly_to_string(const std::vector<T>& f, const std::string& var = "t") {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        T c = f[i];
        const bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        if (i == 0 || c != 1) os << c;
        if (i > 0) os << var;
        if (i > 1) os << '^' << i;
        first = false;
    }
    return os.str();
}

/// One segment of a Newton polygon: slope (in ord_q units) and horizontal
/// length.
struct SlopeSegment {
    mpq_class slope;
    long length = 0;
    friend bool operator==(const SlopeSegment&, const SlopeSegment&) = default;
};

/// Lower convex hull of the points (i, v_i / a); v_i = kInfinity marks a
/// coefficient known to vanish. Returns the segments in increasing slope.
inline std::vector<SlopeSegment> newton_polygon(const std::vector<long>& vals, long a = 1) {
    std::vector<std::pair<long, long>> pts;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] < kInfinity) pts.emplace_back(static_cast<long>(i), vals[i]);
    if (pts.empty()) return {};
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b if it lies on or above segment o -> pt
            const __int128 cross = static_cast<__int128>(b.first - o.first) * (pt.second - o.second) -
                                   static_cast<__int128>(b.second - o.second) * (pt.first - o.first);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<SlopeSegment> segs;
    for (std::size_t k = 1; k < hull.size(); ++k) {
        const long dx = hull[k].first - hull[k - 1].first;
        mpq_class s(hull[k].second - hull[k - 1].second, dx * a);
        s.canonicalize();
        segs.push_back({s, dx});
    }
    return segs;
}

/// Height of the hull over abscissa x (for certifying unknown coefficients).
inline mpq_class newton_polygon_height(const std::vector<SlopeSegment>& segs, long origin_val, long a, long x) {
    mpq_class h(origin_val, a);
    h.canonicalize();
    long pos = 0;
    for (const auto& s : segs) {
        const long step = std::min(s.length, x - pos);
        if (step <= 0) break;
        h += s.slope * step;
        pos += step;
    }
    return h;
}

/// Newton polygon of a p-adic polynomial; entries indistinguishable from zero
/// must be certified to lie on or above the hull of the known ones.
inline std::vector<SlopeSegment> newton_polygon(const QqPoly& f, long a) {
    std::vector<long> vals(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        vals[i] = f[i].is_zero() ? kInfinity : f[i].valuation();
    while (!vals.empty() && vals.back() >= kInfinity) vals.pop_back();
    if (vals.empty() || vals[0] >= kInfinity)
        fail(ErrorKind::precision_exhausted, "constant coefficient not certified nonzero");
    auto segs = newton_polygon(vals, a);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!f[i].is_indistinguishable_from_zero()) continue;
        const mpq_class bound(f[i].abs_prec(), a);
        if (bound < newton_polygon_height(segs, vals[0], a, static_cast<long>(i)))
            fail(ErrorKind::precision_exhausted,
                 "coefficient of t^" + std::to_string(i) + " too imprecise to place the Newton polygon");
    }
    return segs;
}

/// Exact gcd over Q, normalized to constant term 1 when possible.
inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    trim_poly(a);
    trim_poly(b);
    while (!b.empty()) {
        // a mod b, by leading terms
        while (a.size() >= b.size() && !a.empty()) {
            const mpq_class f = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
            trim_poly(a);
        }
        std::swap(a, b);
    }
    if (a.empty()) return a;
    const mpq_class lead = a[0] != 0 ? a[0] : a.back();
    for (auto& c : a) c /= lead;
    return a;
}

/// Exact quotient a / b; fails if b does not divide a.
inline RatPoly poly_exact_div(RatPoly a, const RatPoly& b) {
    trim_poly(a);
    if (b.empty()) fail(ErrorKind::inconsistent, "division by the zero polynomial");
    if (a.size() < b.size()) {
        if (a.empty()) return a;
        fail(ErrorKind::inconsistent, "polynomial division is not exact");
    }
    RatPoly q(a.size() - b.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
        q[k] = a[k + b.size() - 1] / b.back();
        for (std::size_t i = 0; i < b.size(); ++i) a[k + i] -= q[k] * b[i];
    }
    trim_poly(a);
    if (!a.empty()) fail(ErrorKind::inconsistent, "polynomial division is not exact");
    trim_poly(q);
    return q;
}

/// Squarefree part f / gcd(f, f').
inline RatPoly squarefree_part(const RatPoly& f) {
    RatPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
    trim_poly(d);
    if (d.empty()) return f;
    RatPoly s = poly_exact_div(f, poly_gcd(f, d));
    const mpq_class c = s[0] != 0 ? s[0] : s.back();
    for (auto& x : s) x /= c;
    return s;
}

} // namespace svf

#pragma once

// Virtual crystals (F, N) and the filtration M^i = F^{-1}(p^i N) ∩ N.
// The filtration is only stored on a finite window [i_min, i_max]:
// M^i = N below it and M^{i+1} = p M^i above it.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svf/semilinear.hpp"

namespace svf {

struct VirtualCrystal {
    Isocrystal frobenius;
    Lattice lattice;

    VirtualCrystal(Isocrystal f, Lattice n) : frobenius(std::move(f)), lattice(std::move(n)) {
        if (lattice.dim() != frobenius.rank()) fail(ErrorKind::inconsistent, "lattice and crystal ranks differ");
        (void)inverse(lattice.basis());
        (void)inverse(frobenius.matrix);
    }

    std::size_t rank() const { return frobenius.rank(); }
    const QqContextPtr& ctx() const { return frobenius.ctx; }

    /// Matrix of F in the basis of N.
    QqMatrix matrix_in_lattice_basis() const {
        const QqMatrix& b = lattice.basis();
        return inverse(b) * frobenius.matrix * apply_frobenius(b, 1);
    }
};

/// Image F(L) = A sigma(B) Z_q^n.
inline Lattice frobenius_image(const Isocrystal& f, const Lattice& l) {
    return Lattice(f.matrix * apply_frobenius(l.basis(), 1));
}

struct FGaugeWindow {
    long i_min = 0;
    long i_max = 0;
    Lattice n;                    // M^i for i <= i_min
    std::vector<Lattice> filtration; // M^{i_min}, ..., M^{i_max}

    /// M^i for any integer i via the boundary rules.
    Lattice at(long i) const {
        if (i <= i_min) return n;
        if (i <= i_max) return filtration[static_cast<std::size_t>(i - i_min)];
        return filtration.back().scaled(i - i_max);
    }
};

struct GaugeAxioms {
    bool p_step = false;          // p M^i ⊆ M^{i+1}
    bool exhaustive = false;      // M^{i_min} = N and the window edges are stable
    bool frobenius_onto = false;  // F(p^{-i} M^i) ⊆ N and together they span N
    bool all() const { return p_step && exhaustive && frobenius_onto; }
};

inline GaugeAxioms check_gauge_axioms(const VirtualCrystal& vc, const FGaugeWindow& g) {
    GaugeAxioms ax;
    ax.p_step = true;
    for (long i = g.i_min - 1; i <= g.i_max + 1; ++i)
        if (!g.at(i + 1).contains(g.at(i).scaled(1))) ax.p_step = false;

    const auto& f = vc.frobenius;
    const Lattice recomputed_top =
        lattice_intersect(semilinear_preimage(f.matrix, vc.lattice.scaled(g.i_max + 1)), vc.lattice);
    ax.exhaustive = g.at(g.i_min) == vc.lattice &&
                    semilinear_preimage(f.matrix, vc.lattice.scaled(g.i_min)).contains(vc.lattice) &&
                    recomputed_top == g.at(g.i_max).scaled(1);

    ax.frobenius_onto = true;
    std::optional<Lattice> span;
    for (long i = g.i_min; i <= g.i_max; ++i) {
        const Lattice img = frobenius_image(f, g.at(i).scaled(-i));
        if (!vc.lattice.contains(img)) ax.frobenius_onto = false;
        span = span ? lattice_sum(*span, img) : img;
    }
    if (!span || !(*span == vc.lattice)) ax.frobenius_onto = false;
    return ax;
}

/// The filtration M^i := F^{-1}(p^i N) ∩ N on its detected window. i_min is
/// the valuation of F in a basis of N; above i1 = -ord(F^{-1}) the
/// recursion M^{i+1} = p M^i is automatic, and the scan confirms it.
inline FGaugeWindow hodge(const VirtualCrystal& vc, long max_span = 64) {
    const QqMatrix c = vc.matrix_in_lattice_basis();
    const long i_min = min_valuation(c);
    const long i1 = std::max(i_min, -min_valuation(inverse(c)));
    if (i1 - i_min > max_span)
        fail(ErrorKind::window_unbounded, "filtration does not stabilise within " + std::to_string(max_span) + " steps");

    auto filt = [&](long i) {
        return lattice_intersect(semilinear_preimage(vc.frobenius.matrix, vc.lattice.scaled(i)), vc.lattice);
    };
    std::vector<Lattice> lattices;
    for (long i = i_min; i <= i1 + 2; ++i) lattices.push_back(filt(i));
    // i_max: the last i where M^{i+1} = p M^i fails, plus one
    long i_max = i_min;
    for (long i = i_min; i <= i1 + 1; ++i) {
        const auto k = static_cast<std::size_t>(i - i_min);
        if (!(lattices[k + 1] == lattices[k].scaled(1))) i_max = i + 1;
    }
    const auto len = static_cast<std::size_t>(i_max - i_min + 1);
    // twice consecutively stable past the window
    const Lattice& top = lattices[len - 1];
    if (!(lattices[len] == top.scaled(1)) || !(lattices[len + 1] == top.scaled(2)))
        fail(ErrorKind::window_unbounded, "filtration did not stabilise past the window");
    lattices.erase(lattices.begin() + static_cast<std::ptrdiff_t>(len), lattices.end());
    FGaugeWindow g{i_min, i_max, vc.lattice, std::move(lattices)};
    if (!(g.filtration.front() == vc.lattice)) fail(ErrorKind::inconsistent, "M^{i_min} differs from N");
    return g;
}

/// h^i = dim_k M^i / (M^{i+1} + p M^{i-1}); only the window can contribute.
inline std::map<long, long> hodge_numbers(const FGaugeWindow& g) {
    std::map<long, long> h;
    for (long i = g.i_min; i <= g.i_max; ++i) {
        const Lattice mi = g.at(i);
        const Lattice sub = lattice_sum(g.at(i + 1), g.at(i - 1).scaled(1));
        if (!sub.contains(mi.scaled(1))) fail(ErrorKind::inconsistent, "graded piece is not killed by p");
        const long d = mi.index_exponent(sub);
        if (d != 0) h[i] = d;
    }
    return h;
}

struct GaugeEntry {
    long degree = 0; // cohomological degree j
    long twist = 0;  // gauge degrees of the window are shifted by -twist
    FGaugeWindow window;
    Isocrystal crystal;
    SlopeProfile slopes;
};

/// Gauges of a complex with zero differentials, one per cohomological degree.
struct GaugeComplex {
    std::vector<GaugeEntry> entries;

    const GaugeEntry* find(long degree) const {
        for (const auto& e : entries)
            if (e.degree == degree) return &e;
        return nullptr;
    }
};

inline GaugeComplex make_gauge_complex(const std::vector<std::pair<long, VirtualCrystal>>& degrees) {
    GaugeComplex c;
    for (const auto& [j, vc] : degrees) {
        if (c.find(j)) fail(ErrorKind::inconsistent, "degree " + std::to_string(j) + " given twice");
        c.entries.push_back({j, 0, hodge(vc), vc.frobenius, slopes(vc.frobenius)});
    }
    return c;
}

/// M(r)^{i,j} := M^{i+r, j-r}: the window moves down by r in gauge degree
/// and the cohomological degree moves up by r.
inline GaugeComplex tate_twist(const GaugeComplex& c, long r) {
    GaugeComplex out = c;
    for (auto& e : out.entries) {
        e.degree += r;
        e.twist += r;
        e.window.i_min -= r;
        e.window.i_max -= r;
    }
    return out;
}

/// Hodge numbers of a twisted entry, indexed in the twisted gauge degrees.
inline std::map<long, long> hodge_numbers(const GaugeEntry& e) { return hodge_numbers(e.window); }

/// With zero differentials the simple complex has the stored crystal in
/// each degree.
inline std::map<long, Isocrystal> simple_cohomology(const GaugeComplex& c) {
    std::map<long, Isocrystal> out;
    for (const auto& e : c.entries) out.emplace(e.degree, e.crystal);
    return out;
}

using PolygonVertex = std::pair<long, mpq_class>;

inline std::vector<PolygonVertex> newton_vertices(const SlopeProfile& s) {
    std::vector<PolygonVertex> v{{0, 0}};
    for (const auto& seg : s.segments) v.emplace_back(v.back().first + seg.length, v.back().second + seg.slope * seg.length);
    return v;
}

inline std::vector<PolygonVertex> hodge_vertices(const std::map<long, long>& h) {
    std::vector<PolygonVertex> v{{0, 0}};
    for (const auto& [i, m] : h) v.emplace_back(v.back().first + m, v.back().second + mpq_class(i * m));
    return v;
}

/// Height of a convex polygon at integer abscissa x.
inline mpq_class polygon_height(const std::vector<PolygonVertex>& v, long x) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (x <= v[k].first) {
            const long dx = v[k].first - v[k - 1].first;
            if (dx == 0) continue;
            return v[k - 1].second + (v[k].second - v[k - 1].second) * mpq_class(x - v[k - 1].first, dx);
        }
    return v.back().second;
}

struct SlopeGaugeReport {
    std::vector<PolygonVertex> newton;
    std::vector<PolygonVertex> hodge;
    std::map<long, long> hodge_numbers;
    std::map<long, long> slope_buckets; // # slopes in [i, i+1)
    bool newton_above_hodge = false;
    bool endpoints_equal = false;
    bool buckets_match = false; // slope_buckets == hodge_numbers
    bool ok() const { return newton_above_hodge && endpoints_equal; }
};

inline SlopeGaugeReport slope_gauge_check(const VirtualCrystal& vc, const FGaugeWindow& g) {
    SlopeGaugeReport rep;
    const SlopeProfile s = slopes(vc.frobenius);
    rep.hodge_numbers = hodge_numbers(g);
    rep.newton = newton_vertices(s);
    rep.hodge = hodge_vertices(rep.hodge_numbers);
    for (const auto& seg : s.segments) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), seg.slope.get_num_mpz_t(), seg.slope.get_den_mpz_t());
        rep.slope_buckets[fl.get_si()] += seg.length;
    }
    rep.endpoints_equal = rep.newton.back() == rep.hodge.back();
    rep.newton_above_hodge = true;
    for (long x = 0; x <= static_cast<long>(vc.rank()); ++x)
        if (polygon_height(rep.newton, x) < polygon_height(rep.hodge, x)) rep.newton_above_hodge = false;
    rep.buckets_match = rep.slope_buckets == rep.hodge_numbers;
    return rep;
}

struct RaynaudReport {
    bool fv_equals_p = false;
    bool vf_equals_p = false;
    bool semilinear = false;
    long nilpotence_step = 0; // least n with V^n ⊆ p W^n, n <= cap
};

/// Elementary Type I desk model: F on W^n with slopes in [0, 1), V = p F^{-1},
/// d = 0. V = C sigma^{-1} with C = sigma^{-1}(p A^{-1}).
inline RaynaudReport check_raynaud_relations(const Isocrystal& f, long cap = 64) {
    const auto& ctx = f.ctx;
    const std::size_t n = f.rank();
    const SlopeProfile s = slopes(f);
    for (const auto& seg : s.segments)
        if (seg.slope >= 1) fail(ErrorKind::not_type_i, "slope " + seg.slope.get_str() + " >= 1: V is not nilpotent");
    if (!is_integral(f.matrix)) fail(ErrorKind::not_type_i, "F is not integral");
    const unsigned back = ctx->degree() - 1;
    const QqMatrix c = apply_frobenius(shifted(inverse(f.matrix), 1), back);
    if (!is_integral(c)) fail(ErrorKind::not_type_i, "V = pF^{-1} is not integral");

    RaynaudReport rep;
    const long prec = detail::working_precision(f.matrix);
    const QqElement p = QqElement::from_integer(ctx, ctx->p(), prec);
    auto apply_f = [&](const QqMatrix& v) { return f.matrix * apply_frobenius(v, 1); };
    auto apply_v = [&](const QqMatrix& v) { return c * apply_frobenius(v, back); };
    auto same = [](const QqMatrix& x, const QqMatrix& y) {
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (!agrees(x(i, 0), y(i, 0))) return false;
        return true;
    };
    // deterministic test vectors and scalars spanning F_q-directions
    rep.fv_equals_p = rep.vf_equals_p = rep.semilinear = true;
    for (std::size_t t = 0; t < n + 2; ++t) {
        QqMatrix v(n, 1);
        Coeffs sc(ctx->degree());
        for (std::size_t i = 0; i < n; ++i) {
            Coeffs cf(ctx->degree());
            for (std::size_t k = 0; k < cf.size(); ++k) cf[k] = static_cast<long>((7 * t + 3 * i + 5 * k + 1) % 11);
            v(i, 0) = QqElement::from_coeffs(ctx, 0, cf, prec);
        }
        for (std::size_t k = 0; k < sc.size(); ++k) sc[k] = static_cast<long>(2 * t + k + 1);
        const QqElement scalar = QqElement::from_coeffs(ctx, 0, sc, prec);
        QqMatrix pv = v, av = v;
        for (std::size_t i = 0; i < n; ++i) {
            pv(i, 0) = p * v(i, 0);
            av(i, 0) = scalar * v(i, 0);
        }
        if (!same(apply_f(apply_v(v)), pv)) rep.fv_equals_p = false;
        if (!same(apply_v(apply_f(v)), pv)) rep.vf_equals_p = false;
        QqMatrix fa = apply_f(av), fv = apply_f(v);
        for (std::size_t i = 0; i < n; ++i) fv(i, 0) = scalar.frobenius() * fv(i, 0);
        if (!same(fa, fv)) rep.semilinear = false;
    }

    // V^k = C sigma^{-1}(C) ... sigma^{-(k-1)}(C) sigma^{-k}
    QqMatrix vk = c;
    long first = 0;
    for (long k = 1; k <= cap; ++k) {
        if (k > 1) vk = vk * apply_frobenius(c, static_cast<unsigned>(((k - 1) * back) % ctx->degree()));
        if (min_valuation(vk) >= 1) {
            first = k;
            break;
        }
    }
    if (first == 0) fail(ErrorKind::not_type_i, "V^n not divisible by p for n <= " + std::to_string(cap));
    // growth continues: V^{2n} lands in p^2
    QqMatrix v2 = vk;
    for (long k = first + 1; k <= 2 * first; ++k)
        v2 = v2 * apply_frobenius(c, static_cast<unsigned>(((k - 1) * back) % ctx->degree()));
    if (min_valuation(v2) < 2) fail(ErrorKind::not_type_i, "V is not topologically nilpotent");
    rep.nilpotence_step = first;
    return rep;
}

} // namespace svf

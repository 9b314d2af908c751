#pragma once

// Both sides of the special-value identities at t = q^{-r}: the leading
// coefficient of the zeta function on one side, Euler characteristics of
// Frobenius invariants with their correction exponents on the other.
//
// All exponents are stored in units of the working prime (p or l); the
// slope and Hodge corrections are additionally reported in ord_q units.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svf/galois.hpp"
#include "svf/gauge.hpp"
#include "svf/geometry.hpp"
#include "svf/lfun.hpp"
#include "svf/semilinear.hpp"

namespace svf {

/// Per-degree data with rational coefficients, so that Tate twists stay
/// inside the same representation.
struct DegreeInput {
    RatPoly charpoly{1};                    // det(1 - t F^a)
    std::optional<RatMatrix> linear;        // F^a, when a matrix is known
    std::optional<std::map<long, long>> hodge;
    long unipotent = 0;                     // u_j, ord_q units
};

struct VerificationInput {
    std::string name;
    long p = 2;
    unsigned a = 1;
    bool padic_only = false;
    std::map<long, DegreeInput> degrees;

    mpz_class q() const { return mpz_pow(p, a); }
};

inline RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

/// Hodge numbers of an integral Frobenius matrix on its standard lattice.
inline std::map<long, long> hodge_of_matrix(const IntMatrix& semilinear, long p, unsigned a, long prec) {
    auto ctx = QqContext::make(p, a, 2 * prec);
    const VirtualCrystal vc(make_isocrystal(ctx, semilinear, prec), Lattice::standard(ctx, semilinear.rows(), prec));
    std::map<long, long> h;
    for (auto [i, n] : hodge_numbers(hodge(vc)))
        if (n != 0) h[i] = n;
    return h;
}

inline VerificationInput verification_input(const CohomologyPackage& pkg, long prec = kDefaultPrecision) {
    check_package(pkg);
    VerificationInput in;
    in.name = pkg.name;
    in.p = pkg.p;
    in.a = pkg.a;
    in.padic_only = pkg.padic_only;
    for (const auto& [j, d] : pkg.degrees) {
        DegreeInput di;
        di.charpoly = to_rat(d.charpoly);
        if (auto m = d.linearized(pkg.a)) di.linear = to_rat(*m);
        di.unipotent = d.unipotent;
        if (d.semilinear) {
            // lattice data present: the gauge is the reference for Hodge numbers
            auto h = hodge_of_matrix(*d.semilinear, pkg.p, pkg.a, prec);
            if (d.hodge) {
                std::map<long, long> given;
                for (auto [i, n] : *d.hodge)
                    if (n != 0) given[i] = n;
                if (given != h)
                    fail(ErrorKind::inconsistent, "degree " + std::to_string(j) + ": Hodge numbers disagree with the gauge");
            }
            di.hodge = std::move(h);
        } else {
            di.hodge = d.hodge;
        }
        in.degrees[j] = std::move(di);
    }
    return in;
}

/// Twist by q^{-r} in every degree: eigenvalues a -> a / q^r, slopes and Hodge
/// indices shift by -r. Cohomological degrees are unchanged.
inline VerificationInput tate_twist(const VerificationInput& in, long r) {
    VerificationInput out = in;
    const mpq_class s = 1 / q_power(in.q(), r);
    for (auto& [j, d] : out.degrees) {
        mpq_class pw = 1;
        for (auto& c : d.charpoly) {
            c *= pw;
            pw *= s;
        }
        if (d.linear)
            for (std::size_t i = 0; i < d.linear->rows(); ++i)
                for (std::size_t k = 0; k < d.linear->cols(); ++k) (*d.linear)(i, k) *= s;
        if (d.hodge) {
            std::map<long, long> h;
            for (auto [i, n] : *d.hodge) h[i - r] = n;
            d.hodge = std::move(h);
        }
    }
    return out;
}

inline SlopeProfile slopes_of_polynomial(const RatPoly& f, unsigned a, long p) {
    std::vector<long> vals;
    for (const auto& c : f) vals.push_back(mpq_valuation(c, p));
    return {newton_polygon(vals, static_cast<long>(a)), {}};
}

/// prime^exponent, written out for reports.
inline std::string prime_power(long prime, long exponent) { return std::to_string(prime) + "^" + std::to_string(exponent); }

struct DegreeVerdict {
    long degree = 0;
    unsigned multiplicity = 0;      // m_j, of q^r as an inverse root
    bool semisimple = true;
    std::string semisimple_reason;  // "simple root", "exact rank test", "absent"
    mpq_class value = 1;            // prod_{a != q^r} (1 - a / q^r)
    long value_valuation = 0;       // at the working prime
    mpq_class slope_deficit = 0;    // sum_{lambda < r} (r - lambda), ord_q units (p-adic only)
    long unipotent = 0;
    long z_exponent = 0;            // z(f_j) = prime^z_exponent
    std::optional<long> z_module_exponent; // l-adic cross-check through a Gamma-module
    long certified_digits = kInfinity;     // p-adic audit
};

struct IdentityCheck {
    std::string name;
    bool holds = false;
    std::string lhs;
    std::string rhs;
};

struct VerificationReport {
    std::string name;
    std::string route; // "p-adic" or "l-adic"
    long prime = 0;
    long p = 0;
    unsigned a = 1;
    long r = 0;
    bool synthetic = false;
    std::vector<DegreeVerdict> degrees;
    std::map<long, long> ext_ranks;
    long rank_alternating_sum = 0;
    long rho_analytic = 0;
    long rho_cohomological = 0;
    mpq_class leading = 0;
    long leading_exponent = 0; // |c|^{-1} = prime^leading_exponent
    long chi_exponent = 0;     // chi = prime^chi_exponent
    std::optional<long> hodge_chi;   // chi(P, r), ord_q units
    std::optional<mpq_class> tilde_chi;
    std::optional<bool> hodge_matches_tilde;
    long precision = 0;
    long min_certified_digits = kInfinity;
    std::vector<IdentityCheck> identities;

    bool ok() const {
        for (const auto& c : identities)
            if (!c.holds) return false;
        return true;
    }
};

namespace detail {

inline DegreeVerdict semisimplicity(long j, const DegreeInput& d, const mpq_class& c) {
    DegreeVerdict v;
    v.degree = j;
    v.unipotent = d.unipotent;
    auto [m, quotient] = deflate(d.charpoly, c);
    v.multiplicity = m;
    if (m == 0) {
        v.semisimple_reason = "absent";
    } else if (m == 1) {
        v.semisimple_reason = "simple root";
    } else if (d.linear) {
        v.semisimple_reason = "exact rank test";
        v.semisimple = semisimple_at(*d.linear, c);
    } else {
        fail(ErrorKind::hypothesis_failed,
             "degree " + std::to_string(j) + ": q^r has multiplicity " + std::to_string(m) + " and no matrix decides semisimplicity");
    }
    if (!v.semisimple)
        fail(ErrorKind::hypothesis_failed, "degree " + std::to_string(j) + ": q^r is a multiple root of the minimal polynomial");
    v.value = poly_eval(quotient, mpq_class(1 / c));
    return v;
}

/// Shared analytic side and rank bookkeeping.
inline void analytic_side(VerificationReport& rep, const VerificationInput& in, long r) {
    RationalFunction z;
    for (const auto& [j, d] : in.degrees) {
        if (j % 2 != 0)
            z.numerator = poly_mul(z.numerator, d.charpoly);
        else
            z.denominator = poly_mul(z.denominator, d.charpoly);
    }
    normalize(z);
    std::map<long, unsigned> mult;
    for (const auto& v : rep.degrees) mult[v.degree] = v.multiplicity;
    rep.ext_ranks = ext_ranks(mult);
    for (auto [j, n] : rep.ext_ranks) {
        rep.rank_alternating_sum += (j % 2 == 0 ? n : -n);
        rep.rho_cohomological += (j % 2 == 0 ? -j * n : j * n);
    }
    rep.rho_analytic = pole_order_at(z, in.q(), r);
    rep.identities.push_back({"rank-alternating-sum", rep.rank_alternating_sum == 0, std::to_string(rep.rank_alternating_sum), "0"});
    rep.identities.push_back({"rho", rep.rho_analytic == rep.rho_cohomological, std::to_string(rep.rho_analytic),
                              std::to_string(rep.rho_cohomological)});
    rep.leading = leading_coefficient(z, in.q(), r, rep.rho_analytic);
    rep.leading_exponent = abs_valuation_inverse(rep.leading, rep.prime);
}

inline QqPoly to_qq(const QqContextPtr& ctx, const RatPoly& f, long prec) {
    QqPoly g;
    for (const auto& c : f) g.push_back(c == 0 ? QqElement::zero(ctx) : QqElement::from_rational(ctx, c, prec));
    return g;
}

} // namespace detail

/// p-adic identity at t = q^{-r}; the p-adic route is audited against the
/// exact one at relative precision prec.
inline VerificationReport verify_padic(const VerificationInput& in, long r, long prec = kDefaultPrecision) {
    if (prec < 1) fail(ErrorKind::parse, "precision must be positive");
    VerificationReport rep;
    rep.name = in.name;
    rep.route = "p-adic";
    rep.prime = rep.p = in.p;
    rep.a = in.a;
    rep.r = r;
    rep.precision = prec;
    const mpq_class c = q_power(in.q(), r);
    auto ctx = QqContext::make(in.p, in.a, 2 * prec + 16);
    const QqElement cq = QqElement::from_rational(ctx, c, prec);

    for (const auto& [j, d] : in.degrees) {
        DegreeVerdict v = detail::semisimplicity(j, d, c);
        const SlopeProfile profile = slopes_of_polynomial(d.charpoly, in.a, in.p);
        v.value_valuation = mpq_valuation(v.value, in.p);
        v.slope_deficit = slope_deficit(profile, r);
        const mpq_class deficit_p = v.slope_deficit * in.a;
        if (deficit_p.get_den() != 1) fail(ErrorKind::inconsistent, "slope deficit is not integral in p units");
        v.z_exponent = -v.value_valuation - deficit_p.get_num().get_si() + static_cast<long>(in.a) * v.unipotent;

        // audit: the same quantities from p-adic coefficients at precision prec
        EigenproductData pe;
        try {
            pe = eigenproduct_excluding(detail::to_qq(ctx, d.charpoly, prec), cq, profile, r, in.a);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::precision_exhausted)
                fail(ErrorKind::precision_exhausted, "degree " + std::to_string(j) + " at precision " + std::to_string(prec) +
                                                         ": " + e.what());
            throw;
        }
        v.certified_digits = pe.certified_digits;
        if (pe.multiplicity != v.multiplicity || pe.value_valuation != v.value_valuation)
            fail(ErrorKind::precision_exhausted, "degree " + std::to_string(j) + ": precision " + std::to_string(prec) +
                                                     " cannot separate q^r from the other inverse roots");
        if (pe.certified_digits < kGuardDigits)
            fail(ErrorKind::precision_exhausted, "degree " + std::to_string(j) + ": " + std::to_string(pe.certified_digits) +
                                                     " certified digits left at precision " + std::to_string(prec) +
                                                     ", need " + std::to_string(kGuardDigits));
        rep.min_certified_digits = std::min(rep.min_certified_digits, pe.certified_digits);
        if (v.unipotent != 0) rep.synthetic = true;
        rep.degrees.push_back(std::move(v));
    }
    detail::analytic_side(rep, in, r);

    std::map<long, long> z;
    mpq_class tilde = 0;
    for (const auto& v : rep.degrees) {
        z[v.degree] = v.z_exponent;
        tilde += (v.degree % 2 == 0 ? 1 : -1) * (v.slope_deficit - v.unipotent);
    }
    rep.chi_exponent = chi_from_zf(z);
    rep.tilde_chi = tilde;
    const mpq_class tilde_p = tilde * in.a;
    rep.identities.push_back({"leading-vs-slope-correction", tilde_p == rep.leading_exponent - rep.chi_exponent,
                              prime_power(in.p, rep.leading_exponent),
                              prime_power(in.p, rep.chi_exponent) + " * q^" + tilde.get_str()});

    bool have_hodge = !in.degrees.empty();
    long hodge_chi = 0;
    for (const auto& [j, d] : in.degrees) {
        if (!d.hodge) {
            have_hodge = false;
            break;
        }
        for (auto [i, h] : *d.hodge)
            if (i <= r) hodge_chi += (j % 2 == 0 ? 1 : -1) * (r - i) * h;
    }
    if (have_hodge) {
        rep.hodge_chi = hodge_chi;
        rep.hodge_matches_tilde = mpq_class(hodge_chi) == tilde;
        rep.identities.push_back({"leading-vs-hodge-correction",
                                  rep.leading_exponent == rep.chi_exponent + static_cast<long>(in.a) * hodge_chi,
                                  prime_power(in.p, rep.leading_exponent),
                                  prime_power(in.p, rep.chi_exponent) + " * q^" + std::to_string(hodge_chi)});
    }
    return rep;
}

inline VerificationReport verify_padic(const CohomologyPackage& pkg, long r, long prec = kDefaultPrecision) {
    return verify_padic(verification_input(pkg, prec), r, prec);
}

/// Rational matrix with det(1 - tC) = f, f(0) = 1.
inline RatMatrix rat_companion(const RatPoly& f) {
    const std::size_t n = f.size() - 1;
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 0;
    for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = -f[n - i];
    return m;
}

inline bool compatibility_check(const CohomologyPackage& pkg) { return !pkg.padic_only; }

/// l-adic identity at t = q^{-r}, l != p. Each z(f_j) is cross-checked
/// through the Gamma-module with gamma = F^a / q^r when a matrix is known or
/// the root is simple.
inline VerificationReport verify_elladic(const VerificationInput& in, long r, long ell) {
    if (!fp::is_prime(ell)) fail(ErrorKind::parse, "l must be prime");
    if (ell == in.p) fail(ErrorKind::parse, "l must differ from the characteristic; use the p-adic route");
    if (in.padic_only) fail(ErrorKind::unsupported, "package has p-adic-only coefficients; l-adic verification disabled");
    VerificationReport rep;
    rep.name = in.name;
    rep.route = "l-adic";
    rep.prime = ell;
    rep.p = in.p;
    rep.a = in.a;
    rep.r = r;
    const mpq_class c = q_power(in.q(), r);
    for (const auto& [j, d] : in.degrees) {
        DegreeVerdict v = detail::semisimplicity(j, d, c);
        v.value_valuation = mpq_valuation(v.value, ell);
        v.z_exponent = -v.value_valuation;
        if (d.charpoly.size() > 1 && (d.linear || v.multiplicity <= 1)) {
            GammaModule gm;
            gm.prime = ell;
            gm.gamma = d.linear ? *d.linear : rat_companion(d.charpoly);
            const mpq_class s = 1 / c;
            for (std::size_t i = 0; i < gm.gamma.rows(); ++i)
                for (std::size_t k = 0; k < gm.gamma.cols(); ++k) gm.gamma(i, k) *= s;
            if (is_local_integral(gm.gamma, ell)) {
                const long e = z_of_f(gm).exponent;
                v.z_module_exponent = e;
                if (e != v.z_exponent)
                    fail(ErrorKind::inconsistent, "degree " + std::to_string(j) + ": z(f) from the module is " +
                                                      prime_power(ell, e) + ", from the polynomial " + prime_power(ell, v.z_exponent));
            }
        }
        rep.degrees.push_back(std::move(v));
    }
    detail::analytic_side(rep, in, r);
    std::map<long, long> z;
    for (const auto& v : rep.degrees) z[v.degree] = v.z_exponent;
    rep.chi_exponent = chi_from_zf(z);
    rep.identities.push_back({"leading-vs-chi", rep.leading_exponent == rep.chi_exponent, prime_power(ell, rep.leading_exponent),
                              prime_power(ell, rep.chi_exponent)});
    return rep;
}

inline VerificationReport verify_elladic(const CohomologyPackage& pkg, long r, long ell) {
    if (!compatibility_check(pkg)) fail(ErrorKind::unsupported, "package has p-adic-only coefficients; l-adic verification disabled");
    return verify_elladic(verification_input(pkg), r, ell);
}

} // namespace svf

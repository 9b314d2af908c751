#pragma once

// Random generators shared by the property tests and the acceptance runner.

#include <random>
#include <vector>

#include "svf/galois.hpp"
#include "svf/gauge.hpp"

namespace svf::support {

// Random gamma = P D P^{-1} + l-integral noise; keeps 1 a simple root often.
inline GammaModule random_module(long l, std::mt19937_64& rng) {
    GammaModule m;
    m.prime = l;
    const std::size_t n = rng() % 5;
    std::uniform_int_distribution<long> d(-6, 6);
    while (true) {
        m.gamma = RatMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.gamma(i, j) = d(rng);
        // bias towards eigenvalue 1 and near-1 entries
        if (n > 0 && rng() % 2) {
            for (std::size_t j = 0; j < n; ++j) m.gamma(0, j) = (j == 0);
        }
        const LocalSmith s = local_smith(m.gamma, l);
        if (s.rank == n && (s.exponents.empty() || s.exponents.back() == 0)) break;
    }
    m.torsion.clear();
    const std::size_t nt = rng() % 3;
    for (std::size_t k = 0; k < nt; ++k) {
        long u;
        do u = d(rng) + 13; while (u % l == 0);
        m.torsion.push_back({1 + static_cast<long>(rng() % 3), u});
    }
    return m;
}

inline QqMatrix random_integral(const QqContextPtr& ctx, std::size_t n, std::mt19937_64& rng, int lo, int hi, long prec) {
    std::uniform_int_distribution<long> d(lo, hi);
    QqMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Coeffs c(ctx->degree());
            for (auto& x : c) x = d(rng);
            m(i, j) = QqElement::from_coeffs(ctx, 0, c, prec);
        }
    return m;
}

inline QqMatrix random_unimodular(const QqContextPtr& ctx, std::size_t n, std::mt19937_64& rng, long prec) {
    while (true) {
        QqMatrix m = random_integral(ctx, n, rng, -3, 3, prec);
        try {
            if (det_valuation(m) == 0) return m;
        } catch (const Error&) {
        }
    }
}

// F with Hodge slopes given by the exponents, conjugated by unimodular matrices.
inline QqMatrix with_hodge(const QqContextPtr& ctx, const std::vector<long>& exps, std::mt19937_64& rng, long prec) {
    const std::size_t n = exps.size();
    QqMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i, j) = QqElement::zero(ctx);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = QqElement::from_integer(ctx, mpz_pow(ctx->p(), exps[i]), prec);
    return random_unimodular(ctx, n, rng, prec) * d * random_unimodular(ctx, n, rng, prec);
}

} // namespace svf::support

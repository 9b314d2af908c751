#pragma once

// Small prime-power finite fields F_{p^k} = F_p[x]/(f) with dense coefficient
// vectors. Intended for residue fields of unramified extensions and for
// brute-force point counting, so p and k are both small.

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "svf/error.hpp"

namespace svf {

using FpPoly = std::vector<long>; // little-endian coefficients in [0, p)

namespace fp {

inline long mod(long x, long p) {
    x %= p;
    return x < 0 ? x + p : x;
}

inline long pow_mod(long b, unsigned long e, long m) {
    __int128 r = 1 % m, x = mod(b, m);
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

inline long inv(long x, long p) {
    x = mod(x, p);
    if (x == 0) fail(ErrorKind::inconsistent, "inverse of zero in F_p");
    return pow_mod(x, static_cast<unsigned long>(p - 2), p);
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<long> prime_factors(unsigned long n) {
    std::vector<long> out;
    for (unsigned long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(static_cast<long>(d));
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(static_cast<long>(n));
    return out;
}

inline unsigned long ipow(unsigned long b, unsigned e) {
    unsigned long r = 1;
    while (e--) r *= b;
    return r;
}

inline void trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline FpPoly sub(FpPoly a, const FpPoly& b, long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod(a[i] - b[i], p);
    trim(a);
    return a;
}

inline FpPoly mul(const FpPoly& a, const FpPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

/// Remainder of a modulo a nonzero polynomial m.
inline FpPoly rem(FpPoly a, const FpPoly& m, long p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const long lead_inv = inv(m.back(), p);
    while (a.size() > dm) {
        const long c = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = mod(a[shift + i] - c * m[i], p);
        trim(a);
    }
    return a;
}

inline FpPoly gcd(FpPoly a, FpPoly b, long p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const long li = inv(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

inline FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, long p) {
    return rem(mul(a, b, p), m, p);
}

inline FpPoly powmod(FpPoly base, unsigned long e, const FpPoly& m, long p) {
    FpPoly r{1};
    r = rem(r, m, p);
    base = rem(base, m, p);
    while (e) {
        if (e & 1) r = mulmod(r, base, m, p);
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

/// x^(p^k) mod f, by k successive p-th powers.
inline FpPoly frobenius_power_of_x(const FpPoly& f, unsigned k, long p) {
    FpPoly x = rem(FpPoly{0, 1}, f, p);
    for (unsigned i = 0; i < k; ++i) x = powmod(x, static_cast<unsigned long>(p), f, p);
    return x;
}

/// Rabin's irreducibility test for a monic polynomial of degree k.
inline bool is_irreducible(const FpPoly& f, long p) {
    const unsigned k = static_cast<unsigned>(f.size() - 1);
    if (k == 0) return false;
    if (k == 1) return true;
    const FpPoly x{0, 1};
    if (frobenius_power_of_x(f, k, p) != rem(x, f, p)) return false;
    for (long r : prime_factors(k)) {
        FpPoly h = sub(frobenius_power_of_x(f, k / static_cast<unsigned>(r), p), x, p);
        if (gcd(f, h, p).size() != 1) return false;
    }
    return true;
}

/// Requires f irreducible: checks that x generates the multiplicative group.
inline bool is_primitive(const FpPoly& f, long p) {
    const unsigned k = static_cast<unsigned>(f.size() - 1);
    const unsigned long order = ipow(static_cast<unsigned long>(p), k) - 1;
    const FpPoly x{0, 1};
    if (rem(x, f, p).empty()) return false;
    for (long r : prime_factors(order))
        if (powmod(x, order / static_cast<unsigned long>(r), f, p) == FpPoly{1}) return false;
    return true;
}

/// Monic degree-k polynomials ordered by the integer sum c_i p^i of their
/// lower coefficients; returns the first one satisfying pred.
template <class Pred>
FpPoly first_monic(long p, unsigned k, Pred pred) {
    const unsigned long count = ipow(static_cast<unsigned long>(p), k);
    for (unsigned long n = 0; n < count; ++n) {
        FpPoly f(k + 1, 0);
        unsigned long m = n;
        for (unsigned i = 0; i < k; ++i) {
            f[i] = static_cast<long>(m % static_cast<unsigned long>(p));
            m /= static_cast<unsigned long>(p);
        }
        f[k] = 1;
        if (pred(f)) return f;
    }
    fail(ErrorKind::inconsistent, "no monic polynomial found");
}

inline FpPoly smallest_irreducible(long p, unsigned k) {
    return first_monic(p, k, [p](const FpPoly& f) { return is_irreducible(f, p); });
}

inline FpPoly smallest_primitive(long p, unsigned k) {
    return first_monic(p, k, [p](const FpPoly& f) { return is_irreducible(f, p) && is_primitive(f, p); });
}

} // namespace fp

/// The field F_p[x]/(modulus) of order p^k.
class FiniteField {
public:
    FiniteField(long p, FpPoly modulus) : p_(p), modulus_(std::move(modulus)) {
        if (!fp::is_prime(p_)) fail(ErrorKind::parse, "characteristic " + std::to_string(p_) + " is not prime");
        if (modulus_.size() < 2 || modulus_.back() != 1 || !fp::is_irreducible(modulus_, p_))
            fail(ErrorKind::parse, "field modulus must be monic irreducible");
    }

    static std::shared_ptr<const FiniteField> standard(long p, unsigned k) {
        if (!fp::is_prime(p)) fail(ErrorKind::parse, "characteristic " + std::to_string(p) + " is not prime");
        return std::make_shared<const FiniteField>(p, fp::smallest_irreducible(p, k));
    }

    long characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return static_cast<unsigned>(modulus_.size() - 1); }
    unsigned long order() const { return fp::ipow(static_cast<unsigned long>(p_), degree()); }
    const FpPoly& modulus() const noexcept { return modulus_; }

private:
    long p_;
    FpPoly modulus_;
};

/// Element of a FiniteField; coefficients are reduced and trimmed.
class FiniteFieldElement {
public:
    FiniteFieldElement(std::shared_ptr<const FiniteField> field, FpPoly coeffs)
        : field_(std::move(field)) {
        for (auto& c : coeffs) c = fp::mod(c, field_->characteristic());
        coeffs_ = fp::rem(std::move(coeffs), field_->modulus(), field_->characteristic());
    }

    static FiniteFieldElement constant(std::shared_ptr<const FiniteField> field, long c) {
        return FiniteFieldElement(std::move(field), FpPoly{c});
    }

    const std::shared_ptr<const FiniteField>& field() const noexcept { return field_; }
    const FpPoly& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    FiniteFieldElement operator+(const FiniteFieldElement& o) const {
        FpPoly r = coeffs_;
        if (r.size() < o.coeffs_.size()) r.resize(o.coeffs_.size(), 0);
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
        return {field_, std::move(r)};
    }
    FiniteFieldElement operator-() const {
        FpPoly r = coeffs_;
        for (auto& c : r) c = -c;
        return {field_, std::move(r)};
    }
    FiniteFieldElement operator-(const FiniteFieldElement& o) const { return *this + (-o); }
    FiniteFieldElement operator*(const FiniteFieldElement& o) const {
        return {field_, fp::mul(coeffs_, o.coeffs_, field_->characteristic())};
    }
    FiniteFieldElement pow(unsigned long e) const {
        return {field_, fp::powmod(coeffs_, e, field_->modulus(), field_->characteristic())};
    }
    FiniteFieldElement inverse() const {
        if (is_zero()) fail(ErrorKind::inconsistent, "inverse of zero in finite field");
        return pow(field_->order() - 2);
    }
    FiniteFieldElement frobenius() const { return pow(static_cast<unsigned long>(field_->characteristic())); }

    bool operator==(const FiniteFieldElement& o) const { return coeffs_ == o.coeffs_; }

private:
    std::shared_ptr<const FiniteField> field_;
    FpPoly coeffs_;
};


/// F_{p^k} for exhaustive enumeration: elements are packed base-p integers
/// (digit i = coefficient of x^i) over the smallest primitive modulus, with
/// log/exp tables for multiplication.
class TabulatedField {
public:
    TabulatedField(long p, unsigned k) : p_(p), k_(k), order_(fp::ipow(static_cast<unsigned long>(p), k)) {
        if (!fp::is_prime(p)) fail(ErrorKind::parse, "characteristic " + std::to_string(p) + " is not prime");
        if (order_ - 1 > UINT32_MAX) fail(ErrorKind::budget_exceeded, "field too large to tabulate");
        modulus_ = fp::smallest_primitive(p, k);
        // powers of x as digit vectors; x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        std::vector<long> digits(k, 0), place(k, 1);
        for (unsigned i = 1; i < k; ++i) place[i] = place[i - 1] * p;
        digits[0] = 1;
        exp_.resize(order_ - 1);
        log_.assign(order_, 0);
        unsigned long cur = 1;
        for (unsigned long e = 0; e + 1 < order_; ++e) {
            exp_[e] = static_cast<std::uint32_t>(cur);
            log_[cur] = static_cast<std::uint32_t>(e);
            const long t = digits[k - 1];
            for (unsigned i = k - 1; i > 0; --i) digits[i] = digits[i - 1];
            digits[0] = 0;
            cur = 0;
            for (unsigned i = 0; i < k; ++i) {
                if (t != 0) {
                    digits[i] -= t * modulus_[i] % p;
                    if (digits[i] < 0) digits[i] += p;
                }
                cur += static_cast<unsigned long>(digits[i] * place[i]);
            }
        }
        if (cur != 1) fail(ErrorKind::inconsistent, "modulus is not primitive");
        // Zech logarithms: alpha^zech[n] = 1 + alpha^n
        zech_.resize(order_ - 1);
        const auto pp = static_cast<unsigned long>(p);
        for (unsigned long n = 0; n + 1 < order_; ++n) {
            const unsigned long v = exp_[n];
            const unsigned long w = p == 2 ? (v ^ 1UL) : v - v % pp + (v % pp + 1) % pp;
            zech_[n] = w == 0 ? kLogZero : log_[w];
        }
        if (p == 2) {
            // trace is F_2-linear: Tr(v) = parity(v & trace_mask)
            for (unsigned i = 0; i < k; ++i) {
                unsigned long basis = 1UL << i, acc = 0, y = basis;
                for (unsigned j = 0; j < k; ++j) {
                    acc ^= y;
                    y = mul(y, y);
                }
                if (acc & 1UL) trace_mask_ |= basis;
            }
        }
    }

    long characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return k_; }
    unsigned long order() const noexcept { return order_; }
    const FpPoly& modulus() const noexcept { return modulus_; }

    unsigned long add(unsigned long a, unsigned long b) const {
        if (p_ == 2) return a ^ b;
        const auto p = static_cast<unsigned long>(p_);
        unsigned long r = 0, place = 1;
        while (a || b) {
            r += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        return r;
    }
    unsigned long neg(unsigned long a) const {
        if (p_ == 2) return a;
        const auto p = static_cast<unsigned long>(p_);
        unsigned long r = 0, place = 1;
        for (; a; a /= p, place *= p) r += ((p - a % p) % p) * place;
        return r;
    }
    unsigned long mul(unsigned long a, unsigned long b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[(static_cast<unsigned long>(log_[a]) + log_[b]) % (order_ - 1)];
    }
    unsigned long inverse(unsigned long a) const {
        if (a == 0) fail(ErrorKind::inconsistent, "inverse of zero in finite field");
        return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
    }
    /// Element of the prime field.
    unsigned long constant(long c) const { return static_cast<unsigned long>(fp::mod(c, p_)); }

    /// Quadratic character for odd p: 0, 1 or -1.
    int quadratic_character(unsigned long a) const {
        if (a == 0) return 0;
        return log_[a] % 2 == 0 ? 1 : -1;
    }
    /// Absolute trace to F_2 (p = 2 only).
    int trace2(unsigned long a) const { return __builtin_popcountl(a & trace_mask_) & 1; }

    // Log domain: an element is its discrete logarithm, kLogZero stands for 0.
    static constexpr std::uint32_t kLogZero = UINT32_MAX;

    std::uint32_t log_of(unsigned long a) const { return a == 0 ? kLogZero : log_[a]; }
    unsigned long exp_of(std::uint32_t l) const { return l == kLogZero ? 0 : exp_[l]; }
    std::uint32_t log_mul(std::uint32_t i, std::uint32_t j) const {
        if (i == kLogZero || j == kLogZero) return kLogZero;
        return static_cast<std::uint32_t>((static_cast<unsigned long>(i) + j) % (order_ - 1));
    }
    std::uint32_t log_add(std::uint32_t i, std::uint32_t j) const {
        if (i == kLogZero) return j;
        if (j == kLogZero) return i;
        const unsigned long m = order_ - 1;
        const std::uint32_t z = zech_[(j + m - i) % m];
        if (z == kLogZero) return kLogZero;
        return static_cast<std::uint32_t>((static_cast<unsigned long>(i) + z) % m);
    }
    int quadratic_character_log(std::uint32_t l) const { return l == kLogZero ? 0 : (l % 2 == 0 ? 1 : -1); }

private:
    long p_;
    unsigned k_;
    unsigned long order_;
    FpPoly modulus_;
    std::vector<std::uint32_t> exp_, log_, zech_;
    unsigned long trace_mask_ = 0;
};

} // namespace svf

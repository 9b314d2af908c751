#pragma once

// Capped-relative-precision arithmetic in Q_q, the fraction field of the
// unramified extension Z_q = W(F_q) of Z_p of degree a. Q_p is the a = 1
// case. Elements are p^v * u with u a unit of Z_q known modulo p^N; Z_q is
// modelled as Z_p[x]/(m(x)) with m the smallest monic irreducible of degree
// a over F_p lifted with digits in [0, p).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "svf/error.hpp"
#include "svf/ffield.hpp"

namespace svf {

inline constexpr long kInfinity = std::numeric_limits<long>::max() / 4;
inline constexpr long kDefaultPrecision = 64;
inline constexpr long kGuardDigits = 8;

using Coeffs = std::vector<mpz_class>;

inline mpz_class mpz_pow(long p, long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class mpz_pow(const mpz_class& b, long k) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

/// p-adic valuation of a nonzero integer.
inline long mpz_valuation(const mpz_class& n, long p) {
    if (n == 0) return kInfinity;
    mpz_class pp = p;
    return static_cast<long>(mpz_remove(mpz_class().get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

inline long mpq_valuation(const mpq_class& x, long p) {
    if (x == 0) return kInfinity;
    return mpz_valuation(x.get_num(), p) - mpz_valuation(x.get_den(), p);
}

/// Shared, immutable description of Z_q: the modulus m(x) and the Frobenius
/// lift sigma, stored as the powers of sigma(x) modulo p^cap.
class QqContext {
public:
    static std::shared_ptr<const QqContext> make(long p, unsigned a, long cap = 2 * kDefaultPrecision) {
        return std::shared_ptr<const QqContext>(new QqContext(p, a, cap));
    }

    long p() const noexcept { return p_; }
    unsigned degree() const noexcept { return a_; }
    long cap() const noexcept { return cap_; }
    const mpz_class& q() const noexcept { return q_; }
    const Coeffs& modulus() const noexcept { return modulus_; }
    const std::shared_ptr<const FiniteField>& residue_field() const noexcept { return residue_; }

    bool compatible(const QqContext& o) const noexcept { return p_ == o.p_ && a_ == o.a_; }

    const mpz_class& p_power(long k) const {
        if (k < 0 || k > 4 * cap_ + 8) return scratch_power(k);
        return powers_[static_cast<std::size_t>(k)];
    }

    Coeffs reduce(Coeffs c, long k) const {
        const mpz_class& pk = p_power(k);
        for (auto& x : c) {
            x %= pk;
            if (x < 0) x += pk;
        }
        return c;
    }

    Coeffs mul(const Coeffs& x, const Coeffs& y, long k) const {
        Coeffs r(2 * a_ - 1, 0);
        for (unsigned i = 0; i < a_; ++i) {
            if (x[i] == 0) continue;
            for (unsigned j = 0; j < a_; ++j) r[i + j] += x[i] * y[j];
        }
        for (std::size_t i = r.size(); i-- > a_;) {
            if (r[i] == 0) continue;
            const mpz_class c = r[i];
            for (unsigned j = 0; j < a_; ++j) r[i - a_ + j] -= c * modulus_[j];
            r[i] = 0;
        }
        r.resize(a_);
        return reduce(std::move(r), k);
    }

    Coeffs one() const {
        Coeffs c(a_, 0);
        c[0] = 1;
        return c;
    }

    /// sigma^power applied to c modulo p^k, power in [0, a).
    Coeffs frobenius(const Coeffs& c, long k, unsigned power) const {
        power %= a_;
        if (power == 0) return reduce(c, k);
        if (k > cap_) fail(ErrorKind::precision_exhausted, "Frobenius lift only known to p^" + std::to_string(cap_));
        const auto& basis = sigma_powers_[power];
        Coeffs r(a_, 0);
        for (unsigned i = 0; i < a_; ++i) {
            if (c[i] == 0) continue;
            for (unsigned j = 0; j < a_; ++j) r[j] += c[i] * basis[i][j];
        }
        return reduce(std::move(r), k);
    }

    /// Inverse of a unit of Z_q modulo p^k by Newton iteration from F_q.
    Coeffs unit_inverse(const Coeffs& u, long k) const {
        FpPoly residue(a_);
        for (unsigned i = 0; i < a_; ++i) residue[i] = mpz_class(u[i] % p_).get_si();
        FiniteFieldElement r(residue_, residue);
        if (r.is_zero()) fail(ErrorKind::inconsistent, "inverse of a non-unit");
        const FpPoly ri = r.inverse().coeffs();
        Coeffs y(a_, 0);
        for (std::size_t i = 0; i < ri.size(); ++i) y[i] = ri[i];
        long have = 1;
        const Coeffs two = [&] {
            Coeffs t(a_, 0);
            t[0] = 2;
            return t;
        }();
        while (have < k) {
            have = std::min(2 * have, k);
            Coeffs uy = mul(u, y, have);
            for (unsigned i = 0; i < a_; ++i) uy[i] = two[i] - uy[i];
            y = mul(y, reduce(std::move(uy), have), have);
        }
        return reduce(std::move(y), k);
    }

private:
    QqContext(long p, unsigned a, long cap) : p_(p), a_(a), cap_(cap) {
        if (!fp::is_prime(p)) fail(ErrorKind::parse, "p = " + std::to_string(p) + " is not prime");
        if (a == 0) fail(ErrorKind::parse, "extension degree must be positive");
        if (cap < 1) fail(ErrorKind::parse, "precision cap must be positive");
        q_ = mpz_pow(p, a);
        powers_.reserve(static_cast<std::size_t>(4 * cap + 9));
        for (long k = 0; k <= 4 * cap + 8; ++k) powers_.push_back(mpz_pow(p, k));
        FpPoly m = fp::smallest_irreducible(p, a);
        residue_ = std::make_shared<const FiniteField>(p, m);
        modulus_.assign(m.begin(), m.end());
        compute_frobenius();
    }

    const mpz_class& scratch_power(long k) const {
        if (k < 0) fail(ErrorKind::inconsistent, "negative power of p requested");
        std::lock_guard lock(scratch_mutex_);
        scratch_ = mpz_pow(p_, k);
        return scratch_;
    }

    // Evaluate the integer polynomial m at theta in Z_q mod p^k.
    Coeffs eval_modulus(const Coeffs& theta, long k) const {
        Coeffs acc(a_, 0);
        acc[0] = 1; // leading coefficient
        for (std::size_t i = a_; i-- > 0;) {
            acc = mul(acc, theta, k);
            acc[0] += modulus_[i];
        }
        return reduce(std::move(acc), k);
    }

    Coeffs eval_modulus_derivative(const Coeffs& theta, long k) const {
        Coeffs acc(a_, 0);
        acc[0] = static_cast<long>(a_);
        for (std::size_t i = a_ - 1; i-- > 0;) {
            acc = mul(acc, theta, k);
            acc[0] += modulus_[i + 1] * static_cast<long>(i + 1);
        }
        return reduce(std::move(acc), k);
    }

    void compute_frobenius() {
        sigma_powers_.assign(a_, {});
        // sigma^0 = identity basis
        sigma_powers_[0].assign(a_, Coeffs(a_, 0));
        for (unsigned i = 0; i < a_; ++i) sigma_powers_[0][i][i] = 1;
        if (a_ == 1) return;

        // Hensel-lift the root of m congruent to x^p.
        Coeffs x(a_, 0);
        x[1] = 1;
        Coeffs theta = one();
        for (long i = 0; i < p_; ++i) theta = mul(theta, x, cap_);
        for (long have = 1; have < 2 * cap_; have *= 2) {
            Coeffs num = eval_modulus(theta, cap_);
            Coeffs den_inv = unit_inverse(eval_modulus_derivative(theta, cap_), cap_);
            Coeffs step = mul(num, den_inv, cap_);
            for (unsigned i = 0; i < a_; ++i) theta[i] -= step[i];
            theta = reduce(std::move(theta), cap_);
        }
        // sigma^k(x) = sigma^{k-1}(theta); build powers of each image.
        Coeffs image = x;
        for (unsigned k = 1; k < a_; ++k) {
            Coeffs next(a_, 0);
            // apply sigma (known via theta powers) to image
            Coeffs tp = one();
            for (unsigned i = 0; i < a_; ++i) {
                for (unsigned j = 0; j < a_; ++j) next[j] += image[i] * tp[j];
                tp = mul(tp, theta, cap_);
            }
            image = reduce(std::move(next), cap_);
            auto& basis = sigma_powers_[k];
            basis.assign(a_, Coeffs(a_, 0));
            Coeffs pw = one();
            for (unsigned i = 0; i < a_; ++i) {
                basis[i] = pw;
                pw = mul(pw, image, cap_);
            }
        }
    }

    long p_;
    unsigned a_;
    long cap_;
    mpz_class q_;
    Coeffs modulus_;
    std::shared_ptr<const FiniteField> residue_;
    std::vector<mpz_class> powers_;
    // sigma_powers_[k][i] = sigma^k(x^i) mod p^cap
    std::vector<std::vector<Coeffs>> sigma_powers_;
    mutable std::mutex scratch_mutex_;
    mutable mpz_class scratch_;
};

using QqContextPtr = std::shared_ptr<const QqContext>;

/// An element of Q_q at finite relative precision. Three states: exact zero,
/// zero at some absolute precision ("indistinguishable from zero"), and
/// p^val * unit with the unit known modulo p^prec.
class QqElement {
public:
    QqElement() = default; // exact zero with no context

    static QqElement zero(QqContextPtr ctx) {
        QqElement e;
        e.ctx_ = std::move(ctx);
        return e;
    }

    static QqElement zero_to(QqContextPtr ctx, long abs_prec) {
        QqElement e;
        e.ctx_ = std::move(ctx);
        e.state_ = State::inexact_zero;
        e.val_ = abs_prec;
        return e;
    }

    /// p^val * (sum c_i x^i) known modulo p^(val + rel_prec); normalizes.
    static QqElement from_coeffs(QqContextPtr ctx, long val, Coeffs c, long rel_prec) {
        if (rel_prec <= 0) return zero_to(std::move(ctx), val + std::max(rel_prec, 0L));
        c.resize(ctx->degree(), 0);
        return normalize(std::move(ctx), val, std::move(c), val + rel_prec);
    }

    static QqElement from_integer(QqContextPtr ctx, const mpz_class& n, long rel_prec) {
        if (n == 0) return zero(std::move(ctx));
        Coeffs c(ctx->degree(), 0);
        c[0] = n;
        const long v = mpz_valuation(n, ctx->p());
        c[0] /= ctx->p_power(v);
        return from_coeffs(std::move(ctx), v, std::move(c), rel_prec);
    }

    static QqElement from_rational(QqContextPtr ctx, const mpq_class& x, long rel_prec) {
        if (x == 0) return zero(std::move(ctx));
        const long p = ctx->p();
        const long vn = mpz_valuation(x.get_num(), p), vd = mpz_valuation(x.get_den(), p);
        mpz_class num = x.get_num() / ctx->p_power(vn);
        mpz_class den = x.get_den() / ctx->p_power(vd);
        const mpz_class& pk = ctx->p_power(rel_prec);
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t());
        Coeffs c(ctx->degree(), 0);
        c[0] = num * inv;
        return from_coeffs(std::move(ctx), vn - vd, std::move(c), rel_prec);
    }

    static QqElement one(QqContextPtr ctx, long rel_prec) { return from_integer(std::move(ctx), 1, rel_prec); }

    const QqContextPtr& context() const noexcept { return ctx_; }
    bool is_exact_zero() const noexcept { return state_ == State::exact_zero; }
    bool is_indistinguishable_from_zero() const noexcept { return state_ == State::inexact_zero; }
    bool is_zero() const noexcept { return state_ != State::nonzero; }

    /// v_p of the element; infinite for exact zero, an error when the value
    /// cannot be told apart from zero at its precision.
    long valuation() const {
        switch (state_) {
        case State::exact_zero: return kInfinity;
        case State::inexact_zero:
            fail(ErrorKind::precision_exhausted, "valuation of an element that is zero modulo p^" + std::to_string(val_));
        case State::nonzero: return val_;
        }
        return kInfinity;
    }

    /// Lower bound on the valuation that never throws.
    long valuation_lower_bound() const noexcept { return state_ == State::exact_zero ? kInfinity : val_; }

    long abs_prec() const noexcept {
        switch (state_) {
        case State::exact_zero: return kInfinity;
        case State::inexact_zero: return val_;
        case State::nonzero: return val_ + prec_;
        }
        return kInfinity;
    }
    long rel_prec() const noexcept {
        if (state_ == State::exact_zero) return kInfinity;
        return state_ == State::nonzero ? prec_ : 0;
    }
    const Coeffs& unit() const noexcept { return unit_; }

    QqElement operator-() const {
        if (state_ != State::nonzero) return *this;
        QqElement r = *this;
        for (auto& c : r.unit_) c = -c;
        r.unit_ = ctx_->reduce(std::move(r.unit_), prec_);
        return r;
    }

    friend QqElement operator+(const QqElement& x, const QqElement& y) {
        if (x.is_exact_zero()) return y.ctx_ || !x.ctx_ ? y : with_context(y, x.ctx_);
        if (y.is_exact_zero()) return x;
        check_compatible(x, y);
        const long abs = std::min(x.abs_prec(), y.abs_prec());
        if (x.state_ == State::inexact_zero || y.state_ == State::inexact_zero) {
            const QqElement& other = x.state_ == State::inexact_zero ? y : x;
            if (other.state_ == State::inexact_zero) return zero_to(x.ctx_, abs);
            return other.truncated(abs);
        }
        const long v0 = std::min(x.val_, y.val_);
        const QqContext& ctx = *x.ctx_;
        Coeffs c(ctx.degree(), 0);
        const mpz_class& sx = ctx.p_power(x.val_ - v0);
        const mpz_class& sy = ctx.p_power(y.val_ - v0);
        for (unsigned i = 0; i < ctx.degree(); ++i) c[i] = x.unit_[i] * sx + y.unit_[i] * sy;
        return normalize(x.ctx_, v0, std::move(c), abs);
    }
    friend QqElement operator-(const QqElement& x, const QqElement& y) { return x + (-y); }

    friend QqElement operator*(const QqElement& x, const QqElement& y) {
        if (x.is_exact_zero() || y.is_exact_zero()) return zero(x.ctx_ ? x.ctx_ : y.ctx_);
        check_compatible(x, y);
        if (x.state_ == State::inexact_zero || y.state_ == State::inexact_zero)
            return zero_to(x.ctx_, x.val_ + y.val_);
        QqElement r;
        r.ctx_ = x.ctx_;
        r.state_ = State::nonzero;
        r.val_ = x.val_ + y.val_;
        r.prec_ = std::min(x.prec_, y.prec_);
        r.unit_ = x.ctx_->mul(x.unit_, y.unit_, r.prec_);
        return r;
    }

    QqElement inverse() const {
        if (state_ == State::exact_zero) fail(ErrorKind::inconsistent, "division by exact zero");
        if (state_ == State::inexact_zero)
            fail(ErrorKind::precision_exhausted, "division by an element indistinguishable from zero");
        QqElement r = *this;
        r.val_ = -val_;
        r.unit_ = ctx_->unit_inverse(unit_, prec_);
        return r;
    }

    friend QqElement operator/(const QqElement& x, const QqElement& y) { return x * y.inverse(); }

    QqElement& operator+=(const QqElement& o) { return *this = *this + o; }
    QqElement& operator-=(const QqElement& o) { return *this = *this - o; }
    QqElement& operator*=(const QqElement& o) { return *this = *this * o; }

    QqElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        QqElement r = ctx_ ? one(ctx_, rel_prec() == kInfinity ? ctx_->cap() : std::max(rel_prec(), 1L)) : QqElement{};
        if (e == 0) return r;
        QqElement b = *this;
        bool first = true;
        while (e) {
            if (e & 1) {
                r = first ? b : r * b;
                first = false;
            }
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    /// Multiply by p^k exactly (shifts the valuation).
    QqElement shift(long k) const {
        QqElement r = *this;
        if (state_ != State::exact_zero) r.val_ += k;
        return r;
    }

    /// sigma^power (power taken modulo a); sigma^{-1} is power a - 1.
    QqElement frobenius(unsigned power = 1) const {
        if (state_ != State::nonzero) return *this;
        QqElement r = *this;
        r.unit_ = ctx_->frobenius(unit_, prec_, power);
        return r;
    }
    QqElement frobenius_inverse() const { return ctx_ ? frobenius(ctx_->degree() - 1) : *this; }

    /// Lower the absolute precision to at most abs.
    QqElement truncated(long abs) const {
        if (state_ == State::exact_zero) return abs >= kInfinity ? *this : zero_to(ctx_, abs);
        if (abs >= abs_prec()) return *this;
        if (state_ == State::inexact_zero || abs <= val_) return zero_to(ctx_, abs);
        QqElement r = *this;
        r.prec_ = abs - val_;
        r.unit_ = ctx_->reduce(std::move(r.unit_), r.prec_);
        return r;
    }

    /// Residue class in F_q; requires valuation >= 0.
    FiniteFieldElement residue() const {
        const auto& field = ctx_->residue_field();
        if (state_ == State::exact_zero) return FiniteFieldElement(field, {});
        if (val_ < 0 || (state_ == State::inexact_zero && val_ < 1)) {
            if (state_ == State::inexact_zero)
                fail(ErrorKind::precision_exhausted, "residue of an element with no known digits");
            fail(ErrorKind::inconsistent, "residue of a non-integral element");
        }
        if (state_ == State::inexact_zero || val_ > 0) return FiniteFieldElement(field, {});
        FpPoly c(ctx_->degree());
        for (unsigned i = 0; i < ctx_->degree(); ++i) c[i] = mpz_class(unit_[i] % ctx_->p()).get_si();
        return FiniteFieldElement(field, c);
    }

    /// For a = 1: the rational p^val * unit (a representative).
    mpq_class to_rational() const {
        if (state_ != State::nonzero) return 0;
        mpq_class r(unit_[0]);
        if (val_ >= 0)
            r *= ctx_->p_power(val_);
        else
            r /= ctx_->p_power(-val_);
        r.canonicalize();
        return r;
    }

    /// Structural identity: same state, valuation, precision and digits.
    friend bool operator==(const QqElement& x, const QqElement& y) {
        if (x.state_ != y.state_) return false;
        if (x.state_ == State::exact_zero) return true;
        if (x.val_ != y.val_) return false;
        if (x.state_ == State::inexact_zero) return true;
        return x.prec_ == y.prec_ && x.unit_ == y.unit_;
    }

    /// True when x - y is zero at the joint precision.
    friend bool agrees(const QqElement& x, const QqElement& y) { return (x - y).is_zero(); }

private:
    enum class State : std::uint8_t { exact_zero, inexact_zero, nonzero };

    static QqElement with_context(QqElement e, QqContextPtr ctx) {
        e.ctx_ = std::move(ctx);
        return e;
    }

    static void check_compatible(const QqElement& x, const QqElement& y) {
        if (x.ctx_ && y.ctx_ && x.ctx_ != y.ctx_ && !x.ctx_->compatible(*y.ctx_))
            fail(ErrorKind::inconsistent, "mixing elements of different unramified extensions");
    }

    static QqElement normalize(QqContextPtr ctx, long val, Coeffs c, long abs) {
        const long rel = abs - val;
        if (rel <= 0) return zero_to(std::move(ctx), abs);
        c = ctx->reduce(std::move(c), rel);
        long w = kInfinity;
        for (const auto& x : c)
            if (x != 0) w = std::min(w, mpz_valuation(x, ctx->p()));
        if (w >= rel) return zero_to(std::move(ctx), abs);
        if (w > 0)
            for (auto& x : c) x /= ctx->p_power(w);
        QqElement e;
        e.state_ = State::nonzero;
        e.val_ = val + w;
        e.prec_ = rel - w;
        e.unit_ = ctx->reduce(std::move(c), e.prec_);
        e.ctx_ = std::move(ctx);
        return e;
    }

    QqContextPtr ctx_;
    State state_ = State::exact_zero;
    long val_ = 0;  // valuation, or absolute precision for inexact zero
    long prec_ = 0; // relative precision when nonzero
    Coeffs unit_;
};

/// Teichmuller lift of w in F_q: the root of X^q = X reducing to w.
inline QqElement teichmuller(const QqContextPtr& ctx, const FiniteFieldElement& w, long prec) {
    if (w.field()->characteristic() != ctx->p() || w.field()->modulus() != ctx->residue_field()->modulus())
        fail(ErrorKind::inconsistent, "residue field mismatch in Teichmuller lift");
    if (w.is_zero()) return QqElement::zero(ctx);
    Coeffs c(ctx->degree(), 0);
    for (std::size_t i = 0; i < w.coeffs().size(); ++i) c[i] = w.coeffs()[i];
    // Each q-th power gains at least one correct digit.
    Coeffs y = ctx->reduce(c, prec);
    for (long it = 0; it < prec; ++it) {
        Coeffs r = ctx->one();
        Coeffs b = y;
        mpz_class e = ctx->q();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = ctx->mul(r, b, prec);
            e >>= 1;
            if (e > 0) b = ctx->mul(b, b, prec);
        }
        if (r == y) break;
        y = std::move(r);
    }
    return QqElement::from_coeffs(ctx, 0, std::move(y), prec);
}

} // namespace svf

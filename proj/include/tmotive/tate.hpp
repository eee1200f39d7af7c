#ifndef TMOTIVE_TATE_HPP
#define TMOTIVE_TATE_HPP

#include <cmath>
#include <utility>
#include <limits>
#include <string>
#include <vector>

#include "tmotive/laurent.hpp"

namespace tmotive {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

namespace scalar {

// Uniform interface over the three scalar rings {ThetaPoly, RatFunc, Laurent}.
inline const FqContext* ctx_of(const ThetaPoly& s) { return s.ctx(); }
inline const FqContext* ctx_of(const RatFunc& s) { return s.ctx(); }
inline const FqContext* ctx_of(const Laurent& s) { return s.ctx(); }

inline ThetaPoly zero_like(const ThetaPoly& s) { return ThetaPoly::zero(s.ctx()); }
inline RatFunc zero_like(const RatFunc& s) { return RatFunc::zero(s.ctx()); }
inline Laurent zero_like(const Laurent& s) { return Laurent::zero(s.ctx()); }

inline ThetaPoly one_like(const ThetaPoly& s) { return ThetaPoly::one(s.ctx()); }
inline RatFunc one_like(const RatFunc& s) { return RatFunc::one(s.ctx()); }
inline Laurent one_like(const Laurent& s) { return Laurent::one(s.ctx()); }

inline double norm_lg(const ThetaPoly& s) { return s.is_zero() ? neg_inf : s.deg(); }
inline double norm_lg(const RatFunc& s) { return s.norm_lg(); }
inline double norm_lg(const Laurent& s) { return s.norm_lg(); }

// True only for scalars that are exactly zero (a Laurent zero known to finite
// precision is not).
inline bool exact_zero(const ThetaPoly& s) { return s.is_zero(); }
inline bool exact_zero(const RatFunc& s) { return s.is_zero(); }
inline bool exact_zero(const Laurent& s) { return s.is_zero() && s.is_exact(); }

inline ThetaPoly scaled(const ThetaPoly& s, Fq c) { return s.scaled(c); }
inline RatFunc scaled(const RatFunc& s, Fq c) { return s * RatFunc::constant(s.ctx(), c.value()); }
inline Laurent scaled(const Laurent& s, Fq c) { return s.scaled(c); }

inline Laurent cap_error(const Laurent& s, double err_lg) {
    if (err_lg == neg_inf) return s;
    // |error| <= q^err_lg, so the value is known modulo u^ceil(-err_lg).
    long long n = static_cast<long long>(std::ceil(-err_lg));
    return s.truncated(std::min(s.precision(), n));
}
inline ThetaPoly cap_error(const ThetaPoly& s, double) { return s; }
inline RatFunc cap_error(const RatFunc& s, double) { return s; }

}  // namespace scalar

// Truncated element of the Tate algebra over t: stored coefficients for
// t^0..t^T plus a bound on the Gauss norm of everything past the truncation
// (tail_lg is log_q of that bound, -inf for exact polynomials in t).
template <class S>
class Tate {
public:
    Tate() = default;
    explicit Tate(S zero) : zero_(std::move(zero)) {}
    Tate(std::vector<S> coeffs, double tail_lg = neg_inf)
        : zero_(scalar::zero_like(coeffs.at(0))), c_(std::move(coeffs)), tail_lg_(tail_lg) {
        trim();  // at(0) above: use from_parts for possibly-empty lists
    }

    static Tate zero(S proto) { return Tate(scalar::zero_like(proto)); }
    static Tate constant(S value) {
        Tate t(scalar::zero_like(value));
        t.c_ = {std::move(value)};
        t.trim();
        return t;
    }
    static Tate monomial(S value, int deg) {
        Tate t(scalar::zero_like(value));
        t.c_.assign(deg + 1, t.zero_);
        t.c_[deg] = std::move(value);
        t.trim();
        return t;
    }
    // t - c
    static Tate linear(S c) {
        Tate t(scalar::zero_like(c));
        t.c_ = {scalar::zero_like(c) - c, scalar::one_like(c)};
        return t;
    }

    const FqContext* ctx() const { return scalar::ctx_of(zero_); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 when no stored terms
    bool is_zero() const { return c_.empty() && tail_lg_ == neg_inf; }
    double tail_lg() const { return tail_lg_; }
    bool exact() const { return tail_lg_ == neg_inf; }
    const S& coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : zero_; }
    const S& proto() const { return zero_; }

    Tate operator+(const Tate& o) const {
        std::vector<S> c;
        int n = std::max(degree(), o.degree());
        c.reserve(n + 1);
        for (int i = 0; i <= n; ++i) c.push_back(coeff(i) + o.coeff(i));
        Tate r(zero_);
        r.c_ = std::move(c);
        r.tail_lg_ = std::max(tail_lg_, o.tail_lg_);
        r.trim();
        return r;
    }
    Tate operator-(const Tate& o) const { return *this + (-o); }
    Tate operator-() const {
        Tate r = *this;
        for (auto& x : r.c_) x = zero_ - x;
        return r;
    }

    Tate operator*(const Tate& o) const {
        Tate r(zero_);
        if (c_.empty() || o.c_.empty()) {
            r.tail_lg_ = mul_tail(o);
            return r;
        }
        // Coefficients below both truncation degrees are fully determined.
        long long full = static_cast<long long>(c_.size()) + o.c_.size() - 1;
        long long keep = full;
        if (tail_lg_ != neg_inf) keep = std::min(keep, static_cast<long long>(c_.size()));
        if (o.tail_lg_ != neg_inf) keep = std::min(keep, static_cast<long long>(o.c_.size()));
        std::vector<S> c(full, zero_);
        for (size_t i = 0; i < c_.size(); ++i) {
            if (scalar::exact_zero(c_[i])) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] = c[i + j] + c_[i] * o.c_[j];
        }
        double dropped = neg_inf;
        for (long long k = keep; k < full; ++k)
            dropped = std::max(dropped, k + scalar::norm_lg(c[k]));
        c.resize(keep, zero_);
        r.c_ = std::move(c);
        r.tail_lg_ = std::max(mul_tail(o), dropped);
        r.trim();
        return r;
    }

    Tate scaled(const S& s) const {
        Tate r = *this;
        for (auto& x : r.c_) x = x * s;
        if (r.tail_lg_ != neg_inf) r.tail_lg_ += scalar::norm_lg(s);
        r.trim();
        return r;
    }

    bool operator==(const Tate& o) const {
        if (tail_lg_ != o.tail_lg_) return false;
        int n = std::max(degree(), o.degree());
        for (int i = 0; i <= n; ++i)
            if (!(coeff(i) == o.coeff(i))) return false;
        return true;
    }
    bool operator!=(const Tate& o) const { return !(*this == o); }

    // Coefficient-wise Frobenius twist; t is untouched.
    Tate twist(int i) const {
        if (i < 0) throw negative_twist("negative Frobenius twist");
        if (i == 0) return *this;
        Tate r(zero_);
        r.c_.reserve(c_.size());
        for (const auto& x : c_) r.c_.push_back(x.twist(i));
        if (tail_lg_ != neg_inf) {
            double qi = std::pow(static_cast<double>(ctx()->q()), i);
            r.tail_lg_ = qi * tail_lg_ + (degree() + 1) * (1.0 - qi);
        }
        r.trim();
        return r;
    }

    // Divided derivative in t: sum_i C(i, j) b_i t^(i-j).
    Tate hyperderivative(int j) const {
        if (j < 0) throw error(errc::computational, "negative hyperderivative order");
        if (j == 0) return *this;
        Tate r(zero_);
        int p = ctx()->p();
        for (int i = j; i <= degree(); ++i) {
            int b = lucas_binomial(i, j, p);
            r.c_.push_back(scalar::scaled(c_[i], Fq(ctx(), ctx()->of_int(b))));
        }
        if (tail_lg_ != neg_inf) r.tail_lg_ = tail_lg_ - j;
        r.trim();
        return r;
    }

    // Evaluation at a scalar point; the tail bound controls the error only
    // for |c| <= q.
    S eval(const S& at) const {
        if (tail_lg_ != neg_inf && scalar::norm_lg(at) > 1.0)
            throw divergent_evaluation("tail bound does not control evaluation at |c| > q");
        S acc = zero_;
        for (int i = degree(); i >= 0; --i) acc = acc * at + c_[i];
        return scalar::cap_error(acc, tail_lg_);
    }

    // Synthetic division by (t - c); the remainder (the value at c) is
    // returned through `rem`.  A nonzero tail bound is only meaningful for
    // |c| <= q; callers dividing at larger points must clear the tail with
    // their own bound first.
    Tate divide_linear(const S& c, S& rem) const {
        if (tail_lg_ != neg_inf && scalar::norm_lg(c) > 1.0)
            throw divergent_evaluation("tail bound does not control division at |c| > q");
        Tate q(zero_);
        if (c_.empty()) {
            rem = zero_;
            q.tail_lg_ = tail_lg_;
            return q;
        }
        q.c_.assign(std::max<size_t>(c_.size() - 1, 0), zero_);
        S carry = zero_;
        for (int i = degree(); i >= 1; --i) {
            carry = i == degree() ? c_[i] : c_[i] + carry * c;
            q.c_[i - 1] = carry;
        }
        rem = c_[0] + carry * c;
        q.tail_lg_ = tail_lg_;
        q.trim();
        return q;
    }

    double gauss_norm_lg() const {
        double m = tail_lg_;
        for (int i = 0; i <= degree(); ++i) m = std::max(m, i + scalar::norm_lg(c_[i]));
        return m;
    }

    Tate truncated(int deg) const {
        if (degree() <= deg) return *this;
        Tate r(zero_);
        r.c_.assign(c_.begin(), c_.begin() + deg + 1);
        r.tail_lg_ = tail_lg_;
        for (int k = deg + 1; k <= degree(); ++k)
            r.tail_lg_ = std::max(r.tail_lg_, k + scalar::norm_lg(c_[k]));
        r.trim();
        return r;
    }

    Tate with_tail(double lg) const {
        Tate r = *this;
        r.tail_lg_ = std::max(r.tail_lg_, lg);
        return r;
    }

    static Tate from_parts(S proto, std::vector<S> coeffs, double tail_lg) {
        Tate r(std::move(proto));
        r.c_ = std::move(coeffs);
        r.tail_lg_ = tail_lg;
        r.trim();
        return r;
    }

    template <class F>
    auto map(F&& f) const -> Tate<decltype(f(std::declval<const S&>()))> {
        using S2 = decltype(f(std::declval<const S&>()));
        std::vector<S2> c;
        c.reserve(c_.size());
        for (const auto& x : c_) c.push_back(f(x));
        return Tate<S2>::from_parts(f(zero_), std::move(c), tail_lg_);
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (int i = 0; i <= degree(); ++i) {
            if (scalar::exact_zero(c_[i])) continue;
            if (!s.empty()) s += " + ";
            s += "(" + coeff_str(c_[i]) + ")";
            if (i == 1) s += "*t";
            if (i > 1) s += "*t^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    static std::string coeff_str(const ThetaPoly& x) { return x.str(); }
    static std::string coeff_str(const RatFunc& x) { return x.str(); }
    static std::string coeff_str(const Laurent& x) { return x.str(); }

    double mul_tail(const Tate& o) const {
        double a = gauss_norm_lg(), b = o.gauss_norm_lg();
        double m = neg_inf;
        if (o.tail_lg_ != neg_inf) m = std::max(m, a + o.tail_lg_);
        if (tail_lg_ != neg_inf) m = std::max(m, b + tail_lg_);
        if (tail_lg_ != neg_inf && o.tail_lg_ != neg_inf) m = std::max(m, tail_lg_ + o.tail_lg_);
        return m;
    }

    void trim() {
        while (!c_.empty() && scalar::exact_zero(c_.back())) c_.pop_back();
    }

    S zero_;
    std::vector<S> c_;
    double tail_lg_ = neg_inf;
};

using TatePoly = Tate<ThetaPoly>;
using TateRat = Tate<RatFunc>;
using TateNum = Tate<Laurent>;

inline TatePoly t_minus_theta(const FqContext* ctx, int level = 0) {
    return TatePoly::linear(ThetaPoly::theta_q_pow(ctx, level));
}

}  // namespace tmotive

#endif

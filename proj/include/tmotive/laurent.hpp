#ifndef TMOTIVE_LAURENT_HPP
#define TMOTIVE_LAURENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tmotive/rat_func.hpp"

namespace tmotive {

// Truncated Laurent series in u = 1/theta over F_q: an element of
// K_infinity = F_q((1/theta)) known modulo u^precision.  `precision` is
// absolute and may be infinite (exact elements, finite coefficient list).
// The zero series carries valuation == precision; |x| = q^(-valuation).
class Laurent {
public:
    static constexpr long long inf_prec = (1LL << 60);

    Laurent() : ctx_(nullptr), val_(inf_prec), prec_(inf_prec) {}

    static Laurent zero(const FqContext* ctx);                 // exact zero
    static Laurent zero_to(const FqContext* ctx, long long n); // 0 + O(u^n)
    static Laurent one(const FqContext* ctx) { return u_pow(ctx, 0); }
    static Laurent theta(const FqContext* ctx) { return u_pow(ctx, -1); }
    static Laurent u_pow(const FqContext* ctx, long long e);
    static Laurent from_coeffs(const FqContext* ctx, long long val,
                               std::vector<uint16_t> coeffs, long long prec = inf_prec);
    static Laurent from_poly(const ThetaPoly& p);                   // exact
    static Laurent from_ratfunc(const RatFunc& f, long long prec);

    const FqContext* ctx() const { return ctx_; }
    bool is_zero() const { return c_.empty(); }       // zero at its precision
    bool is_exact() const { return prec_ == inf_prec; }
    long long valuation() const { return val_; }      // == precision for zero
    long long precision() const { return prec_; }
    Fq coeff(long long e) const;                      // known coefficient of u^e
    const std::vector<uint16_t>& coeffs() const { return c_; }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent operator-() const;
    Laurent scaled(Fq c) const;
    bool operator==(const Laurent& o) const;  // representation equality
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    Laurent inv(long long target_prec) const;  // throws zero_division on 0
    Laurent pow(long long e, long long target_prec = inf_prec) const;
    Laurent twist(int i) const;                // x -> x^(q^i)
    Laurent truncated(long long prec) const;   // cap the precision
    Laurent shifted(long long e) const;        // * u^e

    // log_q |x|; -inf for zero.
    double norm_lg() const;

    // Valuation of a - b, i.e. the u-adic order to which the two agree;
    // returns the common precision when indistinguishable.
    static long long agreement(const Laurent& a, const Laurent& b);

    std::string str(int max_terms = 12) const;

private:
    void normalize();
    const FqContext* ctx_;
    long long val_;
    long long prec_;
    std::vector<uint16_t> c_;  // c_[i] = coefficient of u^(val_+i), c_[0] != 0
};

}  // namespace tmotive

#endif

#ifndef TMOTIVE_RAT_FUNC_HPP
#define TMOTIVE_RAT_FUNC_HPP

#include <string>

#include "tmotive/theta_poly.hpp"

namespace tmotive {

// Element of F_q(theta) as num/den with den monic and gcd(num, den) = 1.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(ThetaPoly num) : num_(std::move(num)), den_(ThetaPoly::one(num_.ctx())) {}
    RatFunc(ThetaPoly num, ThetaPoly den);

    static RatFunc zero(const FqContext* ctx) { return RatFunc(ThetaPoly::zero(ctx)); }
    static RatFunc one(const FqContext* ctx) { return RatFunc(ThetaPoly::one(ctx)); }
    static RatFunc constant(const FqContext* ctx, uint16_t c) { return RatFunc(ThetaPoly::constant(ctx, c)); }

    const FqContext* ctx() const { return num_.ctx(); }
    const ThetaPoly& num() const { return num_; }
    const ThetaPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator-() const;
    bool operator==(const RatFunc& o) const;
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc inverse() const;
    RatFunc pow(long long e) const;  // negative exponents allowed
    RatFunc twist(int i) const;
    RatFunc pow_q(int i) const { return twist(i); }  // x -> x^(q^i)

    // log_q of the infinity norm; |num/den| = q^(deg num - deg den).
    double norm_lg() const;

    std::string str() const;

private:
    ThetaPoly num_, den_;
};

}  // namespace tmotive

#endif

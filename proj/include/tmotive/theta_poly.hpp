#ifndef TMOTIVE_THETA_POLY_HPP
#define TMOTIVE_THETA_POLY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tmotive/fq.hpp"

namespace tmotive {

// Dense polynomial in theta over F_q, ascending coefficients, no trailing
// zeros; the zero polynomial has an empty coefficient list.
class ThetaPoly {
public:
    ThetaPoly() : ctx_(nullptr) {}
    explicit ThetaPoly(const FqContext* ctx) : ctx_(ctx) {}
    ThetaPoly(const FqContext* ctx, std::vector<uint16_t> coeffs);

    static ThetaPoly zero(const FqContext* ctx) { return ThetaPoly(ctx); }
    static ThetaPoly constant(const FqContext* ctx, uint16_t c);
    static ThetaPoly one(const FqContext* ctx) { return constant(ctx, 1); }
    static ThetaPoly theta(const FqContext* ctx) { return monomial(ctx, 1, 1); }
    static ThetaPoly monomial(const FqContext* ctx, int deg, uint16_t c);
    // theta^(q^level), the evaluation points of the twist-normalized maps.
    static ThetaPoly theta_q_pow(const FqContext* ctx, int level);

    const FqContext* ctx() const { return ctx_; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    Fq coeff(int i) const;
    Fq lead() const;
    bool monic() const { return !is_zero() && c_.back() == 1; }
    const std::vector<uint16_t>& coeffs() const { return c_; }

    ThetaPoly operator+(const ThetaPoly& o) const;
    ThetaPoly operator-(const ThetaPoly& o) const;
    ThetaPoly operator*(const ThetaPoly& o) const;
    ThetaPoly operator-() const;
    ThetaPoly scaled(Fq c) const;
    ThetaPoly shifted(int k) const;  // * theta^k
    bool operator==(const ThetaPoly& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }
    bool operator!=(const ThetaPoly& o) const { return !(*this == o); }

    // Euclidean division by a nonzero divisor.
    static void divrem(const ThetaPoly& a, const ThetaPoly& b, ThetaPoly& q, ThetaPoly& r);
    ThetaPoly exact_div(const ThetaPoly& b) const;  // throws if not divisible
    static ThetaPoly gcd(ThetaPoly a, ThetaPoly b);  // monic, gcd(0,0) = 0

    ThetaPoly pow(unsigned e) const;
    // Frobenius twist: coefficients are fixed (they lie in F_q), exponents
    // scale by q^i.
    ThetaPoly twist(int i) const;
    Fq eval(Fq x) const;

    std::string str() const;

private:
    void trim();
    const FqContext* ctx_;
    std::vector<uint16_t> c_;
};

}  // namespace tmotive

#endif

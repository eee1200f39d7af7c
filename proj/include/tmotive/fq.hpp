#ifndef TMOTIVE_FQ_HPP
#define TMOTIVE_FQ_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tmotive/errors.hpp"

namespace tmotive {

// The finite field F_q with q = p^r.  Elements are integers in [0, q)
// encoding the coefficient vector over F_p in base p, least significant
// digit first; for r = 1 this is the usual residue.  All arithmetic goes
// through tables built at construction, so field operations are O(1).
//
// Contexts are interned by (p, r, bound) and live for the whole program;
// values carry a raw pointer to their context.
class FqContext {
public:
    static constexpr int default_bound = 256;

    // q must be a prime power <= bound.
    static const FqContext* make_q(int q, int bound = default_bound);
    static const FqContext* make(int p, int r, int bound = default_bound);

    int p() const { return p_; }
    int r() const { return r_; }
    int q() const { return q_; }
    bool prime_field() const { return r_ == 1; }

    // Monic irreducible modulus over F_p, ascending coefficients, length r+1.
    // For r = 1 this is {0, 1} (i.e. x), kept for serialization symmetry.
    const std::vector<int>& modulus() const { return modulus_; }

    uint16_t add(uint16_t a, uint16_t b) const { return add_[a * q_ + b]; }
    uint16_t sub(uint16_t a, uint16_t b) const { return add_[a * q_ + neg_[b]]; }
    uint16_t mul(uint16_t a, uint16_t b) const { return mul_[a * q_ + b]; }
    uint16_t neg(uint16_t a) const { return neg_[a]; }
    uint16_t inv(uint16_t a) const;
    uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
    uint16_t pow(uint16_t a, unsigned long long e) const;

    // Reduction of an ordinary integer into the prime subfield.
    uint16_t of_int(long long n) const;

    std::vector<int> coeff_vector(uint16_t a) const;  // base-p digits, length r
    std::string elem_str(uint16_t a) const;

private:
    FqContext(int p, int r, std::vector<int> modulus);
    void build_tables();

    int p_, r_, q_;
    std::vector<int> modulus_;
    std::vector<uint16_t> add_, mul_, neg_, inv_;
};

// Value wrapper; equality is bitwise on the representation.
class Fq {
public:
    Fq() : ctx_(nullptr), v_(0) {}
    Fq(const FqContext* ctx, uint16_t v) : ctx_(ctx), v_(v) {}

    static Fq zero(const FqContext* ctx) { return Fq(ctx, 0); }
    static Fq one(const FqContext* ctx) { return Fq(ctx, 1); }

    const FqContext* ctx() const { return ctx_; }
    uint16_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fq operator+(Fq o) const { return Fq(ctx_, ctx_->add(v_, o.v_)); }
    Fq operator-(Fq o) const { return Fq(ctx_, ctx_->sub(v_, o.v_)); }
    Fq operator*(Fq o) const { return Fq(ctx_, ctx_->mul(v_, o.v_)); }
    Fq operator/(Fq o) const { return Fq(ctx_, ctx_->div(v_, o.v_)); }
    Fq operator-() const { return Fq(ctx_, ctx_->neg(v_)); }
    bool operator==(Fq o) const { return v_ == o.v_ && ctx_ == o.ctx_; }
    bool operator!=(Fq o) const { return !(*this == o); }

private:
    const FqContext* ctx_;
    uint16_t v_;
};

// Binomial coefficient C(m, j) mod p computed digit-wise in base p.
int lucas_binomial(unsigned long long m, unsigned long long j, int p);

// True for q = p^r with p prime, r >= 1; factors q on success.
bool parse_prime_power(int q, int& p, int& r);

}  // namespace tmotive

#endif

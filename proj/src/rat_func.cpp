#include "tmotive/rat_func.hpp"

#include <limits>

namespace tmotive {

RatFunc::RatFunc(ThetaPoly num, ThetaPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw zero_division("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = ThetaPoly::one(num_.ctx());
        return;
    }
    ThetaPoly g = ThetaPoly::gcd(num_, den_);
    if (g.deg() > 0) {
        num_ = num_.exact_div(g);
        den_ = den_.exact_div(g);
    }
    Fq lead = den_.lead();
    if (!(lead == Fq::one(num_.ctx()))) {
        Fq inv = Fq::one(num_.ctx()) / lead;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw zero_division("division by zero rational function");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::operator-() const {
    RatFunc r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

bool RatFunc::operator==(const RatFunc& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw zero_division("inverse of zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc acc = one(ctx()), base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

RatFunc RatFunc::twist(int i) const {
    if (i < 0) throw negative_twist("negative Frobenius twist");
    RatFunc r;
    r.num_ = num_.twist(i);
    r.den_ = den_.twist(i);
    return r;  // already reduced and monic: twisting preserves both
}

double RatFunc::norm_lg() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(num_.deg() - den_.deg());
}

std::string RatFunc::str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace tmotive

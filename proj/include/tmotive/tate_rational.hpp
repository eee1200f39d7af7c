#ifndef TMOTIVE_TATE_RATIONAL_HPP
#define TMOTIVE_TATE_RATIONAL_HPP

#include <map>

#include "tmotive/mat.hpp"
#include "tmotive/tate.hpp"

namespace tmotive {

// Rational function of t over F_q(theta) with the denominator kept factored
// as prod_j (t - theta^(q^j))^(m_j).  Every denominator produced by inverse
// sigma/tau products is of this shape, which keeps regularity checks and
// hyperderivative stacks exact.
class TateRational {
public:
    TateRational() = default;
    explicit TateRational(TateRat num) : num_(std::move(num)) {}

    static TateRational zero(const FqContext* ctx) { return TateRational(TateRat::zero(RatFunc::zero(ctx))); }
    static TateRational one(const FqContext* ctx) { return TateRational(TateRat::constant(RatFunc::one(ctx))); }
    static TateRational from_poly(const TatePoly& p) {
        return TateRational(p.map([](const ThetaPoly& c) { return RatFunc(c); }));
    }

    const FqContext* ctx() const { return num_.ctx(); }
    const TateRat& num() const { return num_; }
    const std::map<int, int>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    // (t - theta^(q^level))^mult joins the denominator; reduced lazily.
    TateRational with_den_factor(int level, int mult) const;

    TateRational operator+(const TateRational& o) const;
    TateRational operator-(const TateRational& o) const;
    TateRational operator*(const TateRational& o) const;
    TateRational operator-() const;
    TateRational scaled(const RatFunc& c) const;
    bool equal(const TateRational& o) const;  // as rational functions

    TateRational twist(int i) const;  // den levels shift by i

    // Cancel denominator factors dividing the numerator.
    TateRational reduced() const;

    bool regular_at_level(int level) const;  // after reduction

    // Taylor coefficients at t = theta^(q^level): (f, d_t f, d_t^2 f, ...),
    // `depth` of them.  These are the hyperderivative values at the point.
    // Throws pole_at_evaluation_point if a pole survives reduction there.
    std::vector<RatFunc> taylor_at(int level, int depth) const;
    RatFunc eval_at(int level) const { return taylor_at(level, 1)[0]; }

    // Residue of (t - theta)^weight * this dt at t = theta^(q^level).
    RatFunc residue_at(int level, int weight) const;

    // Residue at infinity: minus the coefficient of 1/t in the expansion at
    // infinity (so that the global sum of residues vanishes).
    RatFunc residue_at_infinity() const;

    std::string str() const;

private:
    TatePoly den_factor_poly(int level, int mult) const;
    TateRat num_;
    std::map<int, int> den_;  // twist level -> multiplicity, all > 0
};

using RatVec = std::vector<TateRational>;

TateRational mat_entry_from_poly(const TatePoly& p);

}  // namespace tmotive

#endif

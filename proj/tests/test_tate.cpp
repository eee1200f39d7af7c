#include "doctest.h"

#include <random>

#include "tmotive/tate_rational.hpp"

using namespace tmotive;

namespace {

TatePoly rand_poly(const FqContext* ctx, std::mt19937_64& rng, int tdeg, int thdeg) {
    std::vector<ThetaPoly> c;
    for (int i = 0; i <= tdeg; ++i) {
        std::vector<uint16_t> v(1 + rng() % (thdeg + 1));
        for (auto& x : v) x = static_cast<uint16_t>(rng() % ctx->q());
        c.push_back(ThetaPoly(ctx, std::move(v)));
    }
    return TatePoly::from_parts(ThetaPoly::zero(ctx), std::move(c), neg_inf);
}

}  // namespace

TEST_CASE("tate multiplication") {
    const FqContext* ctx = FqContext::make_q(2);
    TatePoly f = t_minus_theta(ctx);
    // (t - theta)^2 = t^2 + theta^2 in char 2
    TatePoly sq = f * f;
    CHECK(sq.coeff(0) == ThetaPoly::monomial(ctx, 2, 1));
    CHECK(sq.coeff(1).is_zero());
    CHECK(sq.coeff(2) == ThetaPoly::one(ctx));

    TatePoly one = TatePoly::constant(ThetaPoly::one(ctx));
    CHECK(one * f == f);
    TatePoly zero = TatePoly::zero(ThetaPoly::zero(ctx));
    CHECK((zero * f).is_zero());
    CHECK((zero * f).tail_lg() == neg_inf);
}

TEST_CASE("tate twist fixes t") {
    const FqContext* ctx = FqContext::make_q(2);
    TatePoly f = t_minus_theta(ctx);
    TatePoly tw = f.twist(1);
    CHECK(tw == t_minus_theta(ctx, 1));  // t - theta^2
    CHECK(f.twist(0) == f);
    // homomorphism: ((t-theta)(t-theta^2))^(1) = (t-theta^2)(t-theta^4)
    TatePoly g = f * t_minus_theta(ctx, 1);
    CHECK(g.twist(1) == t_minus_theta(ctx, 1) * t_minus_theta(ctx, 2));
    CHECK_THROWS_AS(f.twist(-1), negative_twist);
}

TEST_CASE("hyperderivatives") {
    const FqContext* ctx = FqContext::make_q(2);
    TatePoly t2 = TatePoly::monomial(ThetaPoly::one(ctx), 2);
    CHECK(t2.hyperderivative(1).is_zero());  // C(2,1) = 0 mod 2
    TatePoly d2 = t2.hyperderivative(2);     // C(2,2) = 1
    CHECK(d2.degree() == 0);
    CHECK(d2.coeff(0).is_one());
}

TEST_CASE("hyperderivative composition and product rule") {
    const FqContext* ctx = FqContext::make_q(3);
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        TatePoly f = rand_poly(ctx, rng, 6, 2);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) {
                TatePoly lhs = f.hyperderivative(j).hyperderivative(i);
                int c = lucas_binomial(i + j, i, ctx->p());
                TatePoly rhs = f.hyperderivative(i + j).scaled(ThetaPoly::constant(ctx, ctx->of_int(c)));
                CHECK(lhs == rhs);
            }
    }
    for (int trial = 0; trial < 20; ++trial) {
        TatePoly f = rand_poly(ctx, rng, 4, 2), g = rand_poly(ctx, rng, 4, 2);
        for (int n = 0; n <= 5; ++n) {
            TatePoly lhs = (f * g).hyperderivative(n);
            TatePoly rhs = TatePoly::zero(ThetaPoly::zero(ctx));
            for (int a = 0; a <= n; ++a) rhs = rhs + f.hyperderivative(a) * g.hyperderivative(n - a);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("twisting commutes with hyperderivatives and point-twisted evaluation") {
    // (d_t^j f)|_{t=theta} twisted by (i) equals (d_t^j f^(i))|_{t=theta^(q^i)};
    // exhaustive on monomials theta^b t^a of degree <= 6, i <= 3.
    const FqContext* ctx = FqContext::make_q(2);
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 3; ++b)
            for (int j = 0; j <= 3; ++j)
                for (int i = 0; i <= 3; ++i) {
                    TatePoly f = TatePoly::monomial(ThetaPoly::monomial(ctx, b, 1), a);
                    ThetaPoly at0 = ThetaPoly::theta(ctx);
                    ThetaPoly lhs = f.hyperderivative(j).eval(at0).twist(i);
                    ThetaPoly at_i = ThetaPoly::theta_q_pow(ctx, i);
                    ThetaPoly rhs = f.twist(i).hyperderivative(j).eval(at_i);
                    CHECK(lhs == rhs);
                }
}

TEST_CASE("gauss norm") {
    const FqContext* ctx = FqContext::make_q(2);
    // |t - theta|: max(q^0 * q, q^1 * 1) = q
    CHECK(t_minus_theta(ctx).gauss_norm_lg() == doctest::Approx(1.0));
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        TatePoly a = rand_poly(ctx, rng, 5, 3), b = rand_poly(ctx, rng, 5, 3);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).gauss_norm_lg() <= a.gauss_norm_lg() + b.gauss_norm_lg() + 1e-9);
    }
}

TEST_CASE("evaluation") {
    const FqContext* ctx = FqContext::make_q(2);
    TatePoly f = t_minus_theta(ctx);
    CHECK(f.eval(ThetaPoly::theta(ctx)).is_zero());

    // (t^2 + theta)|_{t=theta} = theta^2 + theta
    TatePoly g = TatePoly::monomial(ThetaPoly::one(ctx), 2) + TatePoly::constant(ThetaPoly::theta(ctx));
    CHECK(g.eval(ThetaPoly::theta(ctx)) == ThetaPoly(ctx, {0, 1, 1}));

    // truncated geometric series: sum_i t^i / theta^i at t = 1 is 1/(1-u)
    const int T = 12;
    std::vector<Laurent> c;
    for (int i = 0; i <= T; ++i) c.push_back(Laurent::u_pow(ctx, i));
    TateNum geo = TateNum::from_parts(Laurent::zero(ctx), std::move(c), -static_cast<double>(T));
    Laurent v = geo.eval(Laurent::one(ctx));
    Laurent expect = (Laurent::one(ctx) - Laurent::u_pow(ctx, 1)).inv(T);
    CHECK(Laurent::agreement(v, expect) >= T);

    // tail bound cannot control evaluation beyond |c| = q
    CHECK_THROWS_AS(geo.eval(Laurent::u_pow(ctx, -2)), divergent_evaluation);
}

TEST_CASE("rational pole rule") {
    const FqContext* ctx = FqContext::make_q(2);
    // d_t (1/(t-theta^2)) = -1/(t-theta^2)^2, checked via Taylor depth 3 at theta
    TateRational f = TateRational::one(ctx).with_den_factor(1, 1);
    auto tay = f.taylor_at(0, 3);
    // 1/(t-theta^2) around theta: 1/(theta-theta^2) - (t-theta)/(theta-theta^2)^2 + ...
    RatFunc base = RatFunc(ThetaPoly::theta(ctx)) - RatFunc(ThetaPoly::theta_q_pow(ctx, 1));
    CHECK(tay[0] == base.inverse());
    CHECK(tay[1] == -(base.pow(2).inverse()));
    CHECK(tay[2] == base.pow(3).inverse());
}

TEST_CASE("rational pole stack per the delta conventions") {
    const FqContext* ctx = FqContext::make_q(2);
    // f = 1, depth 3, at theta: stack (d^2 f, d f, f) = (0, 0, 1)
    TateRational one = TateRational::one(ctx);
    auto tay = one.taylor_at(0, 3);
    CHECK(tay[0] == RatFunc::one(ctx));
    CHECK(tay[1].is_zero());
    CHECK(tay[2].is_zero());

    // f = (t-theta)^2, depth 2: all zero
    TateRational f =
        TateRational::from_poly(t_minus_theta(ctx) * t_minus_theta(ctx));
    auto t2 = f.taylor_at(0, 2);
    CHECK(t2[0].is_zero());
    CHECK(t2[1].is_zero());

    // f = 1/(t-theta^q) at theta: 1/(theta - theta^q)
    TateRational g = TateRational::one(ctx).with_den_factor(1, 1);
    RatFunc v = g.eval_at(0);
    RatFunc expect = (RatFunc(ThetaPoly::theta(ctx)) - RatFunc(ThetaPoly::theta_q_pow(ctx, 1))).inverse();
    CHECK(v == expect);
    // cross-check against the Laurent evaluation of the same function
    Laurent lv = Laurent::from_ratfunc(v, 30);
    Laurent direct = (Laurent::theta(ctx) - Laurent::theta(ctx).twist(1)).inv(30);
    CHECK(Laurent::agreement(lv, direct) >= 25);
}

TEST_CASE("tate rational reduction and regularity") {
    const FqContext* ctx = FqContext::make_q(2);
    // (t - theta^q) * X / (t - theta^q) reduces
    TateRational x = TateRational::from_poly(t_minus_theta(ctx, 1) * t_minus_theta(ctx));
    TateRational y = x.with_den_factor(1, 1);
    CHECK(!y.den().empty());
    TateRational r = y.reduced();
    CHECK(r.den().empty());
    CHECK(r.num() == TateRational::from_poly(t_minus_theta(ctx)).num());
    CHECK(y.regular_at_level(0));
    CHECK(y.regular_at_level(1));
    TateRational pole = TateRational::one(ctx).with_den_factor(0, 1);
    CHECK(!pole.regular_at_level(0));
    CHECK_THROWS_AS(pole.taylor_at(0, 1), pole_at_evaluation_point);
}

TEST_CASE("residues") {
    const FqContext* ctx = FqContext::make_q(2);
    // res at theta^q of 1/(t-theta^q) is 1; residue at infinity is -1
    TateRational h = TateRational::one(ctx).with_den_factor(1, 1);
    CHECK(h.residue_at(1, 0) == RatFunc::one(ctx));
    CHECK(h.residue_at(2, 0).is_zero());
    CHECK(h.residue_at_infinity() == -RatFunc::one(ctx));

    // polynomial: all residues vanish
    TateRational p = TateRational::from_poly(t_minus_theta(ctx));
    CHECK(p.residue_at(1, 0).is_zero());
    CHECK(p.residue_at_infinity().is_zero());

    // double pole: res((t-theta) h dt) at theta^q for h = 1/(t-theta^q)^2 is 1
    TateRational h2 = TateRational::one(ctx).with_den_factor(1, 2);
    CHECK(h2.residue_at(1, 1) == RatFunc::one(ctx));
    CHECK(h2.residue_at(1, 0).is_zero());
    CHECK(h2.residue_at_infinity().is_zero());
}

TEST_CASE("tail bound bookkeeping") {
    const FqContext* ctx = FqContext::make_q(2);
    std::vector<Laurent> c = {Laurent::one(ctx), Laurent::u_pow(ctx, 1)};
    TateNum a = TateNum::from_parts(Laurent::zero(ctx), c, -10.0);
    TateNum b = TateNum::from_parts(Laurent::zero(ctx), c, neg_inf);
    TateNum prod = a * b;
    // sub-multiplicative: unknown crossings plus the known mass dropped at the
    // truncation degree are both within |a||b|
    CHECK(prod.tail_lg() <= a.gauss_norm_lg() + b.gauss_norm_lg() + 1e-9);
    CHECK(prod.degree() <= a.degree());
    // twist raises the tail roughly to its q-th power
    TateNum tw = a.twist(1);
    CHECK(tw.tail_lg() == doctest::Approx(2.0 * -10.0 + (a.degree() + 1) * (1.0 - 2.0)));
    // hyperderivative only shrinks the tail
    CHECK(a.hyperderivative(1).tail_lg() <= a.tail_lg());
}

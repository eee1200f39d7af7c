#ifndef TMOTIVE_SPECIAL_HPP
#define TMOTIVE_SPECIAL_HPP

#include "tmotive/motive.hpp"

namespace tmotive {

// D_i = prod_(j<i) (theta^(q^i) - theta^(q^j)) and
// L_i = prod_(1<=j<=i) (theta - theta^(q^j)), with D_0 = L_0 = 1.
struct CarlitzProducts {
    std::vector<ThetaPoly> d, l;
};
CarlitzProducts carlitz_products(const FqContext* ctx, int imax);

// prod D_i^(n_i) over the base-q digits of n; the factorial of n.
ThetaPoly carlitz_factorial(const FqContext* ctx, long long n);
// Gamma_n = factorial of n-1, n >= 1.
ThetaPoly gamma_value(const FqContext* ctx, long long n);

// Brute-force zeta value: sum of 1/a^n over monic a, grouped by degree with
// plateau detection; the claimed precision is sound since the degree-d block
// has valuation >= n d.
Laurent zeta_brute(const FqContext* ctx, int n, long long prec);

// Brute-force multiple zeta value over tuples with strictly descending degrees.
Laurent mzv_brute(const FqContext* ctx, const std::vector<int>& s, long long prec);

// rho^n where rho = pi~ / omega_C = (-theta) prod_(i>=1) (1-theta^(1-q^i))^(-1)
// * prod_(i>=0) (1 - t/theta^(q^i)); the fractional-power prefactors cancel,
// so everything stays in K_infinity.
TateNum pi_omega_power(const FqContext* ctx, int n, int tdeg, long long prec);

// pi~^(q-1) = (-theta)^q prod_(i>=1) (1-theta^(1-q^i))^(-(q-1)), root-free.
Laurent carlitz_period_pow_qm1(const FqContext* ctx, long long prec);

// Carlitz-Bernoulli numbers: z/exp_C(z) = sum B_n z^n / (factorial of n).
std::vector<RatFunc> bernoulli_carlitz(const FqContext* ctx, int nmax);

// Anderson-Thakur polynomial: identity for n <= q, beyond that the caller
// must supply one (validated downstream by the self-checking zeta identity).
TatePoly anderson_thakur_poly(const FqContext* ctx, int n);

// The special point delta_1(H) linking logarithms to zeta values, along with
// the delta_0 variant exposed for comparison.
std::vector<RatFunc> special_point(const MotiveSpec& spec, const TatePoly& h);
std::vector<RatFunc> special_point_delta0(const MotiveSpec& spec, const TatePoly& h);

}  // namespace tmotive

#endif

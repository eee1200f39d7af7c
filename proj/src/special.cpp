#include "tmotive/special.hpp"

#include <cmath>

namespace tmotive {

CarlitzProducts carlitz_products(const FqContext* ctx, int imax) {
    CarlitzProducts out;
    out.d.push_back(ThetaPoly::one(ctx));
    out.l.push_back(ThetaPoly::one(ctx));
    for (int i = 1; i <= imax; ++i) {
        ThetaPoly di = ThetaPoly::one(ctx);
        for (int j = 0; j < i; ++j)
            di = di * (ThetaPoly::theta_q_pow(ctx, i) - ThetaPoly::theta_q_pow(ctx, j));
        out.d.push_back(di);
        out.l.push_back(out.l.back() * (ThetaPoly::theta(ctx) - ThetaPoly::theta_q_pow(ctx, i)));
    }
    return out;
}

ThetaPoly carlitz_factorial(const FqContext* ctx, long long n) {
    if (n < 0) throw usage_error("factorial of a negative integer");
    ThetaPoly acc = ThetaPoly::one(ctx);
    int i = 0;
    long long rest = n;
    while (rest > 0) {
        int digit = static_cast<int>(rest % ctx->q());
        if (digit > 0) {
            ThetaPoly di = ThetaPoly::one(ctx);
            for (int j = 0; j < i; ++j)
                di = di * (ThetaPoly::theta_q_pow(ctx, i) - ThetaPoly::theta_q_pow(ctx, j));
            for (int k = 0; k < digit; ++k) acc = acc * di;
        }
        rest /= ctx->q();
        ++i;
    }
    return acc;
}

ThetaPoly gamma_value(const FqContext* ctx, long long n) {
    if (n < 1) throw usage_error("gamma value needs a positive integer");
    return carlitz_factorial(ctx, n - 1);
}

namespace {

// Sum of 1/a^n over monic a of the given degree.
Laurent monic_block_sum(const FqContext* ctx, int deg, int n, long long prec) {
    Laurent acc = Laurent::zero_to(ctx, prec);
    long long count = 1;
    for (int i = 0; i < deg; ++i) count *= ctx->q();
    std::vector<uint16_t> coeffs(deg + 1, 0);
    coeffs[deg] = 1;
    for (long long code = 0; code < count; ++code) {
        long long c = code;
        for (int i = 0; i < deg; ++i) {
            coeffs[i] = static_cast<uint16_t>(c % ctx->q());
            c /= ctx->q();
        }
        ThetaPoly a(ctx, coeffs);
        Laurent la = Laurent::from_poly(a.pow(n));
        acc = acc + la.inv(prec);
    }
    return acc;
}

}  // namespace

Laurent zeta_brute(const FqContext* ctx, int n, long long prec) {
    if (n < 1) throw usage_error("zeta of a non-positive integer");
    Laurent acc = Laurent::zero_to(ctx, prec);
    int quiet = 0;
    for (int d = 0;; ++d) {
        if (static_cast<long long>(n) * d >= prec) break;  // sound valuation floor
        Laurent block = monic_block_sum(ctx, d, n, prec);
        acc = acc + block;
        if (block.norm_lg() < -static_cast<double>(prec)) {
            if (++quiet >= 2) break;  // plateau: two consecutive silent blocks
        } else {
            quiet = 0;
        }
    }
    return acc;
}

Laurent mzv_brute(const FqContext* ctx, const std::vector<int>& s, long long prec) {
    const int r = static_cast<int>(s.size());
    if (r == 0) throw usage_error("empty composition");
    for (int v : s)
        if (v < 1) throw usage_error("composition entries must be positive");
    // Degree cutoff: the outermost block at degree d contributes valuation at
    // least s_1 d + s_2 (d-1) + ...; stop once that clears the precision,
    // with plateau detection on top.
    int dmax = 0;
    while (true) {
        long long floor = 0;
        int dd = dmax;
        for (int j = 0; j < r && dd >= 0; ++j, --dd) floor += static_cast<long long>(s[j]) * dd;
        if (floor >= prec || dmax > 40) break;
        ++dmax;
    }
    std::vector<std::vector<Laurent>> block(r);  // block[j][d] = sum over monic deg d of 1/a^(s_j)
    for (int j = 0; j < r; ++j)
        for (int d = 0; d <= dmax; ++d) block[j].push_back(monic_block_sum(ctx, d, s[j], prec));
    // suffix[j][D] = sum over chains d_j > d_(j+1) > ... >= 0 with d_j < D
    std::vector<std::vector<Laurent>> suffix(r + 1,
                                             std::vector<Laurent>(dmax + 2, Laurent::zero_to(ctx, prec)));
    for (int D = 0; D <= dmax + 1; ++D) suffix[r][D] = Laurent::one(ctx).truncated(prec);
    for (int j = r - 1; j >= 0; --j) {
        Laurent acc = Laurent::zero_to(ctx, prec);
        suffix[j][0] = acc;
        for (int d = 0; d <= dmax; ++d) {
            acc = acc + block[j][d] * suffix[j + 1][d];
            suffix[j][d + 1] = acc;
        }
    }
    return suffix[0][dmax + 1];
}

TateNum pi_omega_power(const FqContext* ctx, int n, int tdeg, long long prec) {
    if (n < 1) throw usage_error("power must be positive");
    long long work = prec + 8;
    // scalar prefactor (-theta) prod_(i>=1) (1 - theta^(1-q^i))^(-1)
    Laurent c0 = -Laurent::theta(ctx);
    for (int i = 1;; ++i) {
        long long e = 1;
        for (int k = 0; k < i; ++k) e *= ctx->q();
        if (e - 1 > work) break;
        Laurent f = Laurent::one(ctx) - Laurent::u_pow(ctx, e - 1);
        c0 = c0 * f.inv(work);
    }
    // prod_(i>=0) (1 - t u^(q^i)) truncated at degree tdeg
    TateNum prod = TateNum::constant(Laurent::one(ctx).truncated(work));
    for (int i = 0;; ++i) {
        long long e = 1;
        for (int k = 0; k < i; ++k) e *= ctx->q();
        if (e > work) break;
        std::vector<Laurent> lin = {Laurent::one(ctx), -Laurent::u_pow(ctx, e)};
        prod = (prod * TateNum::from_parts(Laurent::zero(ctx), lin, neg_inf)).truncated(tdeg);
    }
    // Tail of the factor product: coefficient j has norm q^(-(1+q+...+q^(j-1))),
    // so the dropped mass at degree j is q^(j - (q^j-1)/(q-1)), decreasing.
    double qd = ctx->q();
    double tail = (tdeg + 1) - (std::pow(qd, tdeg + 1) - 1.0) / (qd - 1.0);
    TateNum rho = prod.scaled(c0).with_tail(tail + 1.0);
    TateNum acc = rho;
    for (int k = 1; k < n; ++k) acc = (acc * rho).truncated(tdeg);
    return acc;
}

Laurent carlitz_period_pow_qm1(const FqContext* ctx, long long prec) {
    long long work = prec + 8;
    Laurent acc = (-Laurent::theta(ctx)).pow(ctx->q(), Laurent::inf_prec);
    for (int i = 1;; ++i) {
        long long e = 1;
        for (int k = 0; k < i; ++k) e *= ctx->q();
        if (e - 1 > work) break;
        Laurent f = Laurent::one(ctx) - Laurent::u_pow(ctx, e - 1);
        acc = acc * f.inv(work).pow(ctx->q() - 1, work);
    }
    return acc.truncated(prec + 1);
}

std::vector<RatFunc> bernoulli_carlitz(const FqContext* ctx, int nmax) {
    // exp_C(z)/z = 1 + sum_(i>=1) z^(q^i - 1)/D_i; invert as a power series.
    std::vector<RatFunc> f(nmax + 1, RatFunc::zero(ctx));
    f[0] = RatFunc::one(ctx);
    CarlitzProducts dl = carlitz_products(ctx, 12);
    for (int i = 1; i <= 12; ++i) {
        long long e = 1;
        for (int k = 0; k < i; ++k) e *= ctx->q();
        if (e - 1 > nmax) break;
        f[e - 1] = RatFunc(dl.d[i]).inverse();
    }
    std::vector<RatFunc> g(nmax + 1, RatFunc::zero(ctx));
    g[0] = RatFunc::one(ctx);
    for (int m = 1; m <= nmax; ++m) {
        RatFunc acc = RatFunc::zero(ctx);
        for (int k = 1; k <= m; ++k)
            if (!f[k].is_zero()) acc = acc + f[k] * g[m - k];
        g[m] = -acc;
    }
    std::vector<RatFunc> b(nmax + 1, RatFunc::zero(ctx));
    for (int m = 0; m <= nmax; ++m) b[m] = g[m] * RatFunc(carlitz_factorial(ctx, m));
    return b;
}

TatePoly anderson_thakur_poly(const FqContext* ctx, int n) {
    if (n < 1) throw usage_error("index must be positive");
    if (n > ctx->q())
        throw unsupported("Anderson-Thakur polynomial beyond n = q must be user-supplied");
    return TatePoly::constant(ThetaPoly::one(ctx));
}

std::vector<RatFunc> special_point(const MotiveSpec& spec, const TatePoly& h) {
    PolyVec coords(spec.rank, TatePoly::zero(ThetaPoly::zero(spec.ctx)));
    coords[0] = h;
    return delta1_dual(spec, coords);
}

std::vector<RatFunc> special_point_delta0(const MotiveSpec& spec, const TatePoly& h) {
    PolyVec coords(spec.rank, TatePoly::zero(ThetaPoly::zero(spec.ctx)));
    coords[0] = h;
    return delta0_dual(spec, coords);
}

}  // namespace tmotive

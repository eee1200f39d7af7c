#include "tmotive/tate_rational.hpp"

#include <sstream>

namespace tmotive {

namespace {

// Division in t by a divisor monic in t, over RatFunc scalars.
void divrem_in_t(const TateRat& n, const TateRat& d, TateRat& q, TateRat& r) {
    const FqContext* ctx = n.ctx();
    RatFunc rzero = RatFunc::zero(ctx);
    std::vector<RatFunc> rem;
    for (int i = 0; i <= n.degree(); ++i) rem.push_back(n.coeff(i));
    int dd = d.degree();
    std::vector<RatFunc> quo(std::max(0, static_cast<int>(rem.size()) - dd), rzero);
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
        RatFunc f = rem[i];
        if (!f.is_zero()) {
            quo[i - dd] = f;
            for (int j = 0; j <= dd; ++j) rem[i - dd + j] = rem[i - dd + j] - f * d.coeff(j);
        }
    }
    rem.resize(std::min<size_t>(rem.size(), dd), rzero);
    q = TateRat::from_parts(rzero, std::move(quo), neg_inf);
    r = TateRat::from_parts(rzero, std::move(rem), neg_inf);
}

}  // namespace

TatePoly TateRational::den_factor_poly(int level, int mult) const {
    TatePoly f = t_minus_theta(ctx(), level);
    TatePoly acc = TatePoly::constant(ThetaPoly::one(ctx()));
    for (int i = 0; i < mult; ++i) acc = acc * f;
    return acc;
}

TateRational TateRational::with_den_factor(int level, int mult) const {
    TateRational r = *this;
    if (mult > 0) r.den_[level] += mult;
    return r;
}

TateRational TateRational::operator*(const TateRational& o) const {
    TateRational r;
    r.num_ = num_ * o.num_;
    r.den_ = den_;
    for (auto [lvl, m] : o.den_) r.den_[lvl] += m;
    return r;
}

TateRational TateRational::operator+(const TateRational& o) const {
    // Common denominator is the max multiplicity per level.
    std::map<int, int> common = den_;
    for (auto [lvl, m] : o.den_) common[lvl] = std::max(common[lvl], m);
    auto lift = [&](const TateRational& x) {
        TateRat n = x.num_;
        for (auto [lvl, m] : common) {
            auto it = x.den_.find(lvl);
            int have = it == x.den_.end() ? 0 : it->second;
            if (m > have)
                n = n * den_factor_poly(lvl, m - have).map([](const ThetaPoly& c) { return RatFunc(c); });
        }
        return n;
    };
    TateRational r;
    r.num_ = lift(*this) + lift(o);
    r.den_ = std::move(common);
    return r;
}

TateRational TateRational::operator-(const TateRational& o) const { return *this + (-o); }

TateRational TateRational::operator-() const {
    TateRational r = *this;
    r.num_ = -r.num_;
    return r;
}

TateRational TateRational::scaled(const RatFunc& c) const {
    TateRational r = *this;
    r.num_ = r.num_.scaled(c);
    return r;
}

bool TateRational::equal(const TateRational& o) const {
    TateRational d = *this - o;
    return d.num_.is_zero();
}

TateRational TateRational::twist(int i) const {
    if (i < 0) throw negative_twist("negative Frobenius twist");
    TateRational r;
    r.num_ = num_.twist(i);
    for (auto [lvl, m] : den_) r.den_[lvl + i] = m;  // (t - theta^(q^j))^(1) = t - theta^(q^(j+1))
    return r;
}

TateRational TateRational::reduced() const {
    TateRational r = *this;
    if (r.num_.is_zero()) {
        r.den_.clear();
        return r;
    }
    for (auto it = r.den_.begin(); it != r.den_.end();) {
        RatFunc c(ThetaPoly::theta_q_pow(ctx(), it->first));
        while (it->second > 0) {
            RatFunc rem = RatFunc::zero(ctx());
            TateRat q = r.num_.divide_linear(c, rem);
            if (!rem.is_zero()) break;
            r.num_ = std::move(q);
            --it->second;
        }
        if (it->second == 0)
            it = r.den_.erase(it);
        else
            ++it;
    }
    return r;
}

bool TateRational::regular_at_level(int level) const {
    if (den_.find(level) == den_.end()) return true;
    TateRational r = reduced();
    return r.den_.find(level) == r.den_.end();
}

std::vector<RatFunc> TateRational::taylor_at(int level, int depth) const {
    TateRational r = reduced();
    if (r.den_.count(level))
        throw pole_at_evaluation_point("pole at t = theta^(q^" + std::to_string(level) + ")");
    const FqContext* ctx = this->ctx();
    RatFunc c(ThetaPoly::theta_q_pow(ctx, level));

    // Numerator Taylor coefficients by iterated synthetic division.
    std::vector<RatFunc> res(depth, RatFunc::zero(ctx));
    TateRat cur = r.num_;
    for (int k = 0; k < depth && cur.degree() >= 0; ++k) {
        RatFunc rem = RatFunc::zero(ctx);
        cur = cur.divide_linear(c, rem);
        res[k] = rem;
    }

    // Multiply by the expansion of each (t - theta^(q^a))^(-m) around t = c.
    for (auto [lvl, m] : r.den_) {
        RatFunc base = c - RatFunc(ThetaPoly::theta_q_pow(ctx, lvl));  // nonzero: lvl != level
        RatFunc binv = base.inverse();
        std::vector<RatFunc> ser(depth, RatFunc::zero(ctx));
        RatFunc scale = binv.pow(m);
        Fq sign = Fq::one(ctx);
        for (int k = 0; k < depth; ++k) {
            int b = lucas_binomial(static_cast<unsigned long long>(m) + k - 1, k, ctx->p());
            ser[k] = scalar::scaled(scale, sign * Fq(ctx, ctx->of_int(b)));
            scale = scale * binv;
            sign = -sign;
        }
        std::vector<RatFunc> conv(depth, RatFunc::zero(ctx));
        for (int i = 0; i < depth; ++i)
            for (int j = 0; i + j < depth; ++j) conv[i + j] = conv[i + j] + res[i] * ser[j];
        res = std::move(conv);
    }
    return res;
}

RatFunc TateRational::residue_at(int level, int weight) const {
    TateRational r = reduced();
    auto it = r.den_.find(level);
    if (it == r.den_.end()) return RatFunc::zero(ctx());
    int m = it->second;
    TateRational g;
    g.num_ = r.num_;
    for (auto [lvl, mm] : r.den_)
        if (lvl != level) g.den_[lvl] = mm;
    if (weight > 0)
        g.num_ = g.num_ * den_factor_poly(0, weight).map([](const ThetaPoly& c) { return RatFunc(c); });
    return g.taylor_at(level, m)[m - 1];
}

RatFunc TateRational::residue_at_infinity() const {
    TateRational r = reduced();
    TateRat den = TateRat::constant(RatFunc::one(ctx()));
    for (auto [lvl, m] : r.den_)
        den = den * den_factor_poly(lvl, m).map([](const ThetaPoly& c) { return RatFunc(c); });
    TateRat q, rem;
    divrem_in_t(r.num_, den, q, rem);
    // [t^-1] of rem/den with deg rem < deg den: nonzero only one degree below.
    if (rem.degree() == den.degree() - 1) return -rem.coeff(rem.degree());
    return RatFunc::zero(ctx());
}

std::string TateRational::str() const {
    std::ostringstream os;
    os << "(" << num_.str() << ")";
    for (auto [lvl, m] : den_) {
        os << " / (t - theta^(q^" << lvl << "))";
        if (m > 1) os << "^" << m;
    }
    return os.str();
}

TateRational mat_entry_from_poly(const TatePoly& p) { return TateRational::from_poly(p); }

}  // namespace tmotive

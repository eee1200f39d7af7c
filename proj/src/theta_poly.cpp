#include "tmotive/theta_poly.hpp"

#include <sstream>

namespace tmotive {

ThetaPoly::ThetaPoly(const FqContext* ctx, std::vector<uint16_t> coeffs)
    : ctx_(ctx), c_(std::move(coeffs)) {
    trim();
}

void ThetaPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

ThetaPoly ThetaPoly::constant(const FqContext* ctx, uint16_t c) {
    ThetaPoly p(ctx);
    if (c != 0) p.c_ = {c};
    return p;
}

ThetaPoly ThetaPoly::monomial(const FqContext* ctx, int deg, uint16_t c) {
    ThetaPoly p(ctx);
    if (c != 0) {
        p.c_.assign(deg + 1, 0);
        p.c_[deg] = c;
    }
    return p;
}

ThetaPoly ThetaPoly::theta_q_pow(const FqContext* ctx, int level) {
    if (level < 0) throw negative_twist("negative twist level");
    long long e = 1;
    for (int i = 0; i < level; ++i) {
        e *= ctx->q();
        if (e > (1 << 24)) throw error(errc::computational, "twist level too large");
    }
    return monomial(ctx, static_cast<int>(e), 1);
}

Fq ThetaPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Fq::zero(ctx_);
    return Fq(ctx_, c_[i]);
}

Fq ThetaPoly::lead() const {
    if (is_zero()) return Fq::zero(ctx_);
    return Fq(ctx_, c_.back());
}

ThetaPoly ThetaPoly::operator+(const ThetaPoly& o) const {
    std::vector<uint16_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        uint16_t a = i < c_.size() ? c_[i] : 0;
        uint16_t b = i < o.c_.size() ? o.c_[i] : 0;
        c[i] = ctx_->add(a, b);
    }
    return ThetaPoly(ctx_, std::move(c));
}

ThetaPoly ThetaPoly::operator-(const ThetaPoly& o) const {
    std::vector<uint16_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        uint16_t a = i < c_.size() ? c_[i] : 0;
        uint16_t b = i < o.c_.size() ? o.c_[i] : 0;
        c[i] = ctx_->sub(a, b);
    }
    return ThetaPoly(ctx_, std::move(c));
}

ThetaPoly ThetaPoly::operator*(const ThetaPoly& o) const {
    if (is_zero() || o.is_zero()) return zero(ctx_);
    std::vector<uint16_t> c(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            c[i + j] = ctx_->add(c[i + j], ctx_->mul(c_[i], o.c_[j]));
    }
    return ThetaPoly(ctx_, std::move(c));
}

ThetaPoly ThetaPoly::operator-() const {
    std::vector<uint16_t> c(c_);
    for (auto& x : c) x = ctx_->neg(x);
    return ThetaPoly(ctx_, std::move(c));
}

ThetaPoly ThetaPoly::scaled(Fq s) const {
    if (s.is_zero()) return zero(ctx_);
    std::vector<uint16_t> c(c_);
    for (auto& x : c) x = ctx_->mul(x, s.value());
    return ThetaPoly(ctx_, std::move(c));
}

ThetaPoly ThetaPoly::shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<uint16_t> c(c_.size() + k, 0);
    for (size_t i = 0; i < c_.size(); ++i) c[i + k] = c_[i];
    return ThetaPoly(ctx_, std::move(c));
}

void ThetaPoly::divrem(const ThetaPoly& a, const ThetaPoly& b, ThetaPoly& q, ThetaPoly& r) {
    if (b.is_zero()) throw zero_division("polynomial division by zero");
    const FqContext* ctx = a.ctx_;
    std::vector<uint16_t> rem(a.c_);
    int db = b.deg();
    uint16_t binv = ctx->inv(b.c_.back());
    std::vector<uint16_t> quo;
    if (static_cast<int>(rem.size()) - 1 >= db) quo.assign(rem.size() - db, 0);
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        uint16_t f = ctx->mul(rem[i], binv);
        if (f != 0) {
            quo[i - db] = f;
            for (int j = 0; j <= db; ++j)
                rem[i - db + j] = ctx->sub(rem[i - db + j], ctx->mul(f, b.c_[j]));
        }
    }
    if (!rem.empty()) rem.resize(std::min<size_t>(rem.size(), db));
    q = ThetaPoly(ctx, std::move(quo));
    r = ThetaPoly(ctx, std::move(rem));
}

ThetaPoly ThetaPoly::exact_div(const ThetaPoly& b) const {
    ThetaPoly q, r;
    divrem(*this, b, q, r);
    if (!r.is_zero()) throw error(errc::computational, "inexact polynomial division");
    return q;
}

ThetaPoly ThetaPoly::gcd(ThetaPoly a, ThetaPoly b) {
    const FqContext* ctx = a.ctx_ ? a.ctx_ : b.ctx_;
    while (!b.is_zero()) {
        ThetaPoly q, r;
        divrem(a, b, q, r);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a.scaled(Fq(ctx, ctx->inv(a.lead().value())));
    return a;
}

ThetaPoly ThetaPoly::pow(unsigned e) const {
    ThetaPoly acc = one(ctx_), base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

ThetaPoly ThetaPoly::twist(int i) const {
    if (i < 0) throw negative_twist("negative Frobenius twist");
    if (i == 0 || is_zero()) return *this;
    long long scale = 1;
    for (int k = 0; k < i; ++k) {
        scale *= ctx_->q();
        if (scale * deg() > (1 << 26)) throw error(errc::computational, "twisted degree too large");
    }
    std::vector<uint16_t> c(static_cast<size_t>(deg()) * scale + 1, 0);
    for (size_t j = 0; j < c_.size(); ++j)
        if (c_[j] != 0) c[j * scale] = c_[j];  // c^(q^i) = c on F_q coefficients
    return ThetaPoly(ctx_, std::move(c));
}

Fq ThetaPoly::eval(Fq x) const {
    Fq acc = Fq::zero(ctx_);
    for (int i = deg(); i >= 0; --i) acc = acc * x + Fq(ctx_, c_[i]);
    return acc;
}

std::string ThetaPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = deg(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        std::string cs = ctx_->elem_str(c_[i]);
        if (i == 0) {
            os << cs;
        } else {
            if (!(ctx_->prime_field() && c_[i] == 1)) os << cs << "*";
            os << "theta";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace tmotive

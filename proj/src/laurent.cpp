#include "tmotive/laurent.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace tmotive {

namespace {
constexpr long long kMaxLen = 1 << 22;

long long sat_add(long long a, long long b) {
    if (a >= Laurent::inf_prec || b >= Laurent::inf_prec) return Laurent::inf_prec;
    return a + b;
}

long long sat_mul(long long a, long long s) {
    if (a >= Laurent::inf_prec) return Laurent::inf_prec;
    if (a <= -Laurent::inf_prec) return -Laurent::inf_prec;
    return a * s;
}
}  // namespace

void Laurent::normalize() {
    if (prec_ < inf_prec && !c_.empty()) {
        long long keep = prec_ - val_;
        if (keep <= 0)
            c_.clear();
        else if (static_cast<long long>(c_.size()) > keep)
            c_.resize(keep);
    }
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + lead);
        val_ += static_cast<long long>(lead);
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (c_.empty()) val_ = prec_;
    if (static_cast<long long>(c_.size()) > kMaxLen)
        throw error(errc::computational, "Laurent series too long");
}

Laurent Laurent::zero(const FqContext* ctx) {
    Laurent x;
    x.ctx_ = ctx;
    return x;
}

Laurent Laurent::zero_to(const FqContext* ctx, long long n) {
    Laurent x;
    x.ctx_ = ctx;
    x.val_ = x.prec_ = n;
    return x;
}

Laurent Laurent::u_pow(const FqContext* ctx, long long e) {
    Laurent x;
    x.ctx_ = ctx;
    x.val_ = e;
    x.prec_ = inf_prec;
    x.c_ = {1};
    return x;
}

Laurent Laurent::from_coeffs(const FqContext* ctx, long long val, std::vector<uint16_t> coeffs,
                             long long prec) {
    Laurent x;
    x.ctx_ = ctx;
    x.val_ = val;
    x.prec_ = prec;
    x.c_ = std::move(coeffs);
    x.normalize();
    return x;
}

Laurent Laurent::from_poly(const ThetaPoly& p) {
    if (p.is_zero()) return zero(p.ctx());
    int d = p.deg();
    std::vector<uint16_t> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = p.coeff(d - i).value();  // theta^k = u^-k
    return from_coeffs(p.ctx(), -d, std::move(c));
}

Laurent Laurent::from_ratfunc(const RatFunc& f, long long prec) {
    if (f.is_zero()) return zero(f.ctx());
    Laurent num = from_poly(f.num());
    if (f.is_polynomial()) return num;
    Laurent dinv = from_poly(f.den()).inv(prec - num.valuation());
    return (num * dinv).truncated(prec);
}

Fq Laurent::coeff(long long e) const {
    if (e >= prec_) throw error(errc::computational, "coefficient beyond known precision");
    long long i = e - val_;
    if (i < 0 || i >= static_cast<long long>(c_.size())) return Fq::zero(ctx_);
    return Fq(ctx_, c_[i]);
}

Laurent Laurent::operator+(const Laurent& o) const {
    long long prec = std::min(prec_, o.prec_);
    if (is_zero() && o.is_zero()) return zero_to(ctx_, prec);
    long long lo = std::min(val_, o.val_);
    long long hi = lo;
    if (!is_zero()) hi = std::max(hi, val_ + static_cast<long long>(c_.size()));
    if (!o.is_zero()) hi = std::max(hi, o.val_ + static_cast<long long>(o.c_.size()));
    hi = std::min(hi, prec);
    if (hi <= lo) return zero_to(ctx_, prec);
    std::vector<uint16_t> c(hi - lo, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        long long e = val_ + static_cast<long long>(i);
        if (e < prec) c[e - lo] = c_[i];
    }
    for (size_t i = 0; i < o.c_.size(); ++i) {
        long long e = o.val_ + static_cast<long long>(i);
        if (e < prec) c[e - lo] = ctx_->add(c[e - lo], o.c_[i]);
    }
    return from_coeffs(ctx_, lo, std::move(c), prec);
}

Laurent Laurent::operator-() const {
    Laurent x = *this;
    for (auto& v : x.c_) v = ctx_->neg(v);
    return x;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
    // prec(a*b) = min(v_a + prec_b, v_b + prec_a); exact only when both exact.
    long long prec = std::min(sat_add(val_, o.prec_), sat_add(o.val_, prec_));
    if (is_zero() || o.is_zero()) return zero_to(ctx_, prec);
    long long lo = val_ + o.val_;
    long long len = std::min(static_cast<long long>(c_.size() + o.c_.size()) - 1,
                             prec >= inf_prec ? kMaxLen : prec - lo);
    if (len <= 0) return zero_to(ctx_, prec);
    std::vector<uint16_t> c(len, 0);
    for (size_t i = 0; i < c_.size() && static_cast<long long>(i) < len; ++i) {
        if (c_[i] == 0) continue;
        size_t jmax = std::min(o.c_.size(), static_cast<size_t>(len - static_cast<long long>(i)));
        for (size_t j = 0; j < jmax; ++j)
            c[i + j] = ctx_->add(c[i + j], ctx_->mul(c_[i], o.c_[j]));
    }
    return from_coeffs(ctx_, lo, std::move(c), prec);
}

Laurent Laurent::scaled(Fq s) const {
    if (s.is_zero()) return zero_to(ctx_, prec_);
    Laurent x = *this;
    for (auto& v : x.c_) v = ctx_->mul(v, s.value());
    return x;
}

bool Laurent::operator==(const Laurent& o) const {
    return ctx_ == o.ctx_ && val_ == o.val_ && prec_ == o.prec_ && c_ == o.c_;
}

Laurent Laurent::inv(long long target_prec) const {
    if (is_zero()) throw zero_division("inverse of a series indistinguishable from zero");
    // x = u^v (c0 + c1 u + ...); invert the unit part to the needed order.
    long long rel = target_prec >= inf_prec ? inf_prec : target_prec + val_;
    long long self_rel = prec_ >= inf_prec ? inf_prec : prec_ - val_;
    rel = std::min(rel, self_rel);
    if (rel >= inf_prec) rel = std::max<long long>(64, 2 * static_cast<long long>(c_.size()));
    // The inverse has valuation -val_; a target below that is just 0 + O(u^N).
    if (rel <= 0) return zero_to(ctx_, target_prec);
    long long out_prec = rel - val_;
    std::vector<uint16_t> b(rel, 0);
    uint16_t c0inv = ctx_->inv(c_[0]);
    b[0] = c0inv;
    for (long long k = 1; k < rel; ++k) {
        // sum_{i=0..k} a_i b_{k-i} = 0
        uint16_t s = 0;
        long long imax = std::min<long long>(k, static_cast<long long>(c_.size()) - 1);
        for (long long i = 1; i <= imax; ++i) s = ctx_->add(s, ctx_->mul(c_[i], b[k - i]));
        b[k] = ctx_->neg(ctx_->mul(s, c0inv));
    }
    Laurent x = from_coeffs(ctx_, -val_, std::move(b), out_prec);
    if (is_exact() && c_.size() == 1) x.prec_ = inf_prec;  // monomial inverse is exact
    return x;
}

Laurent Laurent::pow(long long e, long long target_prec) const {
    if (e < 0) return inv(target_prec).pow(-e, target_prec);
    Laurent acc = one(ctx_), base = *this;
    while (e) {
        if (e & 1) acc = (acc * base).truncated(target_prec);
        e >>= 1;
        if (e) base = (base * base).truncated(target_prec);
    }
    return acc;
}

Laurent Laurent::twist(int i) const {
    if (i < 0) throw negative_twist("negative Frobenius twist");
    if (i == 0) return *this;
    long long s = 1;
    for (int k = 0; k < i; ++k) {
        s *= ctx_->q();
        if (s > (1 << 22)) throw error(errc::computational, "twist level too large");
    }
    Laurent x;
    x.ctx_ = ctx_;
    x.val_ = sat_mul(val_, s);
    x.prec_ = prec_ >= inf_prec ? inf_prec : sat_mul(prec_, s);
    if (!c_.empty()) {
        x.c_.assign((c_.size() - 1) * s + 1, 0);
        for (size_t j = 0; j < c_.size(); ++j) x.c_[j * s] = c_[j];  // coefficients are Frobenius-fixed
    } else {
        x.val_ = x.prec_;
    }
    x.normalize();
    return x;
}

Laurent Laurent::truncated(long long prec) const {
    if (prec >= prec_) return *this;
    Laurent x = *this;
    x.prec_ = prec;
    if (x.c_.empty()) x.val_ = prec;
    x.normalize();
    return x;
}

Laurent Laurent::shifted(long long e) const {
    Laurent x = *this;
    x.val_ = sat_add(x.val_, e);
    if (x.prec_ < inf_prec) x.prec_ += e;
    if (x.c_.empty()) x.val_ = x.prec_;
    return x;
}

double Laurent::norm_lg() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return -static_cast<double>(val_);
}

long long Laurent::agreement(const Laurent& a, const Laurent& b) {
    Laurent d = a - b;
    return d.is_zero() ? d.precision() : d.valuation();
}

std::string Laurent::str(int max_terms) const {
    std::ostringstream os;
    if (is_zero()) {
        os << "0";
    } else {
        int shown = 0;
        for (size_t i = 0; i < c_.size() && shown < max_terms; ++i) {
            if (c_[i] == 0) continue;
            if (shown) os << " + ";
            long long e = val_ + static_cast<long long>(i);
            std::string cs = ctx_->elem_str(c_[i]);
            if (e == 0) {
                os << cs;
            } else {
                if (!(ctx_->prime_field() && c_[i] == 1)) os << cs << "*";
                os << "u";
                if (e != 1) os << "^" << e;
            }
            ++shown;
        }
        if (shown == max_terms && c_.size() > static_cast<size_t>(max_terms)) os << " + ...";
    }
    if (!is_exact()) os << " + O(u^" << prec_ << ")";
    return os.str();
}

}  // namespace tmotive

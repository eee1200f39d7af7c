#include "tmotive/fq.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace tmotive {

namespace {

// Dense F_p[x] arithmetic on int vectors, used only at context build time.
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
    const int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) > dm) {
        int lead = a.back();
        if (lead != 0) {
            int shift = static_cast<int>(a.size()) - 1 - dm;
            for (int i = 0; i <= dm; ++i) {
                int& c = a[shift + i];
                c = ((c - lead * m[i]) % p + p) % p;
            }
        }
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                              const std::vector<int>& m, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return poly_mod(std::move(c), m, p);
}

bool poly_divides(const std::vector<int>& d, std::vector<int> a, int p) {
    // Remainder of a by monic-normalized d over F_p; true iff zero.
    std::vector<int> dd = d;
    int lead = dd.back();
    if (lead != 1) {
        int inv = 1;
        for (int k = 1; k < p; ++k)
            if (lead * k % p == 1) inv = k;
        for (int& c : dd) c = c * inv % p;
    }
    a = poly_mod(std::move(a), dd, p);
    return a.empty();
}

bool is_irreducible(const std::vector<int>& m, int p) {
    const int r = static_cast<int>(m.size()) - 1;
    if (r < 1) return false;
    if (m[0] == 0) return r == 1;  // divisible by x
    // Trial division by every monic polynomial of degree 1 .. r/2.
    for (int d = 1; 2 * d <= r; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long code = 0; code < count; ++code) {
            std::vector<int> f(d + 1, 0);
            long long c = code;
            for (int i = 0; i < d; ++i) {
                f[i] = static_cast<int>(c % p);
                c /= p;
            }
            f[d] = 1;
            if (poly_divides(f, m, p)) return false;
        }
    }
    return true;
}

std::vector<int> find_modulus(int p, int r) {
    if (r == 1) return {0, 1};
    // Smallest monic irreducible of degree r in the base-p encoding order;
    // reproduces the usual small-field table (q=4: x^2+x+1, q=8: x^3+x+1, ...).
    long long count = 1;
    for (int i = 0; i < r; ++i) count *= p;
    for (long long code = 1; code < count; ++code) {
        std::vector<int> m(r + 1, 0);
        long long c = code;
        for (int i = 0; i < r; ++i) {
            m[i] = static_cast<int>(c % p);
            c /= p;
        }
        m[r] = 1;
        if (is_irreducible(m, p)) return m;
    }
    throw error(errc::computational, "no irreducible modulus found");
}

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

bool parse_prime_power(int q, int& p, int& r) {
    if (q < 2) return false;
    for (int cand = 2; cand <= q; ++cand) {
        if (!is_prime(cand)) continue;
        if (q % cand != 0) continue;
        int rr = 0;
        int x = q;
        while (x % cand == 0) {
            x /= cand;
            ++rr;
        }
        if (x != 1) return false;
        p = cand;
        r = rr;
        return true;
    }
    return false;
}

FqContext::FqContext(int p, int r, std::vector<int> modulus)
    : p_(p), r_(r), q_(1), modulus_(std::move(modulus)) {
    for (int i = 0; i < r_; ++i) q_ *= p_;
    build_tables();
}

void FqContext::build_tables() {
    add_.assign(static_cast<size_t>(q_) * q_, 0);
    mul_.assign(static_cast<size_t>(q_) * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);

    auto decode = [&](int v) {
        std::vector<int> c(r_);
        for (int i = 0; i < r_; ++i) {
            c[i] = v % p_;
            v /= p_;
        }
        return c;
    };
    auto encode = [&](const std::vector<int>& c) {
        int v = 0;
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * p_ + (i < static_cast<int>(c.size()) ? c[i] : 0);
        return static_cast<uint16_t>(v);
    };

    for (int a = 0; a < q_; ++a) {
        std::vector<int> ca = decode(a);
        std::vector<int> na(r_);
        for (int i = 0; i < r_; ++i) na[i] = (p_ - ca[i]) % p_;
        neg_[a] = encode(na);
        for (int b = 0; b < q_; ++b) {
            std::vector<int> cb = decode(b);
            std::vector<int> s(r_);
            for (int i = 0; i < r_; ++i) s[i] = (ca[i] + cb[i]) % p_;
            add_[static_cast<size_t>(a) * q_ + b] = encode(s);

            std::vector<int> pa, pb;
            for (int i = 0; i < r_; ++i) pa.push_back(ca[i]);
            while (!pa.empty() && pa.back() == 0) pa.pop_back();
            for (int i = 0; i < r_; ++i) pb.push_back(cb[i]);
            while (!pb.empty() && pb.back() == 0) pb.pop_back();
            std::vector<int> prod = poly_mul_mod(pa, pb, modulus_, p_);
            prod.resize(r_, 0);
            mul_[static_cast<size_t>(a) * q_ + b] = encode(prod);
        }
    }
    for (int a = 1; a < q_; ++a)
        for (int b = 1; b < q_; ++b)
            if (mul_[static_cast<size_t>(a) * q_ + b] == 1) inv_[a] = static_cast<uint16_t>(b);
}

uint16_t FqContext::inv(uint16_t a) const {
    if (a == 0) throw zero_division("inverse of zero in F_q");
    return inv_[a];
}

uint16_t FqContext::pow(uint16_t a, unsigned long long e) const {
    uint16_t acc = 1, base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

uint16_t FqContext::of_int(long long n) const {
    long long m = n % p_;
    if (m < 0) m += p_;
    return static_cast<uint16_t>(m);
}

std::vector<int> FqContext::coeff_vector(uint16_t a) const {
    std::vector<int> c(r_);
    int v = a;
    for (int i = 0; i < r_; ++i) {
        c[i] = v % p_;
        v /= p_;
    }
    return c;
}

std::string FqContext::elem_str(uint16_t a) const {
    if (prime_field()) return std::to_string(a);
    std::ostringstream os;
    os << "[";
    auto c = coeff_vector(a);
    for (int i = 0; i < r_; ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
}

const FqContext* FqContext::make(int p, int r, int bound) {
    if (!is_prime(p) || r < 1) throw usage_error("q must be a prime power");
    long long q = 1;
    for (int i = 0; i < r; ++i) {
        q *= p;
        if (q > bound) throw usage_error("q exceeds the configured bound " + std::to_string(bound));
    }

    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<FqContext>> registry;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(p, r);
    auto it = registry.find(key);
    if (it == registry.end()) {
        auto modulus = find_modulus(p, r);
        if (r > 1 && !is_irreducible(modulus, p))
            throw error(errc::computational, "modulus is not irreducible");
        it = registry.emplace(key, std::unique_ptr<FqContext>(new FqContext(p, r, std::move(modulus)))).first;
    }
    return it->second.get();
}

const FqContext* FqContext::make_q(int q, int bound) {
    int p = 0, r = 0;
    if (!parse_prime_power(q, p, r)) throw usage_error(std::to_string(q) + " is not a prime power");
    return make(p, r, bound);
}

int lucas_binomial(unsigned long long m, unsigned long long j, int p) {
    // Small per-digit binomials; digits are < p <= 255.
    auto small_binom = [p](int a, int b) {
        if (b < 0 || b > a) return 0;
        long long num = 1, den = 1;
        for (int i = 0; i < b; ++i) {
            num = num * ((a - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // den invertible mod p
        long long inv = 1;
        for (int k = 1; k < p; ++k)
            if (den * k % p == 1) inv = k;
        return static_cast<int>(num * inv % p);
    };
    long long result = 1;
    while (m || j) {
        int md = static_cast<int>(m % p), jd = static_cast<int>(j % p);
        result = result * small_binom(md, jd) % p;
        if (result == 0) return 0;
        m /= p;
        j /= p;
    }
    return static_cast<int>(result);
}

}  // namespace tmotive

#include "tmotive/motive.hpp"

#include <map>

#include "json.hpp"

namespace tmotive {

namespace {

using json = nlohmann::json;

TatePoly tpoly_one(const FqContext* ctx) { return TatePoly::constant(ThetaPoly::one(ctx)); }
TatePoly tpoly_zero(const FqContext* ctx) { return TatePoly::zero(ThetaPoly::zero(ctx)); }

Mat<TatePoly> identity_tpoly(const FqContext* ctx, int n) {
    Mat<TatePoly> m(n, n, tpoly_zero(ctx));
    for (int i = 0; i < n; ++i) m.at(i, i) = tpoly_one(ctx);
    return m;
}

// Determinant by cofactor expansion; ranks in scope are tiny.
TatePoly tpoly_det(const Mat<TatePoly>& m) {
    const int n = m.rows();
    if (n == 1) return m.at(0, 0);
    TatePoly acc = tpoly_zero(m.at(0, 0).ctx());
    for (int j = 0; j < n; ++j) {
        Mat<TatePoly> minor(n - 1, n - 1, acc);
        for (int a = 1; a < n; ++a)
            for (int b = 0, bb = 0; b < n; ++b)
                if (b != j) minor.at(a - 1, bb++) = m.at(a, b);
        TatePoly term = m.at(0, j) * tpoly_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

Mat<TatePoly> tpoly_adjugate(const Mat<TatePoly>& m) {
    const int n = m.rows();
    Mat<TatePoly> adj(n, n, tpoly_zero(m.at(0, 0).ctx()));
    if (n == 1) {
        adj.at(0, 0) = tpoly_one(m.at(0, 0).ctx());
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat<TatePoly> minor(n - 1, n - 1, adj.at(0, 0));
            for (int a = 0, aa = 0; a < n; ++a) {
                if (a == i) continue;
                for (int b = 0, bb = 0; b < n; ++b)
                    if (b != j) minor.at(aa, bb++) = m.at(a, b);
                ++aa;
            }
            TatePoly cof = tpoly_det(minor);
            adj.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;  // transposed cofactors
        }
    return adj;
}

TatePoly exact_div_linear(const TatePoly& p, int level) {
    ThetaPoly rem = ThetaPoly::zero(p.ctx());
    TatePoly q = p.divide_linear(ThetaPoly::theta_q_pow(p.ctx(), level), rem);
    if (!rem.is_zero()) throw error(errc::computational, "inexact division by (t - theta^(q^level))");
    return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// caches

struct MotiveSpec::Caches {
    std::mutex mtx;
    Mat<TateRational> sinv1;  // (Phi^T)^(-1) twisted once, entries reduced
    Mat<TateRational> tinv;   // Phi^(-1), entries reduced
    Mat<TatePoly> adjT;       // adj(Phi)^T
    Fq det_unit;
    bool ready = false;
    std::map<std::pair<int, int>, PolyVec> tau_image;
    std::map<std::pair<int, int>, RatVec> sigma_inv_basis;
    std::map<std::pair<int, int>, RatVec> tau_inv_basis;
    std::map<int, Mat<TatePoly>> tau_products;  // A_i = Phi Phi^(1) ... Phi^(i-1)

    Caches() : sinv1(0, 0, TateRational()), tinv(0, 0, TateRational()), adjT(0, 0, TatePoly()) {}
};

MotiveSpec::MotiveSpec(const FqContext* c) : ctx(c), phi(0, 0, TatePoly()) {}

MotiveSpec::~MotiveSpec() = default;

int MotiveSpec::block_of(int k) const {
    int acc = 0;
    for (int b = 0; b < rank; ++b) {
        acc += blocks[b];
        if (k < acc) return b;
    }
    throw error(errc::computational, "basis index out of range");
}

int MotiveSpec::block_start(int b) const {
    int acc = 0;
    for (int i = 0; i < b; ++i) acc += blocks[i];
    return acc;
}

namespace {

void ensure_inverse_caches(const MotiveSpec& spec, MotiveSpec::Caches& c) {
    if (c.ready) return;
    const FqContext* ctx = spec.ctx;
    Mat<TatePoly> adj = tpoly_adjugate(spec.phi);
    TatePoly det = tpoly_det(spec.phi);
    TatePoly red = det;
    for (int i = 0; i < spec.dim; ++i) red = exact_div_linear(red, 0);
    if (red.degree() != 0 || red.coeff(0).deg() != 0)
        throw inconsistent_bases("det(Phi) is not a unit times (t-theta)^dim");
    Fq unit(ctx, red.coeff(0).coeff(0).value());
    Fq unit_inv = Fq::one(ctx) / unit;

    auto to_rational = [&](const TatePoly& p) {
        TateRational r = TateRational::from_poly(p.scaled(ThetaPoly::constant(ctx, unit_inv.value())));
        return r.with_den_factor(0, spec.dim).reduced();
    };
    c.tinv = Mat<TateRational>(spec.rank, spec.rank, TateRational::zero(ctx));
    Mat<TateRational> sinv(spec.rank, spec.rank, TateRational::zero(ctx));
    for (int i = 0; i < spec.rank; ++i)
        for (int j = 0; j < spec.rank; ++j) {
            c.tinv.at(i, j) = to_rational(adj.at(i, j));
            sinv.at(j, i) = c.tinv.at(i, j);  // (Phi^T)^(-1) = (Phi^(-1))^T
        }
    c.sinv1 = Mat<TateRational>(spec.rank, spec.rank, TateRational::zero(ctx));
    for (int i = 0; i < spec.rank; ++i)
        for (int j = 0; j < spec.rank; ++j) c.sinv1.at(i, j) = sinv.at(i, j).twist(1);
    c.adjT = adj.transposed();
    c.det_unit = unit;
    c.tau_products.emplace(0, identity_tpoly(ctx, spec.rank));
    c.ready = true;
}

const Mat<TatePoly>& tau_product(const MotiveSpec& spec, MotiveSpec::Caches& c, int i) {
    auto it = c.tau_products.find(i);
    if (it != c.tau_products.end()) return it->second;
    const Mat<TatePoly>& prev = tau_product(spec, c, i - 1);
    Mat<TatePoly> next = mat_mul(prev, spec.phi.map([&](const TatePoly& p) { return p.twist(i - 1); }),
                                 tpoly_zero(spec.ctx));
    return c.tau_products.emplace(i, std::move(next)).first->second;
}

}  // namespace

const Mat<TatePoly>& MotiveSpec::sigma_adjugate_transposed() const {
    std::lock_guard<std::mutex> lock(caches_->mtx);
    ensure_inverse_caches(*this, *caches_);
    return caches_->adjT;
}

Fq MotiveSpec::det_unit() const {
    std::lock_guard<std::mutex> lock(caches_->mtx);
    ensure_inverse_caches(*this, *caches_);
    return caches_->det_unit;
}

PolyVec MotiveSpec::tau_basis_image(int k, int i) const {
    std::lock_guard<std::mutex> lock(caches_->mtx);
    ensure_inverse_caches(*this, *caches_);
    auto key = std::make_pair(k, i);
    auto it = caches_->tau_image.find(key);
    if (it != caches_->tau_image.end()) return it->second;
    const Mat<TatePoly>& a = tau_product(*this, *caches_, i);
    PolyVec tw;
    tw.reserve(rank);
    for (int r = 0; r < rank; ++r) tw.push_back(g_basis[k][r].twist(i));
    PolyVec img = mat_vec(a, tw, tpoly_zero(ctx));
    return caches_->tau_image.emplace(key, std::move(img)).first->second;
}

RatVec MotiveSpec::sigma_inverse_pow(const RatVec& coords, int i) const {
    if (i < 0) throw negative_twist("sigma inverse power with negative exponent");
    Mat<TateRational> sinv1(0, 0, TateRational());
    {
        std::lock_guard<std::mutex> lock(caches_->mtx);
        ensure_inverse_caches(*this, *caches_);
        sinv1 = caches_->sinv1;
    }
    RatVec v = coords;
    for (int step = 0; step < i; ++step) {
        RatVec tw;
        tw.reserve(rank);
        for (const auto& x : v) tw.push_back(x.twist(1));
        v = mat_vec(sinv1, tw, TateRational::zero(ctx));
        for (auto& x : v) x = x.reduced();
    }
    return v;
}

RatVec MotiveSpec::sigma_inverse_basis(int k, int i) const {
    {
        std::lock_guard<std::mutex> lock(caches_->mtx);
        auto it = caches_->sigma_inv_basis.find({k, i});
        if (it != caches_->sigma_inv_basis.end()) return it->second;
    }
    RatVec base;
    if (i == 0) {
        for (const auto& p : h_basis[k]) base.push_back(TateRational::from_poly(p));
    } else {
        base = sigma_inverse_pow(sigma_inverse_basis(k, i - 1), 1);
    }
    std::lock_guard<std::mutex> lock(caches_->mtx);
    return caches_->sigma_inv_basis.emplace(std::make_pair(k, i), std::move(base)).first->second;
}

RatVec MotiveSpec::tau_inverse_normalized(const RatVec& coords, int i) const {
    if (i < 0) throw negative_twist("tau inverse power with negative exponent");
    Mat<TateRational> tinv(0, 0, TateRational());
    {
        std::lock_guard<std::mutex> lock(caches_->mtx);
        ensure_inverse_caches(*this, *caches_);
        tinv = caches_->tinv;
    }
    RatVec v = coords;
    for (int j = 0; j < i; ++j) {
        Mat<TateRational> step = tinv.map([&](const TateRational& x) { return x.twist(j); });
        v = mat_vec(step, v, TateRational::zero(ctx));
        for (auto& x : v) x = x.reduced();
    }
    return v;
}

RatVec MotiveSpec::tau_inverse_normalized_basis(int k, int i) const {
    {
        std::lock_guard<std::mutex> lock(caches_->mtx);
        auto it = caches_->tau_inv_basis.find({k, i});
        if (it != caches_->tau_inv_basis.end()) return it->second;
    }
    RatVec v;
    if (i == 0) {
        for (const auto& p : g_basis[k]) v.push_back(TateRational::from_poly(p));
    } else {
        RatVec prev = tau_inverse_normalized_basis(k, i - 1);
        Mat<TateRational> tinv(0, 0, TateRational());
        {
            std::lock_guard<std::mutex> lock(caches_->mtx);
            ensure_inverse_caches(*this, *caches_);
            tinv = caches_->tinv;
        }
        Mat<TateRational> step = tinv.map([&](const TateRational& x) { return x.twist(i - 1); });
        v = mat_vec(step, prev, TateRational::zero(ctx));
        for (auto& x : v) x = x.reduced();
    }
    std::lock_guard<std::mutex> lock(caches_->mtx);
    return caches_->tau_inv_basis.emplace(std::make_pair(k, i), std::move(v)).first->second;
}

PolyVec MotiveSpec::sigma_inverse_exact(const PolyVec& coords) const {
    const Mat<TatePoly>& adjT = sigma_adjugate_transposed();
    Fq unit_inv = Fq::one(ctx) / det_unit();
    PolyVec tw;
    tw.reserve(rank);
    for (const auto& x : coords) tw.push_back(x.twist(1));
    Mat<TatePoly> step = adjT.map([](const TatePoly& p) { return p.twist(1); });
    PolyVec y = mat_vec(step, tw, tpoly_zero(ctx));
    for (auto& x : y) {
        x = x.scaled(ThetaPoly::constant(ctx, unit_inv.value()));
        for (int j = 0; j < dim; ++j) {
            ThetaPoly rem = ThetaPoly::zero(ctx);
            TatePoly q = x.divide_linear(ThetaPoly::theta_q_pow(ctx, 1), rem);
            if (!rem.is_zero()) throw inconsistent_bases("element is not in sigma N: inexact division");
            x = q;
        }
    }
    return y;
}

// ---------------------------------------------------------------------------
// delta maps

std::vector<RatFunc> delta0_dual(const MotiveSpec& spec, const RatVec& coords, int level) {
    std::vector<RatFunc> out;
    out.reserve(spec.dim);
    for (int b = 0; b < spec.rank; ++b) {
        int l = spec.blocks[b];
        std::vector<RatFunc> tay = coords[b].taylor_at(level, l);
        for (int s = l - 1; s >= 0; --s) out.push_back(tay[s]);  // highest derivative first
    }
    return out;
}

std::vector<RatFunc> delta0_motive(const MotiveSpec& spec, const RatVec& coords, int level) {
    std::vector<RatFunc> out;
    out.reserve(spec.dim);
    for (int b = 0; b < spec.rank; ++b) {
        int l = spec.blocks[b];
        std::vector<RatFunc> tay = coords[b].taylor_at(level, l);
        for (int s = 0; s < l; ++s) out.push_back(tay[s]);  // lowest derivative first
    }
    return out;
}

std::vector<RatFunc> delta0_dual(const MotiveSpec& spec, const PolyVec& coords) {
    RatVec v;
    v.reserve(coords.size());
    for (const auto& p : coords) v.push_back(TateRational::from_poly(p));
    return delta0_dual(spec, v, 0);
}

std::vector<Laurent> delta0_dual_num(const MotiveSpec& spec, const NumVec& coords) {
    std::vector<Laurent> out;
    out.reserve(spec.dim);
    const FqContext* ctx = spec.ctx;
    Laurent at = Laurent::theta(ctx);
    for (int b = 0; b < spec.rank; ++b) {
        int l = spec.blocks[b];
        std::vector<Laurent> tay(l, Laurent::zero(ctx));
        TateNum cur = coords[b];
        for (int s = 0; s < l; ++s) {
            Laurent rem = Laurent::zero(ctx);
            cur = cur.divide_linear(at, rem);
            tay[s] = scalar::cap_error(rem, coords[b].tail_lg());
        }
        for (int s = l - 1; s >= 0; --s) out.push_back(tay[s]);
    }
    return out;
}

std::vector<std::vector<RatFunc>> sigma_peel_table(const MotiveSpec& spec, const PolyVec& coords,
                                                   int max_level) {
    std::vector<std::vector<RatFunc>> table;
    PolyVec current = coords;
    for (int level = 0; level <= max_level; ++level) {
        bool all_zero = true;
        for (const auto& x : current) all_zero = all_zero && x.is_zero();
        if (all_zero) return table;
        std::vector<RatFunc> c = delta0_dual(spec, current);
        table.push_back(c);
        PolyVec rem = current;
        for (int k = 0; k < spec.dim; ++k) {
            if (c[k].is_zero()) continue;
            if (!c[k].is_polynomial())
                throw inconsistent_bases("sigma-basis coefficient is not polynomial");
            for (int r = 0; r < spec.rank; ++r)
                rem[r] = rem[r] - spec.h_basis[k][r].scaled(c[k].num());
        }
        current = spec.sigma_inverse_exact(rem);
    }
    throw non_convergent("sigma peel did not terminate");
}

std::vector<RatFunc> delta1_dual(const MotiveSpec& spec, const PolyVec& coords, int max_level) {
    // The level-j peel coefficients are already the j-th twists of the
    // sigma-expansion coefficients, which is exactly what delta_1 sums.
    auto table = sigma_peel_table(spec, coords, max_level);
    std::vector<RatFunc> out(spec.dim, RatFunc::zero(spec.ctx));
    for (size_t j = 0; j < table.size(); ++j)
        for (int k = 0; k < spec.dim; ++k) out[k] = out[k] + table[j][k];
    return out;
}

PolyVec times_t(const PolyVec& coords) {
    PolyVec out;
    out.reserve(coords.size());
    for (const auto& p : coords) {
        TatePoly t = TatePoly::monomial(ThetaPoly::one(p.ctx()), 1);
        out.push_back(t * p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// tau-basis decomposition

namespace {

template <class S>
struct TauSystem {
    std::vector<std::vector<S>> cols;  // column-major: per unknown, coefficient slots
    std::vector<S> rhs;
    int unknowns = 0;
};

template <class S, class ToScalar>
TauSystem<S> build_tau_system(const MotiveSpec& spec, const std::vector<Tate<S>>& coords,
                              int max_level, ToScalar to_scalar, S zero) {
    std::vector<PolyVec> images;
    images.reserve(static_cast<size_t>(max_level + 1) * spec.dim);
    for (int i = 0; i <= max_level; ++i)
        for (int k = 0; k < spec.dim; ++k) images.push_back(spec.tau_basis_image(k, i));
    int maxdeg = 0;
    for (const auto& c : coords) maxdeg = std::max(maxdeg, c.degree());
    for (const auto& img : images)
        for (const auto& p : img) maxdeg = std::max(maxdeg, p.degree());

    int slots = spec.rank * (maxdeg + 1);
    TauSystem<S> sys;
    sys.unknowns = static_cast<int>(images.size());
    sys.cols.assign(sys.unknowns, std::vector<S>(slots, zero));
    sys.rhs.assign(slots, zero);
    for (int u = 0; u < sys.unknowns; ++u)
        for (int r = 0; r < spec.rank; ++r)
            for (int a = 0; a <= images[u][r].degree(); ++a)
                sys.cols[u][r * (maxdeg + 1) + a] = to_scalar(images[u][r].coeff(a));
    for (int r = 0; r < spec.rank && r < static_cast<int>(coords.size()); ++r)
        for (int a = 0; a <= coords[r].degree(); ++a)
            sys.rhs[r * (maxdeg + 1) + a] = coords[r].coeff(a);
    return sys;
}

}  // namespace

std::vector<std::vector<RatFunc>> decompose_tau(const MotiveSpec& spec,
                                                const std::vector<TateRat>& coords, int max_level) {
    const FqContext* ctx = spec.ctx;
    auto sys = build_tau_system<RatFunc>(
        spec, coords, max_level, [](const ThetaPoly& p) { return RatFunc(p); }, RatFunc::zero(ctx));
    const int n = sys.unknowns, m = static_cast<int>(sys.rhs.size());
    // Row-major Gaussian elimination with the rhs carried along.
    std::vector<std::vector<RatFunc>> a(m, std::vector<RatFunc>(n, RatFunc::zero(ctx)));
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < n; ++col) a[row][col] = sys.cols[col][row];
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int piv = -1;
        for (int i = row; i < m; ++i)
            if (!a[i][col].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[row]);
        std::swap(sys.rhs[piv], sys.rhs[row]);
        RatFunc inv = a[row][col].inverse();
        for (int j = col; j < n; ++j) a[row][j] = a[row][j] * inv;
        sys.rhs[row] = sys.rhs[row] * inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            RatFunc f = a[i][col];
            for (int j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[row][j];
            sys.rhs[i] = sys.rhs[i] - f * sys.rhs[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (int i = row; i < m; ++i)
        if (!sys.rhs[i].is_zero())
            throw decomposition_failure("tau-basis decomposition inconsistent at the given level cap");
    std::vector<RatFunc> x(n, RatFunc::zero(ctx));
    for (int i = 0; i < row; ++i) x[pivot_col[i]] = sys.rhs[i];
    std::vector<std::vector<RatFunc>> out(max_level + 1,
                                          std::vector<RatFunc>(spec.dim, RatFunc::zero(ctx)));
    for (int i = 0; i <= max_level; ++i)
        for (int k = 0; k < spec.dim; ++k) out[i][k] = x[static_cast<size_t>(i) * spec.dim + k];
    return out;
}

std::vector<std::vector<Laurent>> decompose_tau_num(const MotiveSpec& spec, const NumVec& coords,
                                                    int max_level, double tol_lg) {
    const FqContext* ctx = spec.ctx;
    long long prec = 1;
    for (const auto& c : coords)
        for (int a0 = 0; a0 <= c.degree(); ++a0)
            if (!c.coeff(a0).is_exact()) prec = std::max(prec, c.coeff(a0).precision());
    if (prec == 1) prec = static_cast<long long>(-tol_lg) + 16;
    auto sys = build_tau_system<Laurent>(
        spec, coords, max_level, [&](const ThetaPoly& p) { return Laurent::from_poly(p); },
        Laurent::zero(ctx));
    const int n = sys.unknowns, m = static_cast<int>(sys.rhs.size());
    std::vector<std::vector<Laurent>> a(m, std::vector<Laurent>(n, Laurent::zero(ctx)));
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < n; ++col) a[row][col] = sys.cols[col][row];
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int piv = -1;
        double best = tol_lg;
        for (int i = row; i < m; ++i)
            if (!a[i][col].is_zero() && a[i][col].norm_lg() > best) {
                best = a[i][col].norm_lg();
                piv = i;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[row]);
        std::swap(sys.rhs[piv], sys.rhs[row]);
        Laurent inv = a[row][col].inv(prec - static_cast<long long>(a[row][col].valuation()));
        for (int j = col; j < n; ++j) a[row][j] = a[row][j] * inv;
        sys.rhs[row] = sys.rhs[row] * inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            Laurent f = a[i][col];
            for (int j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[row][j];
            sys.rhs[i] = sys.rhs[i] - f * sys.rhs[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (int i = row; i < m; ++i)
        if (sys.rhs[i].norm_lg() >= tol_lg)
            throw decomposition_failure(
                "numeric tau-basis decomposition inconsistent; raise the level cap");
    std::vector<Laurent> x(n, Laurent::zero(ctx));
    for (int i = 0; i < row; ++i) x[pivot_col[i]] = sys.rhs[i];
    std::vector<std::vector<Laurent>> out(max_level + 1,
                                          std::vector<Laurent>(spec.dim, Laurent::zero(ctx)));
    for (int i = 0; i <= max_level; ++i)
        for (int k = 0; k < spec.dim; ++k) out[i][k] = x[static_cast<size_t>(i) * spec.dim + k];
    return out;
}

Laurent delta_m1z_num(const MotiveSpec& spec, const NumVec& coords, const std::vector<Laurent>& z,
                      int max_level, double tol_lg) {
    auto c = decompose_tau_num(spec, coords, max_level, tol_lg);
    Laurent acc = Laurent::zero_to(spec.ctx, static_cast<long long>(-tol_lg));
    for (int i = 0; i <= max_level; ++i)
        for (int k = 0; k < spec.dim; ++k) {
            if (c[i][k].is_zero()) continue;
            acc = acc + c[i][k] * z[k].twist(i);
        }
    return acc;
}

// ---------------------------------------------------------------------------
// construction

void MotiveSpec::verify_invariants() const {
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j)
            if (!phi.at(i, j).is_zero()) throw inconsistent_bases("Phi is not lower triangular");
    for (int b = 0; b < rank; ++b) {
        TatePoly d = phi.at(b, b);
        for (int s = 0; s < blocks[b]; ++s) d = exact_div_linear(d, 0);
        if (d.degree() != 0 || d.coeff(0).deg() != 0)
            throw inconsistent_bases("diagonal of Phi is not unit*(t-theta)^l");
    }
    // Row i and column j of Phi must be divisible by (t-theta)^(l_i) resp.
    // (t-theta)^(l_j): both hyperderivative stacks factor through the images.
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            TatePoly e = phi.at(i, j);
            if (e.is_zero()) continue;
            int need = std::max(blocks[i], blocks[j]);
            int have = 0;
            TatePoly cur = e;
            while (have < need) {
                ThetaPoly rem = ThetaPoly::zero(ctx);
                TatePoly q = cur.divide_linear(ThetaPoly::theta(ctx), rem);
                if (!rem.is_zero()) break;
                cur = q;
                ++have;
            }
            if (have < need)
                throw inconsistent_bases("Phi entry not divisible by the required (t-theta) power");
        }
}

void MotiveSpec::finish_construction() {
    caches_ = std::make_unique<Caches>();
    int total = 0;
    for (int b : blocks) total += b;
    if (total != dim || static_cast<int>(blocks.size()) != rank)
        throw inconsistent_bases("block sizes do not sum to the dimension");
    verify_invariants();
    // Pure sigma-basis: h_k = (t-theta)^(block_end - k - 1) n_b.
    h_basis.assign(dim, PolyVec());
    for (int b = 0; b < rank; ++b) {
        int start = block_start(b);
        for (int j = 0; j < blocks[b]; ++j) {
            int k = start + j;
            PolyVec v(rank, tpoly_zero(ctx));
            TatePoly f = tpoly_one(ctx);
            for (int s = 0; s < blocks[b] - 1 - j; ++s) f = f * t_minus_theta(ctx);
            v[b] = f;
            h_basis[k] = std::move(v);
        }
    }
    if (g_basis.empty()) solve_tau_basis();
    // The delta_0 stacks of both bases must hit the standard vectors.
    for (int k = 0; k < dim; ++k) {
        auto sh = delta0_dual(*this, h_basis[k]);
        RatVec gr;
        for (const auto& p : g_basis[k]) gr.push_back(TateRational::from_poly(p));
        auto sg = delta0_motive(*this, gr, 0);
        for (int j = 0; j < dim; ++j) {
            RatFunc want = (j == k) ? RatFunc::one(ctx) : RatFunc::zero(ctx);
            if (!(sh[j] == want)) throw inconsistent_bases("sigma-basis stack is not the standard vector");
            if (!(sg[j] == want)) throw inconsistent_bases("tau-basis stack is not the standard vector");
        }
    }
}

std::shared_ptr<const MotiveSpec> MotiveSpec::carlitz_tensor(int n, const FqContext* ctx) {
    if (n < 1) throw usage_error("tensor power must be positive");
    auto spec = std::shared_ptr<MotiveSpec>(new MotiveSpec(ctx));
    spec->rank = 1;
    spec->dim = n;
    spec->blocks = {n};
    TatePoly f = tpoly_one(ctx);
    for (int i = 0; i < n; ++i) f = f * t_minus_theta(ctx);
    spec->phi = Mat<TatePoly>(1, 1, f);
    spec->label = "carlitz_tensor(" + std::to_string(n) + ")";
    spec->g_basis.assign(n, PolyVec());
    TatePoly g = tpoly_one(ctx);
    for (int k = 0; k < n; ++k) {
        spec->g_basis[k] = {g};
        g = g * t_minus_theta(ctx);
    }
    spec->finish_construction();
    return spec;
}

std::shared_ptr<const MotiveSpec> MotiveSpec::mzv_star(const std::vector<int>& s,
                                                       const std::vector<TatePoly>& h_twisted,
                                                       const FqContext* ctx) {
    int r = static_cast<int>(s.size());
    if (r < 1) throw usage_error("empty composition");
    for (int v : s)
        if (v < 1) throw usage_error("composition entries must be positive");
    if (static_cast<int>(h_twisted.size()) != r - 1)
        throw usage_error("need one Anderson-Thakur factor per adjacent block pair");
    auto spec = std::shared_ptr<MotiveSpec>(new MotiveSpec(ctx));
    spec->rank = r;
    spec->blocks.assign(r, 0);
    for (int j = 0; j < r; ++j) {
        int acc = 0;  // block j carries the partial weight s_1 + ... + s_(r-j)
        for (int k = 0; k < r - j; ++k) acc += s[k];
        spec->blocks[j] = acc;
    }
    spec->dim = 0;
    for (int b : spec->blocks) spec->dim += b;
    spec->phi = Mat<TatePoly>(r, r, tpoly_zero(ctx));
    std::vector<TatePoly> diag(r, tpoly_one(ctx));
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < spec->blocks[j]; ++i) diag[j] = diag[j] * t_minus_theta(ctx);
    for (int j = 0; j < r; ++j)
        for (int l = 0; l <= j; ++l) {
            TatePoly e = diag[j];
            for (int k = l; k < j; ++k) e = e * h_twisted[k] * diag[k];
            if ((j - l) % 2 == 1) e = -e;
            spec->phi.at(j, l) = e;
        }
    std::string lbl = "mzv_star(";
    for (int i = 0; i < r; ++i) lbl += (i ? "," : "") + std::to_string(s[i]);
    spec->label = lbl + ")";
    spec->finish_construction();
    return spec;
}

// ---------------------------------------------------------------------------
// tau-basis solve: find g-coordinates compatible with the t-action extracted
// from the sigma side, normalized so the motive-side stack of g_k is e_k.
// Everything is F_q-linear in the unknown coefficients (Frobenius twisting is
// F_q-linear), so this is one dense linear solve over F_q.

namespace {

struct FqLinearSystem {
    int vars;
    std::vector<std::vector<uint16_t>> rows;
    std::vector<uint16_t> rhs;
    const FqContext* ctx;

    FqLinearSystem(const FqContext* c, int v) : vars(v), ctx(c) {}

    void add_row(std::vector<uint16_t> row, uint16_t b) {
        rows.push_back(std::move(row));
        rhs.push_back(b);
    }

    // Row echelon; returns false on inconsistency.  Free variables are set 0.
    bool solve(std::vector<uint16_t>& x) {
        int m = static_cast<int>(rows.size());
        std::vector<int> pivot_col;
        int row = 0;
        for (int col = 0; col < vars && row < m; ++col) {
            int piv = -1;
            for (int i = row; i < m; ++i)
                if (rows[i][col] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(rows[piv], rows[row]);
            std::swap(rhs[piv], rhs[row]);
            uint16_t inv = ctx->inv(rows[row][col]);
            for (int j = col; j < vars; ++j) rows[row][j] = ctx->mul(rows[row][j], inv);
            rhs[row] = ctx->mul(rhs[row], inv);
            for (int i = 0; i < m; ++i) {
                if (i == row || rows[i][col] == 0) continue;
                uint16_t f = rows[i][col];
                for (int j = col; j < vars; ++j)
                    rows[i][j] = ctx->sub(rows[i][j], ctx->mul(f, rows[row][j]));
                rhs[i] = ctx->sub(rhs[i], ctx->mul(f, rhs[row]));
            }
            pivot_col.push_back(col);
            ++row;
        }
        for (int i = row; i < m; ++i)
            if (rhs[i] != 0) return false;
        x.assign(vars, 0);
        for (int i = 0; i < row; ++i) x[pivot_col[i]] = rhs[i];
        return true;
    }
};

}  // namespace

void MotiveSpec::solve_tau_basis() {
    std::vector<std::vector<std::vector<RatFunc>>> tables;
    int max_tau = 0;
    for (int k = 0; k < dim; ++k) {
        tables.push_back(sigma_peel_table(*this, times_t(h_basis[k]), 2 * dim + 4));
        max_tau = std::max(max_tau, static_cast<int>(tables.back().size()) - 1);
    }
    // The t-action matrices are the transposed peel tables.
    std::vector<Mat<TatePoly>> action(max_tau + 1, Mat<TatePoly>(dim, dim, tpoly_zero(ctx)));
    for (int k = 0; k < dim; ++k)
        for (size_t lvl = 0; lvl < tables[k].size(); ++lvl)
            for (int m = 0; m < dim; ++m) {
                const RatFunc& c = tables[k][lvl][m];
                if (c.is_zero()) continue;
                if (!c.is_polynomial()) throw inconsistent_bases("t-action coefficient not polynomial");
                action[lvl].at(m, k) = TatePoly::constant(c.num());
            }

    int phi_thdeg = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            for (int a = 0; a <= phi.at(i, j).degree(); ++a)
                phi_thdeg = std::max(phi_thdeg, phi.at(i, j).coeff(a).deg());
    for (int attempt = 0; attempt < 3; ++attempt) {
        int grow = 1 << attempt;
        int dt = (dim + 1) * grow;
        int dth = (dim + phi_thdeg + 1) * grow;
        if (try_solve_tau_basis(action, max_tau, dt, dth)) return;
    }
    throw non_polynomial_basis("tau-basis solve failed at all degree bounds");
}

bool MotiveSpec::try_solve_tau_basis(const std::vector<Mat<TatePoly>>& action, int max_tau, int dt,
                                     int dth) {
    const int q = ctx->q();
    std::vector<long long> qpow(max_tau + 1, 1);
    for (int s = 1; s <= max_tau; ++s) qpow[s] = qpow[s - 1] * q;

    std::vector<Mat<TatePoly>> aprod;
    {
        std::lock_guard<std::mutex> lock(caches_->mtx);
        ensure_inverse_caches(*this, *caches_);
        for (int s = 0; s <= max_tau; ++s) aprod.push_back(tau_product(*this, *caches_, s));
    }
    int adeg_t = 0, adeg_th = 0, act_th = 0;
    for (const auto& mat : aprod)
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                adeg_t = std::max(adeg_t, mat.at(i, j).degree());
                for (int a = 0; a <= mat.at(i, j).degree(); ++a)
                    adeg_th = std::max(adeg_th, mat.at(i, j).coeff(a).deg());
            }
    for (const auto& mat : action)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (!mat.at(i, j).is_zero()) act_th = std::max(act_th, mat.at(i, j).coeff(0).deg());

    const long long et = dt + adeg_t + 2;
    const long long eth = static_cast<long long>(dth) * qpow[max_tau] + adeg_th + act_th + 2;
    if (eth > 4096 || static_cast<long long>(dim) * rank * (dt + 1) * (dth + 1) > 4000) return false;

    const int vars = dim * rank * (dt + 1) * (dth + 1);
    auto vid = [&](int kappa, int rho, int a, int b) {
        return ((kappa * rank + rho) * (dt + 1) + a) * (dth + 1) + b;
    };
    auto slot_index = [&](int kappa, int rho, long long a, long long b) -> long long {
        return ((static_cast<long long>(kappa) * rank + rho) * (et + 1) + a) * (eth + 1) + b;
    };
    std::map<long long, std::vector<std::pair<int, uint16_t>>> slots;
    auto add_term = [&](long long sid, int var, uint16_t coef) {
        if (coef != 0) slots[sid].push_back({var, coef});
    };

    for (int kappa = 0; kappa < dim; ++kappa) {
        int b = block_of(kappa);
        bool block_end = (kappa + 1 == block_start(b) + blocks[b]);
        for (int rho = 0; rho < rank; ++rho)
            for (int a = 0; a <= dt; ++a)
                for (int bb = 0; bb <= dth; ++bb) {
                    // (t - theta) g_kappa ...
                    add_term(slot_index(kappa, rho, a + 1, bb), vid(kappa, rho, a, bb), 1);
                    add_term(slot_index(kappa, rho, a, bb + 1), vid(kappa, rho, a, bb), ctx->neg(1));
                    // ... equals g_(kappa+1) within a block ...
                    if (!block_end)
                        add_term(slot_index(kappa, rho, a, bb), vid(kappa + 1, rho, a, bb),
                                 ctx->neg(1));
                }
        // ... plus sum_s sum_m (E_s)_(kappa,m) tau^s(g_m).
        for (int s = 1; s < static_cast<int>(action.size()); ++s)
            for (int m = 0; m < dim; ++m) {
                const TatePoly& e = action[s].at(kappa, m);
                if (e.is_zero()) continue;
                const ThetaPoly ec = e.coeff(0);
                for (int rho = 0; rho < rank; ++rho)
                    for (int rho2 = 0; rho2 < rank; ++rho2) {
                        const TatePoly& ap = aprod[s].at(rho, rho2);
                        for (int a2 = 0; a2 <= ap.degree(); ++a2) {
                            ThetaPoly apc = ap.coeff(a2);
                            for (int b2 = 0; b2 <= apc.deg(); ++b2) {
                                uint16_t c2 = apc.coeff(b2).value();
                                if (c2 == 0) continue;
                                for (int b3 = 0; b3 <= ec.deg(); ++b3) {
                                    uint16_t c3 = ec.coeff(b3).value();
                                    if (c3 == 0) continue;
                                    uint16_t cc = ctx->neg(ctx->mul(c2, c3));
                                    for (int a = 0; a <= dt; ++a)
                                        for (int bb = 0; bb <= dth; ++bb)
                                            add_term(slot_index(kappa, rho, a + a2,
                                                                static_cast<long long>(bb) * qpow[s] +
                                                                    b2 + b3),
                                                     vid(m, rho2, a, bb), cc);
                                }
                            }
                        }
                    }
            }
    }

    FqLinearSystem sys(ctx, vars);
    for (auto& [sid, terms] : slots) {
        (void)sid;
        std::vector<uint16_t> row(vars, 0);
        for (auto [var, coef] : terms) row[var] = ctx->add(row[var], coef);
        bool nonzero = false;
        for (auto v : row) nonzero = nonzero || v != 0;
        if (nonzero) sys.add_row(std::move(row), 0);
    }
    // Normalization: the motive-side stack of g_kappa is e_kappa, as an
    // identity in theta per derivative order.
    for (int kappa = 0; kappa < dim; ++kappa)
        for (int bprime = 0; bprime < rank; ++bprime)
            for (int sprime = 0; sprime < blocks[bprime]; ++sprime) {
                bool want_one = (kappa == block_start(bprime) + sprime);
                std::map<long long, std::vector<std::pair<int, uint16_t>>> theta_slots;
                for (int a = sprime; a <= dt; ++a) {
                    int binom = lucas_binomial(a, sprime, ctx->p());
                    if (binom == 0) continue;
                    for (int bb = 0; bb <= dth; ++bb)
                        theta_slots[a - sprime + bb].push_back(
                            {vid(kappa, bprime, a, bb), ctx->of_int(binom)});
                }
                for (auto& [e, terms] : theta_slots) {
                    std::vector<uint16_t> row(vars, 0);
                    for (auto [var, coef] : terms) row[var] = ctx->add(row[var], coef);
                    sys.add_row(std::move(row), (e == 0 && want_one) ? 1 : 0);
                }
            }

    std::vector<uint16_t> x;
    if (!sys.solve(x)) return false;

    g_basis.assign(dim, PolyVec(rank, tpoly_zero(ctx)));
    for (int kappa = 0; kappa < dim; ++kappa)
        for (int rho = 0; rho < rank; ++rho) {
            std::vector<ThetaPoly> tc;
            for (int a = 0; a <= dt; ++a) {
                std::vector<uint16_t> cs(dth + 1);
                for (int bb = 0; bb <= dth; ++bb) cs[bb] = x[vid(kappa, rho, a, bb)];
                tc.push_back(ThetaPoly(ctx, std::move(cs)));
            }
            g_basis[kappa][rho] = TatePoly::from_parts(ThetaPoly::zero(ctx), std::move(tc), neg_inf);
        }

    // Verify the defining relations directly.
    for (int kappa = 0; kappa < dim; ++kappa) {
        PolyVec lhs = times_t(g_basis[kappa]);
        PolyVec rhs(rank, tpoly_zero(ctx));
        for (int s = 0; s < static_cast<int>(action.size()); ++s)
            for (int m = 0; m < dim; ++m) {
                const TatePoly& e = action[s].at(kappa, m);
                if (e.is_zero()) continue;
                PolyVec gm;
                for (int r2 = 0; r2 < rank; ++r2) gm.push_back(g_basis[m][r2].twist(s));
                PolyVec img = mat_vec(aprod[s], gm, tpoly_zero(ctx));
                for (int r2 = 0; r2 < rank; ++r2) rhs[r2] = rhs[r2] + img[r2] * e;
            }
        for (int r2 = 0; r2 < rank; ++r2)
            if (!(lhs[r2] == rhs[r2])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json theta_to_json(const ThetaPoly& p) {
    json a = json::array();
    for (int i = 0; i <= p.deg(); ++i) {
        if (p.ctx()->prime_field())
            a.push_back(p.coeff(i).value());
        else
            a.push_back(p.ctx()->coeff_vector(p.coeff(i).value()));
    }
    return a;
}

ThetaPoly theta_from_json(const FqContext* ctx, const json& a) {
    std::vector<uint16_t> c;
    for (const auto& v : a) {
        if (v.is_array()) {
            int enc = 0;
            for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
                enc = enc * ctx->p() + v[i].get<int>();
            c.push_back(static_cast<uint16_t>(enc));
        } else {
            c.push_back(static_cast<uint16_t>(v.get<int>()));
        }
    }
    return ThetaPoly(ctx, std::move(c));
}

json tate_to_json(const TatePoly& p) {
    json a = json::array();
    for (int i = 0; i <= p.degree(); ++i) a.push_back(theta_to_json(p.coeff(i)));
    return a;
}

TatePoly tate_from_json(const FqContext* ctx, const json& a) {
    std::vector<ThetaPoly> c;
    for (const auto& v : a) c.push_back(theta_from_json(ctx, v));
    return TatePoly::from_parts(ThetaPoly::zero(ctx), std::move(c), neg_inf);
}

}  // namespace

std::string motive_to_json(const MotiveSpec& spec) {
    json j;
    j["q"] = spec.ctx->q();
    j["p"] = spec.ctx->p();
    j["ext_degree"] = spec.ctx->r();
    j["modulus"] = spec.ctx->modulus();
    j["rank"] = spec.rank;
    j["dim"] = spec.dim;
    j["blocks"] = spec.blocks;
    j["label"] = spec.label;
    json phi = json::array();
    for (int i = 0; i < spec.rank; ++i) {
        json row = json::array();
        for (int jj = 0; jj < spec.rank; ++jj) row.push_back(tate_to_json(spec.phi.at(i, jj)));
        phi.push_back(row);
    }
    j["phi"] = phi;
    json g = json::array();
    for (const auto& vec : spec.g_basis) {
        json v = json::array();
        for (const auto& p : vec) v.push_back(tate_to_json(p));
        g.push_back(v);
    }
    j["tau_basis"] = g;
    return j.dump();
}

SpecPtr motive_from_json(const std::string& text) {
    json j = json::parse(text);
    const FqContext* ctx = FqContext::make(j["p"].get<int>(), j["ext_degree"].get<int>());
    auto spec = std::shared_ptr<MotiveSpec>(new MotiveSpec(ctx));
    spec->rank = j["rank"].get<int>();
    spec->dim = j["dim"].get<int>();
    spec->blocks = j["blocks"].get<std::vector<int>>();
    spec->label = j.value("label", "");
    spec->phi = Mat<TatePoly>(spec->rank, spec->rank, tpoly_zero(ctx));
    for (int i = 0; i < spec->rank; ++i)
        for (int jj = 0; jj < spec->rank; ++jj)
            spec->phi.at(i, jj) = tate_from_json(ctx, j["phi"][i][jj]);
    if (j.contains("tau_basis")) {
        for (const auto& v : j["tau_basis"]) {
            PolyVec vec;
            for (const auto& p : v) vec.push_back(tate_from_json(ctx, p));
            spec->g_basis.push_back(std::move(vec));
        }
    }
    spec->finish_construction();
    return spec;
}

}  // namespace tmotive

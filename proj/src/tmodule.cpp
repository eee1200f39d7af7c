#include "tmotive/tmodule.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace tmotive {

namespace {

Mat<RatFunc> rf_identity(const FqContext* ctx, int n) {
    Mat<RatFunc> m(n, n, RatFunc::zero(ctx));
    for (int i = 0; i < n; ++i) m.at(i, i) = RatFunc::one(ctx);
    return m;
}

Mat<RatFunc> to_ratfunc(const Mat<ThetaPoly>& m) {
    return m.map([](const ThetaPoly& p) { return RatFunc(p); });
}

double mat_norm_lg(const Mat<RatFunc>& m) {
    double v = neg_inf;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v = std::max(v, m.at(i, j).norm_lg());
    return v;
}

std::vector<Laurent> twist_vec(const std::vector<Laurent>& z, int i) {
    std::vector<Laurent> out;
    out.reserve(z.size());
    for (const auto& x : z) out.push_back(x.twist(i));
    return out;
}

}  // namespace

Mat<RatFunc> mat_rf_twist(const Mat<RatFunc>& m, int i) {
    return m.map([i](const RatFunc& f) { return f.twist(i); });
}

RatFunc rat_det(Mat<RatFunc> m) {
    const FqContext* ctx = m.at(0, 0).ctx();
    int n = m.rows();
    RatFunc det = RatFunc::one(ctx);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (!m.at(row, col).is_zero()) {
                piv = row;
                break;
            }
        if (piv < 0) return RatFunc::zero(ctx);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det = det * m.at(col, col);
        RatFunc inv = m.at(col, col).inverse();
        for (int row = col + 1; row < n; ++row) {
            if (m.at(row, col).is_zero()) continue;
            RatFunc f = m.at(row, col) * inv;
            for (int j = col; j < n; ++j) m.at(row, j) = m.at(row, j) - f * m.at(col, j);
        }
    }
    return det;
}

struct TModule::Cache {
    std::mutex mtx;
    std::map<int, Mat<RatFunc>> q, p;
};

TModule::~TModule() = default;
TModule::TModule(TModule&&) noexcept = default;

TModule::TModule(SpecPtr spec)
    : spec_(std::move(spec)), dt_(0, 0, ThetaPoly()), cache_(std::make_unique<Cache>()) {
    const FqContext* ctx = spec_->ctx;
    const int d = spec_->dim;
    // Extract the t-action by sigma-peeling t * h_k; the action matrices are
    // the transposed peel tables.
    std::vector<std::vector<std::vector<RatFunc>>> tables;
    int max_tau = 0;
    for (int k = 0; k < d; ++k) {
        tables.push_back(sigma_peel_table(*spec_, times_t(spec_->h_basis[k]), 2 * d + 4));
        max_tau = std::max(max_tau, static_cast<int>(tables.back().size()) - 1);
    }
    dt_ = Mat<ThetaPoly>(d, d, ThetaPoly::zero(ctx));
    e_.assign(max_tau, Mat<ThetaPoly>(d, d, ThetaPoly::zero(ctx)));
    for (int k = 0; k < d; ++k)
        for (size_t lvl = 0; lvl < tables[k].size(); ++lvl)
            for (int m = 0; m < d; ++m) {
                const RatFunc& c = tables[k][lvl][m];
                if (c.is_zero()) continue;
                if (!c.is_polynomial())
                    throw inconsistent_bases("t-action coefficient is not polynomial");
                if (lvl == 0)
                    dt_.at(m, k) = c.num();
                else
                    e_[lvl - 1].at(m, k) = c.num();
            }

    // d[t] - theta I must be nilpotent.
    Mat<ThetaPoly> nil = dt_;
    for (int i = 0; i < d; ++i) nil.at(i, i) = nil.at(i, i) - ThetaPoly::theta(ctx);
    Mat<ThetaPoly> pw = nil;
    for (int i = 1; i < d; ++i) pw = mat_mul(pw, nil, ThetaPoly::zero(ctx));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!pw.at(i, j).is_zero()) throw inconsistent_bases("d[t] - theta I is not nilpotent");

    // Cross-check the dual action against the tau-basis: t g_k must expand
    // with the same matrices.
    for (int k = 0; k < d; ++k) {
        PolyVec lhs = times_t(spec_->g_basis[k]);
        PolyVec rhs(spec_->rank, TatePoly::zero(ThetaPoly::zero(ctx)));
        for (int m = 0; m < d; ++m) {
            if (!dt_.at(k, m).is_zero())
                for (int r = 0; r < spec_->rank; ++r)
                    rhs[r] = rhs[r] + spec_->g_basis[m][r].scaled(dt_.at(k, m));
            for (int s = 1; s <= max_tau; ++s) {
                if (e_[s - 1].at(k, m).is_zero()) continue;
                PolyVec img = spec_->tau_basis_image(m, s);
                for (int r = 0; r < spec_->rank; ++r)
                    rhs[r] = rhs[r] + img[r].scaled(e_[s - 1].at(k, m));
            }
        }
        for (int r = 0; r < spec_->rank; ++r)
            if (!(lhs[r] == rhs[r]))
                throw inconsistent_bases("tau- and sigma-side t-actions disagree");
    }
}

Mat<RatFunc> TModule::exp_coefficient(int i) const {
    if (i < 0) throw negative_twist("coefficient index must be nonnegative");
    {
        std::lock_guard<std::mutex> lock(cache_->mtx);
        auto it = cache_->q.find(i);
        if (it != cache_->q.end()) return it->second;
    }
    const int d = spec_->dim;
    Mat<RatFunc> q(d, d, RatFunc::zero(ctx()));
    for (int k = 0; k < d; ++k) {
        auto row = delta0_motive(*spec_, spec_->tau_inverse_normalized_basis(k, i), i);
        for (int j = 0; j < d; ++j) q.at(k, j) = row[j];
    }
    std::lock_guard<std::mutex> lock(cache_->mtx);
    return cache_->q.emplace(i, std::move(q)).first->second;
}

Mat<RatFunc> TModule::log_coefficient(int i) const {
    if (i < 0) throw negative_twist("coefficient index must be nonnegative");
    {
        std::lock_guard<std::mutex> lock(cache_->mtx);
        auto it = cache_->p.find(i);
        if (it != cache_->p.end()) return it->second;
    }
    const int d = spec_->dim;
    Mat<RatFunc> p(d, d, RatFunc::zero(ctx()));
    for (int k = 0; k < d; ++k) {
        auto col = delta0_dual(*spec_, spec_->sigma_inverse_basis(k, i), 0);
        for (int j = 0; j < d; ++j) p.at(j, k) = col[j];
    }
    std::lock_guard<std::mutex> lock(cache_->mtx);
    return cache_->p.emplace(i, std::move(p)).first->second;
}

std::vector<Laurent> TModule::apply_dt(const std::vector<Laurent>& z) const {
    const int d = dim();
    std::vector<Laurent> out(d, Laurent::zero(ctx()));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (dt_.at(i, j).is_zero()) continue;
            out[i] = out[i] + Laurent::from_poly(dt_.at(i, j)) * z[j];
        }
    return out;
}

std::vector<Laurent> TModule::apply_phi_t(const std::vector<Laurent>& z) const {
    std::vector<Laurent> out = apply_dt(z);
    for (size_t s = 0; s < e_.size(); ++s) {
        std::vector<Laurent> tz = twist_vec(z, static_cast<int>(s) + 1);
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) {
                if (e_[s].at(i, j).is_zero()) continue;
                out[i] = out[i] + Laurent::from_poly(e_[s].at(i, j)) * tz[j];
            }
    }
    return out;
}

namespace {

std::vector<Laurent> eval_series(const TModule& mod, const std::vector<Laurent>& z, double tol_lg,
                                 bool log_side) {
    const FqContext* ctx = mod.ctx();
    const int d = mod.dim();
    long long prec = static_cast<long long>(-tol_lg) + 16;
    double zlg = neg_inf;
    for (const auto& x : z) zlg = std::max(zlg, x.norm_lg());
    std::vector<Laurent> acc(d, Laurent::zero_to(ctx, prec));
    if (zlg == neg_inf) return acc;
    int grow_streak = 0;
    double prev_lg = neg_inf;
    bool first = true;
    const int hard_cap = 256;
    for (int i = 0; i < hard_cap; ++i) {
        Mat<RatFunc> coeff = log_side ? mod.log_coefficient(i) : mod.exp_coefficient(i);
        double clg = mat_norm_lg(coeff);
        double qi = std::pow(static_cast<double>(ctx->q()), i);
        double term_lg = clg + qi * zlg;
        if (term_lg < tol_lg) break;
        if (log_side) {
            if (!first && term_lg > prev_lg) {
                if (++grow_streak >= 3) throw divergent_series("log series terms are growing");
            } else {
                grow_streak = 0;
            }
        }
        prev_lg = term_lg;
        first = false;
        std::vector<Laurent> tz = twist_vec(z, i);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                if (coeff.at(r, c).is_zero()) continue;
                acc[r] = acc[r] + Laurent::from_ratfunc(coeff.at(r, c), prec) * tz[c];
            }
        if (i == hard_cap - 1) throw non_convergent("series did not reach the tolerance");
    }
    return acc;
}

}  // namespace

std::vector<Laurent> TModule::exp_eval(const std::vector<Laurent>& z, double tol_lg) const {
    return eval_series(*this, z, tol_lg, false);
}

std::vector<Laurent> TModule::log_eval(const std::vector<Laurent>& z, double tol_lg) const {
    return eval_series(*this, z, tol_lg, true);
}

// ---------------------------------------------------------------------------
// exact verification suites

namespace {

bool mats_equal(const Mat<RatFunc>& a, const Mat<RatFunc>& b) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!(a.at(i, j) == b.at(i, j))) return false;
    return true;
}

Mat<RatFunc> mat_rf_mul(const Mat<RatFunc>& a, const Mat<RatFunc>& b) {
    return mat_mul(a, b, RatFunc::zero(a.at(0, 0).ctx()));
}

}  // namespace

VerificationReport verify_functional_equations(const TModule& mod, int imax) {
    VerificationReport rep;
    rep.name = "functional-equations";
    rep.params = mod.spec().label + " imax=" + std::to_string(imax);
    const FqContext* ctx = mod.ctx();
    Mat<RatFunc> dt = to_ratfunc(mod.dt());
    std::vector<Mat<RatFunc>> e;
    for (const auto& m : mod.tau_terms()) e.push_back(to_ratfunc(m));
    for (int i = 0; i <= imax; ++i) {
        Mat<RatFunc> qi = mod.exp_coefficient(i);
        Mat<RatFunc> lhs = mat_rf_mul(qi, mat_rf_twist(dt, i));
        Mat<RatFunc> rhs = mat_rf_mul(dt, qi);
        for (int j = 1; j <= static_cast<int>(e.size()) && j <= i; ++j)
            rhs = mat_add(rhs, mat_rf_mul(e[j - 1], mat_rf_twist(mod.exp_coefficient(i - j), j)));
        rep.add("exp recurrence i=" + std::to_string(i), mats_equal(lhs, rhs));

        Mat<RatFunc> pi = mod.log_coefficient(i);
        Mat<RatFunc> plhs = mat_rf_mul(dt, pi);
        Mat<RatFunc> prhs = mat_rf_mul(pi, mat_rf_twist(dt, i));
        for (int j = 1; j <= static_cast<int>(e.size()) && j <= i; ++j)
            prhs = mat_add(prhs, mat_rf_mul(mod.log_coefficient(i - j), mat_rf_twist(e[j - 1], i - j)));
        rep.add("log recurrence i=" + std::to_string(i), mats_equal(plhs, prhs));
    }
    (void)ctx;
    return rep;
}

VerificationReport verify_coefficient_invertibility(const TModule& mod, int imax) {
    VerificationReport rep;
    rep.name = "coefficient-invertibility";
    rep.params = mod.spec().label + " imax=" + std::to_string(imax);
    for (int i = 0; i <= imax; ++i) {
        RatFunc dq = rat_det(mod.exp_coefficient(i));
        RatFunc dp = rat_det(mod.log_coefficient(i));
        rep.add("det Q_" + std::to_string(i) + " nonzero", !dq.is_zero());
        rep.add("det P_" + std::to_string(i) + " nonzero", !dp.is_zero());
    }
    return rep;
}

VerificationReport verify_composition_identity(const TModule& mod, int imax) {
    VerificationReport rep;
    rep.name = "exp-log-composition";
    rep.params = mod.spec().label + " imax=" + std::to_string(imax);
    const FqContext* ctx = mod.ctx();
    const int d = mod.dim();
    for (int i = 0; i <= imax; ++i) {
        Mat<RatFunc> acc(d, d, RatFunc::zero(ctx));
        for (int a = 0; a <= i; ++a)
            acc = mat_add(acc, mat_rf_mul(mod.exp_coefficient(a), mat_rf_twist(mod.log_coefficient(i - a), a)));
        Mat<RatFunc> expect = i == 0 ? rf_identity(ctx, d) : Mat<RatFunc>(d, d, RatFunc::zero(ctx));
        rep.add("sum Q_a P_b^(a), i=" + std::to_string(i), mats_equal(acc, expect));
    }
    return rep;
}

}  // namespace tmotive

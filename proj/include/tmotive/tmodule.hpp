#ifndef TMOTIVE_TMODULE_HPP
#define TMOTIVE_TMODULE_HPP

#include "tmotive/motive.hpp"
#include "tmotive/report.hpp"

namespace tmotive {

// Anderson t-module phi_t = d[t] + E_1 tau + ... derived from a motive.
// The coefficient streams Q_i (exponential) and P_i (logarithm) are generated
// lazily in exact rational arithmetic and cached.
class TModule {
public:
    explicit TModule(SpecPtr spec);
    ~TModule();
    TModule(TModule&&) noexcept;

    const MotiveSpec& spec() const { return *spec_; }
    SpecPtr spec_ptr() const { return spec_; }
    const FqContext* ctx() const { return spec_->ctx; }
    int dim() const { return spec_->dim; }
    const Mat<ThetaPoly>& dt() const { return dt_; }
    const std::vector<Mat<ThetaPoly>>& tau_terms() const { return e_; }

    // Q_i and P_i with Q_0 = P_0 = I.
    Mat<RatFunc> exp_coefficient(int i) const;
    Mat<RatFunc> log_coefficient(int i) const;

    std::vector<Laurent> apply_dt(const std::vector<Laurent>& z) const;
    std::vector<Laurent> apply_phi_t(const std::vector<Laurent>& z) const;

    // Exp(z) = sum Q_i z^(i); always converges (entire).
    std::vector<Laurent> exp_eval(const std::vector<Laurent>& z, double tol_lg) const;
    // Log(z) = sum P_i z^(i); throws divergent_series outside the domain
    // (three consecutive growing term norms).
    std::vector<Laurent> log_eval(const std::vector<Laurent>& z, double tol_lg) const;

private:
    SpecPtr spec_;
    Mat<ThetaPoly> dt_;
    std::vector<Mat<ThetaPoly>> e_;
    struct Cache;
    std::unique_ptr<Cache> cache_;
};

// Exact checks of the defining recurrences:
//   Q_i d[t]^(i) = d[t] Q_i + sum_j E_j Q_(i-j)^(j)
//   d[t] P_i = P_i d[t]^(i) + sum_j P_(i-j) E_j^(i-j)
VerificationReport verify_functional_equations(const TModule& mod, int imax);

// det Q_i != 0 and det P_i != 0, exact.
VerificationReport verify_coefficient_invertibility(const TModule& mod, int imax);

// sum_(a+b=i) Q_a P_b^(a) = [i = 0] I, exact.
VerificationReport verify_composition_identity(const TModule& mod, int imax);

Mat<RatFunc> mat_rf_twist(const Mat<RatFunc>& m, int i);
RatFunc rat_det(Mat<RatFunc> m);

}  // namespace tmotive

#endif
